use catforge::corpus::z2_fibered;
use catforge::multicat::{PsiBounds, PsiRing, RingLike};
use catforge::strictifier::{strictify_total, SymBimonFiberData};

fn main() {
    let data = SymBimonFiberData::from_strict(&z2_fibered()).unwrap();
    let st = strictify_total(&data).unwrap();
    let mut bounds = PsiBounds::default();
    bounds.max_psi_objects = 6;
    bounds.max_instances_per_check = 1_500;
    let ring = PsiRing::new(&st, bounds).unwrap();
    let tuples = ring.e_objects().unwrap();
    // c.14 probe.
    'outer: for c1 in &tuples {
        for c2 in &tuples {
            for c3 in &tuples {
                let c12 = ring.e_tensor_obj(c1, c2).unwrap().unwrap();
                let c23 = ring.e_tensor_obj(c2, c3).unwrap().unwrap();
                let c123 = ring.e_tensor_obj(&c12, c3).unwrap().unwrap();
                let tau_right = ring.e_gamma(c3, c2).unwrap().unwrap();
                let id_c1 = ring.e_identity(c1).unwrap();
                let one_tau = ring.e_tensor_mor(&id_c1, &tau_right).unwrap().unwrap();
                for x in ring.f_objects(c1).unwrap().iter().take(3) {
                    for y in ring.f_objects(c2).unwrap().iter().take(3) {
                        for z in ring.f_objects(c3).unwrap().iter().take(3) {
                            let muyz = ring.mu(c2, c3, y, z).unwrap().unwrap();
                            let idx = ring.f_identity(c1, x).unwrap();
                            let step1 = ring.t2_mor(c1, &c23, &idx, &muyz).unwrap().unwrap();
                            let mu13 = ring.mu(c1, c3, x, z).unwrap().unwrap();
                            let c13 = ring.e_tensor_obj(c1, c3).unwrap().unwrap();
                            let idy = ring.f_identity(c2, y).unwrap();
                            let step2_raw = ring.t2_mor(&c13, c2, &mu13, &idy).unwrap().unwrap();
                            let step2 = ring.fmap_mor(&one_tau, &step2_raw).unwrap();
                            match ring.f_compose(&c123, &step2, &step1) {
                                Ok(_) => {}
                                Err(e) => {
                                    println!("c14: {e}");
                                    println!("  c1={c1} c2={c2} c3={c3} x={x} y={y} z={z}");
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    println!("done");
}
