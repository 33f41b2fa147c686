use catforge::corpus::{bool_fibered, z2_fibered};
use catforge::strictifier::*;
fn main() {
    for (name, fb) in [("z2", z2_fibered()), ("bool", bool_fibered())] {
        let t0 = std::time::Instant::now();
        let data = SymBimonFiberData::from_strict(&fb).unwrap();
        let st = strictify_total(&data).unwrap();
        let bounds = WindowBounds::default();
        let view = StrictTotalView::new(&st, bounds);
        let rep = validate_fibered_biperm(&view).unwrap();
        println!("{name}: valid={} in {:?} [{}]", rep.is_valid(), t0.elapsed(), rep.bounds_note.clone().unwrap_or_default());
        let t1 = std::time::Instant::now();
        let erep = equivalence_check_total(&st, bounds).unwrap();
        println!("{name}: equiv valid={} in {:?}", erep.is_valid(), t1.elapsed());
    }
}
