//! Test corpus builders: fibered bipermutative examples and the mutation
//! generator used by the acceptance suite.

use crate::fibration::FiberedFunctor;
use crate::fincat::{FinCategory, FunctorData, MorRecord};
use crate::ids::{MorId, ObjId};
use crate::monostruct::{PermutativeStructure, TensorTables};
use crate::strictifier::{biperm_over_terminal, bool_rig, z2_rig, FiberBipermData};
use std::collections::BTreeMap;
use std::sync::Arc;

/// The Z/2 (xor, and) rig fibered over the terminal base.
pub fn z2_fibered() -> FiberBipermData {
    biperm_over_terminal(&z2_rig()).expect("z2 rig wraps over the terminal base")
}

/// The boolean (or, and) rig fibered over the terminal base.
pub fn bool_fibered() -> FiberBipermData {
    biperm_over_terminal(&bool_rig()).expect("bool rig wraps over the terminal base")
}

/// A fibered bipermutative category over the one-object group Z/2: the
/// product of the F₂ rig with the base group. Objects are the rig elements;
/// a morphism `m<x>[g]` is the pair (element x, group element g), lying
/// over g. Exercises non-identity base morphisms, cartesian lifts over
/// them, and a non-identity zero transport `0_u`.
pub fn rig_times_group() -> FiberBipermData {
    let base_cat = Arc::new(crate::fincat::z2_category());
    let star = ObjId::from("*");
    // Base permutative structure: group multiplication as tensor, γ = id.
    let mut base_tensor = TensorTables::default();
    base_tensor.obj.insert((star.clone(), star.clone()), star.clone());
    for f in ["e", "u"] {
        for g in ["e", "u"] {
            let prod = if (f == "u") ^ (g == "u") { "u" } else { "e" };
            base_tensor
                .mor
                .insert((MorId::from(f), MorId::from(g)), MorId::from(prod));
        }
    }
    let base_perm = PermutativeStructure {
        base: base_cat.clone(),
        tensor: base_tensor,
        unit: star.clone(),
        gamma: [((star.clone(), star.clone()), MorId::from("e"))].into(),
    };

    // Total category: objects "0","1"; morphisms m<x>[g] : x → x over g.
    let elems = ["0", "1"];
    let groups = ["e", "u"];
    let mid = |x: &str, g: &str| MorId(format!("m<{x}>[{g}]"));
    let mut total = FinCategory::new();
    for x in elems {
        total.objects.push(ObjId::from(x));
    }
    for x in elems {
        for g in groups {
            total.morphisms.push(MorRecord {
                id: mid(x, g),
                dom: ObjId::from(x),
                cod: ObjId::from(x),
            });
        }
        total.identity.insert(ObjId::from(x), mid(x, "e"));
    }
    for x in elems {
        for g in groups {
            for h in groups {
                let prod = if (g == "u") ^ (h == "u") { "u" } else { "e" };
                total
                    .compose
                    .insert((mid(x, g), mid(x, h)), mid(x, prod));
            }
        }
    }
    let total = Arc::new(total);

    let mut proj_obj = BTreeMap::new();
    let mut proj_mor = BTreeMap::new();
    for x in elems {
        proj_obj.insert(ObjId::from(x), star.clone());
        for g in groups {
            proj_mor.insert(mid(x, g), MorId::from(g));
        }
    }
    let projection = FunctorData {
        source: total.clone(),
        target: base_cat.clone(),
        object_map: proj_obj,
        morphism_map: proj_mor,
    };
    let fibered = FiberedFunctor::new(total.clone(), base_cat, projection);

    // Total ⊗ = (and, group product); unit "1".
    let and = |a: &str, b: &str| if a == "1" && b == "1" { "1" } else { "0" };
    let xor = |a: &str, b: &str| if (a == "1") ^ (b == "1") { "1" } else { "0" };
    let mut tt = TensorTables::default();
    let mut tg = BTreeMap::new();
    for x in elems {
        for y in elems {
            tt.obj
                .insert((ObjId::from(x), ObjId::from(y)), ObjId::from(and(x, y)));
            tg.insert(
                (ObjId::from(x), ObjId::from(y)),
                mid(and(x, y), "e"),
            );
            for g in groups {
                for h in groups {
                    let prod = if (g == "u") ^ (h == "u") { "u" } else { "e" };
                    tt.mor
                        .insert((mid(x, g), mid(y, h)), mid(and(x, y), prod));
                }
            }
        }
    }
    let total_perm = PermutativeStructure {
        base: total.clone(),
        tensor: tt,
        unit: ObjId::from("1"),
        gamma: tg,
    };

    // The single fiber: F₂ with xor, zero "0".
    let fiber_cat = Arc::new(crate::fibration::fiber(&fibered, &star).expect("fiber"));
    let mut ft = TensorTables::default();
    let mut fg = BTreeMap::new();
    for x in elems {
        for y in elems {
            ft.obj
                .insert((ObjId::from(x), ObjId::from(y)), ObjId::from(xor(x, y)));
            ft.mor
                .insert((mid(x, "e"), mid(y, "e")), mid(xor(x, y), "e"));
            fg.insert((ObjId::from(x), ObjId::from(y)), mid(xor(x, y), "e"));
        }
    }
    let fiber_perm = PermutativeStructure {
        base: fiber_cat,
        tensor: ft,
        unit: ObjId::from("0"),
        gamma: fg,
    };

    // Cross-fiber addition: (x,g)⊕(y,g) = (x xor y, g).
    let mut cross_add = BTreeMap::new();
    for x in elems {
        for y in elems {
            for g in groups {
                cross_add.insert((mid(x, g), mid(y, g)), mid(xor(x, y), g));
            }
        }
    }
    let mut zero_mors = BTreeMap::new();
    for g in groups {
        zero_mors.insert(MorId::from(g), mid("0", g));
    }
    let mut dl = BTreeMap::new();
    let mut dr = BTreeMap::new();
    for x in elems {
        for y in elems {
            for z in elems {
                // (x∧z)⊕(y∧z) = (x⊕y)∧z in F₂.
                dl.insert(
                    (ObjId::from(x), ObjId::from(y), ObjId::from(z)),
                    mid(and(xor(x, y), z), "e"),
                );
                dr.insert(
                    (ObjId::from(x), ObjId::from(y), ObjId::from(z)),
                    mid(and(x, xor(y, z)), "e"),
                );
            }
        }
    }
    FiberBipermData {
        fibered,
        base_perm,
        total_perm,
        fiber_add: [(star, fiber_perm)].into(),
        cross_add,
        zero_mors,
        dl,
        dr,
    }
}

/// One structured mutation of a category table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    /// Redirect `compose(g, f)` to another parallel morphism.
    RedirectComposite { g: MorId, f: MorId, to: MorId },
    /// Point `identity(o)` at a different endomorphism.
    RedirectIdentity { o: ObjId, to: MorId },
    /// Remove a composite entry entirely.
    DropComposite { g: MorId, f: MorId },
}

/// Apply a mutation; the result may or may not still be a category.
pub fn apply_mutation(cat: &FinCategory, m: &Mutation) -> FinCategory {
    let mut out = cat.clone();
    match m {
        Mutation::RedirectComposite { g, f, to } => {
            out.compose.insert((g.clone(), f.clone()), to.clone());
        }
        Mutation::RedirectIdentity { o, to } => {
            out.identity.insert(o.clone(), to.clone());
        }
        Mutation::DropComposite { g, f } => {
            out.compose.remove(&(g.clone(), f.clone()));
        }
    }
    out
}

/// Enumerate every id-resolving single-table mutation of a category:
/// each composite redirected to each other parallel morphism, each identity
/// redirected to each other endomorphism, each composite dropped.
pub fn all_mutations(cat: &FinCategory) -> Vec<Mutation> {
    let mut out = Vec::new();
    for ((g, f), gf) in &cat.compose {
        let r = cat.morphism(gf).expect("valid corpus entry");
        for m in cat.hom(&r.dom, &r.cod) {
            if &m != gf {
                out.push(Mutation::RedirectComposite {
                    g: g.clone(),
                    f: f.clone(),
                    to: m,
                });
            }
        }
        out.push(Mutation::DropComposite {
            g: g.clone(),
            f: f.clone(),
        });
    }
    for o in &cat.objects {
        let idm = &cat.identity[o];
        for m in cat.hom(o, o) {
            if &m != idm {
                out.push(Mutation::RedirectIdentity {
                    o: o.clone(),
                    to: m,
                });
            }
        }
    }
    out
}

/// The base categories of the mutation corpus: small but with enough
/// structure that most mutations genuinely break an axiom.
pub fn mutation_corpus_bases() -> Vec<(String, FinCategory)> {
    let mut out: Vec<(String, FinCategory)> = Vec::new();
    out.push(("z2-group".into(), crate::fincat::z2_category()));
    out.push((
        "z3-group".into(),
        crate::fincat::monoid_category("*", &["g0", "g1", "g2"], "g0", &|a, b| {
            let x: usize = a[1..].parse().unwrap();
            let y: usize = b[1..].parse().unwrap();
            format!("g{}", (x + y) % 3)
        }),
    ));
    out.push((
        "z4-group".into(),
        crate::fincat::monoid_category("*", &["g0", "g1", "g2", "g3"], "g0", &|a, b| {
            let x: usize = a[1..].parse().unwrap();
            let y: usize = b[1..].parse().unwrap();
            format!("g{}", (x + y) % 4)
        }),
    ));
    out.push((
        "bool-monoid".into(),
        crate::fincat::monoid_category("*", &["b0", "b1"], "b0", &|a, b| {
            if a == "b1" || b == "b1" {
                "b1".into()
            } else {
                "b0".into()
            }
        }),
    ));
    // The codiscrete groupoid on three objects: composition is forced, so
    // every redirect breaks something.
    let mut codisc = FinCategory::new();
    for o in ["a", "b", "c"] {
        codisc.objects.push(ObjId::from(o));
    }
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            codisc.morphisms.push(MorRecord {
                id: MorId(format!("e_{x}{y}")),
                dom: ObjId::from(x),
                cod: ObjId::from(y),
            });
        }
    }
    for o in ["a", "b", "c"] {
        codisc.identity.insert(ObjId::from(o), MorId(format!("e_{o}{o}")));
    }
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            for z in ["a", "b", "c"] {
                codisc.compose.insert(
                    (MorId(format!("e_{y}{z}")), MorId(format!("e_{x}{y}"))),
                    MorId(format!("e_{x}{z}")),
                );
            }
        }
    }
    out.push(("codiscrete-3".into(), codisc));
    // The arrow category plus a parallel pair quotient: a -> b with two
    // distinct morphisms and a composable tail.
    let walking = crate::fincat::CatBuilder::new()
        .object("a")
        .object("b")
        .object("c")
        .morphism("f", "a", "b")
        .morphism("g", "b", "c")
        .morphism("h", "a", "c")
        .compose("g", "f", "h")
        .build();
    out.push(("composable-pair".into(), walking));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::validate_category;

    #[test]
    fn corpus_bases_are_valid() {
        for (name, cat) in mutation_corpus_bases() {
            let rep = validate_category(&cat).unwrap();
            assert!(rep.is_valid(), "{name}: {rep}");
            assert!(cat.morphisms.len() <= 16, "{name} too large");
            assert!(cat.objects.len() <= 5, "{name} too large");
        }
    }

    #[test]
    fn rig_times_group_components_valid() {
        let d = rig_times_group();
        let rep = d.validate_components().unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn rig_times_group_satisfies_b_conditions() {
        let d = rig_times_group();
        let rep = crate::strictifier::validate_fibered_biperm(&d).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn mutations_enumerate_structurally_sound_tables() {
        let z2 = crate::fincat::z2_category();
        let muts = all_mutations(&z2);
        assert!(!muts.is_empty());
        for m in &muts {
            let mutated = apply_mutation(&z2, m);
            // Structure (id resolution) is preserved by construction;
            // axioms may fail, which validate_category reports rather than
            // erroring.
            assert!(mutated.check_structure().is_ok());
            let _ = validate_category(&mutated).unwrap();
        }
    }
}
