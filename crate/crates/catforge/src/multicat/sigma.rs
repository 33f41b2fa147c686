//! The associative operad Σ_* and its translation thickening EΣ_*, plus the
//! multicategory of a permutative category.

use crate::error::{Error, Result};
use crate::ids::ObjId;
use crate::monostruct::{PermView, PermutativeStructure};
use crate::perm::{gamma_perm, Perm};
use crate::rebracket::permute_iso;

use super::TableMulticat;
use std::collections::BTreeMap;

pub fn perm_id(p: &Perm) -> String {
    format!("p{}:{}", p.degree(), p)
}

/// The symmetric-group operad as a one-object table multicategory.
/// `Γ(σ; φ₁,…,φ_k) = σ⟨j₁,…,j_k⟩ ∘ (φ₁⊕⋯⊕φ_k)` and `σ*φ = φ∘σ`.
/// With `enriched` the k-morphism sets become translation categories
/// (exactly one cell between any two parallel permutations).
pub fn sigma_multicat(cap: usize, enriched: bool) -> Result<TableMulticat> {
    if cap > 4 {
        return Err(Error::BoundExceeded(
            "sigma operad cap is limited to 4 (factorial growth)".into(),
        ));
    }
    let star = ObjId::from("*");
    let mut kmors = BTreeMap::new();
    let mut action = BTreeMap::new();
    let mut gamma = BTreeMap::new();
    for k in 0..=cap {
        for p in Perm::all(k) {
            kmors.insert(perm_id(&p), (vec![star.clone(); k], star.clone()));
            for sigma in Perm::all(k) {
                action.insert((perm_id(&p), sigma.clone()), perm_id(&p.compose(&sigma)));
            }
        }
    }
    // Multiproducts for every arity split within the cap.
    for k in 1..=cap {
        for psi in Perm::all(k) {
            for arities in super::arity_tuples(k, cap) {
                let lists: Vec<Vec<Perm>> = arities.iter().map(|&j| Perm::all(j)).collect();
                let mut tuples: Vec<Vec<Perm>> = vec![vec![]];
                for l in &lists {
                    let mut next = Vec::new();
                    for t in &tuples {
                        for p in l {
                            let mut t2 = t.clone();
                            t2.push(p.clone());
                            next.push(t2);
                        }
                    }
                    tuples = next;
                }
                for phis in tuples {
                    let refs: Vec<&Perm> = phis.iter().collect();
                    let result = gamma_perm(&psi, &refs);
                    gamma.insert(
                        (perm_id(&psi), phis.iter().map(perm_id).collect()),
                        perm_id(&result),
                    );
                }
            }
        }
    }
    // Γ at k = 0 is vacuous (no inputs to substitute into).
    let units = [(star.clone(), perm_id(&Perm::identity(1)))].into();
    Ok(TableMulticat {
        name: if enriched { "EΣ_*".into() } else { "Σ_*".into() },
        objects: vec![star],
        cap,
        kmors,
        units,
        action,
        gamma,
        codiscrete_cells: enriched,
    })
}

/// View a permutative category as a multicategory:
/// `E(c₁,…,c_k; d) = E(c₁⊕⋯⊕c_k, d)` with the block re-bracketing action.
pub fn perm_as_multicat(p: &PermutativeStructure, cap: usize) -> Result<TableMulticat> {
    let view = PermView::new(p);
    let cat = &p.base;
    let mut kmors = BTreeMap::new();
    let mut action = BTreeMap::new();
    let mut gamma = BTreeMap::new();
    let mut units = BTreeMap::new();

    // Enumerate object tuples up to the cap.
    let mut tuples: Vec<Vec<ObjId>> = vec![vec![]];
    let mut all_tuples: Vec<Vec<ObjId>> = vec![vec![]];
    for _ in 0..cap {
        let mut next = Vec::new();
        for t in &tuples {
            for a in &cat.objects {
                let mut t2 = t.clone();
                t2.push(a.clone());
                next.push(t2);
            }
        }
        all_tuples.extend(next.iter().cloned());
        tuples = next;
    }

    let kid = |inputs: &[ObjId], m: &crate::ids::MorId| -> String {
        let i: Vec<&str> = inputs.iter().map(|o| o.as_str()).collect();
        format!("k[{}]{}", i.join(","), m)
    };

    for inputs in &all_tuples {
        let sum = p.tensor_all(inputs)?;
        for d in &cat.objects {
            for m in cat.hom(&sum, d) {
                let id = kid(inputs, &m);
                kmors.insert(id.clone(), (inputs.clone(), d.clone()));
                // Action: precompose with the coherence permutation.
                let k = inputs.len();
                for sigma in Perm::all(k) {
                    let permuted: Vec<ObjId> =
                        (1..=k).map(|t| inputs[sigma.apply(t) - 1].clone()).collect();
                    let (_, tau) = permute_iso(&view, &permuted, &sigma.inverse())?;
                    let acted = cat.compose2(&m, &tau)?;
                    action.insert((id.clone(), sigma), kid(&permuted, &acted));
                }
            }
        }
    }
    for a in &cat.objects {
        units.insert(a.clone(), kid(&[a.clone()], &cat.identity_of(a)?));
    }
    // Multiproduct: Γ(g; f₁,…,f_k) = g∘(f₁⊕⋯⊕f_k).
    let entries: Vec<(String, (Vec<ObjId>, ObjId))> =
        kmors.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    for (gid, (ginputs, _)) in &entries {
        let k = ginputs.len();
        if k == 0 {
            continue;
        }
        // Candidate φ's per slot.
        let mut slot: Vec<Vec<&(String, (Vec<ObjId>, ObjId))>> = Vec::new();
        for b in ginputs {
            slot.push(
                entries
                    .iter()
                    .filter(|(_, (fi, fo))| fo == b && fi.len() <= cap)
                    .collect(),
            );
        }
        let mut stacks: Vec<Vec<&(String, (Vec<ObjId>, ObjId))>> = vec![vec![]];
        for s in &slot {
            let mut next = Vec::new();
            for st in &stacks {
                for c in s {
                    let total: usize =
                        st.iter().map(|(_, (i, _))| i.len()).sum::<usize>() + c.1 .0.len();
                    if total <= cap {
                        let mut st2 = st.clone();
                        st2.push(c);
                        next.push(st2);
                    }
                }
            }
            stacks = next;
        }
        let g_m = {
            let raw = gid.rsplit_once(']').unwrap().1;
            crate::ids::MorId(raw.to_string())
        };
        for st in stacks {
            if st.len() != k {
                continue;
            }
            // f₁⊕⋯⊕f_k as a morphism between the evaluated tuples.
            let mut sum_m: Option<crate::ids::MorId> = None;
            for (fid, _) in st.iter().rev() {
                let raw = fid.rsplit_once(']').unwrap().1;
                let fm = crate::ids::MorId(raw.to_string());
                sum_m = Some(match sum_m {
                    None => fm,
                    Some(acc) => p.tensor.on_mor(&fm, &acc)?,
                });
            }
            let inner = match sum_m {
                Some(v) => v,
                // k ≥ 1 always yields at least one factor.
                None => unreachable!("nonempty slot stack"),
            };
            let composite = cat.compose2(&g_m, &inner)?;
            let new_inputs: Vec<ObjId> = st
                .iter()
                .flat_map(|(_, (i, _))| i.iter().cloned())
                .collect();
            gamma.insert(
                (gid.clone(), st.iter().map(|(f, _)| f.clone()).collect()),
                kid(&new_inputs, &composite),
            );
        }
    }
    Ok(TableMulticat {
        name: format!("perm-as-multicat({})", p.unit),
        objects: cat.objects.clone(),
        cap,
        kmors,
        units,
        action,
        gamma,
        codiscrete_cells: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::validate_multicat;

    #[test]
    fn sigma_counts_and_units() {
        let s = sigma_multicat(3, false).unwrap();
        // k-morphism count at k = 3 is |Σ₃| = 6.
        let star = ObjId::from("*");
        let k3 = s
            .kmors
            .values()
            .filter(|(i, _)| i.len() == 3)
            .count();
        assert_eq!(k3, 6);
        let _ = star;
    }

    #[test]
    fn sigma_gamma_unit_identity() {
        // Γ(1₂; 1₁, 1₀) = 1₁.
        let s = sigma_multicat(3, false).unwrap();
        let one2 = perm_id(&Perm::identity(2));
        let one1 = perm_id(&Perm::identity(1));
        let one0 = perm_id(&Perm::identity(0));
        let got = s.gamma[&(one2.clone(), vec![one1.clone(), one0.clone()])].clone();
        assert_eq!(got, one1);
        let got = s.gamma[&(one2, vec![one0, one1.clone()])].clone();
        assert_eq!(got, one1);
    }

    #[test]
    fn sigma_validates() {
        let s = sigma_multicat(3, false).unwrap();
        let rep = validate_multicat(&s).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn esigma_validates_and_is_codiscrete() {
        let s = sigma_multicat(3, true).unwrap();
        assert!(s.codiscrete_cells);
        let rep = validate_multicat(&s).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn sigma_without_block_permutation_fails_multi3() {
        let mut s = sigma_multicat(3, false).unwrap();
        // Redefine Γ to drop the block permutation: Γ(ψ;φ's) = φ₁⊕…⊕φ_k.
        let mut new_gamma = BTreeMap::new();
        for ((psi, phis), _) in &s.gamma {
            let parsed: Vec<Perm> = phis
                .iter()
                .map(|p| {
                    let inner = p.split(':').nth(1).unwrap();
                    let nums: Vec<usize> = inner
                        .trim_matches(['[', ']'])
                        .split_whitespace()
                        .map(|v| v.parse().unwrap())
                        .collect();
                    Perm::from_images(&nums).unwrap()
                })
                .collect();
            let refs: Vec<&Perm> = parsed.iter().collect();
            let dropped = crate::perm::block_sum(&refs);
            new_gamma.insert((psi.clone(), phis.clone()), perm_id(&dropped));
        }
        s.gamma = new_gamma;
        let rep = validate_multicat(&s).unwrap();
        assert!(!rep.is_valid());
        assert!(rep.failed("Multi(3)"), "{rep}");
    }

    #[test]
    fn perm_as_multicat_validates() {
        for p in [
            crate::monostruct::terminal_permutative("1"),
            crate::monostruct::z2_xor_permutative(),
        ] {
            let m = perm_as_multicat(&p, 3).unwrap();
            let rep = validate_multicat(&m).unwrap();
            assert!(rep.is_valid(), "{rep}");
        }
    }

    #[test]
    fn perm_as_multicat_zero_arity_is_hom_from_unit() {
        let p = crate::monostruct::z2_xor_permutative();
        let m = perm_as_multicat(&p, 2).unwrap();
        // k = 0 morphisms into d are Hom(1, d) = Hom(0, d): discrete, so
        // only d = 0 is inhabited.
        let zero_in: Vec<_> = m
            .kmors
            .iter()
            .filter(|(_, (i, _))| i.is_empty())
            .collect();
        assert_eq!(zero_in.len(), 1);
        assert_eq!(zero_in[0].1 .1, ObjId::from("0"));
    }

    #[test]
    fn z2_group_category_multicat_validates() {
        // A permutative structure with non-identity morphisms: one-object
        // group Z/2 under multiplication.
        use crate::monostruct::TensorTables;
        use std::sync::Arc;
        let cat = Arc::new(crate::fincat::z2_category());
        let star = ObjId::from("*");
        let mut tensor = TensorTables::default();
        tensor.obj.insert((star.clone(), star.clone()), star.clone());
        for f in ["e", "u"] {
            for g in ["e", "u"] {
                let prod = if (f == "u") ^ (g == "u") { "u" } else { "e" };
                tensor.mor.insert(
                    (crate::ids::MorId::from(f), crate::ids::MorId::from(g)),
                    crate::ids::MorId::from(prod),
                );
            }
        }
        let p = PermutativeStructure {
            base: cat,
            tensor,
            unit: star.clone(),
            gamma: [((star.clone(), star.clone()), crate::ids::MorId::from("e"))].into(),
        };
        let m = perm_as_multicat(&p, 3).unwrap();
        let rep = validate_multicat(&m).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }
}
