//! The re-bracketing engine.
//!
//! Strictification constantly needs one concrete coherent isomorphism between
//! two ways of multiplying out a sequence of objects. We fix the canonical
//! right-nested normal form `x₁⊗(x₂⊗(…))` and build every comparison by
//! rotating towards it with associator, unitor, and symmetry components.
//! Coherence of the input guarantees any other choice agrees; the window
//! validators re-check that executably.

use crate::error::{Error, Result};
use crate::ids::{MorId, ObjId};
use crate::perm::Perm;

/// What the engine needs from a (symmetric) monoidal structure. Implemented
/// by the non-strict structures of `monostruct`, by permutative structures
/// (identity associator/unitors), and by fiberwise additive structures in the
/// strictifier.
pub trait MonoidalOps {
    fn unit_obj(&self) -> ObjId;
    fn tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<ObjId>;
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<MorId>;
    /// `g ∘ f` in the underlying category.
    fn compose(&self, g: &MorId, f: &MorId) -> Result<MorId>;
    fn identity(&self, a: &ObjId) -> Result<MorId>;
    /// Component `(a⊗b)⊗c → a⊗(b⊗c)`.
    fn associator(&self, a: &ObjId, b: &ObjId, c: &ObjId) -> Result<MorId>;
    /// Component `1⊗a → a`.
    fn left_unitor(&self, a: &ObjId) -> Result<MorId>;
    /// Component `a⊗1 → a`.
    fn right_unitor(&self, a: &ObjId) -> Result<MorId>;
    /// Component `a⊗b → b⊗a`.
    fn symmetry(&self, a: &ObjId, b: &ObjId) -> Result<MorId>;
    fn invert(&self, m: &MorId) -> Result<MorId>;
}

/// Right-nested evaluation of a sequence: `Φ(c₁,…,cₙ) = c₁⊗(⋯⊗(cₙ₋₁⊗cₙ))`,
/// with the empty sequence evaluating to the unit.
pub fn eval_seq(ops: &dyn MonoidalOps, objs: &[ObjId]) -> Result<ObjId> {
    match objs {
        [] => Ok(ops.unit_obj()),
        [x] => Ok(x.clone()),
        [x, rest @ ..] => {
            let r = eval_seq(ops, rest)?;
            ops.tensor_obj(x, &r)
        }
    }
}

/// The canonical iso `Φ(left)⊗Φ(right) → Φ(left ++ right)`.
pub fn merge_iso(ops: &dyn MonoidalOps, left: &[ObjId], right: &[ObjId]) -> Result<MorId> {
    match (left, right) {
        ([], _) => ops.left_unitor(&eval_seq(ops, right)?),
        (_, []) => ops.right_unitor(&eval_seq(ops, left)?),
        ([c], _) => {
            // Φ([c] ++ right) is literally c ⊗ Φ(right).
            ops.identity(&ops.tensor_obj(c, &eval_seq(ops, right)?)?)
        }
        ([c, rest @ ..], _) => {
            // (c⊗Φ(rest))⊗Φ(right) --α--> c⊗(Φ(rest)⊗Φ(right)) --id⊗merge--> c⊗Φ(rest++right)
            let alpha = ops.associator(c, &eval_seq(ops, rest)?, &eval_seq(ops, right)?)?;
            let inner = merge_iso(ops, rest, right)?;
            let step = ops.tensor_mor(&ops.identity(c)?, &inner)?;
            ops.compose(&step, &alpha)
        }
    }
}

/// The canonical iso `Φ(left ++ right) → Φ(left)⊗Φ(right)`.
pub fn split_iso(ops: &dyn MonoidalOps, left: &[ObjId], right: &[ObjId]) -> Result<MorId> {
    ops.invert(&merge_iso(ops, left, right)?)
}

/// Tensor of sequence-level morphisms: given `f : Φ(l) → Φ(l')` and
/// `g : Φ(r) → Φ(r')`, the conjugate `Φ(l++r) → Φ(l'++r')`.
pub fn seq_tensor_mor(
    ops: &dyn MonoidalOps,
    l: &[ObjId],
    l2: &[ObjId],
    r: &[ObjId],
    r2: &[ObjId],
    f: &MorId,
    g: &MorId,
) -> Result<MorId> {
    let pre = split_iso(ops, l, r)?;
    let mid = ops.tensor_mor(f, g)?;
    let post = merge_iso(ops, l2, r2)?;
    ops.compose(&post, &ops.compose(&mid, &pre)?)
}

/// Swap the entries at positions `k` and `k+1` (1-based) of a right-nested
/// product: the iso `Φ(objs) → Φ(objs with k,k+1 swapped)`.
pub fn adjacent_swap_iso(ops: &dyn MonoidalOps, objs: &[ObjId], k: usize) -> Result<MorId> {
    let n = objs.len();
    if k == 0 || k + 1 > n {
        return Err(Error::Internal(format!("adjacent swap {k} out of range")));
    }
    if k > 1 {
        let rec = adjacent_swap_iso(ops, &objs[1..], k - 1)?;
        return ops.tensor_mor(&ops.identity(&objs[0])?, &rec);
    }
    if n == 2 {
        return ops.symmetry(&objs[0], &objs[1]);
    }
    // x₁⊗(x₂⊗R) --α⁻¹--> (x₁⊗x₂)⊗R --γ⊗id--> (x₂⊗x₁)⊗R --α--> x₂⊗(x₁⊗R)
    let rest = &objs[2..];
    let r = eval_seq(ops, rest)?;
    let a_inv = ops.invert(&ops.associator(&objs[0], &objs[1], &r)?)?;
    let swap = ops.tensor_mor(&ops.symmetry(&objs[0], &objs[1])?, &ops.identity(&r)?)?;
    let a = ops.associator(&objs[1], &objs[0], &r)?;
    ops.compose(&a, &ops.compose(&swap, &a_inv)?)
}

/// The coherent iso `τ_σ : Φ(c₁,…,cₖ) → Φ(c_{σ(1)},…,c_{σ(k)})`, built from
/// adjacent swaps. Returns the permuted sequence alongside the morphism.
pub fn permute_iso(
    ops: &dyn MonoidalOps,
    objs: &[ObjId],
    sigma: &Perm,
) -> Result<(Vec<ObjId>, MorId)> {
    if sigma.degree() != objs.len() {
        return Err(Error::Internal("permutation degree mismatch".into()));
    }
    let target: Vec<ObjId> = (1..=objs.len())
        .map(|t| objs[sigma.apply(t) - 1].clone())
        .collect();
    // Move the element at input position i to output slot σ⁻¹... we need the
    // arrangement [c_{σ(1)},…]: item originally at position σ(t) ends at slot t,
    // i.e. the permutation sending position p to slot σ⁻¹(p).
    let placement = sigma.inverse();
    let mut current: Vec<ObjId> = objs.to_vec();
    let mut iso = ops.identity(&eval_seq(ops, objs)?)?;
    for s in placement.adjacent_swaps() {
        let step = adjacent_swap_iso(ops, &current, s)?;
        current.swap(s - 1, s);
        iso = ops.compose(&step, &iso)?;
    }
    debug_assert_eq!(current, target);
    Ok((target, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::obj;
    use crate::monostruct::tests_support::graded_nonstrict_monoidal;
    use crate::monostruct::SymMonView;

    #[test]
    fn merge_then_split_is_identity_on_nonstrict_example() {
        let m = graded_nonstrict_monoidal();
        let view = SymMonView::new(&m);
        let seqs: Vec<Vec<ObjId>> = vec![
            vec![],
            vec![obj("n1")],
            vec![obj("n1"), obj("n1")],
            vec![obj("n1"), obj("n1"), obj("n1")],
            vec![obj("n2a"), obj("n1")],
        ];
        for l in &seqs {
            for r in &seqs {
                let merged = merge_iso(&view, l, r).unwrap();
                let split = split_iso(&view, l, r).unwrap();
                let all: Vec<ObjId> = l.iter().chain(r.iter()).cloned().collect();
                let round = view.compose(&merged, &split).unwrap();
                assert_eq!(round, view.identity(&eval_seq(&view, &all).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn permute_iso_lands_on_target() {
        let m = graded_nonstrict_monoidal();
        let view = SymMonView::new(&m);
        let objs = vec![obj("n1"), obj("n2a"), obj("n1")];
        for sigma in Perm::all(3) {
            let (target, iso) = permute_iso(&view, &objs, &sigma).unwrap();
            let want: Vec<ObjId> = (1..=3).map(|t| objs[sigma.apply(t) - 1].clone()).collect();
            assert_eq!(target, want);
            // The iso must be a genuine morphism Φ(objs) → Φ(target).
            let dom = eval_seq(&view, &objs).unwrap();
            let cod = eval_seq(&view, &target).unwrap();
            let rec = m.base.morphism(&iso).unwrap();
            assert_eq!(rec.dom, dom);
            assert_eq!(rec.cod, cod);
        }
    }
}
