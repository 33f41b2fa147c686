//! The injection category Inj, the wreath product 𝒜 = Inj ∫ (𝒞^op)^*, its
//! concatenation tensor ⊙, and the projection 𝒲 : 𝒜 → 𝒞^op.
//!
//! 𝒜 is infinite; [`build_wreath`] materializes the full subcategory on
//! tuples of length ≤ cap (closed under composition, tensor partial) and the
//! checkers run window-limited.

use crate::error::{Error, Result};
use crate::fincat::{self, FinCategory, FunctorData, MorRecord};
use crate::ids::{MorId, ObjId};
use crate::monostruct::{opposite_permutative, PermutativeStructure, PermView};
use crate::perm::Perm;
use crate::rebracket::permute_iso;
use crate::report::ValidationReport;
use crate::window::{validate_partial_permutative, PartialPermutative};
use std::collections::BTreeMap;
use std::sync::Arc;

/// An injective map `{1..n} → {1..m}`, stored as its 1-based image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InjMorphism {
    pub n: usize,
    pub m: usize,
    pub map: Vec<usize>,
}

impl InjMorphism {
    pub fn new(n: usize, m: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != n {
            return Err(Error::Rejected(format!("injection arity mismatch: {n} != {}", map.len())));
        }
        let mut seen = vec![false; m];
        for &v in &map {
            if v == 0 || v > m {
                return Err(Error::Rejected(format!("injection value {v} out of range 1..{m}")));
            }
            if seen[v - 1] {
                return Err(Error::Rejected(format!("injection repeats value {v}")));
            }
            seen[v - 1] = true;
        }
        Ok(InjMorphism { n, m, map })
    }

    pub fn identity(n: usize) -> Self {
        InjMorphism {
            n,
            m: n,
            map: (1..=n).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &InjMorphism) -> Result<InjMorphism> {
        if other.m != self.n {
            return Err(Error::Rejected("injections not composable".into()));
        }
        InjMorphism::new(other.n, self.m, other.map.iter().map(|&i| self.apply(i)).collect())
    }

    /// Preimage of `j`, if any.
    pub fn preimage(&self, j: usize) -> Option<usize> {
        self.map.iter().position(|&v| v == j).map(|i| i + 1)
    }

    /// All injections `{1..n} → {1..m}` in lexicographic order.
    pub fn all(n: usize, m: usize) -> Vec<InjMorphism> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(n: usize, m: usize, current: &mut Vec<usize>, out: &mut Vec<InjMorphism>) {
            if current.len() == n {
                out.push(InjMorphism {
                    n,
                    m,
                    map: current.clone(),
                });
                return;
            }
            for v in 1..=m {
                if !current.contains(&v) {
                    current.push(v);
                    rec(n, m, current, out);
                    current.pop();
                }
            }
        }
        if n <= m {
            rec(n, m, &mut current, &mut out);
        }
        out
    }
}

/// An object of 𝒜: a finite tuple of base objects.
pub type WreathObject = Vec<ObjId>;

/// A morphism of 𝒜: an injection plus components. Component `j` is a
/// morphism `(q_*ū)_j → v_j` of 𝒞^op, stored as the underlying 𝒞-morphism
/// (`v_j → (q_*ū)_j` in 𝒞).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WreathMorphism {
    pub dom: WreathObject,
    pub cod: WreathObject,
    pub q: InjMorphism,
    pub components: Vec<MorId>,
}

pub fn tuple_id(entries: &[ObjId]) -> ObjId {
    let inner: Vec<&str> = entries.iter().map(|o| o.as_str()).collect();
    ObjId(format!("({})", inner.join(",")))
}

fn wmor_id(w: &WreathMorphism) -> MorId {
    let q: Vec<String> = w.q.map.iter().map(|v| v.to_string()).collect();
    let f: Vec<&str> = w.components.iter().map(|m| m.as_str()).collect();
    MorId(format!(
        "W[{};{}]{}>{}",
        q.join(","),
        f.join(","),
        tuple_id(&w.dom).0,
        tuple_id(&w.cod).0
    ))
}

/// `q_*ū`: the m-tuple with `u_i` at position `q(i)` and the unit elsewhere.
pub fn q_star(q: &InjMorphism, u: &WreathObject, unit: &ObjId) -> Result<WreathObject> {
    if u.len() != q.n {
        return Err(Error::Rejected(format!(
            "tuple length {} does not match injection arity {}",
            u.len(),
            q.n
        )));
    }
    let mut out = vec![unit.clone(); q.m];
    for (i, entry) in u.iter().enumerate() {
        out[q.apply(i + 1) - 1] = entry.clone();
    }
    Ok(out)
}

/// Compose `(p, ḡ) ∘ (q, f̄)` in 𝒜. `first` is applied first. Needs the
/// base structure to push unit components forward.
pub fn wreath_compose(
    base: &PermutativeStructure,
    second: &WreathMorphism,
    first: &WreathMorphism,
) -> Result<WreathMorphism> {
    if first.cod != second.dom {
        return Err(Error::Rejected("wreath morphisms not composable".into()));
    }
    let cat = &base.base;
    let q = second.q.compose(&first.q)?;
    // Components: h_k = (p_* f̄)_k ∘ g_k in 𝒞 (reading 𝒞^op backwards),
    // where p = second.q and the pushforward inserts id_1 at missed slots.
    let mut components = Vec::with_capacity(second.q.m);
    for k in 1..=second.q.m {
        let pushed = match second.q.preimage(k) {
            Some(i) => first.components[i - 1].clone(),
            None => cat.identity_of(&base.unit)?,
        };
        components.push(cat.compose2(&pushed, &second.components[k - 1])?);
    }
    Ok(WreathMorphism {
        dom: first.dom.clone(),
        cod: second.cod.clone(),
        q,
        components,
    })
}

pub fn wreath_identity(base: &PermutativeStructure, u: &WreathObject) -> Result<WreathMorphism> {
    let components = u
        .iter()
        .map(|o| base.base.identity_of(o))
        .collect::<Result<Vec<_>>>()?;
    Ok(WreathMorphism {
        dom: u.clone(),
        cod: u.clone(),
        q: InjMorphism::identity(u.len()),
        components,
    })
}

/// Concatenation of wreath morphisms (the ⊙ tensor on morphisms).
pub fn wreath_tensor_mor(a: &WreathMorphism, b: &WreathMorphism) -> Result<WreathMorphism> {
    let n = a.q.n + b.q.n;
    let m = a.q.m + b.q.m;
    let mut map = a.q.map.clone();
    map.extend(b.q.map.iter().map(|v| v + a.q.m));
    let mut components = a.components.clone();
    components.extend(b.components.iter().cloned());
    Ok(WreathMorphism {
        dom: a.dom.iter().chain(b.dom.iter()).cloned().collect(),
        cod: a.cod.iter().chain(b.cod.iter()).cloned().collect(),
        q: InjMorphism::new(n, m, map)?,
        components,
    })
}

/// The block-swap symmetry `(ξ_{n,m}, id) : ū⊙v̄ → v̄⊙ū`.
pub fn wreath_block_swap(
    base: &PermutativeStructure,
    u: &WreathObject,
    v: &WreathObject,
) -> Result<WreathMorphism> {
    let (n, m) = (u.len(), v.len());
    let xi = crate::perm::block_perm(&Perm::transposition(2, 1, 2), &[n, m]);
    let map: Vec<usize> = (1..=n + m).map(|i| xi.apply(i)).collect();
    let dom: WreathObject = u.iter().chain(v.iter()).cloned().collect();
    let cod: WreathObject = v.iter().chain(u.iter()).cloned().collect();
    let components = cod
        .iter()
        .map(|o| base.base.identity_of(o))
        .collect::<Result<Vec<_>>>()?;
    Ok(WreathMorphism {
        dom,
        cod,
        q: InjMorphism::new(n + m, n + m, map)?,
        components,
    })
}

/// The materialized truncation of 𝒜 on tuples of length ≤ cap.
#[derive(Debug, Clone)]
pub struct WreathTruncation {
    pub source: PermutativeStructure,
    pub cap: usize,
    pub cat: Arc<FinCategory>,
    pub objects: BTreeMap<ObjId, WreathObject>,
    pub morphisms: BTreeMap<MorId, WreathMorphism>,
    pub partial: PartialPermutative,
    pub report: ValidationReport,
}

impl WreathTruncation {
    pub fn object_id(&self, u: &WreathObject) -> ObjId {
        tuple_id(u)
    }

    pub fn morphism_id(&self, w: &WreathMorphism) -> MorId {
        wmor_id(w)
    }
}

/// Build the length-≤-cap truncation of `Inj ∫ (𝒞^op)^*` over a permutative
/// base, together with its partial ⊙ tables and a window validation report.
pub fn build_wreath(base: &PermutativeStructure, cap: usize) -> Result<WreathTruncation> {
    if cap == 0 {
        return Err(Error::Precondition("cap must be at least 1".into()));
    }
    let cat = &base.base;
    // All tuples of length ≤ cap, in length-then-lex order.
    let mut tuples: Vec<WreathObject> = vec![vec![]];
    let mut layer: Vec<WreathObject> = vec![vec![]];
    for _ in 0..cap {
        let mut next = Vec::new();
        for t in &layer {
            for o in &cat.objects {
                let mut t2 = t.clone();
                t2.push(o.clone());
                next.push(t2);
            }
        }
        tuples.extend(next.iter().cloned());
        layer = next;
    }

    let mut wcat = FinCategory::new();
    let mut objects = BTreeMap::new();
    let mut morphisms: BTreeMap<MorId, WreathMorphism> = BTreeMap::new();
    for t in &tuples {
        let id = tuple_id(t);
        wcat.objects.push(id.clone());
        objects.insert(id, t.clone());
    }

    // Enumerate all morphisms between window tuples.
    for u in &tuples {
        for v in &tuples {
            if u.len() > v.len() {
                continue;
            }
            for q in InjMorphism::all(u.len(), v.len()) {
                let qu = q_star(&q, u, &base.unit)?;
                // Component choices: f_j ∈ Hom_C(v_j, (q_*ū)_j).
                let choices: Vec<Vec<MorId>> = (0..v.len())
                    .map(|j| cat.hom(&v[j], &qu[j]))
                    .collect();
                let mut stack: Vec<Vec<MorId>> = vec![Vec::new()];
                for ch in &choices {
                    let mut next = Vec::new();
                    for partial in &stack {
                        for c in ch {
                            let mut p2 = partial.clone();
                            p2.push(c.clone());
                            next.push(p2);
                        }
                    }
                    stack = next;
                }
                for components in stack {
                    let w = WreathMorphism {
                        dom: u.clone(),
                        cod: v.clone(),
                        q: q.clone(),
                        components,
                    };
                    let id = wmor_id(&w);
                    wcat.morphisms.push(MorRecord {
                        id: id.clone(),
                        dom: tuple_id(u),
                        cod: tuple_id(v),
                    });
                    morphisms.insert(id, w);
                }
            }
        }
    }

    for t in &tuples {
        let idm = wreath_identity(base, t)?;
        wcat.identity.insert(tuple_id(t), wmor_id(&idm));
    }
    // Composition table.
    let all: Vec<(MorId, WreathMorphism)> =
        morphisms.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    for (fid, f) in &all {
        for (gid, g) in &all {
            if g.dom != f.cod {
                continue;
            }
            let comp = wreath_compose(base, g, f)?;
            wcat.compose.insert((gid.clone(), fid.clone()), wmor_id(&comp));
        }
    }
    let wcat = Arc::new(wcat);

    // Partial ⊙ structure.
    let mut partial = PartialPermutative {
        cat: wcat.clone(),
        unit: tuple_id(&[]),
        tensor_obj: BTreeMap::new(),
        tensor_mor: BTreeMap::new(),
        gamma: BTreeMap::new(),
    };
    for u in &tuples {
        for v in &tuples {
            if u.len() + v.len() > cap {
                continue;
            }
            let uv: WreathObject = u.iter().chain(v.iter()).cloned().collect();
            partial
                .tensor_obj
                .insert((tuple_id(u), tuple_id(v)), tuple_id(&uv));
            let swap = wreath_block_swap(base, u, v)?;
            partial
                .gamma
                .insert((tuple_id(u), tuple_id(v)), wmor_id(&swap));
        }
    }
    for (fid, f) in &all {
        for (gid, g) in &all {
            if f.dom.len() + g.dom.len() > cap || f.cod.len() + g.cod.len() > cap {
                continue;
            }
            let t = wreath_tensor_mor(f, g)?;
            partial
                .tensor_mor
                .insert((fid.clone(), gid.clone()), wmor_id(&t));
        }
    }

    let mut report = fincat::validate_category(&wcat)?;
    let wrep = validate_partial_permutative(&partial)?;
    report.absorb("window:", wrep.clone());
    report.bounds_note = wrep.bounds_note;
    Ok(WreathTruncation {
        source: base.clone(),
        cap,
        cat: wcat,
        objects,
        morphisms,
        partial,
        report,
    })
}

/// The projection `𝒲 : 𝒜 → 𝒞^op` with `𝒲(ū) = u₁⊗⋯⊗uₙ` and on morphisms
/// the τ_σ coherence followed by the tensor of the components. Returns the
/// functor (into the opposite base) and a window strictness report.
pub fn projection_w(trunc: &WreathTruncation) -> Result<(FunctorData, ValidationReport)> {
    let base = &trunc.source;
    let op = opposite_permutative(base)?;
    let op_view = PermView::new(&op);
    let op_cat = &op.base;

    let mut object_map = BTreeMap::new();
    for (id, u) in &trunc.objects {
        object_map.insert(id.clone(), op.tensor_all(u)?);
    }
    let mut morphism_map = BTreeMap::new();
    for (id, w) in &trunc.morphisms {
        // σ ∈ Σ_n reads the entries of ū in the slot order of their images:
        // ⊗(q_*ū) = ⊗(u_{σ(1)},…,u_{σ(n)}) after the strict unit erases 1s.
        let mut hit: Vec<(usize, usize)> = (1..=w.q.n).map(|i| (w.q.apply(i), i)).collect();
        hit.sort();
        let images: Vec<usize> = {
            // position t of the sorted hits holds original index hit[t].1:
            // σ(t) = hit[t].1.
            hit.iter().map(|&(_, i)| i).collect()
        };
        let sigma = Perm::from_images(&images)
            .ok_or_else(|| Error::Internal("slot order is not a permutation".into()))?;
        let (_, tau) = permute_iso(&op_view, &w.dom, &sigma)?;
        // Tensor of the components in 𝒞^op (right-nested, unit for m = 0).
        let mut ftensor = op_cat.identity_of(&op.unit)?;
        let mut first = true;
        for c in w.components.iter().rev() {
            if first {
                ftensor = c.clone();
                first = false;
            } else {
                ftensor = op.tensor.on_mor(c, &ftensor)?;
            }
        }
        morphism_map.insert(id.clone(), op_cat.compose2(&ftensor, &tau)?);
    }
    let functor = FunctorData {
        source: trunc.cat.clone(),
        target: op_cat.clone(),
        object_map,
        morphism_map,
    };

    let mut rep = fincat::validate_functor(&functor)?;
    for c in ["strict-tensor", "strict-unit", "strict-gamma"] {
        rep.ran(c);
    }
    // Window strictness: 𝒲(ū⊙v̄) = 𝒲(ū)⊗𝒲(v̄), 𝒲 of ⊙ on morphisms, and
    // 𝒲 of the block swap hitting the base γ composite.
    if functor.object_map[&trunc.partial.unit] != op.unit {
        rep.push("strict-unit", "W(()) != 1".to_string());
    }
    for ((x, y), xy) in &trunc.partial.tensor_obj {
        let lhs = &functor.object_map[xy];
        let rhs = op.tensor.on_obj(&functor.object_map[x], &functor.object_map[y])?;
        if lhs != &rhs {
            rep.push("strict-tensor", format!("W({x}⊙{y}) = {lhs} != {rhs}"));
        }
    }
    for ((f, g), fg) in &trunc.partial.tensor_mor {
        let lhs = &functor.morphism_map[fg];
        let rhs = op
            .tensor
            .on_mor(&functor.morphism_map[f], &functor.morphism_map[g])?;
        if lhs != &rhs {
            rep.push("strict-tensor", format!("W({f}⊙{g}) mismatch"));
        }
    }
    for ((x, y), g) in &trunc.partial.gamma {
        // 𝒲 of the block swap must equal the base's γ composite between the
        // evaluated tuples (computed by the re-bracketing engine).
        let u = &trunc.objects[x];
        let v = &trunc.objects[y];
        let n = u.len();
        let m = v.len();
        let all: Vec<ObjId> = u.iter().chain(v.iter()).cloned().collect();
        let xi = crate::perm::block_perm(&Perm::transposition(2, 1, 2), &[n, m]);
        let (_, tau) = permute_iso(&op_view, &all, &xi.inverse())?;
        let lhs = &functor.morphism_map[g];
        if lhs != &tau {
            rep.push("strict-gamma", format!("W(swap({x},{y})) != base gamma composite"));
        }
    }
    Ok((functor, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::obj;
    use crate::monostruct::{terminal_permutative, z2_xor_permutative};

    #[test]
    fn inj_composition_associative_and_unital() {
        // Exhaustive over maps between sets of size ≤ 3 (plus spot 4).
        for n in 0..=3usize {
            for m in n..=3 {
                for q in InjMorphism::all(n, m) {
                    assert_eq!(q.compose(&InjMorphism::identity(n)).unwrap(), q);
                    assert_eq!(InjMorphism::identity(m).compose(&q).unwrap(), q);
                    for l in m..=3 {
                        for p in InjMorphism::all(m, l) {
                            for o in l..=4 {
                                for r in InjMorphism::all(l, o) {
                                    let lhs = r.compose(&p.compose(&q).unwrap()).unwrap();
                                    let rhs = r.compose(&p).unwrap().compose(&q).unwrap();
                                    assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn q_star_examples_and_functoriality() {
        let unit = obj("1");
        let a = obj("a");
        let b = obj("b");
        // Identity leaves the tuple unchanged.
        let q = InjMorphism::identity(2);
        assert_eq!(
            q_star(&q, &vec![a.clone(), b.clone()], &unit).unwrap(),
            vec![a.clone(), b.clone()]
        );
        // 1→2 hitting slot 1: (a) ↦ (a, 1).
        let q = InjMorphism::new(1, 2, vec![1]).unwrap();
        assert_eq!(
            q_star(&q, &vec![a.clone()], &unit).unwrap(),
            vec![a.clone(), unit.clone()]
        );
        // 2→3 with 1↦3, 2↦1: (a,b) ↦ (b, 1, a).
        let q = InjMorphism::new(2, 3, vec![3, 1]).unwrap();
        assert_eq!(
            q_star(&q, &vec![a.clone(), b.clone()], &unit).unwrap(),
            vec![b.clone(), unit.clone(), a.clone()]
        );
        // Functoriality: (p∘q)_* = p_* ∘ q_*.
        for q in InjMorphism::all(1, 2) {
            for p in InjMorphism::all(2, 3) {
                let u = vec![a.clone()];
                let lhs = q_star(&p.compose(&q).unwrap(), &u, &unit).unwrap();
                let rhs = q_star(&p, &q_star(&q, &u, &unit).unwrap(), &unit).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn terminal_wreath_cap2() {
        let p = terminal_permutative("1");
        let t = build_wreath(&p, 2).unwrap();
        let names: Vec<&str> = t.cat.objects.iter().map(|o| o.as_str()).collect();
        assert_eq!(names, vec!["()", "(1)", "(1,1)"]);
        assert!(t.report.is_valid(), "{}", t.report);
    }

    #[test]
    fn z2_wreath_cap2_valid() {
        let p = z2_xor_permutative();
        let t = build_wreath(&p, 2).unwrap();
        assert!(t.report.is_valid(), "{}", t.report);
        // Unit law of ⊙ on objects: ()⊙ū = ū within the window.
        for (id, _) in &t.objects {
            let l = t.partial.obj(&t.partial.unit, id);
            assert_eq!(l, Some(id));
        }
    }

    #[test]
    fn group_category_wreath_composition_associativity_witness() {
        // One-object groupoid: components are group elements; exhaustively
        // check associativity of wreath composition on small morphisms.
        let base = {
            use crate::monostruct::TensorTables;
            let cat = Arc::new(crate::fincat::z2_category());
            let star = obj("*");
            let mut tensor = TensorTables::default();
            tensor.obj.insert((star.clone(), star.clone()), star.clone());
            for f in ["e", "u"] {
                for g in ["e", "u"] {
                    let prod = if (f == "u") ^ (g == "u") { "u" } else { "e" };
                    tensor
                        .mor
                        .insert((MorId::from(f), MorId::from(g)), MorId::from(prod));
                }
            }
            PermutativeStructure {
                base: cat,
                tensor,
                unit: star.clone(),
                gamma: [((star.clone(), star.clone()), MorId::from("e"))].into(),
            }
        };
        let t = build_wreath(&base, 2).unwrap();
        assert!(t.report.is_valid(), "{}", t.report);
        // Associativity of the composition table is already certified by
        // validate_category inside the report; additionally unfold one
        // composite by hand: q : 1→2 missing slot 2, then the swap.
        let q = InjMorphism::new(1, 2, vec![1]).unwrap();
        let first = WreathMorphism {
            dom: vec![obj("*")],
            cod: vec![obj("*"), obj("*")],
            q,
            components: vec![MorId::from("e"), MorId::from("e")],
        };
        let swap = wreath_block_swap(&base, &vec![obj("*")], &vec![obj("*")]).unwrap();
        let comp = wreath_compose(&base, &swap, &first).unwrap();
        assert_eq!(comp.q.map, vec![2]);
        assert_eq!(comp.components, vec![MorId::from("e"), MorId::from("e")]);
    }

    #[test]
    fn projection_w_on_z2() {
        let p = z2_xor_permutative();
        let t = build_wreath(&p, 2).unwrap();
        let (w, rep) = projection_w(&t).unwrap();
        assert!(rep.is_valid(), "{rep}");
        // W(()) = 1 = "0"; W((1,1)) = 0.
        assert_eq!(w.object_map[&obj("()")], obj("0"));
        assert_eq!(w.object_map[&obj("(1,1)")], obj("0"));
        assert_eq!(w.object_map[&obj("(0,1)")], obj("1"));
    }

    #[test]
    fn projection_w_strict_on_group_category() {
        use crate::monostruct::TensorTables;
        let cat = Arc::new(crate::fincat::z2_category());
        let star = obj("*");
        let mut tensor = TensorTables::default();
        tensor.obj.insert((star.clone(), star.clone()), star.clone());
        for f in ["e", "u"] {
            for g in ["e", "u"] {
                let prod = if (f == "u") ^ (g == "u") { "u" } else { "e" };
                tensor
                    .mor
                    .insert((MorId::from(f), MorId::from(g)), MorId::from(prod));
            }
        }
        let base = PermutativeStructure {
            base: cat,
            tensor,
            unit: star.clone(),
            gamma: [((star.clone(), star.clone()), MorId::from("e"))].into(),
        };
        let t = build_wreath(&base, 2).unwrap();
        let (_, rep) = projection_w(&t).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }
}
