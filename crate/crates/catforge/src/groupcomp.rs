//! Grayson–Quillen group completion `D⁻¹D` for finite permutative
//! groupoids, the inclusion `i`, and K₀ extraction.
//!
//! Objects of the completion are pairs `(a,b)` thought of as formal
//! differences; morphisms are equivalence classes of stabilization data
//! `(s, α : a⊕s → c, β : b⊕s → d)`, quotiented by a union-find closure of
//! the witness relation.

use crate::error::{Error, Result};
use crate::fincat::{self, FinCategory, FunctorData, MorRecord};
use crate::ids::{MorId, ObjId};
use crate::monostruct::{
    validate_monoidal_map, validate_permutative, MapClass, MonoidalMap, PermutativeStructure,
    PermView, TensorTables,
};
use crate::perm::Perm;
use crate::rebracket::permute_iso;
use crate::report::ValidationReport;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A stabilization triple `(s, α, β)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub s: ObjId,
    pub alpha: MorId,
    pub beta: MorId,
}

/// A morphism class of the completion together with its whole equivalence
/// class of representatives.
#[derive(Debug, Clone)]
pub struct GcMorphismClass {
    pub dom: (ObjId, ObjId),
    pub cod: (ObjId, ObjId),
    pub canonical: Triple,
    pub representatives: Vec<Triple>,
}

/// The group completion: an ordinary finite category plus its permutative
/// structure and the class bookkeeping needed to resolve representatives.
#[derive(Debug, Clone)]
pub struct GroupCompletionCategory {
    pub source: PermutativeStructure,
    pub underlying: Arc<FinCategory>,
    pub permutative: PermutativeStructure,
    /// Morphism id → class data.
    pub classes: BTreeMap<MorId, GcMorphismClass>,
    /// Lookup: (dom pair, cod pair, triple) → class morphism id.
    class_of: BTreeMap<((ObjId, ObjId), (ObjId, ObjId), Triple), MorId>,
    /// Hypothesis checks (groupoid, faithfulness): failures downgrade the
    /// classifying-space guarantee but the construction still goes through.
    pub hypothesis_report: ValidationReport,
}

fn pair_id(a: &ObjId, b: &ObjId) -> ObjId {
    ObjId(format!("({},{})", a.0, b.0))
}

fn class_id(dom: &(ObjId, ObjId), cod: &(ObjId, ObjId), t: &Triple) -> MorId {
    MorId(format!(
        "[{},{},{}]({},{})>({},{})",
        t.s.0, t.alpha.0, t.beta.0, dom.0 .0, dom.1 .0, cod.0 .0, cod.1 .0
    ))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl GroupCompletionCategory {
    /// Resolve an arbitrary representative to its class morphism id.
    pub fn class_of_triple(
        &self,
        dom: &(ObjId, ObjId),
        cod: &(ObjId, ObjId),
        t: &Triple,
    ) -> Result<MorId> {
        self.class_of
            .get(&(dom.clone(), cod.clone(), t.clone()))
            .cloned()
            .ok_or_else(|| {
                Error::MissingEntry(format!(
                    "no class for triple ({},{},{})",
                    t.s, t.alpha, t.beta
                ))
            })
    }

    /// Compose two explicit representatives (not classes) and canonicalize.
    /// Used by the representative-independence property test.
    pub fn compose_representatives(
        &self,
        dom: &(ObjId, ObjId),
        mid: &(ObjId, ObjId),
        cod: &(ObjId, ObjId),
        first: &Triple,
        second: &Triple,
    ) -> Result<MorId> {
        let p = &self.source;
        let cat = &p.base;
        // s-part: s₁⊕s₂; α-part: φ∘(α⊕id_{s₂}) : a⊕(s₁⊕s₂) = (a⊕s₁)⊕s₂ → e.
        let s = p.tensor.on_obj(&first.s, &second.s)?;
        let alpha = cat.compose2(
            &second.alpha,
            &p.tensor.on_mor(&first.alpha, &cat.identity_of(&second.s)?)?,
        )?;
        let beta = cat.compose2(
            &second.beta,
            &p.tensor.on_mor(&first.beta, &cat.identity_of(&second.s)?)?,
        )?;
        let _ = mid;
        self.class_of_triple(dom, cod, &Triple { s, alpha, beta })
    }
}

/// Build the group completion of a permutative groupoid. Preconditions are
/// checked and recorded: failures of the groupoid or faithfulness
/// hypotheses are reported (downgrading the classifying-space claim) but do
/// not stop the construction.
pub fn group_complete(p: &PermutativeStructure) -> Result<GroupCompletionCategory> {
    let prep = validate_permutative(p)?;
    if !prep.is_valid() {
        return Err(Error::Precondition(format!(
            "permutative structure invalid: {prep}"
        )));
    }
    let cat = &p.base;
    let mut hyp = ValidationReport::new("group completion hypotheses");
    hyp.ran("groupoid");
    hyp.ran("faithful-translation");
    for r in &cat.morphisms {
        if cat.inverse(&r.id).is_none() {
            hyp.push("groupoid", format!("morphism {} is not invertible", r.id));
        }
    }
    // a⊕− faithful for every a.
    for a in &cat.objects {
        let ida = cat.identity_of(a)?;
        for f in &cat.morphisms {
            for g in &cat.morphisms {
                if f.id >= g.id || f.dom != g.dom || f.cod != g.cod {
                    continue;
                }
                if p.tensor.on_mor(&ida, &f.id)? == p.tensor.on_mor(&ida, &g.id)? {
                    hyp.push(
                        "faithful-translation",
                        format!("{a}⊕− identifies {} and {}", f.id, g.id),
                    );
                }
            }
        }
    }

    // Objects: all pairs.
    let mut pairs: Vec<(ObjId, ObjId)> = Vec::new();
    for a in &cat.objects {
        for b in &cat.objects {
            pairs.push((a.clone(), b.clone()));
        }
    }

    // Morphism classes per (dom, cod): enumerate triples, close the witness
    // relation with union-find.
    let mut underlying = FinCategory::new();
    let mut classes: BTreeMap<MorId, GcMorphismClass> = BTreeMap::new();
    let mut class_of: BTreeMap<((ObjId, ObjId), (ObjId, ObjId), Triple), MorId> = BTreeMap::new();

    for (a, b) in &pairs {
        underlying.objects.push(pair_id(a, b));
    }

    for dom in &pairs {
        for cod in &pairs {
            let (a, b) = dom;
            let (c, d) = cod;
            let mut triples: Vec<Triple> = Vec::new();
            for s in &cat.objects {
                let as_ = p.tensor.on_obj(a, s)?;
                let bs = p.tensor.on_obj(b, s)?;
                for alpha in cat.hom(&as_, c) {
                    for beta in cat.hom(&bs, d) {
                        triples.push(Triple {
                            s: s.clone(),
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                        });
                    }
                }
            }
            triples.sort();
            let index: BTreeMap<&Triple, usize> =
                triples.iter().enumerate().map(|(i, t)| (t, i)).collect();
            let mut uf = UnionFind::new(triples.len());
            let ida = cat.identity_of(a)?;
            let idb = cat.identity_of(b)?;
            for (i, t) in triples.iter().enumerate() {
                // Witness γ : s → s′ with α′∘(id_a⊕γ) = α and β′∘(id_b⊕γ) = β.
                for gamma in &cat.morphisms {
                    if gamma.dom != t.s {
                        continue;
                    }
                    let ag = p.tensor.on_mor(&ida, &gamma.id)?;
                    let bg = p.tensor.on_mor(&idb, &gamma.id)?;
                    // α factors as α′∘(id_a⊕γ) iff α′ = α∘(id_a⊕γ)⁻¹ when γ
                    // invertible; in general scan candidates.
                    for cand in &triples {
                        if cand.s != gamma.cod {
                            continue;
                        }
                        if cat.compose2(&cand.alpha, &ag)? == t.alpha
                            && cat.compose2(&cand.beta, &bg)? == t.beta
                        {
                            uf.union(i, index[cand]);
                        }
                    }
                }
            }
            // Group by root; canonical representative is the least triple.
            let mut groups: BTreeMap<usize, Vec<Triple>> = BTreeMap::new();
            for (i, t) in triples.iter().enumerate() {
                groups.entry(uf.find(i)).or_default().push(t.clone());
            }
            for (_, members) in groups {
                let canonical = members[0].clone();
                let id = class_id(dom, cod, &canonical);
                underlying.morphisms.push(MorRecord {
                    id: id.clone(),
                    dom: pair_id(a, b),
                    cod: pair_id(c, d),
                });
                for t in &members {
                    class_of.insert((dom.clone(), cod.clone(), t.clone()), id.clone());
                }
                classes.insert(
                    id,
                    GcMorphismClass {
                        dom: dom.clone(),
                        cod: cod.clone(),
                        canonical,
                        representatives: members,
                    },
                );
            }
        }
    }

    // Identities: class of (0, id_a, id_b) — a⊕0 = a strictly.
    for (a, b) in &pairs {
        let t = Triple {
            s: p.unit.clone(),
            alpha: cat.identity_of(a)?,
            beta: cat.identity_of(b)?,
        };
        let id = class_of
            .get(&(((*a).clone(), (*b).clone()), ((*a).clone(), (*b).clone()), t))
            .cloned()
            .ok_or_else(|| Error::Internal("identity triple not classified".into()))?;
        underlying.identity.insert(pair_id(a, b), id);
    }

    // Composition: compose canonical representatives, then canonicalize.
    let morphs: Vec<(MorId, GcMorphismClass)> =
        classes.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    for (fid, fcls) in &morphs {
        for (gid, gcls) in &morphs {
            if gcls.dom != fcls.cod {
                continue;
            }
            let t1 = &fcls.canonical;
            let t2 = &gcls.canonical;
            let s = p.tensor.on_obj(&t1.s, &t2.s)?;
            let alpha = cat.compose2(
                &t2.alpha,
                &p.tensor.on_mor(&t1.alpha, &cat.identity_of(&t2.s)?)?,
            )?;
            let beta = cat.compose2(
                &t2.beta,
                &p.tensor.on_mor(&t1.beta, &cat.identity_of(&t2.s)?)?,
            )?;
            let comp = class_of
                .get(&(fcls.dom.clone(), gcls.cod.clone(), Triple { s, alpha, beta }))
                .cloned()
                .ok_or_else(|| Error::Internal("composite triple not classified".into()))?;
            underlying.compose.insert((gid.clone(), fid.clone()), comp);
        }
    }

    let underlying = Arc::new(underlying);

    // Permutative structure: (a,b)⊕(c,d) = (a⊕c, b⊕d) with the middle-swap
    // conjugation on representatives and γ from the source symmetry.
    let mut tensor = TensorTables::default();
    let view = PermView::new(p);
    let pair_index: BTreeMap<ObjId, (ObjId, ObjId)> = pairs
        .iter()
        .map(|(a, b)| (pair_id(a, b), (a.clone(), b.clone())))
        .collect();
    for (a, b) in &pairs {
        for (c, d) in &pairs {
            tensor.obj.insert(
                (pair_id(a, b), pair_id(c, d)),
                pair_id(&p.tensor.on_obj(a, c)?, &p.tensor.on_obj(b, d)?),
            );
        }
    }
    let middle_swap = Perm::from_images(&[1, 3, 2, 4]).unwrap();
    for (fid, fcls) in &morphs {
        for (gid, gcls) in &morphs {
            let (a, b) = &fcls.dom;
            let (c, d) = &gcls.dom;
            let (a2, b2) = &fcls.cod;
            let (c2, d2) = &gcls.cod;
            let t1 = &fcls.canonical;
            let t2 = &gcls.canonical;
            // α-part: (a⊕c)⊕(s⊕t) --τ--> (a⊕s)⊕(c⊕t) --α⊕φ--> a′⊕c′.
            let (_, tau_a) = permute_iso(
                &view,
                &[a.clone(), c.clone(), t1.s.clone(), t2.s.clone()],
                &middle_swap,
            )?;
            let (_, tau_b) = permute_iso(
                &view,
                &[b.clone(), d.clone(), t1.s.clone(), t2.s.clone()],
                &middle_swap,
            )?;
            let alpha = cat.compose2(&p.tensor.on_mor(&t1.alpha, &t2.alpha)?, &tau_a)?;
            let beta = cat.compose2(&p.tensor.on_mor(&t1.beta, &t2.beta)?, &tau_b)?;
            let dom = (p.tensor.on_obj(a, c)?, p.tensor.on_obj(b, d)?);
            let cod = (p.tensor.on_obj(a2, c2)?, p.tensor.on_obj(b2, d2)?);
            let s = p.tensor.on_obj(&t1.s, &t2.s)?;
            let sum = class_of
                .get(&(dom, cod, Triple { s, alpha, beta }))
                .cloned()
                .ok_or_else(|| Error::Internal("tensor triple not classified".into()))?;
            tensor.mor.insert((fid.clone(), gid.clone()), sum);
        }
    }
    let mut gamma = BTreeMap::new();
    for (x, (a, b)) in &pair_index {
        for (y, (c, d)) in &pair_index {
            let dom = (p.tensor.on_obj(a, c)?, p.tensor.on_obj(b, d)?);
            let cod = (p.tensor.on_obj(c, a)?, p.tensor.on_obj(d, b)?);
            let t = Triple {
                s: p.unit.clone(),
                alpha: p.gamma_at(a, c)?,
                beta: p.gamma_at(b, d)?,
            };
            let g = class_of
                .get(&(dom, cod, t))
                .cloned()
                .ok_or_else(|| Error::Internal("gamma triple not classified".into()))?;
            gamma.insert((x.clone(), y.clone()), g);
        }
    }
    let permutative = PermutativeStructure {
        base: underlying.clone(),
        tensor,
        unit: pair_id(&p.unit, &p.unit),
        gamma,
    };

    Ok(GroupCompletionCategory {
        source: p.clone(),
        underlying,
        permutative,
        classes,
        class_of,
        hypothesis_report: hyp,
    })
}

/// The inclusion `i : D → D⁻¹D`, `a ↦ (0,a)`, as a monoidal map record. The
/// returned report is the lax-map validation (with invertible λ; on the
/// nose the inclusion is even strict).
pub fn inclusion(gc: &GroupCompletionCategory) -> Result<(FunctorData, MonoidalMap, ValidationReport)> {
    let p = &gc.source;
    let cat = &p.base;
    let zero = &p.unit;
    let mut object_map = BTreeMap::new();
    let mut morphism_map = BTreeMap::new();
    for a in &cat.objects {
        object_map.insert(a.clone(), pair_id(zero, a));
    }
    for f in &cat.morphisms {
        // i(f) = class of (0, id_0, f).
        let dom = (zero.clone(), f.dom.clone());
        let cod = (zero.clone(), f.cod.clone());
        let t = Triple {
            s: zero.clone(),
            alpha: cat.identity_of(zero)?,
            beta: f.id.clone(),
        };
        morphism_map.insert(f.id.clone(), gc.class_of_triple(&dom, &cod, &t)?);
    }
    let functor = FunctorData {
        source: cat.clone(),
        target: gc.underlying.clone(),
        object_map: object_map.clone(),
        morphism_map: morphism_map.clone(),
    };

    // λ components: i(a)⊕i(b) = (0,a⊕b) = i(a⊕b) on the nose, so identity
    // classes; η = identity of (0,0).
    let mut lambda = BTreeMap::new();
    for a in &cat.objects {
        for b in &cat.objects {
            let ab = p.tensor.on_obj(a, b)?;
            lambda.insert(
                (a.clone(), b.clone()),
                gc.underlying.identity_of(&pair_id(zero, &ab))?,
            );
        }
    }
    let map = MonoidalMap {
        object_map,
        morphism_map,
        class: MapClass::Lax,
        lambda,
        eta: Some(gc.underlying.identity_of(&pair_id(zero, zero))?),
    };
    let rep = validate_monoidal_map(&map, p, &gc.permutative)?;
    Ok((functor, map, rep))
}

/// A finite abelian group presented by its operation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    /// Canonical representatives of the π₀ blocks, in block order.
    pub elements: Vec<ObjId>,
    /// `table[i][j]` = index of `elements[i] + elements[j]`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl AbelianGroupPresentation {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Exhaustive commutative-group axioms.
    pub fn validate(&self) -> ValidationReport {
        let n = self.order();
        let mut rep = ValidationReport::new("abelian group");
        for c in ["closure", "unit", "associativity", "commutativity", "inverses"] {
            rep.ran(c);
        }
        for i in 0..n {
            for j in 0..n {
                if self.table[i][j] >= n {
                    rep.push("closure", format!("({i},{j})"));
                }
                if self.table[i][j] != self.table[j][i] {
                    rep.push("commutativity", format!("({i},{j})"));
                }
                for k in 0..n {
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]] {
                        rep.push("associativity", format!("({i},{j},{k})"));
                    }
                }
            }
            if self.table[self.identity][i] != i || self.table[i][self.identity] != i {
                rep.push("unit", format!("{i}"));
            }
            if !(0..n).any(|j| self.table[i][j] == self.identity) {
                rep.push("inverses", format!("{i}"));
            }
        }
        rep
    }
}

/// K₀: the abelian group of π₀ blocks of the completion under the induced
/// addition. Well-definedness of the induced operation is re-checked on
/// every pair of block members; a failure is an internal invariant error.
pub fn k0(gc: &GroupCompletionCategory) -> Result<AbelianGroupPresentation> {
    let blocks = fincat::pi0(&gc.underlying);
    let block_of: BTreeMap<ObjId, usize> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().map(move |o| (o.clone(), i)))
        .collect();
    let n = blocks.len();
    let mut table = vec![vec![usize::MAX; n]; n];
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            let mut result: Option<usize> = None;
            for x in bi {
                for y in bj {
                    let sum = gc.permutative.tensor.on_obj(x, y)?;
                    let blk = block_of[&sum];
                    match result {
                        None => result = Some(blk),
                        Some(r) if r == blk => {}
                        Some(r) => {
                            return Err(Error::Internal(format!(
                                "induced addition not well-defined on blocks: \
                                 {x}+{y} lands in block {blk}, expected {r}"
                            )))
                        }
                    }
                }
            }
            table[i][j] = result.ok_or_else(|| Error::Internal("empty block".into()))?;
        }
    }
    let zero_pair = pair_id(&gc.source.unit, &gc.source.unit);
    let identity = block_of[&zero_pair];
    let elements: Vec<ObjId> = blocks.iter().map(|b| b[0].clone()).collect();
    let pres = AbelianGroupPresentation {
        elements,
        table,
        identity,
    };
    let rep = pres.validate();
    if !rep.is_valid() {
        return Err(Error::Internal(format!("K0 is not a group: {rep}")));
    }
    Ok(pres)
}

/// Map an object pair of the source to its K₀ block index.
pub fn k0_class_of_pair(
    gc: &GroupCompletionCategory,
    a: &ObjId,
    b: &ObjId,
) -> Result<usize> {
    let blocks = fincat::pi0(&gc.underlying);
    let target = pair_id(a, b);
    blocks
        .iter()
        .position(|blk| blk.contains(&target))
        .ok_or_else(|| Error::UnknownObject(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monostruct::{
        bool_or_permutative, terminal_permutative, z2_xor_permutative, zn_permutative,
    };

    #[test]
    fn terminal_completion_is_terminal() {
        let gc = group_complete(&terminal_permutative("1")).unwrap();
        assert_eq!(gc.underlying.objects.len(), 1);
        assert_eq!(gc.underlying.morphisms.len(), 1);
        assert!(fincat::validate_category(&gc.underlying).unwrap().is_valid());
        let g = k0(&gc).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn z2_completion() {
        let gc = group_complete(&z2_xor_permutative()).unwrap();
        assert!(gc.hypothesis_report.is_valid());
        assert_eq!(gc.underlying.objects.len(), 4);
        // Every nonempty hom set is a single class.
        for cls in gc.classes.values() {
            assert_eq!(cls.representatives.len(), 1);
        }
        let rep = fincat::validate_category(&gc.underlying).unwrap();
        assert!(rep.is_valid(), "{rep}");
        let rep = validate_permutative(&gc.permutative).unwrap();
        assert!(rep.is_valid(), "{rep}");
        assert_eq!(fincat::pi0(&gc.underlying).len(), 2);
        let g = k0(&gc).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn boolean_completion_collapses() {
        let gc = group_complete(&bool_or_permutative()).unwrap();
        // or is not cancellative: 1⊕− identifies nothing at the morphism
        // level (discrete), but stabilization connects everything.
        assert!(fincat::validate_category(&gc.underlying).unwrap().is_valid());
        assert!(validate_permutative(&gc.permutative).unwrap().is_valid());
        assert_eq!(fincat::pi0(&gc.underlying).len(), 1);
        let g = k0(&gc).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn group_category_completion_validates() {
        // One-object groupoid Z/2 with ⊕ = group multiplication.
        let base = Arc::new(crate::fincat::z2_category());
        let star = ObjId::from("*");
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
        let p = PermutativeStructure {
            base,
            tensor,
            unit: star.clone(),
            gamma: [((star.clone(), star.clone()), MorId::from("e"))].into(),
        };
        assert!(validate_permutative(&p).unwrap().is_valid());
        let gc = group_complete(&p).unwrap();
        assert!(gc.hypothesis_report.is_valid(), "{}", gc.hypothesis_report);
        // One object, two classes of endomorphisms: (α,β) ~ (αu, βu).
        assert_eq!(gc.underlying.objects.len(), 1);
        assert_eq!(gc.underlying.morphisms.len(), 2);
        assert!(fincat::validate_category(&gc.underlying).unwrap().is_valid());
        assert!(validate_permutative(&gc.permutative).unwrap().is_valid());
        let g = k0(&gc).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn inclusion_is_valid_lax_map_with_invertible_lambda() {
        for p in [z2_xor_permutative(), zn_permutative(3), bool_or_permutative()] {
            let gc = group_complete(&p).unwrap();
            let (functor, map, rep) = inclusion(&gc).unwrap();
            assert!(fincat::validate_functor(&functor).unwrap().is_valid());
            assert!(rep.is_valid(), "{rep}");
            for ((_, _), l) in &map.lambda {
                assert!(gc.underlying.inverse(l).is_some());
            }
        }
    }

    #[test]
    fn inclusion_pi0_injectivity_iff_cancellative() {
        // Z/n is cancellative: i is injective on π₀.
        let p = zn_permutative(3);
        let gc = group_complete(&p).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for a in &p.base.objects {
            assert!(seen.insert(k0_class_of_pair(&gc, &p.unit, a).unwrap()));
        }
        // boolean or is not cancellative: i collapses on π₀.
        let p = bool_or_permutative();
        let gc = group_complete(&p).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut collided = false;
        for a in &p.base.objects {
            if !seen.insert(k0_class_of_pair(&gc, &p.unit, a).unwrap()) {
                collided = true;
            }
        }
        assert!(collided);
    }

    #[test]
    fn every_block_has_an_inverse() {
        for p in [z2_xor_permutative(), zn_permutative(4), bool_or_permutative()] {
            let gc = group_complete(&p).unwrap();
            let g = k0(&gc).unwrap();
            let rep = g.validate();
            assert!(rep.is_valid(), "{rep}");
            // (a,b) + (b,a) lands in the identity block.
            for a in &p.base.objects {
                for b in &p.base.objects {
                    let i = k0_class_of_pair(&gc, a, b).unwrap();
                    let j = k0_class_of_pair(&gc, b, a).unwrap();
                    assert_eq!(g.table[i][j], g.identity);
                }
            }
        }
    }

    #[test]
    fn composition_is_representative_independent() {
        // For every pair of composable classes and every pair of
        // representatives, the canonical composite agrees.
        for p in [z2_xor_permutative(), bool_or_permutative()] {
            let gc = group_complete(&p).unwrap();
            let morphs: Vec<_> = gc.classes.iter().collect();
            for (fid, fcls) in &morphs {
                for (gid, gcls) in &morphs {
                    if gcls.dom != fcls.cod {
                        continue;
                    }
                    let expected = gc
                        .underlying
                        .compose2(gid, fid)
                        .unwrap();
                    for t1 in &fcls.representatives {
                        for t2 in &gcls.representatives {
                            let got = gc
                                .compose_representatives(&fcls.dom, &fcls.cod, &gcls.cod, t1, t2)
                                .unwrap();
                            assert_eq!(got, expected);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn k0_matches_direct_grothendieck_on_z4() {
        let p = zn_permutative(4);
        let gc = group_complete(&p).unwrap();
        let g = k0(&gc).unwrap();
        assert_eq!(g.order(), 4);
        // Cyclic of order 4: some element has order 4.
        let mut found_order_4 = false;
        for i in 0..4 {
            let mut x = i;
            let mut ord = 1;
            while x != g.identity {
                x = g.table[x][i];
                ord += 1;
            }
            if ord == 4 {
                found_order_4 = true;
            }
        }
        assert!(found_order_4);
    }
}
