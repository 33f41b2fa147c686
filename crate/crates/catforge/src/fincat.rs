//! Finite categories, functors, and natural transformations as lookup tables.
//!
//! A [`FinCategory`] stores objects, morphisms, the identity assignment and
//! the full composition table. All axioms are checked by exhaustive
//! enumeration; `compose(g, f)` means "g after f" throughout.

use crate::error::{Error, Result};
use crate::ids::{MorId, ObjId};
use crate::report::ValidationReport;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Hard cap for [`nerve_count`]: chain counts grow like |mor|^k.
pub const NERVE_CAP: usize = 16;

/// A morphism record: identifier plus (co)domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MorRecord {
    pub id: MorId,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// An explicit finite category.
///
/// Invariants certified by [`validate_category`]:
/// - `identity(o)` is an endomorphism of `o` for every object,
/// - composition is defined exactly on composable pairs,
/// - unit laws and associativity hold on all instances.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinCategory {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorRecord>,
    pub identity: BTreeMap<ObjId, MorId>,
    /// `(g, f) -> g∘f`, defined when `cod(f) = dom(g)`.
    pub compose: BTreeMap<(MorId, MorId), MorId>,
}

impl FinCategory {
    pub fn new() -> Self {
        FinCategory::default()
    }

    pub fn has_object(&self, o: &ObjId) -> bool {
        self.objects.contains(o)
    }

    pub fn morphism(&self, m: &MorId) -> Result<&MorRecord> {
        self.morphisms
            .iter()
            .find(|r| &r.id == m)
            .ok_or_else(|| Error::UnknownMorphism(m.clone()))
    }

    pub fn dom(&self, m: &MorId) -> Result<ObjId> {
        Ok(self.morphism(m)?.dom.clone())
    }

    pub fn cod(&self, m: &MorId) -> Result<ObjId> {
        Ok(self.morphism(m)?.cod.clone())
    }

    pub fn identity_of(&self, o: &ObjId) -> Result<MorId> {
        self.identity
            .get(o)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("identity of `{o}`")))
    }

    /// `g ∘ f` ("g after f"). Errors when the pair is not composable or the
    /// table has no entry for it.
    pub fn compose2(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        let fr = self.morphism(f)?;
        let gr = self.morphism(g)?;
        if fr.cod != gr.dom {
            return Err(Error::NotComposable {
                second: g.clone(),
                first: f.clone(),
            });
        }
        self.compose
            .get(&(g.clone(), f.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("compose({g}, {f})")))
    }

    /// All morphisms with the given domain and codomain.
    pub fn hom(&self, dom: &ObjId, cod: &ObjId) -> Vec<MorId> {
        self.morphisms
            .iter()
            .filter(|r| &r.dom == dom && &r.cod == cod)
            .map(|r| r.id.clone())
            .collect()
    }

    /// Is `m` invertible? Returns its inverse when it exists.
    pub fn inverse(&self, m: &MorId) -> Option<MorId> {
        let r = self.morphism(m).ok()?;
        let id_dom = self.identity.get(&r.dom)?;
        let id_cod = self.identity.get(&r.cod)?;
        self.hom(&r.cod, &r.dom).into_iter().find(|w| {
            self.compose.get(&(w.clone(), m.clone())) == Some(id_dom)
                && self.compose.get(&(m.clone(), w.clone())) == Some(id_cod)
        })
    }

    /// Every morphism invertible?
    pub fn is_groupoid(&self) -> bool {
        self.morphisms.iter().all(|r| self.inverse(&r.id).is_some())
    }

    /// Structural well-formedness: every id resolves, ids are unique, the
    /// identity table is total. Distinct from axiom violations.
    pub fn check_structure(&self) -> Result<()> {
        let mut seen_obj = BTreeSet::new();
        for o in &self.objects {
            if !seen_obj.insert(o.clone()) {
                return Err(Error::DuplicateId(o.0.clone()));
            }
        }
        let mut seen_mor = BTreeSet::new();
        for r in &self.morphisms {
            if !seen_mor.insert(r.id.clone()) {
                return Err(Error::DuplicateId(r.id.0.clone()));
            }
            if !self.has_object(&r.dom) {
                return Err(Error::UnknownObject(r.dom.clone()));
            }
            if !self.has_object(&r.cod) {
                return Err(Error::UnknownObject(r.cod.clone()));
            }
        }
        for o in &self.objects {
            let m = self.identity_of(o)?;
            if !seen_mor.contains(&m) {
                return Err(Error::UnknownMorphism(m));
            }
        }
        for (o, _) in &self.identity {
            if !self.has_object(o) {
                return Err(Error::UnknownObject(o.clone()));
            }
        }
        for ((g, f), gf) in &self.compose {
            for m in [g, f, gf] {
                if !seen_mor.contains(m) {
                    return Err(Error::UnknownMorphism(m.clone()));
                }
            }
        }
        Ok(())
    }
}

/// A functor between finite categories, given by total lookup tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorData {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub object_map: BTreeMap<ObjId, ObjId>,
    pub morphism_map: BTreeMap<MorId, MorId>,
}

impl FunctorData {
    pub fn identity(cat: Arc<FinCategory>) -> Self {
        let object_map = cat.objects.iter().map(|o| (o.clone(), o.clone())).collect();
        let morphism_map = cat
            .morphisms
            .iter()
            .map(|r| (r.id.clone(), r.id.clone()))
            .collect();
        FunctorData {
            source: cat.clone(),
            target: cat,
            object_map,
            morphism_map,
        }
    }

    pub fn on_obj(&self, o: &ObjId) -> Result<ObjId> {
        self.object_map
            .get(o)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("object_map({o})")))
    }

    pub fn on_mor(&self, m: &MorId) -> Result<MorId> {
        self.morphism_map
            .get(m)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("morphism_map({m})")))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose_with(&self, other: &FunctorData) -> Result<FunctorData> {
        let mut object_map = BTreeMap::new();
        for (o, v) in &other.object_map {
            object_map.insert(o.clone(), self.on_obj(v)?);
        }
        let mut morphism_map = BTreeMap::new();
        for (m, v) in &other.morphism_map {
            morphism_map.insert(m.clone(), self.on_mor(v)?);
        }
        Ok(FunctorData {
            source: other.source.clone(),
            target: self.target.clone(),
            object_map,
            morphism_map,
        })
    }
}

/// A natural transformation between two parallel functors.
#[derive(Debug, Clone)]
pub struct NatTransData {
    pub source: FunctorData,
    pub target: FunctorData,
    /// Component at each source object, a morphism of the target category.
    pub components: BTreeMap<ObjId, MorId>,
}

/// Exhaustively check the category axioms. Structural problems (unresolved
/// ids) surface as `Err`; axiom violations are collected in the report.
pub fn validate_category(cat: &FinCategory) -> Result<ValidationReport> {
    cat.check_structure()?;
    let mut rep = ValidationReport::new("category");
    for c in ["identity-typing", "composability", "unit", "associativity"] {
        rep.ran(c);
    }

    for o in &cat.objects {
        let idm = cat.identity_of(o)?;
        let r = cat.morphism(&idm)?;
        if &r.dom != o || &r.cod != o {
            rep.push(
                "identity-typing",
                format!("identity({o}) = {idm} is not an endomorphism of {o}"),
            );
        }
    }

    // Composition defined exactly on composable pairs.
    for f in &cat.morphisms {
        for g in &cat.morphisms {
            let entry = cat.compose.get(&(g.id.clone(), f.id.clone()));
            let composable = f.cod == g.dom;
            match (composable, entry) {
                (true, None) => rep.push(
                    "composability",
                    format!("compose({}, {}) undefined on composable pair", g.id, f.id),
                ),
                (false, Some(_)) => rep.push(
                    "composability",
                    format!("compose({}, {}) defined on non-composable pair", g.id, f.id),
                ),
                (true, Some(gf)) => {
                    let r = cat.morphism(gf)?;
                    if r.dom != f.dom || r.cod != g.cod {
                        rep.push(
                            "composability",
                            format!("compose({}, {}) = {gf} has wrong (co)domain", g.id, f.id),
                        );
                    }
                }
                (false, None) => {}
            }
        }
    }

    // Unit laws.
    for f in &cat.morphisms {
        let id_cod = cat.identity_of(&f.cod)?;
        let id_dom = cat.identity_of(&f.dom)?;
        if let Some(lhs) = cat.compose.get(&(id_cod.clone(), f.id.clone())) {
            if lhs != &f.id {
                rep.push("unit", format!("compose({id_cod}, {}) = {lhs} != {}", f.id, f.id));
            }
        }
        if let Some(rhs) = cat.compose.get(&(f.id.clone(), id_dom.clone())) {
            if rhs != &f.id {
                rep.push("unit", format!("compose({}, {id_dom}) = {rhs} != {}", f.id, f.id));
            }
        }
    }

    // Associativity over all composable triples h∘(g∘f) = (h∘g)∘f.
    for f in &cat.morphisms {
        for g in &cat.morphisms {
            if f.cod != g.dom {
                continue;
            }
            for h in &cat.morphisms {
                if g.cod != h.dom {
                    continue;
                }
                let gf = cat.compose.get(&(g.id.clone(), f.id.clone()));
                let hg = cat.compose.get(&(h.id.clone(), g.id.clone()));
                if let (Some(gf), Some(hg)) = (gf, hg) {
                    let left = cat.compose.get(&(h.id.clone(), gf.clone()));
                    let right = cat.compose.get(&(hg.clone(), f.id.clone()));
                    if left.is_some() && right.is_some() && left != right {
                        rep.push(
                            "associativity",
                            format!(
                                "triple ({}, {}, {}): {} != {}",
                                h.id,
                                g.id,
                                f.id,
                                left.unwrap(),
                                right.unwrap()
                            ),
                        );
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Left fold of the composition table over a nonempty chain written in
/// composition order: `[f, g]` denotes `f∘g` and requires `cod(g) = dom(f)`.
pub fn compose_path(cat: &FinCategory, chain: &[MorId]) -> Result<MorId> {
    let mut iter = chain.iter();
    let mut acc = iter.next().ok_or(Error::EmptyChain)?.clone();
    for m in iter {
        acc = cat.compose2(&acc, m)?;
    }
    Ok(acc)
}

/// Check that a functor's tables preserve (co)domains, identities, and
/// composition.
pub fn validate_functor(f: &FunctorData) -> Result<ValidationReport> {
    f.source.check_structure()?;
    f.target.check_structure()?;
    let mut rep = ValidationReport::new("functor");
    for c in ["totality", "typing", "identities", "composition"] {
        rep.ran(c);
    }

    for o in &f.source.objects {
        match f.object_map.get(o) {
            None => rep.push("totality", format!("object_map undefined at {o}")),
            Some(v) if !f.target.has_object(v) => {
                rep.push("totality", format!("object_map({o}) = {v} unknown in target"))
            }
            _ => {}
        }
    }
    for r in &f.source.morphisms {
        let Some(v) = f.morphism_map.get(&r.id) else {
            rep.push("totality", format!("morphism_map undefined at {}", r.id));
            continue;
        };
        let Ok(vr) = f.target.morphism(v) else {
            rep.push("totality", format!("morphism_map({}) = {v} unknown in target", r.id));
            continue;
        };
        let (fd, fc) = (f.object_map.get(&r.dom), f.object_map.get(&r.cod));
        if fd.is_some() && fc.is_some() && (Some(&vr.dom) != fd || Some(&vr.cod) != fc) {
            rep.push(
                "typing",
                format!("{} : {}->{} maps to {v} with mismatched (co)domain", r.id, r.dom, r.cod),
            );
        }
    }
    if !rep.is_valid() {
        // Dangling tables make the law checks meaningless.
        return Ok(rep);
    }

    for o in &f.source.objects {
        let i = f.source.identity_of(o)?;
        let fi = f.on_mor(&i)?;
        let want = f.target.identity_of(&f.on_obj(o)?)?;
        if fi != want {
            rep.push("identities", format!("F(identity({o})) = {fi} != {want}"));
        }
    }
    for ((g, h), gh) in &f.source.compose {
        let fg = f.on_mor(g)?;
        let fh = f.on_mor(h)?;
        let lhs = f.on_mor(gh)?;
        match f.target.compose.get(&(fg.clone(), fh.clone())) {
            Some(rhs) if rhs == &lhs => {}
            Some(rhs) => rep.push(
                "composition",
                format!("F({g}∘{h}): F of composite {lhs} != composite of images {rhs}"),
            ),
            None => rep.push(
                "composition",
                format!("images of ({g}, {h}) are not composable in the target"),
            ),
        }
    }
    Ok(rep)
}

/// Check naturality squares of a transformation for every source morphism.
pub fn validate_natural(t: &NatTransData) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("natural transformation");
    for c in ["component-typing", "naturality"] {
        rep.ran(c);
    }
    let tgt = &t.source.target;
    for o in &t.source.source.objects {
        let Some(c) = t.components.get(o) else {
            rep.push("component-typing", format!("no component at {o}"));
            continue;
        };
        let r = tgt.morphism(c)?;
        if r.dom != t.source.on_obj(o)? || r.cod != t.target.on_obj(o)? {
            rep.push("component-typing", format!("component at {o} has wrong (co)domain"));
        }
    }
    if !rep.is_valid() {
        return Ok(rep);
    }
    for m in &t.source.source.morphisms {
        let cf = t.components.get(&m.dom).unwrap();
        let cg = t.components.get(&m.cod).unwrap();
        let lhs = tgt.compose2(cg, &t.source.on_mor(&m.id)?)?;
        let rhs = tgt.compose2(&t.target.on_mor(&m.id)?, cf)?;
        if lhs != rhs {
            rep.push("naturality", format!("square at {} fails: {lhs} != {rhs}", m.id));
        }
    }
    Ok(rep)
}

/// Reverse all arrows. An involution on the data: ids are kept, domains and
/// codomains swap, and `compose_op(g, f) = compose(f, g)`.
pub fn opposite(cat: &FinCategory) -> FinCategory {
    FinCategory {
        objects: cat.objects.clone(),
        morphisms: cat
            .morphisms
            .iter()
            .map(|r| MorRecord {
                id: r.id.clone(),
                dom: r.cod.clone(),
                cod: r.dom.clone(),
            })
            .collect(),
        identity: cat.identity.clone(),
        compose: cat
            .compose
            .iter()
            .map(|((g, f), gf)| ((f.clone(), g.clone()), gf.clone()))
            .collect(),
    }
}

/// Canonical id of a pair object/morphism in a product category.
pub fn pair_obj(a: &ObjId, b: &ObjId) -> ObjId {
    ObjId(format!("({},{})", a.0, b.0))
}

pub fn pair_mor(a: &MorId, b: &MorId) -> MorId {
    MorId(format!("({},{})", a.0, b.0))
}

/// Product category: pairs of objects/morphisms, componentwise composition.
pub fn product(c1: &FinCategory, c2: &FinCategory) -> FinCategory {
    let mut cat = FinCategory::new();
    for a in &c1.objects {
        for b in &c2.objects {
            cat.objects.push(pair_obj(a, b));
        }
    }
    for m in &c1.morphisms {
        for n in &c2.morphisms {
            cat.morphisms.push(MorRecord {
                id: pair_mor(&m.id, &n.id),
                dom: pair_obj(&m.dom, &n.dom),
                cod: pair_obj(&m.cod, &n.cod),
            });
        }
    }
    for a in &c1.objects {
        for b in &c2.objects {
            cat.identity.insert(
                pair_obj(a, b),
                pair_mor(&c1.identity[a], &c2.identity[b]),
            );
        }
    }
    for ((g1, f1), h1) in &c1.compose {
        for ((g2, f2), h2) in &c2.compose {
            cat.compose
                .insert((pair_mor(g1, g2), pair_mor(f1, f2)), pair_mor(h1, h2));
        }
    }
    cat
}

/// Partition of the objects into zig-zag connected components, computed by
/// graph traversal over the undirected morphism graph. Blocks and their
/// members are ordered deterministically.
pub fn pi0(cat: &FinCategory) -> Vec<Vec<ObjId>> {
    let mut neighbours: BTreeMap<&ObjId, Vec<&ObjId>> = BTreeMap::new();
    for o in &cat.objects {
        neighbours.entry(o).or_default();
    }
    for r in &cat.morphisms {
        neighbours.entry(&r.dom).or_default().push(&r.cod);
        neighbours.entry(&r.cod).or_default().push(&r.dom);
    }
    let mut seen: BTreeSet<&ObjId> = BTreeSet::new();
    let mut blocks = Vec::new();
    for o in &cat.objects {
        if seen.contains(o) {
            continue;
        }
        let mut block = Vec::new();
        let mut stack = vec![o];
        seen.insert(o);
        while let Some(x) = stack.pop() {
            block.push(x.clone());
            for y in &neighbours[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        block.sort();
        blocks.push(block);
    }
    blocks.sort();
    blocks
}

/// Number of length-`k` composable chains of morphisms (`k = 0` counts
/// objects, `k = 1` counts morphisms; identities included).
pub fn nerve_count(cat: &FinCategory, k: usize) -> Result<u64> {
    if k > NERVE_CAP {
        return Err(Error::NerveCapExceeded { k, cap: NERVE_CAP });
    }
    if k == 0 {
        return Ok(cat.objects.len() as u64);
    }
    // chains[m] = number of composable chains of the current length ending
    // with morphism m (chains are sequences m1,...,mk with cod(mi) = dom(mi+1)).
    let mut chains: BTreeMap<&MorId, u64> = cat.morphisms.iter().map(|r| (&r.id, 1u64)).collect();
    for _ in 1..k {
        let mut next: BTreeMap<&MorId, u64> = BTreeMap::new();
        for r in &cat.morphisms {
            let mut total = 0u64;
            for p in &cat.morphisms {
                if p.cod == r.dom {
                    total = total
                        .checked_add(chains[&p.id])
                        .ok_or_else(|| Error::Internal("nerve count overflow".into()))?;
                }
            }
            next.insert(&r.id, total);
        }
        chains = next;
    }
    let mut total = 0u64;
    for (_, n) in chains {
        total = total
            .checked_add(n)
            .ok_or_else(|| Error::Internal("nerve count overflow".into()))?;
    }
    Ok(total)
}

/// Builder for small hand-written categories.
pub struct CatBuilder {
    cat: FinCategory,
}

impl CatBuilder {
    pub fn new() -> Self {
        CatBuilder {
            cat: FinCategory::new(),
        }
    }

    /// Add an object together with its identity morphism `id_<name>`.
    pub fn object(mut self, o: &str) -> Self {
        let oid = ObjId::from(o);
        let idm = MorId(format!("id_{o}"));
        self.cat.objects.push(oid.clone());
        self.cat.morphisms.push(MorRecord {
            id: idm.clone(),
            dom: oid.clone(),
            cod: oid.clone(),
        });
        self.cat.identity.insert(oid, idm);
        self
    }

    pub fn morphism(mut self, id: &str, dom: &str, cod: &str) -> Self {
        self.cat.morphisms.push(MorRecord {
            id: MorId::from(id),
            dom: ObjId::from(dom),
            cod: ObjId::from(cod),
        });
        self
    }

    pub fn compose(mut self, g: &str, f: &str, gf: &str) -> Self {
        self.cat
            .compose
            .insert((MorId::from(g), MorId::from(f)), MorId::from(gf));
        self
    }

    /// Fill in every composite involving an identity, then return the table.
    pub fn close_identities(mut self) -> FinCategory {
        let morphisms = self.cat.morphisms.clone();
        for r in &morphisms {
            let idd = self.cat.identity[&r.dom].clone();
            let idc = self.cat.identity[&r.cod].clone();
            self.cat
                .compose
                .entry((r.id.clone(), idd))
                .or_insert_with(|| r.id.clone());
            self.cat
                .compose
                .entry((idc, r.id.clone()))
                .or_insert_with(|| r.id.clone());
        }
        self.cat
    }

    pub fn build(self) -> FinCategory {
        self.close_identities()
    }
}

impl Default for CatBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// The terminal category: one object, its identity, nothing else.
pub fn terminal(obj_name: &str) -> FinCategory {
    CatBuilder::new().object(obj_name).build()
}

/// One-object category on a finite monoid given by its table. Morphism ids
/// are the element names; `unit` is the identity.
pub fn monoid_category(
    obj_name: &str,
    elements: &[&str],
    unit: &str,
    table: &dyn Fn(&str, &str) -> String,
) -> FinCategory {
    let o = ObjId::from(obj_name);
    let mut cat = FinCategory::new();
    cat.objects.push(o.clone());
    for e in elements {
        cat.morphisms.push(MorRecord {
            id: MorId::from(*e),
            dom: o.clone(),
            cod: o.clone(),
        });
    }
    cat.identity.insert(o, MorId::from(unit));
    for g in elements {
        for f in elements {
            // compose(g, f) = "g after f": element product g·f.
            cat.compose
                .insert((MorId::from(*g), MorId::from(*f)), MorId(table(g, f)));
        }
    }
    cat
}

/// The one-object groupoid on Z/2 = {e, u}.
pub fn z2_category() -> FinCategory {
    monoid_category("*", &["e", "u"], "e", &|a, b| {
        if (a == "u") ^ (b == "u") {
            "u".to_string()
        } else {
            "e".to_string()
        }
    })
}

/// Discrete category: objects only, identities only.
pub fn discrete(objects: &[&str]) -> FinCategory {
    let mut b = CatBuilder::new();
    for o in objects {
        b = b.object(o);
    }
    b.build()
}

/// Disjoint union of two categories (ids assumed disjoint).
pub fn disjoint_union(c1: &FinCategory, c2: &FinCategory) -> FinCategory {
    let mut cat = c1.clone();
    cat.objects.extend(c2.objects.iter().cloned());
    cat.morphisms.extend(c2.morphisms.iter().cloned());
    cat.identity
        .extend(c2.identity.iter().map(|(k, v)| (k.clone(), v.clone())));
    cat.compose
        .extend(c2.compose.iter().map(|(k, v)| (k.clone(), v.clone())));
    cat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::mor;

    /// Independent brute-force re-check used as an oracle against
    /// `validate_category`: literally re-test every axiom instance.
    pub fn brute_force_is_category(cat: &FinCategory) -> bool {
        if cat.check_structure().is_err() {
            return false;
        }
        for o in &cat.objects {
            let r = cat.morphism(&cat.identity[o]).unwrap();
            if &r.dom != o || &r.cod != o {
                return false;
            }
        }
        for f in &cat.morphisms {
            for g in &cat.morphisms {
                let e = cat.compose.get(&(g.id.clone(), f.id.clone()));
                if (f.cod == g.dom) != e.is_some() {
                    return false;
                }
                if let Some(gf) = e {
                    let r = cat.morphism(gf).unwrap();
                    if r.dom != f.dom || r.cod != g.cod {
                        return false;
                    }
                }
            }
        }
        for f in &cat.morphisms {
            let lhs = cat.compose.get(&(cat.identity[&f.cod].clone(), f.id.clone()));
            let rhs = cat.compose.get(&(f.id.clone(), cat.identity[&f.dom].clone()));
            if lhs != Some(&f.id) || rhs != Some(&f.id) {
                return false;
            }
        }
        for f in &cat.morphisms {
            for g in &cat.morphisms {
                for h in &cat.morphisms {
                    if f.cod == g.dom && g.cod == h.dom {
                        let gf = &cat.compose[&(g.id.clone(), f.id.clone())];
                        let hg = &cat.compose[&(h.id.clone(), g.id.clone())];
                        if cat.compose[&(h.id.clone(), gf.clone())]
                            != cat.compose[&(hg.clone(), f.id.clone())]
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn terminal_is_valid() {
        let t = terminal("*");
        assert!(validate_category(&t).unwrap().is_valid());
    }

    #[test]
    fn z2_is_valid_by_brute_force() {
        let z2 = z2_category();
        let rep = validate_category(&z2).unwrap();
        assert!(rep.is_valid(), "{rep}");
        assert!(brute_force_is_category(&z2));
    }

    #[test]
    fn redirecting_u_u_to_u_yields_the_or_monoid_still_valid() {
        // {e,u} with u∘u = u is the boolean or-monoid, a perfectly good
        // one-object category; only the group structure is lost.
        let mut z2 = z2_category();
        z2.compose.insert((mor("u"), mor("u")), mor("u"));
        assert!(validate_category(&z2).unwrap().is_valid());
        assert!(brute_force_is_category(&z2));
    }

    #[test]
    fn mutated_composite_breaks_unit_and_associativity_jointly() {
        let mut z2 = z2_category();
        z2.compose.insert((mor("e"), mor("u")), mor("e"));
        let rep = validate_category(&z2).unwrap();
        assert!(!rep.is_valid());
        assert!(rep.failed("unit"), "{rep}");
        assert!(rep.failed("associativity"), "{rep}");
        assert!(!brute_force_is_category(&z2));
    }

    #[test]
    fn unresolved_id_is_structural_not_axiomatic() {
        let mut z2 = z2_category();
        z2.compose.insert((mor("u"), mor("u")), mor("ghost"));
        assert!(matches!(
            validate_category(&z2),
            Err(Error::UnknownMorphism(_))
        ));
    }

    #[test]
    fn compose_path_examples() {
        let z2 = z2_category();
        assert_eq!(compose_path(&z2, &[mor("e")]).unwrap(), mor("e"));
        // In the group Z/2, u∘u = e.
        assert_eq!(compose_path(&z2, &[mor("u"), mor("u")]).unwrap(), mor("e"));
        assert_eq!(
            compose_path(&z2, &[mor("u"), mor("u"), mor("u")]).unwrap(),
            mor("u")
        );
        assert!(matches!(compose_path(&z2, &[]), Err(Error::EmptyChain)));
    }

    #[test]
    fn compose_path_rejects_noncomposable() {
        let arrow = CatBuilder::new()
            .object("a")
            .object("b")
            .morphism("u", "a", "b")
            .build();
        assert!(matches!(
            compose_path(&arrow, &[mor("u"), mor("u")]),
            Err(Error::NotComposable { .. })
        ));
    }

    #[test]
    fn functor_validation_classifies_z2_endomaps() {
        let z2 = Arc::new(z2_category());
        // Enumerate the two candidate endomaps fixing the object: u ↦ e and
        // u ↦ u (e must go to e for identity preservation).
        let mk = |u_to: &str| FunctorData {
            source: z2.clone(),
            target: z2.clone(),
            object_map: [(ObjId::from("*"), ObjId::from("*"))].into(),
            morphism_map: [(mor("e"), mor("e")), (mor("u"), MorId::from(u_to))].into(),
        };
        assert!(validate_functor(&mk("e")).unwrap().is_valid());
        assert!(validate_functor(&mk("u")).unwrap().is_valid());
        // Swapping e and u breaks identity preservation.
        let swap = FunctorData {
            morphism_map: [(mor("e"), mor("u")), (mor("u"), mor("e"))].into(),
            ..mk("e")
        };
        let rep = validate_functor(&swap).unwrap();
        assert!(rep.failed("identities"));
    }

    #[test]
    fn identity_and_constant_functors_are_valid() {
        let z2 = Arc::new(z2_category());
        assert!(validate_functor(&FunctorData::identity(z2.clone()))
            .unwrap()
            .is_valid());
        let t = Arc::new(terminal("1"));
        let constant = FunctorData {
            source: z2.clone(),
            target: t.clone(),
            object_map: [(ObjId::from("*"), ObjId::from("1"))].into(),
            morphism_map: [(mor("e"), mor("id_1")), (mor("u"), mor("id_1"))].into(),
        };
        assert!(validate_functor(&constant).unwrap().is_valid());
    }

    #[test]
    fn natural_transformation_on_z2() {
        let z2 = Arc::new(z2_category());
        let idf = FunctorData::identity(z2.clone());
        // Component u at the object between the identity functor and itself:
        // valid because u is central (u∘f = f∘u for all f).
        let t = NatTransData {
            source: idf.clone(),
            target: idf.clone(),
            components: [(ObjId::from("*"), mor("u"))].into(),
        };
        assert!(validate_natural(&t).unwrap().is_valid());
        let id_comp = NatTransData {
            source: idf.clone(),
            target: idf,
            components: [(ObjId::from("*"), mor("e"))].into(),
        };
        assert!(validate_natural(&id_comp).unwrap().is_valid());
    }

    #[test]
    fn opposite_is_involutive_and_valid() {
        let z2 = z2_category();
        let op = opposite(&z2);
        assert!(validate_category(&op).unwrap().is_valid());
        assert_eq!(opposite(&op), z2);
        // Z/2 is abelian, so the opposite has the same table.
        assert_eq!(op, z2);
        let arrow = CatBuilder::new()
            .object("a")
            .object("b")
            .morphism("u", "a", "b")
            .build();
        let op = opposite(&arrow);
        assert_eq!(op.morphism(&mor("u")).unwrap().dom, ObjId::from("b"));
        assert_eq!(opposite(&op), arrow);
    }

    #[test]
    fn product_of_z2_with_z2_is_klein_four() {
        let z2 = z2_category();
        let p = product(&z2, &z2);
        assert_eq!(p.objects.len(), 1);
        assert_eq!(p.morphisms.len(), 4);
        let rep = validate_category(&p).unwrap();
        assert!(rep.is_valid(), "{rep}");
        // Brute-force the Klein four-group law: every element squares to id.
        for m in &p.morphisms {
            assert_eq!(
                p.compose[&(m.id.clone(), m.id.clone())],
                p.identity[&m.dom],
                "element {} does not square to the identity",
                m.id
            );
        }
        assert!(brute_force_is_category(&p));
    }

    #[test]
    fn product_with_terminal_is_isomorphic_to_factor() {
        let z2 = z2_category();
        let t = terminal("1");
        let p = product(&z2, &t);
        assert_eq!(p.objects.len(), z2.objects.len());
        assert_eq!(p.morphisms.len(), z2.morphisms.len());
        assert!(validate_category(&p).unwrap().is_valid());
    }

    #[test]
    fn pi0_blocks() {
        assert_eq!(pi0(&discrete(&["a", "b", "c"])).len(), 3);
        assert_eq!(pi0(&z2_category()).len(), 1);
        let arrow = CatBuilder::new()
            .object("a")
            .object("b")
            .morphism("u", "a", "b")
            .build();
        let two = disjoint_union(&arrow, &terminal("t"));
        assert_eq!(pi0(&two).len(), 2);
    }

    /// Union-find oracle for pi0.
    #[test]
    fn pi0_agrees_with_union_find_oracle() {
        struct Uf(Vec<usize>);
        impl Uf {
            fn find(&mut self, x: usize) -> usize {
                if self.0[x] != x {
                    let r = self.find(self.0[x]);
                    self.0[x] = r;
                }
                self.0[x]
            }
            fn union(&mut self, a: usize, b: usize) {
                let (ra, rb) = (self.find(a), self.find(b));
                self.0[ra] = rb;
            }
        }
        let cats = [
            z2_category(),
            discrete(&["a", "b", "c"]),
            disjoint_union(
                &CatBuilder::new()
                    .object("a")
                    .object("b")
                    .morphism("u", "a", "b")
                    .build(),
                &terminal("t"),
            ),
        ];
        for cat in &cats {
            let index: BTreeMap<&ObjId, usize> =
                cat.objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
            let mut uf = Uf((0..cat.objects.len()).collect());
            for r in &cat.morphisms {
                uf.union(index[&r.dom], index[&r.cod]);
            }
            let mut blocks: BTreeMap<usize, BTreeSet<&ObjId>> = BTreeMap::new();
            for o in &cat.objects {
                blocks.entry(uf.find(index[o])).or_default().insert(o);
            }
            let mut oracle: Vec<Vec<ObjId>> = blocks
                .values()
                .map(|s| s.iter().map(|o| (*o).clone()).collect())
                .collect();
            oracle.sort();
            assert_eq!(pi0(cat), oracle);
        }
    }

    #[test]
    fn nerve_counts() {
        let t = terminal("*");
        assert_eq!(nerve_count(&t, 0).unwrap(), 1);
        assert_eq!(nerve_count(&t, 2).unwrap(), 1);
        let d3 = discrete(&["a", "b", "c"]);
        assert_eq!(nerve_count(&d3, 1).unwrap(), 3);
        let z2 = z2_category();
        assert_eq!(nerve_count(&z2, 0).unwrap(), 1);
        assert_eq!(nerve_count(&z2, 1).unwrap(), 2);
        // All 2x2 morphism pairs are composable over the single object.
        assert_eq!(nerve_count(&z2, 2).unwrap(), 4);
        assert!(matches!(
            nerve_count(&z2, NERVE_CAP + 1),
            Err(Error::NerveCapExceeded { .. })
        ));
    }
}
