//! Fibered categories: cartesian arrows, fibration checking, chosen
//! pullbacks, fibers, and both directions of the correspondence between
//! fibered categories and Cat-valued contravariant functors.

use crate::error::{Error, Result};
use crate::fincat::{self, FinCategory, FunctorData, MorRecord};
use crate::ids::{MorId, ObjId};
use crate::report::ValidationReport;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A functor `Λ : total → base` treated as a (candidate) fibration.
#[derive(Debug, Clone)]
pub struct FiberedFunctor {
    pub total: Arc<FinCategory>,
    pub base: Arc<FinCategory>,
    pub projection: FunctorData,
}

impl FiberedFunctor {
    pub fn new(total: Arc<FinCategory>, base: Arc<FinCategory>, projection: FunctorData) -> Self {
        FiberedFunctor {
            total,
            base,
            projection,
        }
    }

    pub fn proj_obj(&self, d: &ObjId) -> Result<ObjId> {
        self.projection.on_obj(d)
    }

    pub fn proj_mor(&self, g: &MorId) -> Result<MorId> {
        self.projection.on_mor(g)
    }

    /// Objects of the total category lying over `c`.
    pub fn objects_over(&self, c: &ObjId) -> Vec<ObjId> {
        self.total
            .objects
            .iter()
            .filter(|d| self.projection.object_map.get(*d) == Some(c))
            .cloned()
            .collect()
    }

    /// Morphisms of the total category lying over `f`.
    pub fn morphisms_over(&self, f: &MorId) -> Vec<MorId> {
        self.total
            .morphisms
            .iter()
            .filter(|r| self.projection.morphism_map.get(&r.id) == Some(f))
            .map(|r| r.id.clone())
            .collect()
    }

    /// The identity fibration on a category.
    pub fn identity(cat: Arc<FinCategory>) -> Self {
        FiberedFunctor {
            total: cat.clone(),
            base: cat.clone(),
            projection: FunctorData::identity(cat),
        }
    }
}

/// Witness of a cartesianness failure: a test morphism and base
/// factorization admitting zero or several lifts.
#[derive(Debug, Clone)]
pub struct CartesianFailure {
    pub test_morphism: MorId,
    pub base_factorization: MorId,
    pub lift_count: usize,
}

/// Is `g` a cartesian arrow? For every `g' : d'' → d'` and every base
/// factorization `f̃` with `f∘f̃ = Λ(g')` there must be exactly one lift
/// `g̃ : d'' → d` over `f̃` with `g∘g̃ = g'`.
pub fn is_cartesian(lam: &FiberedFunctor, g: &MorId) -> Result<(bool, Option<CartesianFailure>)> {
    let gr = lam.total.morphism(g)?;
    let f = lam.proj_mor(g)?;
    let f_rec = lam.base.morphism(&f)?;
    for gp in &lam.total.morphisms {
        if gp.cod != gr.cod {
            continue;
        }
        let fp = lam.proj_mor(&gp.id)?;
        let fp_rec = lam.base.morphism(&fp)?;
        // Candidate base factorizations f̃ : Λ(d'') → Λ(d) with f∘f̃ = Λ(g').
        for ft in lam.base.hom(&fp_rec.dom, &f_rec.dom) {
            if lam.base.compose2(&f, &ft)? != fp {
                continue;
            }
            let mut lifts = 0usize;
            for cand in lam.total.hom(&gp.dom, &gr.dom) {
                if lam.proj_mor(&cand)? == ft && lam.total.compose2(g, &cand)? == gp.id {
                    lifts += 1;
                }
            }
            if lifts != 1 {
                return Ok((
                    false,
                    Some(CartesianFailure {
                        test_morphism: gp.id.clone(),
                        base_factorization: ft,
                        lift_count: lifts,
                    }),
                ));
            }
        }
    }
    Ok((true, None))
}

/// Certify the fibration property: every pair (base morphism `f : c → c'`,
/// object `d'` over `c'`) must admit a cartesian lift.
pub fn validate_fibered(lam: &FiberedFunctor) -> Result<ValidationReport> {
    let frep = fincat::validate_functor(&lam.projection)?;
    let mut rep = ValidationReport::new("fibered functor");
    if !frep.is_valid() {
        rep.absorb("projection:", frep);
        return Ok(rep);
    }
    rep.ran("cartesian-lifts");
    for f in &lam.base.morphisms {
        for dp in lam.objects_over(&f.cod) {
            let found = lam
                .morphisms_over(&f.id)
                .into_iter()
                .filter(|g| lam.total.cod(g).map(|c| c == dp).unwrap_or(false))
                .any(|g| matches!(is_cartesian(lam, &g), Ok((true, _))));
            if !found {
                rep.push(
                    "cartesian-lifts",
                    format!("no cartesian lift of {} at object {dp}", f.id),
                );
            }
        }
    }
    Ok(rep)
}

/// A deterministic choice of pullbacks: for each `(f, d')` the chosen
/// cartesian lift `η : f*d' → d'` over `f`.
#[derive(Debug, Clone)]
pub struct PullbackChoice {
    pub fibered: FiberedFunctor,
    /// `(f, d') → (f*d', η_{d'})`.
    pub table: BTreeMap<(MorId, ObjId), (ObjId, MorId)>,
}

impl PullbackChoice {
    pub fn pull_obj(&self, f: &MorId, dp: &ObjId) -> Result<ObjId> {
        self.table
            .get(&(f.clone(), dp.clone()))
            .map(|(o, _)| o.clone())
            .ok_or_else(|| Error::MissingEntry(format!("pullback({f}, {dp})")))
    }

    pub fn eta(&self, f: &MorId, dp: &ObjId) -> Result<MorId> {
        self.table
            .get(&(f.clone(), dp.clone()))
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::MissingEntry(format!("pullback({f}, {dp})")))
    }

    /// The unique fill-in: for `u : e → d'` over `f̃` with `f∘f̃ = Λ(u)`,
    /// the morphism `e → f*d'` over `f̃'`... in the common case `u` over
    /// `f∘f̃`, the unique `w` over `f̃` with `η∘w = u`.
    pub fn fill_in(&self, f: &MorId, dp: &ObjId, u: &MorId, ft: &MorId) -> Result<MorId> {
        let lam = &self.fibered;
        let (pobj, eta) = self
            .table
            .get(&(f.clone(), dp.clone()))
            .ok_or_else(|| Error::MissingEntry(format!("pullback({f}, {dp})")))?;
        let u_dom = lam.total.dom(u)?;
        let mut found = Vec::new();
        for cand in lam.total.hom(&u_dom, pobj) {
            if lam.proj_mor(&cand)? == *ft && lam.total.compose2(eta, &cand)? == *u {
                found.push(cand);
            }
        }
        match found.len() {
            1 => Ok(found.pop().unwrap()),
            n => Err(Error::Internal(format!(
                "fill-in against cartesian {eta} not unique ({n} candidates)"
            ))),
        }
    }
}

/// Choose pullbacks deterministically: identities for identity base
/// morphisms when available, otherwise the lexicographically least
/// cartesian lift.
pub fn choose_pullbacks(lam: &FiberedFunctor) -> Result<PullbackChoice> {
    let rep = validate_fibered(lam)?;
    if !rep.is_valid() {
        return Err(Error::Precondition(format!(
            "not a fibered category: {rep}"
        )));
    }
    let mut table = BTreeMap::new();
    for f in &lam.base.morphisms {
        let is_id = lam.base.identity_of(&f.dom)? == f.id;
        for dp in lam.objects_over(&f.cod) {
            let id_dp = lam.total.identity_of(&dp)?;
            let mut chosen: Option<MorId> = None;
            if is_id && lam.proj_mor(&id_dp)? == f.id {
                chosen = Some(id_dp);
            }
            if chosen.is_none() {
                let mut candidates: Vec<MorId> = lam
                    .morphisms_over(&f.id)
                    .into_iter()
                    .filter(|g| lam.total.cod(g).map(|c| c == dp).unwrap_or(false))
                    .filter(|g| matches!(is_cartesian(lam, g), Ok((true, _))))
                    .collect();
                candidates.sort();
                chosen = candidates.into_iter().next();
            }
            let eta = chosen.ok_or_else(|| {
                Error::Internal(format!("no cartesian lift of {} at {dp}", f.id))
            })?;
            let pobj = lam.total.dom(&eta)?;
            table.insert((f.id.clone(), dp.clone()), (pobj, eta));
        }
    }
    Ok(PullbackChoice {
        fibered: lam.clone(),
        table,
    })
}

/// The fiber over `c`: objects over `c`, morphisms over `id_c`.
pub fn fiber(lam: &FiberedFunctor, c: &ObjId) -> Result<FinCategory> {
    if !lam.base.has_object(c) {
        return Err(Error::UnknownObject(c.clone()));
    }
    let idc = lam.base.identity_of(c)?;
    let objects = lam.objects_over(c);
    let mors = lam.morphisms_over(&idc);
    let morphisms: Vec<MorRecord> = lam
        .total
        .morphisms
        .iter()
        .filter(|r| mors.contains(&r.id))
        .cloned()
        .collect();
    let identity = objects
        .iter()
        .map(|o| Ok((o.clone(), lam.total.identity_of(o)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let compose = lam
        .total
        .compose
        .iter()
        .filter(|((g, f), h)| mors.contains(g) && mors.contains(f) && mors.contains(h))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    Ok(FinCategory {
        objects,
        morphisms,
        identity,
        compose,
    })
}

/// The functor `f* : fiber(cod f) → fiber(dom f)` induced by a pullback
/// choice; the morphism part is the unique fill-in.
pub fn pullback_functor(choice: &PullbackChoice, f: &MorId) -> Result<FunctorData> {
    let lam = &choice.fibered;
    let f_rec = lam.base.morphism(f)?;
    let source = Arc::new(fiber(lam, &f_rec.cod)?);
    let target = Arc::new(fiber(lam, &f_rec.dom)?);
    let mut object_map = BTreeMap::new();
    let mut morphism_map = BTreeMap::new();
    let id_dom = lam.base.identity_of(&f_rec.dom)?;
    for dp in &source.objects {
        object_map.insert(dp.clone(), choice.pull_obj(f, dp)?);
    }
    for alpha in &source.morphisms {
        // f*α is the unique morphism over id_{dom f} with
        // η_{cod α} ∘ f*α = α ∘ η_{dom α}.
        let u = lam
            .total
            .compose2(&alpha.id, &choice.eta(f, &alpha.dom)?)?;
        let fill = choice.fill_in(f, &alpha.cod, &u, &id_dom)?;
        morphism_map.insert(alpha.id.clone(), fill);
    }
    Ok(FunctorData {
        source,
        target,
        object_map,
        morphism_map,
    })
}

/// The canonical comparison `f*(g*d'') → (g∘f)*d''` obtained by the unique
/// fill-in against the cartesian lift of `g∘f`. For a fibration this is an
/// isomorphism for every composable pair.
pub fn composite_comparison(
    choice: &PullbackChoice,
    f: &MorId,
    g: &MorId,
    dpp: &ObjId,
) -> Result<MorId> {
    let lam = &choice.fibered;
    let gf = lam.base.compose2(g, f)?;
    let g_pull = choice.pull_obj(g, dpp)?;
    // η_g ∘ η_f : f*(g*d'') → d'' lies over g∘f.
    let u = lam
        .total
        .compose2(&choice.eta(g, dpp)?, &choice.eta(f, &g_pull)?)?;
    let id_dom = lam.base.identity_of(&lam.base.dom(f)?)?;
    choice.fill_in(&gf, dpp, &u, &id_dom)
}

/// A contravariant Cat-valued functor presented by tables: a fiber category
/// per base object and a transition functor `P(f) : P(cod f) → P(dom f)`
/// per base morphism.
#[derive(Debug, Clone)]
pub struct Pseudofunctor {
    pub base: Arc<FinCategory>,
    pub fibers: BTreeMap<ObjId, Arc<FinCategory>>,
    pub transitions: BTreeMap<MorId, FunctorData>,
}

impl Pseudofunctor {
    pub fn fiber_at(&self, c: &ObjId) -> Result<&Arc<FinCategory>> {
        self.fibers
            .get(c)
            .ok_or_else(|| Error::MissingEntry(format!("fiber at {c}")))
    }

    pub fn transition(&self, f: &MorId) -> Result<&FunctorData> {
        self.transitions
            .get(f)
            .ok_or_else(|| Error::MissingEntry(format!("transition at {f}")))
    }

    /// Check strict functoriality: `P(id) = id` and `P(g∘f) = P(f)∘P(g)`.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut rep = ValidationReport::new("pseudofunctor");
        for c in ["fibers", "transitions", "strict-identity", "strict-composition"] {
            rep.ran(c);
        }
        for c in &self.base.objects {
            match self.fibers.get(c) {
                None => rep.push("fibers", format!("no fiber at {c}")),
                Some(f) => {
                    let r = fincat::validate_category(f)?;
                    if !r.is_valid() {
                        rep.push("fibers", format!("fiber at {c} invalid: {r}"));
                    }
                }
            }
        }
        for m in &self.base.morphisms {
            match self.transitions.get(&m.id) {
                None => rep.push("transitions", format!("no transition at {}", m.id)),
                Some(t) => {
                    let r = fincat::validate_functor(t)?;
                    if !r.is_valid() {
                        rep.push("transitions", format!("transition at {} invalid: {r}", m.id));
                    }
                }
            }
        }
        if !rep.is_valid() {
            return Ok(rep);
        }
        for c in &self.base.objects {
            let idc = self.base.identity_of(c)?;
            let t = self.transition(&idc)?;
            let id_f = FunctorData::identity(self.fiber_at(c)?.clone());
            if t.object_map != id_f.object_map || t.morphism_map != id_f.morphism_map {
                rep.push("strict-identity", format!("P(id_{c}) is not the identity"));
            }
        }
        for ((g, f), gf) in &self.base.compose {
            // Contravariance: P(g∘f) = P(f)∘P(g).
            let lhs = self.transition(gf)?;
            let rhs = self.transition(f)?.compose_with(self.transition(g)?)?;
            if lhs.object_map != rhs.object_map || lhs.morphism_map != rhs.morphism_map {
                rep.push("strict-composition", format!("P({g}∘{f}) != P({f})∘P({g})"));
            }
        }
        Ok(rep)
    }
}

/// Canonical ids in a Grothendieck total category.
fn gr_obj(x: &ObjId, c: &ObjId) -> ObjId {
    ObjId(format!("<{}|{}>", x.0, c.0))
}

fn gr_mor(alpha: &MorId, f: &MorId) -> MorId {
    MorId(format!("<{}|{}>", alpha.0, f.0))
}

/// The Grothendieck construction: total category with objects `(x, c)` and
/// morphisms `(α, f) : (x,c) → (y,d)` where `α : x → P(f)(y)`, with
/// composition `(β,g)∘(α,f) = (P(f)(β)∘α, g∘f)`.
pub fn grothendieck(p: &Pseudofunctor) -> Result<FiberedFunctor> {
    let prep = p.validate()?;
    if !prep.is_valid() {
        return Err(Error::Rejected(format!("not a functor to Cat: {prep}")));
    }
    let mut total = FinCategory::new();
    let mut proj_obj_map = BTreeMap::new();
    let mut proj_mor_map = BTreeMap::new();

    for c in &p.base.objects {
        for x in &p.fiber_at(c)?.objects {
            let o = gr_obj(x, c);
            total.objects.push(o.clone());
            proj_obj_map.insert(o, c.clone());
        }
    }
    // Morphisms (α, f) with α : x → P(f)(y) in P(dom f).
    for f in &p.base.morphisms {
        let pf = p.transition(&f.id)?;
        let dom_fiber = p.fiber_at(&f.dom)?;
        for y in &p.fiber_at(&f.cod)?.objects {
            let pfy = pf.on_obj(y)?;
            for x in &dom_fiber.objects {
                for alpha in dom_fiber.hom(x, &pfy) {
                    let m = gr_mor(&alpha, &f.id);
                    total.morphisms.push(MorRecord {
                        id: m.clone(),
                        dom: gr_obj(x, &f.dom),
                        cod: gr_obj(y, &f.cod),
                    });
                    proj_mor_map.insert(m, f.id.clone());
                }
            }
        }
    }
    for c in &p.base.objects {
        let idc = p.base.identity_of(c)?;
        for x in &p.fiber_at(c)?.objects {
            // P(id) = id, so (id_x, id_c) is the identity at (x, c).
            total.identity.insert(
                gr_obj(x, c),
                gr_mor(&p.fiber_at(c)?.identity_of(x)?, &idc),
            );
        }
    }
    // Composition table.
    let records = total.morphisms.clone();
    for first in &records {
        let (alpha, f) = split_gr(&first.id)?;
        let f_rec = p.base.morphism(&f)?;
        for second in &records {
            let (beta, g) = split_gr(&second.id)?;
            if second.dom != first.cod {
                continue;
            }
            let gf = p.base.compose2(&g, &f)?;
            let pf = p.transition(&f)?;
            let comp_alpha = p
                .fiber_at(&f_rec.dom)?
                .compose2(&pf.on_mor(&beta)?, &alpha)?;
            total.compose.insert(
                (second.id.clone(), first.id.clone()),
                gr_mor(&comp_alpha, &gf),
            );
        }
    }
    let total = Arc::new(total);
    let projection = FunctorData {
        source: total.clone(),
        target: p.base.clone(),
        object_map: proj_obj_map,
        morphism_map: proj_mor_map,
    };
    Ok(FiberedFunctor {
        total,
        base: p.base.clone(),
        projection,
    })
}

fn split_gr(m: &MorId) -> Result<(MorId, MorId)> {
    let s = m
        .0
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| Error::Internal(format!("not a Grothendieck morphism id: {m}")))?;
    let (a, f) = s
        .rsplit_once('|')
        .ok_or_else(|| Error::Internal(format!("not a Grothendieck morphism id: {m}")))?;
    Ok((MorId(a.to_string()), MorId(f.to_string())))
}

/// Search for an isomorphism of categories. Object bijections are pruned by
/// hom-set cardinality profiles; morphism bijections are searched per
/// hom-set with identity/composition checks at the end.
pub fn find_isomorphism(
    c1: &FinCategory,
    c2: &FinCategory,
) -> Option<(BTreeMap<ObjId, ObjId>, BTreeMap<MorId, MorId>)> {
    if c1.objects.len() != c2.objects.len() || c1.morphisms.len() != c2.morphisms.len() {
        return None;
    }
    let mut obj_map = BTreeMap::new();
    let mut used = vec![false; c2.objects.len()];
    search_obj(c1, c2, 0, &mut obj_map, &mut used)
}

fn search_obj(
    c1: &FinCategory,
    c2: &FinCategory,
    i: usize,
    obj_map: &mut BTreeMap<ObjId, ObjId>,
    used: &mut Vec<bool>,
) -> Option<(BTreeMap<ObjId, ObjId>, BTreeMap<MorId, MorId>)> {
    if i == c1.objects.len() {
        // Objects fixed; try to biject each hom-set.
        let mut mor_map: BTreeMap<MorId, MorId> = BTreeMap::new();
        if search_homsets(c1, c2, obj_map, &mut mor_map, 0, 0) {
            return Some((obj_map.clone(), mor_map));
        }
        return None;
    }
    let o = c1.objects[i].clone();
    for (j, t) in c2.objects.iter().enumerate() {
        if used[j] {
            continue;
        }
        // Prune: endomorphism count must match.
        if c1.hom(&o, &o).len() != c2.hom(t, t).len() {
            continue;
        }
        obj_map.insert(o.clone(), t.clone());
        used[j] = true;
        if let Some(found) = search_obj(c1, c2, i + 1, obj_map, used) {
            return Some(found);
        }
        used[j] = false;
        obj_map.remove(&o);
    }
    None
}

fn search_homsets(
    c1: &FinCategory,
    c2: &FinCategory,
    obj_map: &BTreeMap<ObjId, ObjId>,
    mor_map: &mut BTreeMap<MorId, MorId>,
    oi: usize,
    oj: usize,
) -> bool {
    let n = c1.objects.len();
    if oi == n {
        return functorial(c1, c2, obj_map, mor_map);
    }
    let (next_i, next_j) = if oj + 1 == n { (oi + 1, 0) } else { (oi, oj + 1) };
    let a = &c1.objects[oi];
    let b = &c1.objects[oj];
    let h1 = c1.hom(a, b);
    let h2 = c2.hom(&obj_map[a], &obj_map[b]);
    if h1.len() != h2.len() {
        return false;
    }
    // Try each bijection of this hom-set.
    fn permute(
        h1: &[MorId],
        h2: &[MorId],
        k: usize,
        taken: &mut Vec<bool>,
        mor_map: &mut BTreeMap<MorId, MorId>,
        c1: &FinCategory,
        c2: &FinCategory,
        obj_map: &BTreeMap<ObjId, ObjId>,
        next: (usize, usize),
    ) -> bool {
        if k == h1.len() {
            return search_homsets(c1, c2, obj_map, mor_map, next.0, next.1);
        }
        for (t, cand) in h2.iter().enumerate() {
            if taken[t] {
                continue;
            }
            taken[t] = true;
            mor_map.insert(h1[k].clone(), cand.clone());
            if permute(h1, h2, k + 1, taken, mor_map, c1, c2, obj_map, next) {
                return true;
            }
            mor_map.remove(&h1[k]);
            taken[t] = false;
        }
        false
    }
    let mut taken = vec![false; h2.len()];
    permute(&h1, &h2, 0, &mut taken, mor_map, c1, c2, obj_map, (next_i, next_j))
}

fn functorial(
    c1: &FinCategory,
    c2: &FinCategory,
    obj_map: &BTreeMap<ObjId, ObjId>,
    mor_map: &BTreeMap<MorId, MorId>,
) -> bool {
    for o in &c1.objects {
        if mor_map.get(&c1.identity[o]) != Some(&c2.identity[&obj_map[o]]) {
            return false;
        }
    }
    for ((g, f), gf) in &c1.compose {
        let (Some(g2), Some(f2), Some(gf2)) = (mor_map.get(g), mor_map.get(f), mor_map.get(gf))
        else {
            return false;
        };
        if c2.compose.get(&(g2.clone(), f2.clone())) != Some(gf2) {
            return false;
        }
    }
    true
}

/// Search for a natural isomorphism between two parallel functors.
pub fn find_natural_iso(f: &FunctorData, g: &FunctorData) -> Option<BTreeMap<ObjId, MorId>> {
    let cat = &f.target;
    let mut components: BTreeMap<ObjId, MorId> = BTreeMap::new();
    let objs: Vec<ObjId> = f.source.objects.clone();

    fn assign(
        idx: usize,
        objs: &[ObjId],
        f: &FunctorData,
        g: &FunctorData,
        cat: &FinCategory,
        components: &mut BTreeMap<ObjId, MorId>,
    ) -> bool {
        if idx == objs.len() {
            // All components chosen; check naturality on every morphism.
            for m in &f.source.morphisms {
                let (Ok(fm), Ok(gm)) = (f.on_mor(&m.id), g.on_mor(&m.id)) else {
                    return false;
                };
                let lhs = cat.compose2(&components[&m.cod], &fm);
                let rhs = cat.compose2(&gm, &components[&m.dom]);
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l == r => {}
                    _ => return false,
                }
            }
            return true;
        }
        let o = &objs[idx];
        let (Ok(fo), Ok(go)) = (f.on_obj(o), g.on_obj(o)) else {
            return false;
        };
        for cand in cat.hom(&fo, &go) {
            if cat.inverse(&cand).is_none() {
                continue;
            }
            components.insert(o.clone(), cand);
            if assign(idx + 1, objs, f, g, cat, components) {
                return true;
            }
            components.remove(o);
        }
        false
    }

    if assign(0, &objs, f, g, cat, &mut components) {
        Some(components)
    } else {
        None
    }
}

/// Round-trip check of the Grothendieck correspondence: build the total
/// category from `P`, choose pullbacks, and verify that each fiber is
/// isomorphic to `P(c)` and each `f*` naturally isomorphic to `P(f)` under
/// those isomorphisms.
pub fn roundtrip_check(p: &Pseudofunctor) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("grothendieck round trip");
    for c in ["fibration", "fiber-iso", "transition-iso"] {
        rep.ran(c);
    }
    let lam = grothendieck(p)?;
    let vrep = validate_fibered(&lam)?;
    if !vrep.is_valid() {
        rep.absorb("fibration:", vrep);
        return Ok(rep);
    }
    let choice = choose_pullbacks(&lam)?;

    let mut fiber_isos: BTreeMap<ObjId, (BTreeMap<ObjId, ObjId>, BTreeMap<MorId, MorId>)> =
        BTreeMap::new();
    for c in &p.base.objects {
        let fib = fiber(&lam, c)?;
        match find_isomorphism(&fib, p.fiber_at(c)?) {
            Some(iso) => {
                fiber_isos.insert(c.clone(), iso);
            }
            None => rep.push("fiber-iso", format!("fiber at {c} not isomorphic to P({c})")),
        }
    }
    if !rep.is_valid() {
        return Ok(rep);
    }

    for f in &p.base.morphisms {
        let fstar = pullback_functor(&choice, &f.id)?;
        // Transport f* along the fiber isomorphisms and compare with P(f)
        // up to natural isomorphism: search a natural iso between
        // iso_dom ∘ f* and P(f) ∘ iso_cod as functors fiber(cod f) → P(dom f).
        let (obj_iso_dom, mor_iso_dom) = &fiber_isos[&f.dom];
        let (obj_iso_cod, mor_iso_cod) = &fiber_isos[&f.cod];
        let pf = p.transition(&f.id)?;

        let h1 = FunctorData {
            source: fstar.source.clone(),
            target: p.fiber_at(&f.dom)?.clone(),
            object_map: fstar
                .object_map
                .iter()
                .map(|(k, v)| (k.clone(), obj_iso_dom[v].clone()))
                .collect(),
            morphism_map: fstar
                .morphism_map
                .iter()
                .map(|(k, v)| (k.clone(), mor_iso_dom[v].clone()))
                .collect(),
        };
        let h2 = FunctorData {
            source: fstar.source.clone(),
            target: p.fiber_at(&f.dom)?.clone(),
            object_map: fstar
                .source
                .objects
                .iter()
                .map(|o| (o.clone(), pf.object_map[&obj_iso_cod[o]].clone()))
                .collect(),
            morphism_map: fstar
                .source
                .morphisms
                .iter()
                .map(|r| (r.id.clone(), pf.morphism_map[&mor_iso_cod[&r.id]].clone()))
                .collect(),
        };
        if find_natural_iso(&h1, &h2).is_none() {
            rep.push(
                "transition-iso",
                format!("pullback along {} not naturally isomorphic to P({})", f.id, f.id),
            );
        }
    }
    Ok(rep)
}

/// The comma category `C/u` together with its projection `θ_u : C/u → C`.
/// Objects of `C/u` are the morphisms `f : v → u`; morphisms `φ : f → f'`
/// are base morphisms with `f'∘φ = f`.
pub fn comma_over(cat: &Arc<FinCategory>, u: &ObjId) -> Result<FiberedFunctor> {
    let mut total = FinCategory::new();
    let mut proj_obj = BTreeMap::new();
    let mut proj_mor = BTreeMap::new();
    let into_u: Vec<&MorRecord> = cat.morphisms.iter().filter(|r| &r.cod == u).collect();
    let slice_obj = |f: &MorId| ObjId(format!("[{}]", f.0));
    let slice_mor = |phi: &MorId, f: &MorId| MorId(format!("[{}:{}]", phi.0, f.0));

    for f in &into_u {
        let o = slice_obj(&f.id);
        total.objects.push(o.clone());
        proj_obj.insert(o, f.dom.clone());
    }
    for f in &into_u {
        for fp in &into_u {
            for phi in cat.hom(&f.dom, &fp.dom) {
                if cat.compose2(&fp.id, &phi)? == f.id {
                    let m = slice_mor(&phi, &f.id);
                    total.morphisms.push(MorRecord {
                        id: m.clone(),
                        dom: slice_obj(&f.id),
                        cod: slice_obj(&fp.id),
                    });
                    proj_mor.insert(m, phi.clone());
                }
            }
        }
    }
    for f in &into_u {
        total
            .identity
            .insert(slice_obj(&f.id), slice_mor(&cat.identity_of(&f.dom)?, &f.id));
    }
    let records = total.morphisms.clone();
    for m1 in &records {
        for m2 in &records {
            if m2.dom != m1.cod {
                continue;
            }
            let phi1 = &proj_mor[&m1.id];
            let phi2 = &proj_mor[&m2.id];
            let comp = cat.compose2(phi2, phi1)?;
            // The composite lives over the source object of m1.
            let src_f = m1.id.0[1..m1.id.0.len() - 1]
                .rsplit_once(':')
                .map(|(_, f)| MorId(f.to_string()))
                .ok_or_else(|| Error::Internal("bad slice morphism id".into()))?;
            total
                .compose
                .insert((m2.id.clone(), m1.id.clone()), slice_mor(&comp, &src_f));
        }
    }
    let total = Arc::new(total);
    let projection = FunctorData {
        source: total.clone(),
        target: cat.clone(),
        object_map: proj_obj,
        morphism_map: proj_mor,
    };
    Ok(FiberedFunctor {
        total,
        base: cat.clone(),
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{terminal, z2_category, CatBuilder};
    use crate::ids::{mor, obj};

    fn z2_over_terminal() -> FiberedFunctor {
        let total = Arc::new(z2_category());
        let base = Arc::new(terminal("1"));
        let projection = FunctorData {
            source: total.clone(),
            target: base.clone(),
            object_map: [(obj("*"), obj("1"))].into(),
            morphism_map: [(mor("e"), mor("id_1")), (mor("u"), mor("id_1"))].into(),
        };
        FiberedFunctor::new(total, base, projection)
    }

    #[test]
    fn identities_are_cartesian() {
        let lam = z2_over_terminal();
        let (ok, _) = is_cartesian(&lam, &mor("e")).unwrap();
        assert!(ok);
    }

    #[test]
    fn group_projection_morphisms_all_cartesian() {
        // Brute-force the unique-lift condition over all (g', f̃).
        let lam = z2_over_terminal();
        for m in ["e", "u"] {
            let (ok, w) = is_cartesian(&lam, &mor(m)).unwrap();
            assert!(ok, "witness: {w:?}");
        }
        assert!(validate_fibered(&lam).unwrap().is_valid());
    }

    #[test]
    fn arrow_over_terminal_u_is_not_cartesian() {
        // Arrow category a→b over the terminal base: u has no lift g̃: b→a
        // with u∘g̃ = id_b.
        let total = Arc::new(
            CatBuilder::new()
                .object("a")
                .object("b")
                .morphism("u", "a", "b")
                .build(),
        );
        let base = Arc::new(terminal("1"));
        let projection = FunctorData {
            source: total.clone(),
            target: base.clone(),
            object_map: [(obj("a"), obj("1")), (obj("b"), obj("1"))].into(),
            morphism_map: [
                (mor("id_a"), mor("id_1")),
                (mor("id_b"), mor("id_1")),
                (mor("u"), mor("id_1")),
            ]
            .into(),
        };
        let lam = FiberedFunctor::new(total, base, projection);
        let (ok, witness) = is_cartesian(&lam, &mor("u")).unwrap();
        assert!(!ok);
        let w = witness.unwrap();
        assert_eq!(w.lift_count, 0);
        assert_eq!(w.test_morphism, mor("id_b"));
    }

    #[test]
    fn identity_functor_is_fibered() {
        let lam = FiberedFunctor::identity(Arc::new(z2_category()));
        assert!(validate_fibered(&lam).unwrap().is_valid());
    }

    #[test]
    fn discrete_total_over_arrow_base_is_not_fibered() {
        // Total = discrete {x over a, y over b} over the arrow category:
        // the pair (u : a→b, y over b) has no lift at all.
        let total = Arc::new(crate::fincat::discrete(&["x", "y"]));
        let base = Arc::new(
            CatBuilder::new()
                .object("a")
                .object("b")
                .morphism("u", "a", "b")
                .build(),
        );
        let projection = FunctorData {
            source: total.clone(),
            target: base.clone(),
            object_map: [(obj("x"), obj("a")), (obj("y"), obj("b"))].into(),
            morphism_map: [(mor("id_x"), mor("id_a")), (mor("id_y"), mor("id_b"))].into(),
        };
        let lam = FiberedFunctor::new(total, base, projection);
        let rep = validate_fibered(&lam).unwrap();
        assert!(!rep.is_valid());
        assert!(rep.failed("cartesian-lifts"));
    }

    #[test]
    fn empty_fiber_over_codomain_is_vacuously_fibered() {
        // Both objects over a: nothing lies over b, so the lifting
        // condition is vacuous there and the functor is fibered.
        let total = Arc::new(crate::fincat::discrete(&["x", "y"]));
        let base = Arc::new(
            CatBuilder::new()
                .object("a")
                .object("b")
                .morphism("u", "a", "b")
                .build(),
        );
        let projection = FunctorData {
            source: total.clone(),
            target: base.clone(),
            object_map: [(obj("x"), obj("a")), (obj("y"), obj("a"))].into(),
            morphism_map: [(mor("id_x"), mor("id_a")), (mor("id_y"), mor("id_a"))].into(),
        };
        let lam = FiberedFunctor::new(total, base, projection);
        assert!(validate_fibered(&lam).unwrap().is_valid());
    }

    #[test]
    fn comma_category_over_groupoid_is_fibered() {
        let base = Arc::new(z2_category());
        let lam = comma_over(&base, &obj("*")).unwrap();
        assert!(crate::fincat::validate_category(&lam.total).unwrap().is_valid());
        let rep = validate_fibered(&lam).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn chosen_pullbacks_use_identities_and_are_deterministic() {
        let lam = z2_over_terminal();
        let c1 = choose_pullbacks(&lam).unwrap();
        let c2 = choose_pullbacks(&lam).unwrap();
        assert_eq!(c1.table, c2.table);
        assert_eq!(c1.eta(&mor("id_1"), &obj("*")).unwrap(), mor("e"));
    }

    #[test]
    fn pullback_functor_along_identity_is_identity() {
        let lam = z2_over_terminal();
        let choice = choose_pullbacks(&lam).unwrap();
        let f = pullback_functor(&choice, &mor("id_1")).unwrap();
        assert!(crate::fincat::validate_functor(&f).unwrap().is_valid());
        for (k, v) in &f.object_map {
            assert_eq!(k, v);
        }
        for (k, v) in &f.morphism_map {
            assert_eq!(k, v);
        }
    }

    #[test]
    fn fiber_of_identity_fibration_is_one_object() {
        let lam = FiberedFunctor::identity(Arc::new(z2_category()));
        let fib = fiber(&lam, &obj("*")).unwrap();
        assert_eq!(fib.objects.len(), 1);
        // Only the identity lies over id_*, so the fiber is terminal-like.
        assert_eq!(fib.morphisms.len(), 1);
        assert!(crate::fincat::validate_category(&fib).unwrap().is_valid());
        let whole = fiber(&z2_over_terminal(), &obj("1")).unwrap();
        assert_eq!(whole.morphisms.len(), 2);
    }

    /// The swap action of Z/2 on two points, as a pseudofunctor over the
    /// one-object group category.
    fn swap_action() -> Pseudofunctor {
        let base = Arc::new(z2_category());
        let pts = Arc::new(crate::fincat::discrete(&["p", "q"]));
        let idt = FunctorData::identity(pts.clone());
        let swap = FunctorData {
            source: pts.clone(),
            target: pts.clone(),
            object_map: [(obj("p"), obj("q")), (obj("q"), obj("p"))].into(),
            morphism_map: [(mor("id_p"), mor("id_q")), (mor("id_q"), mor("id_p"))].into(),
        };
        Pseudofunctor {
            base,
            fibers: [(obj("*"), pts)].into(),
            transitions: [(mor("e"), idt), (mor("u"), swap)].into(),
        }
    }

    #[test]
    fn grothendieck_of_swap_action_is_action_groupoid() {
        let p = swap_action();
        let lam = grothendieck(&p).unwrap();
        assert_eq!(lam.total.objects.len(), 2);
        // Pairs (α, f): α : x → P(f)(y); fibers are discrete so one α per
        // matching pair: e gives 2 morphisms, u gives 2.
        assert_eq!(lam.total.morphisms.len(), 4);
        assert!(crate::fincat::validate_category(&lam.total).unwrap().is_valid());
        assert!(validate_fibered(&lam).unwrap().is_valid());
        assert!(lam.total.is_groupoid());
    }

    #[test]
    fn grothendieck_morphisms_with_iso_component_are_cartesian() {
        let p = swap_action();
        let lam = grothendieck(&p).unwrap();
        for r in &lam.total.morphisms {
            // All fiber components here are identities (isos), so every
            // morphism must be cartesian.
            let (ok, w) = is_cartesian(&lam, &r.id).unwrap();
            assert!(ok, "{}: {w:?}", r.id);
        }
    }

    #[test]
    fn roundtrip_examples() {
        // Constant-terminal pseudofunctor over Z/2.
        let base = Arc::new(z2_category());
        let t = Arc::new(terminal("pt"));
        let idt = FunctorData::identity(t.clone());
        let constant = Pseudofunctor {
            base: base.clone(),
            fibers: [(obj("*"), t.clone())].into(),
            transitions: [(mor("e"), idt.clone()), (mor("u"), idt)].into(),
        };
        let rep = roundtrip_check(&constant).unwrap();
        assert!(rep.is_valid(), "{rep}");

        // Swap action.
        let rep = roundtrip_check(&swap_action()).unwrap();
        assert!(rep.is_valid(), "{rep}");

        // Z/2 category over the terminal base.
        let tbase = Arc::new(terminal("1"));
        let z2 = Arc::new(z2_category());
        let p = Pseudofunctor {
            base: tbase.clone(),
            fibers: [(obj("1"), z2.clone())].into(),
            transitions: [(mor("id_1"), FunctorData::identity(z2))].into(),
        };
        let rep = roundtrip_check(&p).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn base_terminal_total_isomorphic_to_single_fiber() {
        let tbase = Arc::new(terminal("1"));
        let z2 = Arc::new(z2_category());
        let p = Pseudofunctor {
            base: tbase,
            fibers: [(obj("1"), z2.clone())].into(),
            transitions: [(mor("id_1"), FunctorData::identity(z2.clone()))].into(),
        };
        let lam = grothendieck(&p).unwrap();
        assert!(find_isomorphism(&lam.total, &z2).is_some());
    }

    #[test]
    fn composite_comparison_is_iso_on_corpus() {
        let p = swap_action();
        let lam = grothendieck(&p).unwrap();
        let choice = choose_pullbacks(&lam).unwrap();
        for f in &lam.base.morphisms {
            for g in &lam.base.morphisms {
                if f.cod != g.dom {
                    continue;
                }
                for dpp in lam.objects_over(&g.cod) {
                    let cmp = composite_comparison(&choice, &f.id, &g.id, &dpp).unwrap();
                    assert!(
                        lam.total.inverse(&cmp).is_some(),
                        "comparison {cmp} is not invertible"
                    );
                }
            }
        }
    }

    #[test]
    fn cartesian_composed_with_fiber_iso_is_cartesian() {
        let p = swap_action();
        let lam = grothendieck(&p).unwrap();
        for r in &lam.total.morphisms {
            let (ok, _) = is_cartesian(&lam, &r.id).unwrap();
            if !ok {
                continue;
            }
            // Compose with every fiber isomorphism into dom(r).
            let base_of_dom = lam.proj_obj(&r.dom).unwrap();
            let idc = lam.base.identity_of(&base_of_dom).unwrap();
            for w in lam.morphisms_over(&idc) {
                if lam.total.cod(&w).unwrap() != r.dom || lam.total.inverse(&w).is_none() {
                    continue;
                }
                let comp = lam.total.compose2(&r.id, &w).unwrap();
                let (ok2, _) = is_cartesian(&lam, &comp).unwrap();
                assert!(ok2);
            }
        }
    }

    #[test]
    fn pullbacks_in_comma_category_are_precomposition() {
        // Comma category over the Z/2 groupoid: f* should act like
        // precomposition with f on the slice objects.
        let base = Arc::new(z2_category());
        let lam = comma_over(&base, &obj("*")).unwrap();
        let choice = choose_pullbacks(&lam).unwrap();
        let fu = pullback_functor(&choice, &mor("u")).unwrap();
        assert!(crate::fincat::validate_functor(&fu).unwrap().is_valid());
        // Slice objects are [e] and [u]; pullback along u must swap them
        // (precompose: e∘u = u, u∘u = e).
        assert_eq!(fu.object_map[&obj("[e]")], obj("[u]"));
        assert_eq!(fu.object_map[&obj("[u]")], obj("[e]"));
    }
}
