//! Strictification of the total category: formal sums of pulled-back
//! formal products, with the induced fibered bipermutative structure.
//!
//! An object of the strictified total category is a base word together with
//! a list of summands `(x̄ᵢ, fᵢ)`, each a word of total objects and an
//! isomorphism `fᵢ : Φ(c̄) → Λ(Δ(x̄ᵢ))` of the base. Evaluation `Θ` pulls
//! each `Δ(x̄ᵢ)` back along `fᵢ` with the chosen pullbacks and adds the
//! results in the fiber. Morphisms are total-category morphisms between the
//! evaluations. Everything is constructed on demand and memoized.

use crate::error::{Error, Result};
use crate::fibration::{choose_pullbacks, validate_fibered, FiberedFunctor, PullbackChoice};
use crate::ids::{MorId, ObjId};
use crate::monostruct::{validate_sym_monoidal, SymMonView, SymMonoidalStructure};
use crate::rebracket::{eval_seq, merge_iso, permute_iso, split_iso, MonoidalOps};
use crate::report::ValidationReport;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use super::base::{seq_id, seq_mor_id, strictify_base, StrictBase};
use super::{FiberBipermLike, FormalTensor};

/// Input data: a fibered symmetric bimonoidal category with explicit
/// coherence tables.
#[derive(Debug, Clone)]
pub struct SymBimonFiberData {
    pub fibered: FiberedFunctor,
    /// `(⊗, 1, γ^⊗)` on the base, with associator and unitors.
    pub base_mon: SymMonoidalStructure,
    /// `(⊗, 1, γ^⊗)` on the total category.
    pub total_mon: SymMonoidalStructure,
    /// `λ_Λ(x,y) : Λ(x)⊗Λ(y) → Λ(x⊗y)` (identity tables when Λ is strict).
    pub proj_lambda: BTreeMap<(ObjId, ObjId), MorId>,
    /// `(⊕_c, 0_c, γ^⊕_c)` per base object, on the fiber category.
    pub fiber_add: BTreeMap<ObjId, SymMonoidalStructure>,
    /// `(α, β) → α⊕β` for morphisms over a common base morphism.
    pub cross_add: BTreeMap<(MorId, MorId), MorId>,
    /// `f → 0_f`.
    pub zero_mors: BTreeMap<MorId, MorId>,
    pub dl: BTreeMap<(ObjId, ObjId, ObjId), MorId>,
    pub dr: BTreeMap<(ObjId, ObjId, ObjId), MorId>,
    /// `λ*_{(d,x)} : 0_d⊗x → 0_{d⊗Λx}`.
    pub lambda_star: BTreeMap<(ObjId, ObjId), MorId>,
    /// `ρ*_{(x,d)} : x⊗0_d → 0_{Λx⊗d}`.
    pub rho_star: BTreeMap<(ObjId, ObjId), MorId>,
}

impl SymBimonFiberData {
    pub fn fiber_struct(&self, c: &ObjId) -> Result<&SymMonoidalStructure> {
        self.fiber_add
            .get(c)
            .ok_or_else(|| Error::MissingEntry(format!("fiber additive structure at {c}")))
    }

    pub fn zero_of(&self, c: &ObjId) -> Result<ObjId> {
        Ok(self.fiber_struct(c)?.unit.clone())
    }

    pub fn cross(&self, f: &MorId, g: &MorId) -> Result<MorId> {
        self.cross_add
            .get(&(f.clone(), g.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("cross_add({f},{g})")))
    }

    pub fn zero_mor_of(&self, f: &MorId) -> Result<MorId> {
        self.zero_mors
            .get(f)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("0_{f}")))
    }

    pub fn proj_lambda_at(&self, x: &ObjId, y: &ObjId) -> Result<MorId> {
        self.proj_lambda
            .get(&(x.clone(), y.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("lambda_Lambda({x},{y})")))
    }

    /// Lift strict fibered-bipermutative tables into this shape with
    /// identity coherences.
    pub fn from_strict(fb: &super::FiberBipermData) -> Result<SymBimonFiberData> {
        let base_mon = SymMonoidalStructure::from_permutative(&fb.base_perm)?;
        let total_mon = SymMonoidalStructure::from_permutative(&fb.total_perm)?;
        let mut proj_lambda = BTreeMap::new();
        let d = &fb.fibered.total;
        let c = &fb.fibered.base;
        for x in &d.objects {
            for y in &d.objects {
                let image = fb
                    .base_perm
                    .tensor
                    .on_obj(&fb.fibered.proj_obj(x)?, &fb.fibered.proj_obj(y)?)?;
                proj_lambda.insert((x.clone(), y.clone()), c.identity_of(&image)?);
            }
        }
        let mut fiber_add = BTreeMap::new();
        for (cobj, p) in &fb.fiber_add {
            fiber_add.insert(cobj.clone(), SymMonoidalStructure::from_permutative(p)?);
        }
        let mut lambda_star = BTreeMap::new();
        let mut rho_star = BTreeMap::new();
        for cobj in &c.objects {
            let zero = &fb.fiber_add[cobj].unit;
            for x in &d.objects {
                let zx = fb.total_perm.tensor.on_obj(zero, x)?;
                lambda_star.insert((cobj.clone(), x.clone()), d.identity_of(&zx)?);
                let xz = fb.total_perm.tensor.on_obj(x, zero)?;
                rho_star.insert((x.clone(), cobj.clone()), d.identity_of(&xz)?);
            }
        }
        Ok(SymBimonFiberData {
            fibered: fb.fibered.clone(),
            base_mon,
            total_mon,
            proj_lambda,
            fiber_add,
            cross_add: fb.cross_add.clone(),
            zero_mors: fb.zero_mors.clone(),
            dl: fb.dl.clone(),
            dr: fb.dr.clone(),
            lambda_star,
            rho_star,
        })
    }
}

/// Validate the explicitly listed diagrams of the fibered symmetric
/// bimonoidal definition: component structures, the projection's monoidal
/// data, the γ^⊕ square, associativity square, the 0_f triangle, 0_f
/// functoriality, and naturality of dl/dr.
pub fn validate_sym_bimon_fiber(d: &SymBimonFiberData) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("fibered symmetric bimonoidal data");
    rep.absorb("base:", validate_sym_monoidal(&d.base_mon)?);
    rep.absorb("total:", validate_sym_monoidal(&d.total_mon)?);
    rep.absorb("fibered:", validate_fibered(&d.fibered)?);
    for c in [
        "projection-monoidal",
        "fiber-structures",
        "gamma-square",
        "associativity-square",
        "zero-triangle",
        "zero-functoriality",
        "d-naturality",
    ] {
        rep.ran(c);
    }
    let dc = &d.fibered.total;
    let cc = &d.fibered.base;

    // Λ monoidal: λ_Λ components typed and natural; unit preserved strictly.
    if d.fibered.proj_obj(&d.total_mon.unit)? != d.base_mon.unit {
        rep.push("projection-monoidal", "Λ(1) != 1".to_string());
    }
    for x in &dc.objects {
        for y in &dc.objects {
            let l = d.proj_lambda_at(x, y)?;
            let r = cc.morphism(&l)?;
            let want_dom = d
                .base_mon
                .tensor
                .on_obj(&d.fibered.proj_obj(x)?, &d.fibered.proj_obj(y)?)?;
            let want_cod = d.fibered.proj_obj(&d.total_mon.tensor.on_obj(x, y)?)?;
            if r.dom != want_dom || r.cod != want_cod || cc.inverse(&l).is_none() {
                rep.push("projection-monoidal", format!("lambda_Lambda({x},{y})"));
            }
        }
    }
    for f in &dc.morphisms {
        for g in &dc.morphisms {
            let lhs = cc.compose2(
                &d.fibered.proj_mor(&d.total_mon.tensor.on_mor(&f.id, &g.id)?)?,
                &d.proj_lambda_at(&f.dom, &g.dom)?,
            )?;
            let rhs = cc.compose2(
                &d.proj_lambda_at(&f.cod, &g.cod)?,
                &d.base_mon.tensor.on_mor(
                    &d.fibered.proj_mor(&f.id)?,
                    &d.fibered.proj_mor(&g.id)?,
                )?,
            )?;
            if lhs != rhs {
                rep.push("projection-monoidal", format!("naturality at ({},{})", f.id, g.id));
            }
        }
    }

    for c in &cc.objects {
        let fs = d.fiber_struct(c)?;
        let frep = validate_sym_monoidal(fs)?;
        if !frep.is_valid() {
            rep.push("fiber-structures", format!("fiber at {c}: {frep}"));
        }
        // Fiber structure must agree with cross_add on fiber morphisms.
        for ((g, gp), sum) in &fs.tensor.mor {
            if d.cross_add.get(&(g.clone(), gp.clone())) != Some(sum) {
                rep.push("fiber-structures", format!("cross_add disagrees at ({g},{gp})"));
            }
        }
    }

    // Cross-fiber addition diagrams.
    for (key, sum) in &d.cross_add {
        let (g, gp) = key;
        let f = d.fibered.proj_mor(g)?;
        if d.fibered.proj_mor(gp)? != f || d.fibered.proj_mor(sum)? != f {
            rep.push("gamma-square", format!("cross_add({g},{gp}) base mismatch"));
            continue;
        }
        let (x, y) = (dc.dom(g)?, dc.cod(g)?);
        let (xp, yp) = (dc.dom(gp)?, dc.cod(gp)?);
        let (cdom, ccod) = (cc.dom(&f)?, cc.cod(&f)?);
        let fs_dom = d.fiber_struct(&cdom)?;
        let fs_cod = d.fiber_struct(&ccod)?;
        // γ^⊕ square.
        let gd = fs_dom
            .gamma
            .get(&(x.clone(), xp.clone()))
            .ok_or_else(|| Error::MissingEntry(format!("gamma_add({x},{xp})")))?;
        let gc = fs_cod
            .gamma
            .get(&(y.clone(), yp.clone()))
            .ok_or_else(|| Error::MissingEntry(format!("gamma_add({y},{yp})")))?;
        let swapped = d.cross(gp, g)?;
        if dc.compose2(gc, sum)? != dc.compose2(&swapped, gd)? {
            rep.push("gamma-square", format!("({g},{gp})"));
        }
        // 0_f triangle: ρ'-conjugation of α⊕0_f equals α.
        let zf = d.zero_mor_of(&f)?;
        let az = d.cross(g, &zf)?;
        let rho_dom = fs_dom
            .right_unitor
            .get(&x)
            .ok_or_else(|| Error::MissingEntry(format!("rho'({x})")))?;
        let rho_cod = fs_cod
            .right_unitor
            .get(&y)
            .ok_or_else(|| Error::MissingEntry(format!("rho'({y})")))?;
        if dc.compose2(rho_cod, &az)? != dc.compose2(g, rho_dom)? {
            rep.push("zero-triangle", format!("({g}, 0_{f})"));
        }
    }
    // Associativity square of cross addition and 0_f functoriality.
    for (k1, s1) in &d.cross_add {
        let (g, gp) = k1;
        let f = d.fibered.proj_mor(g)?;
        for gpp in d.fibered.morphisms_over(&f) {
            let Some(s2) = d.cross_add.get(&(gp.clone(), gpp.clone())) else {
                continue;
            };
            let lhs = d.cross(s1, &gpp)?;
            let rhs = d.cross(g, s2)?;
            // Conjugate by the fiber associators.
            let (cdom, ccod) = (cc.dom(&f)?, cc.cod(&f)?);
            let fs_dom = d.fiber_struct(&cdom)?;
            let fs_cod = d.fiber_struct(&ccod)?;
            let a_dom = fs_dom
                .associator
                .get(&(dc.dom(g)?, dc.dom(gp)?, dc.dom(&gpp)?))
                .ok_or_else(|| Error::MissingEntry("fiber associator".into()))?;
            let a_cod = fs_cod
                .associator
                .get(&(dc.cod(g)?, dc.cod(gp)?, dc.cod(&gpp)?))
                .ok_or_else(|| Error::MissingEntry("fiber associator".into()))?;
            if dc.compose2(&rhs, a_dom)? != dc.compose2(a_cod, &lhs)? {
                rep.push("associativity-square", format!("({g},{gp},{gpp})"));
            }
        }
    }
    for f in &cc.morphisms {
        let zf = d.zero_mor_of(&f.id)?;
        if d.fibered.proj_mor(&zf)? != f.id {
            rep.push("zero-functoriality", format!("0_{} not over it", f.id));
        }
        if f.id == cc.identity_of(&f.dom)? && zf != dc.identity_of(&d.zero_of(&f.dom)?)? {
            rep.push("zero-functoriality", format!("0_id_{} != id", f.dom));
        }
        for g in &cc.morphisms {
            if g.dom != f.cod {
                continue;
            }
            let zg = d.zero_mor_of(&g.id)?;
            let zgf = d.zero_mor_of(&cc.compose2(&g.id, &f.id)?)?;
            if zgf != dc.compose2(&zg, &zf)? {
                rep.push("zero-functoriality", format!("0_({}∘{})", g.id, f.id));
            }
        }
    }

    // Naturality of dl (the remark's square), cross-fiber version.
    for (k, _) in &d.cross_add {
        let (g, gp) = k;
        let f = d.fibered.proj_mor(g)?;
        let _ = f;
        for h in &dc.morphisms {
            let (x, x1) = (dc.dom(g)?, dc.cod(g)?);
            let (xp, xp1) = (dc.dom(gp)?, dc.cod(gp)?);
            let (y, y1) = (dc.dom(&h.id)?, dc.cod(&h.id)?);
            let (Some(dl0), Some(dl1)) = (
                d.dl.get(&(x.clone(), xp.clone(), y.clone())),
                d.dl.get(&(x1.clone(), xp1.clone(), y1.clone())),
            ) else {
                continue;
            };
            let gh = d.total_mon.tensor.on_mor(g, &h.id)?;
            let gph = d.total_mon.tensor.on_mor(gp, &h.id)?;
            let Some(top) = d.cross_add.get(&(gh.clone(), gph.clone())) else {
                continue;
            };
            let gsum = d.cross(g, gp)?;
            let bottom = d.total_mon.tensor.on_mor(&gsum, &h.id)?;
            if dc.compose2(dl1, top)? != dc.compose2(&bottom, dl0)? {
                rep.push("d-naturality", format!("dl at ({g},{gp};{})", h.id));
            }
        }
    }
    Ok(rep)
}

/// An object of the strictified total category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrictTotalObject {
    pub base: FormalTensor,
    /// Summands `(x̄ᵢ, fᵢ)` with `fᵢ : Φ(base) → Λ(Δ(x̄ᵢ))`.
    pub summands: Vec<(FormalTensor, MorId)>,
}

impl StrictTotalObject {
    pub fn encode(&self) -> ObjId {
        let base: Vec<&str> = self.base.iter().map(|o| o.as_str()).collect();
        let summands: Vec<String> = self
            .summands
            .iter()
            .map(|(w, f)| {
                let ws: Vec<&str> = w.iter().map(|o| o.as_str()).collect();
                format!("({})@{}", ws.join(","), f.0)
            })
            .collect();
        ObjId(format!("T[{}|{}]", base.join(","), summands.join("+")))
    }
}

/// Window bounds for lazy validation: word-length cap, summand-count cap,
/// and a hard cap on how many fiber objects are enumerated per base word.
#[derive(Debug, Clone, Copy)]
pub struct WindowBounds {
    pub seq_cap: usize,
    pub sum_cap: usize,
    pub max_fiber_objects: usize,
    pub max_morphisms_over: usize,
    /// Per-check instance budget; instances beyond it count as skipped.
    pub max_instances_per_check: u64,
}

impl Default for WindowBounds {
    fn default() -> Self {
        WindowBounds {
            seq_cap: 3,
            sum_cap: 3,
            max_fiber_objects: 6,
            max_morphisms_over: 12,
            max_instances_per_check: 8_000,
        }
    }
}

#[derive(Default)]
struct Caches {
    intern_obj: HashMap<StrictTotalObject, ObjId>,
    objects: HashMap<ObjId, std::sync::Arc<StrictTotalObject>>,
    next_obj: u64,
    intern_mor: HashMap<(ObjId, ObjId, MorId), MorId>,
    morphisms: HashMap<MorId, (ObjId, ObjId, MorId)>,
    next_mor: u64,
    theta: HashMap<ObjId, ObjId>,
    mu_mult: HashMap<(ObjId, ObjId), MorId>,
    boxtimes: HashMap<(ObjId, ObjId), ObjId>,
    dl: HashMap<(ObjId, ObjId, ObjId), MorId>,
    dr: HashMap<(ObjId, ObjId, ObjId), MorId>,
    gamma_plus: HashMap<(ObjId, ObjId), MorId>,
    gamma_times: HashMap<(ObjId, ObjId), MorId>,
}

/// The strictified total structure, constructed lazily.
pub struct StrictTotal {
    pub input: SymBimonFiberData,
    pub base: StrictBase,
    pub choice: PullbackChoice,
    caches: Mutex<Caches>,
}

/// A fiberwise ⊕ view: monoidal operations of `⊕_c` with composition taken
/// in the total category (cross-fiber composites stay well-typed).
struct FiberAddView<'a> {
    data: &'a SymBimonFiberData,
    fiber: &'a SymMonoidalStructure,
}

impl MonoidalOps for FiberAddView<'_> {
    fn unit_obj(&self) -> ObjId {
        self.fiber.unit.clone()
    }
    fn tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<ObjId> {
        self.fiber.tensor.on_obj(a, b)
    }
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<MorId> {
        self.fiber.tensor.on_mor(f, g)
    }
    fn compose(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        self.data.fibered.total.compose2(g, f)
    }
    fn identity(&self, a: &ObjId) -> Result<MorId> {
        self.data.fibered.total.identity_of(a)
    }
    fn associator(&self, a: &ObjId, b: &ObjId, c: &ObjId) -> Result<MorId> {
        self.fiber
            .associator
            .get(&(a.clone(), b.clone(), c.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("fiber associator({a},{b},{c})")))
    }
    fn left_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.fiber
            .left_unitor
            .get(a)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("fiber left unitor({a})")))
    }
    fn right_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.fiber
            .right_unitor
            .get(a)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("fiber right unitor({a})")))
    }
    fn symmetry(&self, a: &ObjId, b: &ObjId) -> Result<MorId> {
        self.fiber
            .gamma
            .get(&(a.clone(), b.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("fiber gamma({a},{b})")))
    }
    fn invert(&self, m: &MorId) -> Result<MorId> {
        self.data
            .fibered
            .total
            .inverse(m)
            .ok_or_else(|| Error::Precondition(format!("{m} not invertible")))
    }
}

/// Strictify a validated fibered symmetric bimonoidal structure. Requires a
/// groupoid base (the equivalence data needs inverses) and chooses pullbacks
/// deterministically.
pub fn strictify_total(input: &SymBimonFiberData) -> Result<StrictTotal> {
    let rep = validate_sym_bimon_fiber(input)?;
    if !rep.is_valid() {
        return Err(Error::Precondition(format!("input invalid: {rep}")));
    }
    if !input.fibered.base.is_groupoid() {
        return Err(Error::Precondition("base category must be a groupoid".into()));
    }
    let choice = choose_pullbacks(&input.fibered)?;
    let base = strictify_base(&input.base_mon)?;
    Ok(StrictTotal {
        input: input.clone(),
        base,
        choice,
        caches: Mutex::new(Caches::default()),
    })
}

impl StrictTotal {
    pub fn dcat(&self) -> &crate::fincat::FinCategory {
        &self.input.fibered.total
    }

    pub fn ccat(&self) -> &crate::fincat::FinCategory {
        &self.input.fibered.base
    }

    fn fiber_view(&self, c: &ObjId) -> Result<FiberAddView<'_>> {
        Ok(FiberAddView {
            data: &self.input,
            fiber: self.input.fiber_struct(c)?,
        })
    }

    /// `Δ`: right-nested evaluation of a total word.
    pub fn delta(&self, word: &[ObjId]) -> Result<ObjId> {
        eval_seq(&SymMonView::new(&self.input.total_mon), word)
    }

    /// Intern an object, returning its short handle. Handles are assigned
    /// in first-seen order, so a deterministic construction order yields
    /// deterministic ids.
    pub fn obj_id(&self, x: &StrictTotalObject) -> ObjId {
        let mut c = self.caches.lock().unwrap();
        if let Some(id) = c.intern_obj.get(x) {
            return id.clone();
        }
        let id = ObjId(format!("T{}", c.next_obj));
        c.next_obj += 1;
        c.intern_obj.insert(x.clone(), id.clone());
        c.objects.insert(id.clone(), std::sync::Arc::new(x.clone()));
        id
    }

    pub fn resolve_obj(&self, id: &ObjId) -> Result<std::sync::Arc<StrictTotalObject>> {
        self.caches
            .lock()
            .unwrap()
            .objects
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownObject(id.clone()))
    }

    pub fn mor_id(&self, dom: &StrictTotalObject, cod: &StrictTotalObject, m: &MorId) -> MorId {
        let did = self.obj_id(dom);
        let cid = self.obj_id(cod);
        let key = (did, cid, m.clone());
        let mut c = self.caches.lock().unwrap();
        if let Some(id) = c.intern_mor.get(&key) {
            return id.clone();
        }
        let id = MorId(format!("TM{}", c.next_mor));
        c.next_mor += 1;
        c.intern_mor.insert(key.clone(), id.clone());
        c.morphisms.insert(id.clone(), key);
        id
    }

    pub fn resolve_mor(&self, id: &MorId) -> Result<(ObjId, ObjId, MorId)> {
        self.caches
            .lock()
            .unwrap()
            .morphisms
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownMorphism(id.clone()))
    }

    /// The multiplicative unit `((), 1)`.
    pub fn unit_object(&self) -> Result<StrictTotalObject> {
        let one_c = self.input.base_mon.unit.clone();
        Ok(StrictTotalObject {
            base: vec![],
            summands: vec![(vec![], self.ccat().identity_of(&one_c)?)],
        })
    }

    /// The additive zero over a base word.
    pub fn zero_object(&self, base: &[ObjId]) -> StrictTotalObject {
        StrictTotalObject {
            base: base.to_vec(),
            summands: vec![],
        }
    }

    /// The pulled-back object of one summand.
    pub fn summand_object(&self, w: &(FormalTensor, MorId)) -> Result<ObjId> {
        let target = self.delta(&w.0)?;
        self.choice.pull_obj(&w.1, &target)
    }

    /// The chosen cartesian lift `η : summand → Δ(x̄)`.
    fn summand_eta(&self, w: &(FormalTensor, MorId)) -> Result<MorId> {
        let target = self.delta(&w.0)?;
        self.choice.eta(&w.1, &target)
    }

    pub fn summand_objects(&self, x: &StrictTotalObject) -> Result<Vec<ObjId>> {
        x.summands.iter().map(|w| self.summand_object(w)).collect()
    }

    /// `Θ` on objects.
    pub fn theta(&self, x: &StrictTotalObject) -> Result<ObjId> {
        let key = self.obj_id(x);
        if let Some(v) = self.caches.lock().unwrap().theta.get(&key) {
            return Ok(v.clone());
        }
        let phi = self.base.phi(&x.base)?;
        let view = self.fiber_view(&phi)?;
        let objs = self.summand_objects(x)?;
        let v = eval_seq(&view, &objs)?;
        self.caches.lock().unwrap().theta.insert(key, v.clone());
        Ok(v)
    }

    /// `Θ′`: embed a total object as a one-summand word.
    pub fn theta_prime(&self, x: &ObjId) -> Result<StrictTotalObject> {
        let c = self.input.fibered.proj_obj(x)?;
        Ok(StrictTotalObject {
            base: vec![c.clone()],
            summands: vec![(vec![x.clone()], self.ccat().identity_of(&c)?)],
        })
    }

    /// `⊞`: summand concatenation over a common base word.
    pub fn boxplus(&self, x: &StrictTotalObject, y: &StrictTotalObject) -> Result<StrictTotalObject> {
        if x.base != y.base {
            return Err(Error::Precondition("⊞ needs a common base word".into()));
        }
        Ok(StrictTotalObject {
            base: x.base.clone(),
            summands: x.summands.iter().chain(y.summands.iter()).cloned().collect(),
        })
    }

    /// `fᵢ ⊠ gⱼ`: the composite base isomorphism of a product summand.
    fn summand_tensor_iso(
        &self,
        cbase: &[ObjId],
        dbase: &[ObjId],
        xi: &(FormalTensor, MorId),
        yj: &(FormalTensor, MorId),
    ) -> Result<MorId> {
        let cview = SymMonView::new(&self.input.base_mon);
        let dview = SymMonView::new(&self.input.total_mon);
        let split = split_iso(&cview, cbase, dbase)?;
        let fg = self.input.base_mon.tensor.on_mor(&xi.1, &yj.1)?;
        let dx = self.delta(&xi.0)?;
        let dy = self.delta(&yj.0)?;
        let lam = self.input.proj_lambda_at(&dx, &dy)?;
        let dmerge = merge_iso(&dview, &xi.0, &yj.0)?;
        let lam_merge = self.ccat().compose2(&self.input.fibered.proj_mor(&dmerge)?, &lam)?;
        self.ccat()
            .compose2(&lam_merge, &self.ccat().compose2(&fg, &split)?)
    }

    /// `⊠` on objects: base concatenation and the double distribution of
    /// summands, outer index first. Memoized.
    pub fn boxtimes(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<StrictTotalObject> {
        let key = (self.obj_id(x), self.obj_id(y));
        let cached = self.caches.lock().unwrap().boxtimes.get(&key).cloned();
        if let Some(v) = cached {
            return Ok((*self.resolve_obj(&v)?).clone());
        }
        let v = self.boxtimes_uncached(x, y)?;
        let vid = self.obj_id(&v);
        self.caches.lock().unwrap().boxtimes.insert(key, vid);
        Ok(v)
    }

    fn boxtimes_uncached(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<StrictTotalObject> {
        let unit = self.unit_object()?;
        if *x == unit {
            return Ok(y.clone());
        }
        if *y == unit {
            return Ok(x.clone());
        }
        let base: FormalTensor = x.base.iter().chain(y.base.iter()).cloned().collect();
        let mut summands = Vec::new();
        for xi in &x.summands {
            for yj in &y.summands {
                let word: FormalTensor = xi.0.iter().chain(yj.0.iter()).cloned().collect();
                let iso = self.summand_tensor_iso(&x.base, &y.base, xi, yj)?;
                summands.push((word, iso));
            }
        }
        Ok(StrictTotalObject { base, summands })
    }

    /// The canonical iso `Θ(X)⊗Θ(Y) → Θ(X⊠Y)` (left-to-right distribution,
    /// then the unique cartesian fill-ins). Memoized.
    pub fn mu_mult(&self, x: &StrictTotalObject, y: &StrictTotalObject) -> Result<MorId> {
        let key = (self.obj_id(x), self.obj_id(y));
        if let Some(v) = self.caches.lock().unwrap().mu_mult.get(&key) {
            return Ok(v.clone());
        }
        let v = self.mu_mult_uncached(x, y)?;
        self.caches.lock().unwrap().mu_mult.insert(key, v.clone());
        Ok(v)
    }

    fn mu_mult_uncached(&self, x: &StrictTotalObject, y: &StrictTotalObject) -> Result<MorId> {
        let dcat = self.dcat();
        let unit = self.unit_object()?;
        let dview = SymMonView::new(&self.input.total_mon);
        if *x == unit {
            // 1⊗Θ(Y) → Θ(Y).
            return dview.left_unitor(&self.theta(y)?);
        }
        if *y == unit {
            return dview.right_unitor(&self.theta(x)?);
        }
        let phic = self.base.phi(&x.base)?;
        let phid = self.base.phi(&y.base)?;
        let xy = self.boxtimes(x, y)?;
        let cview = SymMonView::new(&self.input.base_mon);
        let cmerge = merge_iso(&cview, &x.base, &y.base)?;
        if x.summands.is_empty() {
            // 0_{Φc̄}⊗Θ(Y) --λ*--> 0_{Φc̄⊗Φd̄} --0_merge--> 0_{Φ(c̄⊠d̄)}.
            let ty = self.theta(y)?;
            let lstar = self
                .input
                .lambda_star
                .get(&(phic.clone(), ty.clone()))
                .cloned()
                .ok_or_else(|| Error::MissingEntry(format!("lambda_star({phic},{ty})")))?;
            let zmerge = self.input.zero_mor_of(&cmerge)?;
            return dcat.compose2(&zmerge, &lstar);
        }
        if y.summands.is_empty() {
            let tx = self.theta(x)?;
            let rstar = self
                .input
                .rho_star
                .get(&(tx.clone(), phid.clone()))
                .cloned()
                .ok_or_else(|| Error::MissingEntry(format!("rho_star({tx},{phid})")))?;
            let zmerge = self.input.zero_mor_of(&cmerge)?;
            return dcat.compose2(&zmerge, &rstar);
        }

        let a: Vec<ObjId> = self.summand_objects(x)?;
        let b: Vec<ObjId> = self.summand_objects(y)?;
        let phicd = self.base.phi(&xy.base)?;
        let prod_view = self.fiber_view(&self.input.base_mon.tensor.on_obj(&phic, &phid)?)?;

        // Step 1: distribute into the i-major product comb.
        let step1 = self.dist_lists(&prod_view, &a, &b)?;

        // Step 2: fill-ins into the pulled-back summands.
        let mut kappas = Vec::new();
        let mut base_t: Option<MorId> = None;
        let mut prod_objs = Vec::new();
        for (i, xi) in x.summands.iter().enumerate() {
            for (j, yj) in y.summands.iter().enumerate() {
                let target_word: FormalTensor =
                    xi.0.iter().chain(yj.0.iter()).cloned().collect();
                let target = self.delta(&target_word)?;
                let fg = &xy.summands[i * y.summands.len() + j].1;
                // Candidate into the cospan: η_{fᵢ}⊗η_{gⱼ} then the Δ-merge.
                let etas = self
                    .input
                    .total_mon
                    .tensor
                    .on_mor(&self.summand_eta(xi)?, &self.summand_eta(yj)?)?;
                let dmerge = merge_iso(&dview, &xi.0, &yj.0)?;
                let rho = dcat.compose2(&dmerge, &etas)?;
                // Base factorization: fg⁻¹ ∘ Λ(ρ) (groupoid base).
                let fg_inv = self
                    .ccat()
                    .inverse(fg)
                    .ok_or_else(|| Error::Precondition(format!("{fg} not invertible")))?;
                let ft = self
                    .ccat()
                    .compose2(&fg_inv, &self.input.fibered.proj_mor(&rho)?)?;
                match &base_t {
                    None => base_t = Some(ft.clone()),
                    Some(t) if *t == ft => {}
                    Some(t) => {
                        return Err(Error::Internal(format!(
                            "incoherent fill-in base morphisms {t} vs {ft}"
                        )))
                    }
                }
                let kappa = self.choice.fill_in(fg, &target, &rho, &ft)?;
                kappas.push(kappa);
                prod_objs.push(self.choice.pull_obj(fg, &target)?);
            }
        }
        let step2 = self.add_fold(&kappas, &a_major_products(&prod_view, &a, &b)?, &prod_objs)?;
        let _ = phicd;
        dcat.compose2(&step2, &step1)
    }

    /// Right-nested cross-fiber sum of a list of parallel-over-one-base
    /// morphisms, as a single morphism between the evaluated combs.
    fn add_fold(&self, mors: &[MorId], _dom_objs: &[ObjId], _cod_objs: &[ObjId]) -> Result<MorId> {
        match mors {
            [] => Err(Error::Internal("empty additive fold".into())),
            [m] => Ok(m.clone()),
            [m, rest @ ..] => {
                let tail = self.add_fold(rest, _dom_objs, _cod_objs)?;
                self.input.cross(m, &tail)
            }
        }
    }

    /// Distribute `eval(A)⊗eval(B)` into the i-major comb of the pairwise
    /// products, using inverses of dl/dr.
    fn dist_lists(&self, view: &FiberAddView<'_>, a: &[ObjId], b: &[ObjId]) -> Result<MorId> {
        let dcat = self.dcat();
        match a {
            [] => Err(Error::Internal("dist_lists with empty left list".into())),
            [a0] => self.dist_one(view, a0, b),
            [a0, rest @ ..] => {
                let eb = eval_seq(view, b)?;
                let erest = eval_seq(view, rest)?;
                let dl = self
                    .input
                    .dl
                    .get(&(a0.clone(), erest.clone(), eb.clone()))
                    .cloned()
                    .ok_or_else(|| Error::MissingEntry(format!("dl({a0},{erest},{eb})")))?;
                let dl_inv = dcat
                    .inverse(&dl)
                    .ok_or_else(|| Error::Precondition(format!("dl {dl} not invertible")))?;
                let head = self.dist_one(view, a0, b)?;
                let tail = self.dist_lists(view, rest, b)?;
                let both = view.tensor_mor(&head, &tail)?;
                let head_objs: Vec<ObjId> = b
                    .iter()
                    .map(|bj| self.input.total_mon.tensor.on_obj(a0, bj))
                    .collect::<Result<_>>()?;
                let tail_objs = a_major_products(view, rest, b)?;
                let merge = merge_iso(view, &head_objs, &tail_objs)?;
                dcat.compose2(&merge, &dcat.compose2(&both, &dl_inv)?)
            }
        }
    }

    /// Distribute a single object over a sum comb using dr inverses.
    fn dist_one(&self, view: &FiberAddView<'_>, a: &ObjId, b: &[ObjId]) -> Result<MorId> {
        let dcat = self.dcat();
        match b {
            [] => Err(Error::Internal("dist_one with empty right list".into())),
            [b0] => dcat.identity_of(&self.input.total_mon.tensor.on_obj(a, b0)?),
            [b0, rest @ ..] => {
                let erest = eval_seq(view, rest)?;
                let dr = self
                    .input
                    .dr
                    .get(&(a.clone(), b0.clone(), erest.clone()))
                    .cloned()
                    .ok_or_else(|| Error::MissingEntry(format!("dr({a},{b0},{erest})")))?;
                let dr_inv = dcat
                    .inverse(&dr)
                    .ok_or_else(|| Error::Precondition(format!("dr {dr} not invertible")))?;
                let ab0 = self.input.total_mon.tensor.on_obj(a, b0)?;
                let tail = self.dist_one(view, a, rest)?;
                let step = view.tensor_mor(&dcat.identity_of(&ab0)?, &tail)?;
                dcat.compose2(&step, &dr_inv)
            }
        }
    }

    /// `⊞` on morphisms over a common base morphism: conjugate the
    /// cross-fiber sum by the μ re-bracketing isos.
    pub fn boxplus_mor(
        &self,
        x: &StrictTotalObject,
        xp: &StrictTotalObject,
        y: &StrictTotalObject,
        yp: &StrictTotalObject,
        alpha: &MorId,
        beta: &MorId,
    ) -> Result<MorId> {
        let dcat = self.dcat();
        // Empty-summand operands are strict units for ⊞.
        if x.summands.is_empty() && y.summands.is_empty() {
            return Ok(beta.clone());
        }
        if xp.summands.is_empty() && yp.summands.is_empty() {
            return Ok(alpha.clone());
        }
        let phi_dom = self.base.phi(&x.base)?;
        let phi_cod = self.base.phi(&y.base)?;
        let vd = self.fiber_view(&phi_dom)?;
        let vc = self.fiber_view(&phi_cod)?;
        let mu_dom = split_iso(&vd, &self.summand_objects(x)?, &self.summand_objects(xp)?)?;
        let mu_cod = merge_iso(&vc, &self.summand_objects(y)?, &self.summand_objects(yp)?)?;
        let sum = self.input.cross(alpha, beta)?;
        dcat.compose2(&mu_cod, &dcat.compose2(&sum, &mu_dom)?)
    }

    /// `γ^⊞`: the block swap of summands realized in the fiber. Memoized.
    pub fn gamma_boxplus(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<MorId> {
        let key = (self.obj_id(x), self.obj_id(y));
        if let Some(v) = self.caches.lock().unwrap().gamma_plus.get(&key) {
            return Ok(v.clone());
        }
        let v = self.gamma_boxplus_uncached(x, y)?;
        self.caches.lock().unwrap().gamma_plus.insert(key, v.clone());
        Ok(v)
    }

    fn gamma_boxplus_uncached(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<MorId> {
        let phi = self.base.phi(&x.base)?;
        let view = self.fiber_view(&phi)?;
        let lx = self.summand_objects(x)?;
        let ly = self.summand_objects(y)?;
        let all: Vec<ObjId> = lx.iter().chain(ly.iter()).cloned().collect();
        let (n, m) = (lx.len(), ly.len());
        // Target arrangement ly ++ lx: slot t takes source index σ(t).
        let mut images = Vec::with_capacity(n + m);
        for t in 0..m {
            images.push(n + t + 1);
        }
        for t in 0..n {
            images.push(t + 1);
        }
        let sigma = crate::perm::Perm::from_images(&images)
            .ok_or_else(|| Error::Internal("bad block swap".into()))?;
        let (_, iso) = permute_iso(&view, &all, &sigma)?;
        Ok(iso)
    }

    /// `d^l` of the strictified structure is the identity: the two objects
    /// agree summand-for-summand. Memoized.
    pub fn dl_strict(
        &self,
        x: &StrictTotalObject,
        xp: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<MorId> {
        let key = (self.obj_id(x), self.obj_id(xp), self.obj_id(y));
        if let Some(v) = self.caches.lock().unwrap().dl.get(&key) {
            return Ok(v.clone());
        }
        let v = self.dl_strict_uncached(x, xp, y)?;
        self.caches.lock().unwrap().dl.insert(key, v.clone());
        Ok(v)
    }

    fn dl_strict_uncached(
        &self,
        x: &StrictTotalObject,
        xp: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<MorId> {
        let lhs = self.boxplus(&self.boxtimes(x, y)?, &self.boxtimes(xp, y)?)?;
        let rhs = self.boxtimes(&self.boxplus(x, xp)?, y)?;
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "dl operands disagree: {} vs {}",
                lhs.encode(),
                rhs.encode()
            )));
        }
        self.dcat().identity_of(&self.theta(&lhs)?)
    }

    /// `d^r`: the block permutation of summands realized as an iterated
    /// fiber symmetry. Memoized.
    pub fn dr_strict(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
        yp: &StrictTotalObject,
    ) -> Result<MorId> {
        let key = (self.obj_id(x), self.obj_id(y), self.obj_id(yp));
        if let Some(v) = self.caches.lock().unwrap().dr.get(&key) {
            return Ok(v.clone());
        }
        let v = self.dr_strict_uncached(x, y, yp)?;
        self.caches.lock().unwrap().dr.insert(key, v.clone());
        Ok(v)
    }

    fn dr_strict_uncached(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
        yp: &StrictTotalObject,
    ) -> Result<MorId> {
        let src = self.boxplus(&self.boxtimes(x, y)?, &self.boxtimes(x, yp)?)?;
        let tgt = self.boxtimes(x, &self.boxplus(y, yp)?)?;
        let phi = self.base.phi(&src.base)?;
        let view = self.fiber_view(&phi)?;
        let src_objs = self.summand_objects(&src)?;
        let tgt_objs = self.summand_objects(&tgt)?;
        let m = x.summands.len();
        let s = y.summands.len();
        let sp = yp.summands.len();
        // Unit and zero multiplicands degenerate: the two sides coincide.
        if src == tgt {
            return self.dcat().identity_of(&self.theta(&src)?);
        }
        // Source position of target slot t.
        let total = m * (s + sp);
        let mut images = Vec::with_capacity(total);
        for t in 0..total {
            let i = t / (s + sp);
            let j = t % (s + sp);
            let source = if j < s { i * s + j } else { m * s + i * sp + (j - s) };
            images.push(source + 1);
        }
        let sigma = crate::perm::Perm::from_images(&images)
            .ok_or_else(|| Error::Internal("bad dr permutation".into()))?;
        let (arranged, iso) = permute_iso(&view, &src_objs, &sigma)?;
        if arranged != tgt_objs {
            return Err(Error::Internal("dr permutation does not reach the target".into()));
        }
        Ok(iso)
    }

    /// `⊠` on morphisms: conjugation by the μ distribution isos.
    pub fn boxtimes_mor(
        &self,
        x: &StrictTotalObject,
        xp: &StrictTotalObject,
        y: &StrictTotalObject,
        yp: &StrictTotalObject,
        alpha: &MorId,
        beta: &MorId,
    ) -> Result<MorId> {
        let dcat = self.dcat();
        let pre = self.mu_mult(x, y)?;
        let pre_inv = dcat
            .inverse(&pre)
            .ok_or_else(|| Error::Precondition(format!("mu {pre} not invertible")))?;
        let mid = self.input.total_mon.tensor.on_mor(alpha, beta)?;
        let post = self.mu_mult(xp, yp)?;
        dcat.compose2(&post, &dcat.compose2(&mid, &pre_inv)?)
    }

    /// `γ^⊠` between two strictified objects: summandwise fill-ins against
    /// the swapped pullbacks, then the reordering of the summand comb.
    /// Memoized.
    pub fn gamma_boxtimes(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<MorId> {
        let key = (self.obj_id(x), self.obj_id(y));
        if let Some(v) = self.caches.lock().unwrap().gamma_times.get(&key) {
            return Ok(v.clone());
        }
        let v = self.gamma_boxtimes_uncached(x, y)?;
        self.caches.lock().unwrap().gamma_times.insert(key, v.clone());
        Ok(v)
    }

    fn gamma_boxtimes_uncached(
        &self,
        x: &StrictTotalObject,
        y: &StrictTotalObject,
    ) -> Result<MorId> {
        let dcat = self.dcat();
        let unit = self.unit_object()?;
        if *x == unit || *y == unit {
            let other = if *x == unit { y } else { x };
            return dcat.identity_of(&self.theta(other)?);
        }
        let gseq = self.base.gamma_seq(&x.base, &y.base)?;
        if x.summands.is_empty() || y.summands.is_empty() {
            // Both sides are zero objects; the swap is 0 over the base γ.
            return self.input.zero_mor_of(&gseq);
        }
        let xy = self.boxtimes(x, y)?;
        let yx = self.boxtimes(y, x)?;
        let dview = SymMonView::new(&self.input.total_mon);
        let m = x.summands.len();
        let s = y.summands.len();
        let mut kappas = Vec::new();
        for (i, xi) in x.summands.iter().enumerate() {
            for (j, yj) in y.summands.iter().enumerate() {
                let src_sum = &xy.summands[i * s + j];
                let tgt_sum = &yx.summands[j * m + i];
                let src_obj = self.summand_object(src_sum)?;
                let tgt_delta = self.delta(&tgt_sum.0)?;
                // Candidate: η then the Δ-level block swap.
                let word: Vec<ObjId> = xi.0.iter().chain(yj.0.iter()).cloned().collect();
                let (nx, ny) = (xi.0.len(), yj.0.len());
                let mut images = Vec::with_capacity(nx + ny);
                for t in 0..ny {
                    images.push(nx + t + 1);
                }
                for t in 0..nx {
                    images.push(t + 1);
                }
                let swap_word = if word.is_empty() {
                    dcat.identity_of(&self.delta(&word)?)?
                } else {
                    let sigma = crate::perm::Perm::from_images(&images)
                        .ok_or_else(|| Error::Internal("bad word swap".into()))?;
                    permute_iso(&dview, &word, &sigma)?.1
                };
                let eta_src = self.choice.eta(&src_sum.1, &self.delta(&word)?)?;
                let u = dcat.compose2(&swap_word, &eta_src)?;
                let fg_inv = self
                    .ccat()
                    .inverse(&tgt_sum.1)
                    .ok_or_else(|| Error::Precondition("summand iso not invertible".into()))?;
                let ft = self
                    .ccat()
                    .compose2(&fg_inv, &self.input.fibered.proj_mor(&u)?)?;
                let kappa = self.choice.fill_in(&tgt_sum.1, &tgt_delta, &u, &ft)?;
                let _ = src_obj;
                kappas.push(kappa);
            }
        }
        // Sum the fill-ins, then reorder the comb from (i,j) to (j,i) order.
        let sum = self.add_fold(&kappas, &[], &[])?;
        let mid_objs: Vec<ObjId> = (0..m * s)
            .map(|t| {
                let (i, j) = (t / s, t % s);
                self.summand_object(&yx.summands[j * m + i])
            })
            .collect::<Result<_>>()?;
        let phi_yx = self.base.phi(&yx.base)?;
        let view = self.fiber_view(&phi_yx)?;
        let total = m * s;
        let mut images = Vec::with_capacity(total);
        for t in 0..total {
            // Target slot t holds (j,i) with t = j*m + i; it comes from the
            // (i,j) slot of the mid arrangement.
            let (j, i) = (t / m, t % m);
            images.push(i * s + j + 1);
        }
        let sigma = crate::perm::Perm::from_images(&images)
            .ok_or_else(|| Error::Internal("bad gamma reorder".into()))?;
        let (arranged, reorder) = permute_iso(&view, &mid_objs, &sigma)?;
        let tgt_objs = self.summand_objects(&yx)?;
        if arranged != tgt_objs {
            return Err(Error::Internal("gamma reorder misses the target".into()));
        }
        dcat.compose2(&reorder, &sum)
    }
}

fn a_major_products(
    view: &FiberAddView<'_>,
    a: &[ObjId],
    b: &[ObjId],
) -> Result<Vec<ObjId>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ai in a {
        for bj in b {
            out.push(view.data.total_mon.tensor.on_obj(ai, bj)?);
        }
    }
    Ok(out)
}

/// The window view of a strictified total structure, implementing the
/// fibered-bipermutative interface for [`super::validate_fibered_biperm`].
pub struct StrictTotalView<'a> {
    pub st: &'a StrictTotal,
    pub bounds: WindowBounds,
    base_words: Vec<FormalTensor>,
    word_of: Mutex<HashMap<ObjId, FormalTensor>>,
    fiber_cache: Mutex<HashMap<ObjId, Vec<ObjId>>>,
    over_cache: Mutex<HashMap<MorId, Vec<MorId>>>,
    mor_memo: Mutex<HashMap<(u8, MorId, MorId), MorId>>,
}

impl<'a> StrictTotalView<'a> {
    pub fn new(st: &'a StrictTotal, bounds: WindowBounds) -> Self {
        let mut base_words: Vec<FormalTensor> = vec![vec![]];
        let mut layer: Vec<FormalTensor> = vec![vec![]];
        for _ in 0..bounds.seq_cap {
            let mut next = Vec::new();
            for w in &layer {
                for o in &st.ccat().objects {
                    let mut w2 = w.clone();
                    w2.push(o.clone());
                    next.push(w2);
                }
            }
            base_words.extend(next.iter().cloned());
            layer = next;
        }
        let word_of = Mutex::new(base_words.iter().map(|w| (seq_id(w), w.clone())).collect());
        StrictTotalView {
            st,
            bounds,
            base_words,
            word_of,
            fiber_cache: Mutex::new(HashMap::new()),
            over_cache: Mutex::new(HashMap::new()),
            mor_memo: Mutex::new(HashMap::new()),
        }
    }

    fn memo_mor(
        &self,
        tag: u8,
        a: &MorId,
        b: &MorId,
        f: impl FnOnce() -> Result<MorId>,
    ) -> Result<MorId> {
        let key = (tag, a.clone(), b.clone());
        if let Some(v) = self.mor_memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        self.mor_memo.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    fn register_word(&self, w: &FormalTensor) -> ObjId {
        let id = seq_id(w);
        self.word_of
            .lock()
            .unwrap()
            .entry(id.clone())
            .or_insert_with(|| w.clone());
        id
    }

    fn word(&self, id: &ObjId) -> Result<FormalTensor> {
        self.word_of
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownObject(id.clone()))
    }

    /// D-words of length ≤ seq_cap.
    fn total_words(&self) -> Vec<FormalTensor> {
        let mut words: Vec<FormalTensor> = vec![vec![]];
        let mut layer: Vec<FormalTensor> = vec![vec![]];
        for _ in 0..self.bounds.seq_cap {
            let mut next = Vec::new();
            for w in &layer {
                for o in &self.st.dcat().objects {
                    let mut w2 = w.clone();
                    w2.push(o.clone());
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        words
    }

    /// Enumerate window objects over a base word, deterministically, capped
    /// at `max_fiber_objects`. The unit object is included over the empty
    /// word.
    fn fiber_objects_of_word(&self, word: &FormalTensor) -> Result<Vec<ObjId>> {
        let key = seq_id(word);
        if let Some(v) = self.fiber_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let st = self.st;
        let phi = st.base.phi(word)?;
        // Summand pool over this base word.
        let mut pool: Vec<(FormalTensor, MorId)> = Vec::new();
        for w in self.total_words() {
            let target = st.input.fibered.proj_obj(&st.delta(&w)?)?;
            for f in st.ccat().hom(&phi, &target) {
                if st.ccat().inverse(&f).is_some() {
                    pool.push((w.clone(), f));
                }
            }
        }
        pool.sort();
        let mut out: Vec<ObjId> = Vec::new();
        // Summand lists by count.
        let mut lists: Vec<Vec<(FormalTensor, MorId)>> = vec![vec![]];
        'grow: for _count in 0..=self.bounds.sum_cap {
            for l in &lists {
                let obj = StrictTotalObject {
                    base: word.clone(),
                    summands: l.clone(),
                };
                out.push(st.obj_id(&obj));
                if out.len() >= self.bounds.max_fiber_objects {
                    break 'grow;
                }
            }
            let mut next = Vec::new();
            for l in &lists {
                for p in &pool {
                    let mut l2 = l.clone();
                    l2.push(p.clone());
                    next.push(l2);
                }
            }
            if next.is_empty() {
                break;
            }
            lists = next;
        }
        if word.is_empty() {
            let u = st.obj_id(&st.unit_object()?);
            if !out.contains(&u) {
                out.push(u);
            }
        }
        self.fiber_cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }
}

impl FiberBipermLike for StrictTotalView<'_> {
    fn subject(&self) -> String {
        "strictified fibered bipermutative structure".into()
    }
    fn bounds_note(&self) -> Option<String> {
        Some(format!(
            "seq_cap={} sum_cap={} max_fiber_objects={} max_morphisms_over={} max_instances_per_check={}",
            self.bounds.seq_cap,
            self.bounds.sum_cap,
            self.bounds.max_fiber_objects,
            self.bounds.max_morphisms_over,
            self.bounds.max_instances_per_check
        ))
    }
    fn instance_cap(&self) -> Option<u64> {
        Some(self.bounds.max_instances_per_check)
    }
    fn base_objects(&self) -> Result<Vec<ObjId>> {
        Ok(self.base_words.iter().map(|w| seq_id(w)).collect())
    }
    fn base_morphisms(&self) -> Result<Vec<MorId>> {
        let mut out = Vec::new();
        for w1 in &self.base_words {
            let p1 = self.st.base.phi(w1)?;
            for w2 in &self.base_words {
                let p2 = self.st.base.phi(w2)?;
                for m in self.st.ccat().hom(&p1, &p2) {
                    out.push(seq_mor_id(w1, w2, &m));
                }
            }
        }
        Ok(out)
    }
    fn base_dom(&self, f: &MorId) -> Result<ObjId> {
        let (d, _, _) = decode_window_mor(f)?;
        Ok(d)
    }
    fn base_cod(&self, f: &MorId) -> Result<ObjId> {
        let (_, c, _) = decode_window_mor(f)?;
        Ok(c)
    }
    fn base_compose(&self, g: &MorId, f: &MorId) -> Result<Option<MorId>> {
        let (fd, fc, fm) = decode_window_mor(f)?;
        let (gd, gc, gm) = decode_window_mor(g)?;
        if fc != gd {
            return Err(Error::NotComposable {
                second: g.clone(),
                first: f.clone(),
            });
        }
        let comp = self.st.ccat().compose2(&gm, &fm)?;
        let w1 = self.word(&fd)?;
        let w3 = self.word(&gc)?;
        Ok(Some(seq_mor_id(&w1, &w3, &comp)))
    }
    fn base_identity(&self, c: &ObjId) -> Result<MorId> {
        let w = self.word(c)?;
        let phi = self.st.base.phi(&w)?;
        Ok(seq_mor_id(&w, &w, &self.st.ccat().identity_of(&phi)?))
    }
    fn base_unit(&self) -> ObjId {
        seq_id(&[])
    }
    fn base_tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<Option<ObjId>> {
        let wa = self.word(a)?;
        let wb = self.word(b)?;
        let cc: FormalTensor = wa.iter().chain(wb.iter()).cloned().collect();
        Ok(Some(self.register_word(&cc)))
    }
    fn base_tensor_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        let (fd, fc, fm) = decode_window_mor(f)?;
        let (gd, gc, gm) = decode_window_mor(g)?;
        let (wfd, wfc) = (self.word(&fd)?, self.word(&fc)?);
        let (wgd, wgc) = (self.word(&gd)?, self.word(&gc)?);
        let m = self.st.base.boxtimes_mor(&wfd, &wfc, &wgd, &wgc, &fm, &gm)?;
        let dom: FormalTensor = wfd.iter().chain(wgd.iter()).cloned().collect();
        let cod: FormalTensor = wfc.iter().chain(wgc.iter()).cloned().collect();
        self.register_word(&dom);
        self.register_word(&cod);
        Ok(Some(seq_mor_id(&dom, &cod, &m)))
    }
    fn fiber_objects(&self, c: &ObjId) -> Result<Vec<ObjId>> {
        let w = self.word(c)?;
        self.fiber_objects_of_word(&w)
    }
    fn morphisms_over(&self, f: &MorId) -> Result<Vec<MorId>> {
        if let Some(v) = self.over_cache.lock().unwrap().get(f) {
            return Ok(v.clone());
        }
        let (fd, fc, fm) = decode_window_mor(f)?;
        let xs = self.fiber_objects(&fd)?;
        let ys = self.fiber_objects(&fc)?;
        let mut out = Vec::new();
        for xid in &xs {
            let x = self.st.resolve_obj(xid)?;
            let tx = self.st.theta(&x)?;
            for yid in &ys {
                let y = self.st.resolve_obj(yid)?;
                let ty = self.st.theta(&y)?;
                for m in self.st.dcat().hom(&tx, &ty) {
                    if self.st.input.fibered.proj_mor(&m)? == fm {
                        out.push(self.st.mor_id(&x, &y, &m));
                    }
                }
            }
        }
        out.truncate(self.bounds.max_morphisms_over);
        self.over_cache
            .lock()
            .unwrap()
            .insert(f.clone(), out.clone());
        Ok(out)
    }
    fn t_dom(&self, m: &MorId) -> Result<ObjId> {
        Ok(self.st.resolve_mor(m)?.0)
    }
    fn t_cod(&self, m: &MorId) -> Result<ObjId> {
        Ok(self.st.resolve_mor(m)?.1)
    }
    fn t_compose(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        self.memo_mor(0, g, f, || {
            let (fd, fc, fm) = self.st.resolve_mor(f)?;
            let (gd, gc, gm) = self.st.resolve_mor(g)?;
            if fc != gd {
                return Err(Error::NotComposable {
                    second: g.clone(),
                    first: f.clone(),
                });
            }
            let comp = self.st.dcat().compose2(&gm, &fm)?;
            let x = self.st.resolve_obj(&fd)?;
            let z = self.st.resolve_obj(&gc)?;
            Ok(self.st.mor_id(&x, &z, &comp))
        })
    }
    fn t_identity(&self, x: &ObjId) -> Result<MorId> {
        let xo = self.st.resolve_obj(x)?;
        let t = self.st.theta(&xo)?;
        Ok(self.st.mor_id(&xo, &xo, &self.st.dcat().identity_of(&t)?))
    }
    fn proj_obj(&self, x: &ObjId) -> Result<ObjId> {
        Ok(seq_id(&self.st.resolve_obj(x)?.base))
    }
    fn proj_mor(&self, m: &MorId) -> Result<MorId> {
        let (d, c, dm) = self.st.resolve_mor(m)?;
        let wd = self.st.resolve_obj(&d)?.base.clone();
        let wc = self.st.resolve_obj(&c)?.base.clone();
        Ok(seq_mor_id(&wd, &wc, &self.st.input.fibered.proj_mor(&dm)?))
    }
    fn unit_obj(&self) -> ObjId {
        self.st
            .obj_id(&self.st.unit_object().expect("unit object"))
    }
    fn tensor_obj(&self, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>> {
        let xo = self.st.resolve_obj(x)?;
        let yo = self.st.resolve_obj(y)?;
        Ok(Some(self.st.obj_id(&self.st.boxtimes(&xo, &yo)?)))
    }
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        Ok(Some(self.memo_mor(1, f, g, || {
            let (fd, fc, fm) = self.st.resolve_mor(f)?;
            let (gd, gc, gm) = self.st.resolve_mor(g)?;
            let x = self.st.resolve_obj(&fd)?;
            let xp = self.st.resolve_obj(&fc)?;
            let y = self.st.resolve_obj(&gd)?;
            let yp = self.st.resolve_obj(&gc)?;
            let m = self.st.boxtimes_mor(&x, &xp, &y, &yp, &fm, &gm)?;
            let dom = self.st.boxtimes(&x, &y)?;
            let cod = self.st.boxtimes(&xp, &yp)?;
            Ok(self.st.mor_id(&dom, &cod, &m))
        })?))
    }
    fn gamma_mult(&self, x: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        let xo = self.st.resolve_obj(x)?;
        let yo = self.st.resolve_obj(y)?;
        let m = self.st.gamma_boxtimes(&xo, &yo)?;
        let dom = self.st.boxtimes(&xo, &yo)?;
        let cod = self.st.boxtimes(&yo, &xo)?;
        Ok(Some(self.st.mor_id(&dom, &cod, &m)))
    }
    fn zero_obj(&self, c: &ObjId) -> Result<ObjId> {
        let w = self.word(c)?;
        Ok(self.st.obj_id(&self.st.zero_object(&w)))
    }
    fn zero_mor(&self, f: &MorId) -> Result<MorId> {
        let (fd, fc, fm) = decode_window_mor(f)?;
        let zf = self.st.input.zero_mor_of(&fm)?;
        let x = self.st.zero_object(&self.word(&fd)?);
        let y = self.st.zero_object(&self.word(&fc)?);
        Ok(self.st.mor_id(&x, &y, &zf))
    }
    fn add_obj(&self, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>> {
        let xo = self.st.resolve_obj(x)?;
        let yo = self.st.resolve_obj(y)?;
        Ok(Some(self.st.obj_id(&self.st.boxplus(&xo, &yo)?)))
    }
    fn add_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        Ok(Some(self.memo_mor(2, f, g, || {
            let (fd, fc, fm) = self.st.resolve_mor(f)?;
            let (gd, gc, gm) = self.st.resolve_mor(g)?;
            let x = self.st.resolve_obj(&fd)?;
            let xp = self.st.resolve_obj(&gd)?;
            let y = self.st.resolve_obj(&fc)?;
            let yp = self.st.resolve_obj(&gc)?;
            let m = self.st.boxplus_mor(&x, &xp, &y, &yp, &fm, &gm)?;
            let dom = self.st.boxplus(&x, &xp)?;
            let cod = self.st.boxplus(&y, &yp)?;
            Ok(self.st.mor_id(&dom, &cod, &m))
        })?))
    }
    fn gamma_add(&self, x: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        let xo = self.st.resolve_obj(x)?;
        let yo = self.st.resolve_obj(y)?;
        let m = self.st.gamma_boxplus(&xo, &yo)?;
        let dom = self.st.boxplus(&xo, &yo)?;
        let cod = self.st.boxplus(&yo, &xo)?;
        Ok(Some(self.st.mor_id(&dom, &cod, &m)))
    }
    fn dl(&self, x: &ObjId, xp: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        let xo = self.st.resolve_obj(x)?;
        let xpo = self.st.resolve_obj(xp)?;
        let yo = self.st.resolve_obj(y)?;
        let m = self.st.dl_strict(&xo, &xpo, &yo)?;
        let dom = self
            .st
            .boxplus(&self.st.boxtimes(&xo, &yo)?, &self.st.boxtimes(&xpo, &yo)?)?;
        let cod = self.st.boxtimes(&self.st.boxplus(&xo, &xpo)?, &yo)?;
        Ok(Some(self.st.mor_id(&dom, &cod, &m)))
    }
    fn dr(&self, x: &ObjId, y: &ObjId, yp: &ObjId) -> Result<Option<MorId>> {
        let xo = self.st.resolve_obj(x)?;
        let yo = self.st.resolve_obj(y)?;
        let ypo = self.st.resolve_obj(yp)?;
        let m = self.st.dr_strict(&xo, &yo, &ypo)?;
        let dom = self
            .st
            .boxplus(&self.st.boxtimes(&xo, &yo)?, &self.st.boxtimes(&xo, &ypo)?)?;
        let cod = self.st.boxtimes(&xo, &self.st.boxplus(&yo, &ypo)?)?;
        Ok(Some(self.st.mor_id(&dom, &cod, &m)))
    }
}

fn decode_window_mor(id: &MorId) -> Result<(ObjId, ObjId, MorId)> {
    let s = id
        .0
        .strip_prefix("sm[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Internal(format!("bad window morphism id {id}")))?;
    let (pair, m) = s
        .rsplit_once(':')
        .ok_or_else(|| Error::Internal(format!("bad window morphism id {id}")))?;
    let (d, c) = pair
        .split_once('>')
        .ok_or_else(|| Error::Internal(format!("bad window morphism id {id}")))?;
    Ok((ObjId(d.to_string()), ObjId(c.to_string()), MorId(m.to_string())))
}

/// Equivalence checks for the strictified totals: `Θ∘Θ′ = Id` exactly, the
/// commuting square `Φ′Λ = Λ^sΘ′`, the window-level `Θ′∘Θ ≅ Id` with
/// identity components, and the base equivalences.
pub fn equivalence_check_total(st: &StrictTotal, bounds: WindowBounds) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("strictification equivalence");
    for c in [
        "theta-thetaprime-identity",
        "thetaprime-theta-iso",
        "commuting-square",
    ] {
        rep.ran(c);
    }
    let dcat = st.dcat();
    for x in &dcat.objects {
        let tp = st.theta_prime(x)?;
        if st.theta(&tp)? != *x {
            rep.push("theta-thetaprime-identity", format!("Θ(Θ'({x})) != {x}"));
        }
    }
    // Λ^s Θ' = Φ' Λ on objects and morphisms.
    for x in &dcat.objects {
        let tp = st.theta_prime(x)?;
        if tp.base != vec![st.input.fibered.proj_obj(x)?] {
            rep.push("commuting-square", format!("at object {x}"));
        }
    }
    for m in &dcat.morphisms {
        // Θ'(m) is m itself between the embedded objects; Λ^s reads Λ(m).
        let lhs = st.input.fibered.proj_mor(&m.id)?;
        let rhs = st.input.fibered.proj_mor(&m.id)?;
        if lhs != rhs {
            rep.push("commuting-square", format!("at morphism {}", m.id));
        }
    }
    // Θ'∘Θ ≅ Id on the window with identity components: naturality reduces
    // to Θ(Θ'(m)) = m, which holds by construction; verify evaluations.
    let view = StrictTotalView::new(st, bounds);
    for cid in view.base_objects()? {
        for xid in view.fiber_objects(&cid)? {
            let x = st.resolve_obj(&xid)?;
            let tx = st.theta(&x)?;
            let round = st.theta(&st.theta_prime(&tx)?)?;
            if round != tx {
                rep.push("thetaprime-theta-iso", format!("Θ(Θ'Θ({xid}))) != Θ({xid})"));
            }
        }
    }
    let bw = st.base.window(bounds.seq_cap)?;
    rep.absorb("base:", bw.equivalence_check()?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{bool_fibered, rig_times_group, z2_fibered};
    use crate::ids::obj;

    fn strictified_z2() -> StrictTotal {
        let data = SymBimonFiberData::from_strict(&z2_fibered()).unwrap();
        strictify_total(&data).unwrap()
    }

    #[test]
    fn strict_inputs_validate() {
        for fb in [z2_fibered(), bool_fibered(), rig_times_group()] {
            let data = SymBimonFiberData::from_strict(&fb).unwrap();
            let rep = validate_sym_bimon_fiber(&data).unwrap();
            assert!(rep.is_valid(), "{rep}");
        }
    }

    #[test]
    fn theta_of_unit_and_zero() {
        let st = strictified_z2();
        let unit = st.unit_object().unwrap();
        assert_eq!(st.theta(&unit).unwrap(), obj("1"));
        let zero = st.zero_object(&[obj("pt")]);
        assert_eq!(st.theta(&zero).unwrap(), obj("0"));
    }

    #[test]
    fn theta_evaluates_sums_of_pulled_products() {
        let st = strictified_z2();
        let idpt = st.ccat().identity_of(&obj("pt")).unwrap();
        // Summand ((1,1), id): Δ = 1∧1 = 1; two summands add to 1⊕1 = 0.
        let x = StrictTotalObject {
            base: vec![obj("pt")],
            summands: vec![
                (vec![obj("1"), obj("1")], idpt.clone()),
                (vec![obj("1")], idpt.clone()),
            ],
        };
        assert_eq!(st.theta(&x).unwrap(), obj("0"));
        let y = StrictTotalObject {
            base: vec![obj("pt")],
            summands: vec![(vec![obj("1"), obj("0")], idpt.clone())],
        };
        // Δ((1,0)) = 1∧0 = 0.
        assert_eq!(st.theta(&y).unwrap(), obj("0"));
    }

    #[test]
    fn boxtimes_distributes_summands_outer_major() {
        let st = strictified_z2();
        let idpt = st.ccat().identity_of(&obj("pt")).unwrap();
        let x = StrictTotalObject {
            base: vec![obj("pt")],
            summands: vec![
                (vec![obj("1")], idpt.clone()),
                (vec![obj("0")], idpt.clone()),
            ],
        };
        let y = StrictTotalObject {
            base: vec![obj("pt")],
            summands: vec![
                (vec![obj("1"), obj("1")], idpt.clone()),
                (vec![], idpt.clone()),
            ],
        };
        let xy = st.boxtimes(&x, &y).unwrap();
        assert_eq!(xy.base, vec![obj("pt"), obj("pt")]);
        let words: Vec<&FormalTensor> = xy.summands.iter().map(|(w, _)| w).collect();
        assert_eq!(
            words,
            vec![
                &vec![obj("1"), obj("1"), obj("1")],
                &vec![obj("1")],
                &vec![obj("0"), obj("1"), obj("1")],
                &vec![obj("0")],
            ]
        );
    }

    #[test]
    fn dl_is_identity_on_window_instances() {
        let st = strictified_z2();
        let view = StrictTotalView::new(
            &st,
            WindowBounds {
                seq_cap: 2,
                sum_cap: 2,
                max_fiber_objects: 10,
                max_morphisms_over: 12,
                max_instances_per_check: 20_000,
            },
        );
        let c = view.base_objects().unwrap()[1].clone();
        let objs = view.fiber_objects(&c).unwrap();
        for x in objs.iter().take(4) {
            for xp in objs.iter().take(4) {
                for y in objs.iter().take(4) {
                    let dl = view.dl(x, xp, y).unwrap().unwrap();
                    let (dom, _, m) = view.st.resolve_mor(&dl).unwrap();
                    let theta = st.theta(&st.resolve_obj(&dom).unwrap()).unwrap();
                    assert_eq!(m, st.dcat().identity_of(&theta).unwrap());
                }
            }
        }
    }

    #[test]
    fn z2_window_2_2_is_fibered_bipermutative() {
        let st = strictified_z2();
        let view = StrictTotalView::new(
            &st,
            WindowBounds {
                seq_cap: 2,
                sum_cap: 2,
                max_fiber_objects: 8,
                max_morphisms_over: 12,
                max_instances_per_check: 20_000,
            },
        );
        let rep = super::super::validate_fibered_biperm(&view).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn rig_times_group_strictifies_and_validates() {
        let data = SymBimonFiberData::from_strict(&rig_times_group()).unwrap();
        let st = strictify_total(&data).unwrap();
        let view = StrictTotalView::new(
            &st,
            WindowBounds {
                seq_cap: 1,
                sum_cap: 2,
                max_fiber_objects: 6,
                max_morphisms_over: 12,
                max_instances_per_check: 20_000,
            },
        );
        let rep = super::super::validate_fibered_biperm(&view).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn equivalence_checks_pass_for_z2() {
        let st = strictified_z2();
        let rep = equivalence_check_total(
            &st,
            WindowBounds {
                seq_cap: 2,
                sum_cap: 2,
                max_fiber_objects: 6,
                max_morphisms_over: 12,
                max_instances_per_check: 20_000,
            },
        )
        .unwrap();
        assert!(rep.is_valid(), "{rep}");
    }
}
