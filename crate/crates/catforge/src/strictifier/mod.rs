//! Strictification of fibered symmetric bimonoidal structures, and the
//! bipermutative / fibered-bipermutative coherence validators.
//!
//! The validators for the fibered conditions are written against the
//! [`FiberBipermLike`] trait so that one checker serves both concrete table
//! data and the lazily strictified structures (which enumerate objects only
//! inside a window).

mod base;
mod total;

pub use base::{decode_seq_mor, seq_id, seq_mor_id, strictify_base, BaseWindow, StrictBase};
pub use total::{
    equivalence_check_total, strictify_total, validate_sym_bimon_fiber, StrictTotal,
    StrictTotalObject, StrictTotalView, SymBimonFiberData, WindowBounds,
};

use crate::error::{Error, Result};
use crate::ids::{MorId, ObjId};
use crate::monostruct::{
    validate_monoidal_map, validate_permutative, MapClass, MonoidalMap, PermutativeStructure,
};
use crate::report::ValidationReport;
use std::collections::BTreeMap;

/// A formal tensor word: an object of the strictified base.
pub type FormalTensor = Vec<ObjId>;

/// A bipermutative structure: two permutative structures on one category
/// plus distributivity isomorphism tables.
#[derive(Debug, Clone)]
pub struct BipermData {
    /// `(⊕, 0, γ^⊕)`.
    pub additive: PermutativeStructure,
    /// `(⊗, 1, γ^⊗)` on the same base category.
    pub multiplicative: PermutativeStructure,
    /// `d^l_{x,x',y} : (x⊗y)⊕(x'⊗y) → (x⊕x')⊗y`.
    pub dl: BTreeMap<(ObjId, ObjId, ObjId), MorId>,
    /// `d^r_{x,y,y'} : (x⊗y)⊕(x⊗y') → x⊗(y⊕y')`.
    pub dr: BTreeMap<(ObjId, ObjId, ObjId), MorId>,
}

impl BipermData {
    fn dl_at(&self, x: &ObjId, xp: &ObjId, y: &ObjId) -> Result<MorId> {
        self.dl
            .get(&(x.clone(), xp.clone(), y.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("dl({x},{xp},{y})")))
    }

    fn dr_at(&self, x: &ObjId, y: &ObjId, yp: &ObjId) -> Result<MorId> {
        self.dr
            .get(&(x.clone(), y.clone(), yp.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("dr({x},{y},{yp})")))
    }
}

/// Build the bipermutative structure of a discrete commutative rig
/// (identity structure maps throughout).
pub fn discrete_rig(
    elements: &[&str],
    add: &dyn Fn(&str, &str) -> String,
    zero: &str,
    mul: &dyn Fn(&str, &str) -> String,
    one: &str,
) -> Result<BipermData> {
    let additive = crate::monostruct::discrete_from_monoid(elements, add, zero)?;
    let multiplicative = crate::monostruct::discrete_from_monoid(elements, mul, one)?;
    let cat = additive.base.clone();
    let multiplicative = PermutativeStructure {
        base: cat.clone(),
        ..multiplicative
    };
    let mut dl = BTreeMap::new();
    let mut dr = BTreeMap::new();
    for x in elements {
        for y in elements {
            for z in elements {
                // (x·z)⊕(y·z) must equal (x⊕y)·z for the identity map to
                // typecheck; rejected otherwise.
                let l = add(&mul(x, z), &mul(y, z));
                let r = mul(&add(x, y), z);
                if l != r {
                    return Err(Error::Rejected(format!(
                        "left distributivity fails at ({x},{y},{z})"
                    )));
                }
                dl.insert(
                    (ObjId::from(*x), ObjId::from(*y), ObjId::from(*z)),
                    cat.identity_of(&ObjId(r))?,
                );
                let l = add(&mul(x, y), &mul(x, z));
                let r = mul(x, &add(y, z));
                if l != r {
                    return Err(Error::Rejected(format!(
                        "right distributivity fails at ({x},{y},{z})"
                    )));
                }
                dr.insert(
                    (ObjId::from(*x), ObjId::from(*y), ObjId::from(*z)),
                    cat.identity_of(&ObjId(r))?,
                );
            }
        }
    }
    // Annihilation.
    for x in elements {
        if mul(x, zero) != zero || mul(zero, x) != zero {
            return Err(Error::Rejected(format!("zero absorption fails at {x}")));
        }
    }
    Ok(BipermData {
        additive,
        multiplicative,
        dl,
        dr,
    })
}

/// The rig Z/2 with (xor, and) — the field F₂.
pub fn z2_rig() -> BipermData {
    discrete_rig(
        &["0", "1"],
        &|a, b| if (a == "1") ^ (b == "1") { "1".into() } else { "0".into() },
        "0",
        &|a, b| if a == "1" && b == "1" { "1".into() } else { "0".into() },
        "1",
    )
    .expect("Z/2 is a rig")
}

/// The boolean rig with (or, and).
pub fn bool_rig() -> BipermData {
    discrete_rig(
        &["0", "1"],
        &|a, b| if a == "1" || b == "1" { "1".into() } else { "0".into() },
        "0",
        &|a, b| if a == "1" && b == "1" { "1".into() } else { "0".into() },
        "1",
    )
    .expect("bool is a rig")
}

/// Exhaustively check the bipermutative axioms: zero absorption, typing and
/// invertibility of the distributivity maps, their naturality, and diagrams
/// (a.1)–(a.5) with the d^r mirrors of (a.1)–(a.3).
pub fn validate_bipermutative(d: &BipermData) -> Result<ValidationReport> {
    let arep = validate_permutative(&d.additive)?;
    if !arep.is_valid() {
        return Err(Error::Precondition(format!("additive structure invalid: {arep}")));
    }
    let mrep = validate_permutative(&d.multiplicative)?;
    if !mrep.is_valid() {
        return Err(Error::Precondition(format!(
            "multiplicative structure invalid: {mrep}"
        )));
    }
    if d.additive.base != d.multiplicative.base {
        return Err(Error::Precondition(
            "additive and multiplicative structures disagree on the base category".into(),
        ));
    }
    let cat = &d.additive.base;
    let add = &d.additive.tensor;
    let mul = &d.multiplicative.tensor;
    let zero = &d.additive.unit;
    let mut rep = ValidationReport::new("bipermutative structure");
    for c in [
        "zero", "d-naturality", "a.1", "a.2", "a.3", "a.4", "a.5", "a.1r", "a.2r", "a.3r",
    ] {
        rep.ran(c);
    }

    // Structural pass over the d tables: every component present, correctly
    // typed, and invertible. These are structural errors, not coherence
    // violations.
    for x in &cat.objects {
        for xp in &cat.objects {
            for y in &cat.objects {
                let dl = d.dl_at(x, xp, y)?;
                let r = cat.morphism(&dl)?;
                let want_dom = add.on_obj(&mul.on_obj(x, y)?, &mul.on_obj(xp, y)?)?;
                let want_cod = mul.on_obj(&add.on_obj(x, xp)?, y)?;
                if r.dom != want_dom || r.cod != want_cod {
                    return Err(Error::Rejected(format!(
                        "dl({x},{xp},{y}) = {dl} is mistyped: {} -> {}, want {want_dom} -> {want_cod}",
                        r.dom, r.cod
                    )));
                }
                if cat.inverse(&dl).is_none() {
                    return Err(Error::Rejected(format!("dl({x},{xp},{y}) not invertible")));
                }
                let dr = d.dr_at(x, xp, y)?;
                let r = cat.morphism(&dr)?;
                let want_dom = add.on_obj(&mul.on_obj(x, xp)?, &mul.on_obj(x, y)?)?;
                let want_cod = mul.on_obj(x, &add.on_obj(xp, y)?)?;
                if r.dom != want_dom || r.cod != want_cod {
                    return Err(Error::Rejected(format!("dr({x},{xp},{y}) = {dr} is mistyped")));
                }
                if cat.inverse(&dr).is_none() {
                    return Err(Error::Rejected(format!("dr({x},{xp},{y}) not invertible")));
                }
            }
        }
    }

    // Zero absorption on objects and morphisms.
    let zid = cat.identity_of(zero)?;
    for x in &cat.objects {
        let l = mul.on_obj(x, zero)?;
        let r = mul.on_obj(zero, x)?;
        if &l != zero || &r != zero {
            rep.push("zero", format!("{x}⊗0 = {l}, 0⊗{x} = {r}"));
        }
    }
    for f in &cat.morphisms {
        if mul.on_mor(&f.id, &zid)? != zid || mul.on_mor(&zid, &f.id)? != zid {
            rep.push("zero", format!("{}⊗id_0 != id_0", f.id));
        }
    }

    // Naturality of dl and dr.
    for f in &cat.morphisms {
        for fp in &cat.morphisms {
            for g in &cat.morphisms {
                let lhs = cat.compose2(
                    &d.dl_at(&f.cod, &fp.cod, &g.cod)?,
                    &add.on_mor(&mul.on_mor(&f.id, &g.id)?, &mul.on_mor(&fp.id, &g.id)?)?,
                )?;
                let rhs = cat.compose2(
                    &mul.on_mor(&add.on_mor(&f.id, &fp.id)?, &g.id)?,
                    &d.dl_at(&f.dom, &fp.dom, &g.dom)?,
                )?;
                if lhs != rhs {
                    rep.push("d-naturality", format!("dl at ({},{},{})", f.id, fp.id, g.id));
                }
                let lhs = cat.compose2(
                    &d.dr_at(&f.cod, &fp.cod, &g.cod)?,
                    &add.on_mor(&mul.on_mor(&f.id, &fp.id)?, &mul.on_mor(&f.id, &g.id)?)?,
                )?;
                let rhs = cat.compose2(
                    &mul.on_mor(&f.id, &add.on_mor(&fp.id, &g.id)?)?,
                    &d.dr_at(&f.dom, &fp.dom, &g.dom)?,
                )?;
                if lhs != rhs {
                    rep.push("d-naturality", format!("dr at ({},{},{})", f.id, fp.id, g.id));
                }
            }
        }
    }

    // The pentagon-free diagram set (a.1)–(a.5) and the mirrors.
    for x in &cat.objects {
        for xp in &cat.objects {
            for xpp in &cat.objects {
                for y in &cat.objects {
                    // a.1
                    let lhs = cat.compose2(
                        &d.dl_at(&add.on_obj(x, xp)?, xpp, y)?,
                        &add.on_mor(&d.dl_at(x, xp, y)?, &cat.identity_of(&mul.on_obj(xpp, y)?)?)?,
                    )?;
                    let rhs = cat.compose2(
                        &d.dl_at(x, &add.on_obj(xp, xpp)?, y)?,
                        &add.on_mor(&cat.identity_of(&mul.on_obj(x, y)?)?, &d.dl_at(xp, xpp, y)?)?,
                    )?;
                    if lhs != rhs {
                        rep.push("a.1", format!("({x},{xp},{xpp},{y})"));
                    }
                    // a.1r
                    let lhs = cat.compose2(
                        &d.dr_at(x, &add.on_obj(xp, xpp)?, y)?,
                        &add.on_mor(&d.dr_at(x, xp, xpp)?, &cat.identity_of(&mul.on_obj(x, y)?)?)?,
                    )?;
                    let rhs = cat.compose2(
                        &d.dr_at(x, xp, &add.on_obj(xpp, y)?)?,
                        &add.on_mor(&cat.identity_of(&mul.on_obj(x, xp)?)?, &d.dr_at(x, xpp, y)?)?,
                    )?;
                    if lhs != rhs {
                        rep.push("a.1r", format!("({x},{xp},{xpp},{y})"));
                    }
                }
            }
        }
    }
    for x in &cat.objects {
        for xp in &cat.objects {
            for y in &cat.objects {
                // a.2
                let lhs = cat.compose2(
                    &d.dl_at(xp, x, y)?,
                    &d.additive.gamma_at(&mul.on_obj(x, y)?, &mul.on_obj(xp, y)?)?,
                )?;
                let rhs = cat.compose2(
                    &mul.on_mor(&d.additive.gamma_at(x, xp)?, &cat.identity_of(y)?)?,
                    &d.dl_at(x, xp, y)?,
                )?;
                if lhs != rhs {
                    rep.push("a.2", format!("({x},{xp},{y})"));
                }
                // a.2r
                let lhs = cat.compose2(
                    &d.dr_at(x, y, xp)?,
                    &d.additive.gamma_at(&mul.on_obj(x, xp)?, &mul.on_obj(x, y)?)?,
                )?;
                let rhs = cat.compose2(
                    &mul.on_mor(&cat.identity_of(x)?, &d.additive.gamma_at(xp, y)?)?,
                    &d.dr_at(x, xp, y)?,
                )?;
                if lhs != rhs {
                    rep.push("a.2r", format!("({x},{xp},{y})"));
                }
                for z in &cat.objects {
                    // a.3: dl(x,x',y⊗z) = (dl(x,x',y)⊗id_z)∘dl(x⊗y,x'⊗y,z).
                    let lhs = d.dl_at(x, xp, &mul.on_obj(y, z)?)?;
                    let rhs = cat.compose2(
                        &mul.on_mor(&d.dl_at(x, xp, y)?, &cat.identity_of(z)?)?,
                        &d.dl_at(&mul.on_obj(x, y)?, &mul.on_obj(xp, y)?, z)?,
                    )?;
                    if lhs != rhs {
                        rep.push("a.3", format!("({x},{xp},{y},{z})"));
                    }
                    // a.3r: dr(x⊗y,z,z') = (id_x⊗dr(y,z,z'))∘dr(x,y⊗z,y⊗z').
                    let lhs = d.dr_at(&mul.on_obj(x, xp)?, y, z)?;
                    let rhs = cat.compose2(
                        &mul.on_mor(&cat.identity_of(x)?, &d.dr_at(xp, y, z)?)?,
                        &d.dr_at(x, &mul.on_obj(xp, y)?, &mul.on_obj(xp, z)?)?,
                    )?;
                    if lhs != rhs {
                        rep.push("a.3r", format!("({x},{xp},{y},{z})"));
                    }
                    // a.4 with (x, x', y, z = y').
                    let xy = mul.on_obj(x, y)?;
                    let xyp = mul.on_obj(x, z)?;
                    let xpy = mul.on_obj(xp, y)?;
                    let xpyp = mul.on_obj(xp, z)?;
                    let top = cat.compose2(
                        &d.dl_at(x, xp, &add.on_obj(y, z)?)?,
                        &add.on_mor(&d.dr_at(x, y, z)?, &d.dr_at(xp, y, z)?)?,
                    )?;
                    let mid = add.on_mor(
                        &cat.identity_of(&xy)?,
                        &add.on_mor(&d.additive.gamma_at(&xyp, &xpy)?, &cat.identity_of(&xpyp)?)?,
                    )?;
                    let bottom = cat.compose2(
                        &d.dr_at(&add.on_obj(x, xp)?, y, z)?,
                        &cat.compose2(&add.on_mor(&d.dl_at(x, xp, y)?, &d.dl_at(x, xp, z)?)?, &mid)?,
                    )?;
                    if top != bottom {
                        rep.push("a.4", format!("({x},{xp},{y},{z})"));
                    }
                }
                // a.5
                let lhs = cat.compose2(
                    &d.multiplicative.gamma_at(&add.on_obj(x, xp)?, y)?,
                    &d.dl_at(x, xp, y)?,
                )?;
                let rhs = cat.compose2(
                    &d.dr_at(y, x, xp)?,
                    &add.on_mor(
                        &d.multiplicative.gamma_at(x, y)?,
                        &d.multiplicative.gamma_at(xp, y)?,
                    )?,
                )?;
                if lhs != rhs {
                    rep.push("a.5", format!("({x},{xp},{y})"));
                }
            }
        }
    }
    Ok(rep)
}

/// What the fibered-bipermutative validator needs from a structure. All
/// tensor-like lookups are partial (`Ok(None)` = outside the window);
/// concrete table data returns `Some` everywhere.
pub trait FiberBipermLike {
    fn subject(&self) -> String;
    fn bounds_note(&self) -> Option<String> {
        None
    }
    /// Per-check instance budget for window-limited structures; `None`
    /// means exhaustive.
    fn instance_cap(&self) -> Option<u64> {
        None
    }

    // Base category (window-limited for lazy structures).
    fn base_objects(&self) -> Result<Vec<ObjId>>;
    fn base_morphisms(&self) -> Result<Vec<MorId>>;
    fn base_dom(&self, f: &MorId) -> Result<ObjId>;
    fn base_cod(&self, f: &MorId) -> Result<ObjId>;
    fn base_compose(&self, g: &MorId, f: &MorId) -> Result<Option<MorId>>;
    fn base_identity(&self, c: &ObjId) -> Result<MorId>;
    fn base_unit(&self) -> ObjId;
    fn base_tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<Option<ObjId>>;
    fn base_tensor_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>>;

    // Total category.
    fn fiber_objects(&self, c: &ObjId) -> Result<Vec<ObjId>>;
    fn morphisms_over(&self, f: &MorId) -> Result<Vec<MorId>>;
    fn t_dom(&self, m: &MorId) -> Result<ObjId>;
    fn t_cod(&self, m: &MorId) -> Result<ObjId>;
    fn t_compose(&self, g: &MorId, f: &MorId) -> Result<MorId>;
    fn t_identity(&self, x: &ObjId) -> Result<MorId>;
    fn proj_obj(&self, x: &ObjId) -> Result<ObjId>;
    fn proj_mor(&self, m: &MorId) -> Result<MorId>;

    // Multiplicative structure on the total category.
    fn unit_obj(&self) -> ObjId;
    fn tensor_obj(&self, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>>;
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>>;
    fn gamma_mult(&self, x: &ObjId, y: &ObjId) -> Result<Option<MorId>>;

    // Fiberwise additive structure and cross-fiber addition.
    fn zero_obj(&self, c: &ObjId) -> Result<ObjId>;
    fn zero_mor(&self, f: &MorId) -> Result<MorId>;
    fn add_obj(&self, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>>;
    fn add_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>>;
    fn gamma_add(&self, x: &ObjId, y: &ObjId) -> Result<Option<MorId>>;
    fn dl(&self, x: &ObjId, xp: &ObjId, y: &ObjId) -> Result<Option<MorId>>;
    fn dr(&self, x: &ObjId, y: &ObjId, yp: &ObjId) -> Result<Option<MorId>>;
}

/// Check conditions (b.1)–(b.10) plus the zero laws, fiberwise permutative
/// axioms, and window strictness of the projection. Instances whose data
/// falls outside the window are skipped and counted.
pub fn validate_fibered_biperm<T: FiberBipermLike>(d: &T) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new(d.subject());
    for c in [
        "zero", "fiber-perm", "b.1", "b.2", "b.3", "b.4", "b.5", "b.1r", "b.2r", "b.3r", "b.6",
        "b.7", "b.8", "b.9", "b.10", "projection-strict",
    ] {
        rep.ran(c);
    }
    let mut skipped: u64 = 0;
    let mut checked: u64 = 0;
    let cap = d.instance_cap();
    let mut budget: BTreeMap<&'static str, u64> = BTreeMap::new();
    macro_rules! within_budget {
        ($name:expr) => {{
            let c = budget.entry($name).or_insert(0);
            *c += 1;
            match cap {
                Some(limit) if *c > limit => false,
                _ => true,
            }
        }};
    }

    let base_objs = d.base_objects()?;
    let base_mors = d.base_morphisms()?;

    // Zero absorption across fibers (objects).
    for c in &base_objs {
        for cp in &base_objs {
            let Some(ccp) = d.base_tensor_obj(c, cp)? else {
                skipped += 1;
                continue;
            };
            let want = d.zero_obj(&ccp)?;
            for y in d.fiber_objects(cp)? {
                checked += 1;
                if let Some(v) = d.tensor_obj(&d.zero_obj(c)?, &y)? {
                    if v != want {
                        rep.push("zero", format!("0_{c}⊗{y} = {v} != {want}"));
                    }
                } else {
                    skipped += 1;
                }
            }
            for x in d.fiber_objects(c)? {
                checked += 1;
                if let Some(v) = d.tensor_obj(&x, &d.zero_obj(cp)?)? {
                    if v != want {
                        rep.push("zero", format!("{x}⊗0_{cp} = {v} != {want}"));
                    }
                } else {
                    skipped += 1;
                }
            }
        }
    }

    // Fiberwise permutative axioms on ⊕ (strict associativity, strict unit,
    // γ^⊕ unit/involution/hexagon) inside the window.
    for c in &base_objs {
        let objs = d.fiber_objects(c)?;
        let zero = d.zero_obj(c)?;
        for x in &objs {
            match (d.add_obj(x, &zero)?, d.add_obj(&zero, x)?) {
                (Some(l), Some(r)) => {
                    checked += 1;
                    if &l != x || &r != x {
                        rep.push("fiber-perm", format!("strict unit fails at {x}"));
                    }
                }
                _ => skipped += 1,
            }
            if let Some(g) = d.gamma_add(x, &zero)? {
                checked += 1;
                if g != d.t_identity(x)? {
                    rep.push("fiber-perm", format!("gamma({x},0) != id"));
                }
            } else {
                skipped += 1;
            }
            for y in &objs {
                let (Some(gxy), Some(gyx)) = (d.gamma_add(x, y)?, d.gamma_add(y, x)?) else {
                    skipped += 1;
                    continue;
                };
                checked += 1;
                let Some(xy) = d.add_obj(x, y)? else {
                    skipped += 1;
                    continue;
                };
                if d.t_compose(&gyx, &gxy)? != d.t_identity(&xy)? {
                    rep.push("fiber-perm", format!("gamma involution at ({x},{y})"));
                }
                for z in &objs {
                    let (Some(yz), Some(l1)) = (d.add_obj(y, z)?, d.add_obj(&xy.clone(), z)?)
                    else {
                        skipped += 1;
                        continue;
                    };
                    let Some(l2) = d.add_obj(x, &yz)? else {
                        skipped += 1;
                        continue;
                    };
                    checked += 1;
                    if l1 != l2 {
                        rep.push("fiber-perm", format!("strict associativity at ({x},{y},{z})"));
                    }
                    // Hexagon: γ_{x⊕y,z} = (γ_{x,z}⊕id_y)∘(id_x⊕γ_{y,z}).
                    let (Some(gxyz), Some(gyzc), Some(gxzc)) = (
                        d.gamma_add(&xy, z)?,
                        d.gamma_add(y, z)?,
                        d.gamma_add(x, z)?,
                    ) else {
                        skipped += 1;
                        continue;
                    };
                    let (Some(s1), Some(s2)) = (
                        d.add_mor(&d.t_identity(x)?, &gyzc)?,
                        d.add_mor(&gxzc, &d.t_identity(y)?)?,
                    ) else {
                        skipped += 1;
                        continue;
                    };
                    checked += 1;
                    if gxyz != d.t_compose(&s2, &s1)? {
                        rep.push("fiber-perm", format!("gamma hexagon at ({x},{y},{z})"));
                    }
                }
            }
        }
    }

    // (b.1)–(b.5) and mirrors: distributivity diagrams across fiber pairs.
    for c in &base_objs {
        let xs = d.fiber_objects(c)?;
        for cp in &base_objs {
            let ys = d.fiber_objects(cp)?;
            for x in &xs {
                for xp in &xs {
                    for y in &ys {
                        // b.2
                        'b2: {
                            if !within_budget!("b.2") {
                                skipped += 1;
                                break 'b2;
                            }
                            let (Some(xy), Some(xpy)) =
                                (d.tensor_obj(x, y)?, d.tensor_obj(xp, y)?)
                            else {
                                skipped += 1;
                                break 'b2;
                            };
                            let (Some(dl1), Some(dl2), Some(gadd), Some(gxxp)) = (
                                d.dl(x, xp, y)?,
                                d.dl(xp, x, y)?,
                                d.gamma_add(&xy, &xpy)?,
                                d.gamma_add(x, xp)?,
                            ) else {
                                skipped += 1;
                                break 'b2;
                            };
                            let Some(step) = d.tensor_mor(&gxxp, &d.t_identity(y)?)? else {
                                skipped += 1;
                                break 'b2;
                            };
                            checked += 1;
                            if d.t_compose(&dl2, &gadd)? != d.t_compose(&step, &dl1)? {
                                rep.push("b.2", format!("({x},{xp},{y})"));
                            }
                        }
                        // b.2r
                        'b2r: {
                            if !within_budget!("b.2r") {
                                skipped += 1;
                                break 'b2r;
                            }
                            let (Some(xy), Some(xyp)) =
                                (d.tensor_obj(y, x)?, d.tensor_obj(y, xp)?)
                            else {
                                skipped += 1;
                                break 'b2r;
                            };
                            let (Some(dr1), Some(dr2), Some(gadd), Some(gxxp)) = (
                                d.dr(y, x, xp)?,
                                d.dr(y, xp, x)?,
                                d.gamma_add(&xy, &xyp)?,
                                d.gamma_add(x, xp)?,
                            ) else {
                                skipped += 1;
                                break 'b2r;
                            };
                            let Some(step) = d.tensor_mor(&d.t_identity(y)?, &gxxp)? else {
                                skipped += 1;
                                break 'b2r;
                            };
                            checked += 1;
                            if d.t_compose(&dr2, &gadd)? != d.t_compose(&step, &dr1)? {
                                rep.push("b.2r", format!("({y},{x},{xp})"));
                            }
                        }
                        // b.5: γ^⊗_{x⊕x',y}∘dl = dr(y,x,x')∘(γ^⊗⊕γ^⊗).
                        'b5: {
                            if !within_budget!("b.5") {
                                skipped += 1;
                                break 'b5;
                            }
                            let Some(xaxp) = d.add_obj(x, xp)? else {
                                skipped += 1;
                                break 'b5;
                            };
                            let (Some(dl0), Some(dr0), Some(gsum), Some(gx), Some(gxp)) = (
                                d.dl(x, xp, y)?,
                                d.dr(y, x, xp)?,
                                d.gamma_mult(&xaxp, y)?,
                                d.gamma_mult(x, y)?,
                                d.gamma_mult(xp, y)?,
                            ) else {
                                skipped += 1;
                                break 'b5;
                            };
                            let Some(gg) = d.add_mor(&gx, &gxp)? else {
                                skipped += 1;
                                break 'b5;
                            };
                            checked += 1;
                            if d.t_compose(&gsum, &dl0)? != d.t_compose(&dr0, &gg)? {
                                rep.push("b.5", format!("({x},{xp},{y})"));
                            }
                        }
                        for xpp in &xs {
                            // b.1
                            'b1: {
                                if !within_budget!("b.1") {
                                    skipped += 1;
                                    break 'b1;
                                }
                                let (Some(xaxp), Some(xpaxpp)) =
                                    (d.add_obj(x, xp)?, d.add_obj(xp, xpp)?)
                                else {
                                    skipped += 1;
                                    break 'b1;
                                };
                                let (Some(xy), Some(xppy)) =
                                    (d.tensor_obj(x, y)?, d.tensor_obj(xpp, y)?)
                                else {
                                    skipped += 1;
                                    break 'b1;
                                };
                                let (Some(d1), Some(d2), Some(d3), Some(d4)) = (
                                    d.dl(x, xp, y)?,
                                    d.dl(&xaxp, xpp, y)?,
                                    d.dl(xp, xpp, y)?,
                                    d.dl(x, &xpaxpp, y)?,
                                ) else {
                                    skipped += 1;
                                    break 'b1;
                                };
                                let (Some(l1), Some(r1)) = (
                                    d.add_mor(&d1, &d.t_identity(&xppy)?)?,
                                    d.add_mor(&d.t_identity(&xy)?, &d3)?,
                                ) else {
                                    skipped += 1;
                                    break 'b1;
                                };
                                checked += 1;
                                if d.t_compose(&d2, &l1)? != d.t_compose(&d4, &r1)? {
                                    rep.push("b.1", format!("({x},{xp},{xpp},{y})"));
                                }
                            }
                            // b.1r mirror.
                            'b1r: {
                                if !within_budget!("b.1r") {
                                    skipped += 1;
                                    break 'b1r;
                                }
                                let (Some(head), Some(tail)) =
                                    (d.tensor_obj(y, x)?, d.tensor_obj(y, xpp)?)
                                else {
                                    skipped += 1;
                                    break 'b1r;
                                };
                                let (Some(xaxp), Some(xpaxpp)) =
                                    (d.add_obj(x, xp)?, d.add_obj(xp, xpp)?)
                                else {
                                    skipped += 1;
                                    break 'b1r;
                                };
                                let (Some(d1), Some(d2), Some(d3), Some(d4)) = (
                                    d.dr(y, x, xp)?,
                                    d.dr(y, &xaxp, xpp)?,
                                    d.dr(y, xp, xpp)?,
                                    d.dr(y, x, &xpaxpp)?,
                                ) else {
                                    skipped += 1;
                                    break 'b1r;
                                };
                                let (Some(l1), Some(r1)) = (
                                    d.add_mor(&d1, &d.t_identity(&tail)?)?,
                                    d.add_mor(&d.t_identity(&head)?, &d3)?,
                                ) else {
                                    skipped += 1;
                                    break 'b1r;
                                };
                                checked += 1;
                                if d.t_compose(&d2, &l1)? != d.t_compose(&d4, &r1)? {
                                    rep.push("b.1r", format!("({y};{x},{xp},{xpp})"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // (b.6)–(b.9): cross-fiber addition on morphisms.
    for f in &base_mors {
        let over_f = d.morphisms_over(f)?;
        // b.9 and zero functoriality.
        let zf = d.zero_mor(f)?;
        checked += 1;
        if d.proj_mor(&zf)? != *f {
            rep.push("b.9", format!("0_{f} does not lie over {f}"));
        }
        if d.t_dom(&zf)? != d.zero_obj(&d.base_dom(f)?)?
            || d.t_cod(&zf)? != d.zero_obj(&d.base_cod(f)?)?
        {
            rep.push("b.9", format!("0_{f} mistyped"));
        }
        for g in &over_f {
            match (d.add_mor(g, &zf)?, d.add_mor(&zf, g)?) {
                (Some(l), Some(r)) => {
                    checked += 1;
                    if &l != g || &r != g {
                        rep.push("b.9", format!("{g}⊕0_{f} = {l}, 0_{f}⊕{g} = {r}"));
                    }
                }
                _ => skipped += 1,
            }
        }
        for c in &base_objs {
            let idc = d.base_identity(c)?;
            if *f == idc {
                checked += 1;
                if zf != d.t_identity(&d.zero_obj(c)?)? {
                    rep.push("b.9", format!("0_id_{c} != id"));
                }
            }
        }
        for fp in &base_mors {
            if d.base_dom(fp)? != d.base_cod(f)? {
                continue;
            }
            let Some(fpf) = d.base_compose(fp, f)? else {
                skipped += 1;
                continue;
            };
            checked += 1;
            if d.zero_mor(&fpf)? != d.t_compose(&d.zero_mor(fp)?, &zf)? {
                rep.push("b.9", format!("0_({fp}∘{f}) != 0_{fp}∘0_{f}"));
            }
        }

        // b.7: associativity of ⊕ over f.
        for g in &over_f {
            for gp in &over_f {
                let Some(ggp) = d.add_mor(g, gp)? else {
                    skipped += 1;
                    continue;
                };
                for gpp in &over_f {
                    let Some(gpgpp) = d.add_mor(gp, gpp)? else {
                        skipped += 1;
                        continue;
                    };
                    match (d.add_mor(&ggp, gpp)?, d.add_mor(g, &gpgpp)?) {
                        (Some(l), Some(r)) => {
                            checked += 1;
                            if l != r {
                                rep.push("b.7", format!("({g},{gp},{gpp}) over {f}"));
                            }
                        }
                        _ => skipped += 1,
                    }
                }
                // b.8: γ^⊕ square.
                'b8: {
                    let (x, xp) = (d.t_dom(g)?, d.t_dom(gp)?);
                    let (y, yp) = (d.t_cod(g)?, d.t_cod(gp)?);
                    let (Some(gd), Some(gc)) = (d.gamma_add(&x, &xp)?, d.gamma_add(&y, &yp)?)
                    else {
                        skipped += 1;
                        break 'b8;
                    };
                    let Some(gpg) = d.add_mor(gp, g)? else {
                        skipped += 1;
                        break 'b8;
                    };
                    checked += 1;
                    if d.t_compose(&gc, &ggp)? != d.t_compose(&gpg, &gd)? {
                        rep.push("b.8", format!("({g},{gp}) over {f}"));
                    }
                }
            }
        }

        // b.6: (h∘g)⊕(h'∘g') = (h⊕h')∘(g⊕g'). Bucket the second layer by
        // its domain so only composable combinations are visited.
        for fp in &base_mors {
            if d.base_dom(fp)? != d.base_cod(f)? {
                continue;
            }
            if d.base_compose(fp, f)?.is_none() {
                skipped += 1;
                continue;
            }
            let over_fp = d.morphisms_over(fp)?;
            let mut by_dom: BTreeMap<ObjId, Vec<&MorId>> = BTreeMap::new();
            for h in &over_fp {
                by_dom.entry(d.t_dom(h)?).or_default().push(h);
            }
            for g in &over_f {
                let hs = by_dom.get(&d.t_cod(g)?);
                for gp in &over_f {
                    let Some(ggp) = d.add_mor(g, gp)? else {
                        skipped += 1;
                        continue;
                    };
                    let hps = by_dom.get(&d.t_cod(gp)?);
                    let (Some(hs), Some(hps)) = (hs, hps) else {
                        continue;
                    };
                    for h in hs {
                        for hp in hps {
                            if !within_budget!("b.6") {
                                skipped += 1;
                                continue;
                            }
                            let (Some(hhp), Some(sum)) = (
                                d.add_mor(h, hp)?,
                                d.add_mor(&d.t_compose(h, g)?, &d.t_compose(hp, gp)?)?,
                            ) else {
                                skipped += 1;
                                continue;
                            };
                            checked += 1;
                            if sum != d.t_compose(&hhp, &ggp)? {
                                rep.push("b.6", format!("({h}∘{g})⊕({hp}∘{gp})"));
                            }
                        }
                    }
                }
            }
        }
    }

    // b.10: naturality of dl/dr with morphisms over arbitrary base maps.
    for f in &base_mors {
        let over_f = d.morphisms_over(f)?;
        for fp in &base_mors {
            let over_fp = d.morphisms_over(fp)?;
            for g in &over_f {
                for gp in &over_f {
                    for h in &over_fp {
                        'b10: {
                            if !within_budget!("b.10") {
                                skipped += 1;
                                break 'b10;
                            }
                            let (x, x1) = (d.t_dom(g)?, d.t_cod(g)?);
                            let (xp, xp1) = (d.t_dom(gp)?, d.t_cod(gp)?);
                            let (y, y1) = (d.t_dom(h)?, d.t_cod(h)?);
                            let (Some(dl0), Some(dl1)) =
                                (d.dl(&x, &xp, &y)?, d.dl(&x1, &xp1, &y1)?)
                            else {
                                skipped += 1;
                                break 'b10;
                            };
                            let (Some(gh), Some(gph), Some(gsum)) = (
                                d.tensor_mor(g, h)?,
                                d.tensor_mor(gp, h)?,
                                d.add_mor(g, gp)?,
                            ) else {
                                skipped += 1;
                                break 'b10;
                            };
                            let (Some(lhs_mid), Some(rhs_mid)) =
                                (d.add_mor(&gh, &gph)?, d.tensor_mor(&gsum, h)?)
                            else {
                                skipped += 1;
                                break 'b10;
                            };
                            checked += 1;
                            if d.t_compose(&dl1, &lhs_mid)? != d.t_compose(&rhs_mid, &dl0)? {
                                rep.push("b.10", format!("dl at ({g},{gp};{h})"));
                            }
                        }
                        'b10r: {
                            if !within_budget!("b.10r") {
                                skipped += 1;
                                break 'b10r;
                            }
                            let (y, y1) = (d.t_dom(g)?, d.t_cod(g)?);
                            let (x, x1) = (d.t_dom(h)?, d.t_cod(h)?);
                            let (yp, yp1) = (d.t_dom(gp)?, d.t_cod(gp)?);
                            let (Some(dr0), Some(dr1)) =
                                (d.dr(&x, &y, &yp)?, d.dr(&x1, &y1, &yp1)?)
                            else {
                                skipped += 1;
                                break 'b10r;
                            };
                            let (Some(hg), Some(hgp), Some(gsum)) = (
                                d.tensor_mor(h, g)?,
                                d.tensor_mor(h, gp)?,
                                d.add_mor(g, gp)?,
                            ) else {
                                skipped += 1;
                                break 'b10r;
                            };
                            let (Some(lhs_mid), Some(rhs_mid)) =
                                (d.add_mor(&hg, &hgp)?, d.tensor_mor(h, &gsum)?)
                            else {
                                skipped += 1;
                                break 'b10r;
                            };
                            checked += 1;
                            if d.t_compose(&dr1, &lhs_mid)? != d.t_compose(&rhs_mid, &dr0)? {
                                rep.push("b.10", format!("dr at ({h};{g},{gp})"));
                            }
                        }
                    }
                }
            }
        }
    }

    // b.3 / b.3r / b.4: the a.3, a.3r, a.4 analogues instantiated over
    // fiber pairs and triples inside the window.
    for c in &base_objs {
        let xs = d.fiber_objects(c)?;
        for cp in &base_objs {
            let ys = d.fiber_objects(cp)?;
            // b.4 over (x, x', y, y').
            for x in &xs {
                for xp in &xs {
                    for y in &ys {
                        for yp in &ys {
                            'b4: {
                                if !within_budget!("b.4") {
                                    skipped += 1;
                                    break 'b4;
                                }
                                let need4 = (
                                    d.tensor_obj(x, y)?,
                                    d.tensor_obj(x, yp)?,
                                    d.tensor_obj(xp, y)?,
                                    d.tensor_obj(xp, yp)?,
                                );
                                let (Some(xy), Some(xyp), Some(xpy), Some(xpyp)) = need4 else {
                                    skipped += 1;
                                    break 'b4;
                                };
                                let (Some(yayp), Some(xaxp)) =
                                    (d.add_obj(y, yp)?, d.add_obj(x, xp)?)
                                else {
                                    skipped += 1;
                                    break 'b4;
                                };
                                let (Some(dl_sum), Some(drx), Some(drxp)) = (
                                    d.dl(x, xp, &yayp)?,
                                    d.dr(x, y, yp)?,
                                    d.dr(xp, y, yp)?,
                                ) else {
                                    skipped += 1;
                                    break 'b4;
                                };
                                let (Some(dr_sum), Some(dly), Some(dlyp), Some(gmid)) = (
                                    d.dr(&xaxp, y, yp)?,
                                    d.dl(x, xp, y)?,
                                    d.dl(x, xp, yp)?,
                                    d.gamma_add(&xyp, &xpy)?,
                                ) else {
                                    skipped += 1;
                                    break 'b4;
                                };
                                let (Some(top_sum), Some(bot_sum)) =
                                    (d.add_mor(&drx, &drxp)?, d.add_mor(&dly, &dlyp)?)
                                else {
                                    skipped += 1;
                                    break 'b4;
                                };
                                let Some(mid_inner) =
                                    d.add_mor(&gmid, &d.t_identity(&xpyp)?)?
                                else {
                                    skipped += 1;
                                    break 'b4;
                                };
                                let Some(mid) = d.add_mor(&d.t_identity(&xy)?, &mid_inner)?
                                else {
                                    skipped += 1;
                                    break 'b4;
                                };
                                checked += 1;
                                let top = d.t_compose(&dl_sum, &top_sum)?;
                                let bottom =
                                    d.t_compose(&dr_sum, &d.t_compose(&bot_sum, &mid)?)?;
                                if top != bottom {
                                    rep.push("b.4", format!("({x},{xp},{y},{yp})"));
                                }
                            }
                        }
                    }
                }
            }
            for z_base in &base_objs {
                let zs = d.fiber_objects(z_base)?;
                // b.3 over (x, x', y, z).
                for x in &xs {
                    for xp in &xs {
                        for y in &ys {
                            for z in &zs {
                                'b3: {
                                    if !within_budget!("b.3") {
                                        skipped += 1;
                                        break 'b3;
                                    }
                                    let (Some(yz), Some(xy), Some(xpy)) = (
                                        d.tensor_obj(y, z)?,
                                        d.tensor_obj(x, y)?,
                                        d.tensor_obj(xp, y)?,
                                    ) else {
                                        skipped += 1;
                                        break 'b3;
                                    };
                                    let (Some(lhs), Some(inner), Some(outer)) = (
                                        d.dl(x, xp, &yz)?,
                                        d.dl(x, xp, y)?,
                                        d.dl(&xy, &xpy, z)?,
                                    ) else {
                                        skipped += 1;
                                        break 'b3;
                                    };
                                    let Some(step) = d.tensor_mor(&inner, &d.t_identity(z)?)?
                                    else {
                                        skipped += 1;
                                        break 'b3;
                                    };
                                    checked += 1;
                                    if lhs != d.t_compose(&step, &outer)? {
                                        rep.push("b.3", format!("({x},{xp},{y},{z})"));
                                    }
                                }
                            }
                        }
                    }
                }
                // b.3r over (x, y, z, z').
                for x in &xs {
                    for y in &ys {
                        for z in &zs {
                            for zp in &zs {
                                'b3r: {
                                    if !within_budget!("b.3r") {
                                        skipped += 1;
                                        break 'b3r;
                                    }
                                    let (Some(xy), Some(yz), Some(yzp)) = (
                                        d.tensor_obj(x, y)?,
                                        d.tensor_obj(y, z)?,
                                        d.tensor_obj(y, zp)?,
                                    ) else {
                                        skipped += 1;
                                        break 'b3r;
                                    };
                                    let (Some(lhs), Some(outer), Some(inner)) = (
                                        d.dr(&xy, z, zp)?,
                                        d.dr(x, &yz, &yzp)?,
                                        d.dr(y, z, zp)?,
                                    ) else {
                                        skipped += 1;
                                        break 'b3r;
                                    };
                                    let Some(step) =
                                        d.tensor_mor(&d.t_identity(x)?, &inner)?
                                    else {
                                        skipped += 1;
                                        break 'b3r;
                                    };
                                    checked += 1;
                                    if lhs != d.t_compose(&step, &outer)? {
                                        rep.push("b.3r", format!("({x},{y},{z},{zp})"));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }


    // Projection strictness inside the window: Λ(x⊗y) = Λx⊗Λy and the same
    // on morphisms; Λ(0_c) = c; Λ of ⊕ lies over the common base morphism.
    for c in &base_objs {
        for cp in &base_objs {
            for x in d.fiber_objects(c)? {
                for y in d.fiber_objects(cp)? {
                    let Some(xy) = d.tensor_obj(&x, &y)? else {
                        skipped += 1;
                        continue;
                    };
                    let Some(ccp) = d.base_tensor_obj(c, cp)? else {
                        skipped += 1;
                        continue;
                    };
                    checked += 1;
                    if d.proj_obj(&xy)? != ccp {
                        rep.push("projection-strict", format!("Λ({x}⊗{y}) != {c}⊗{cp}"));
                    }
                }
            }
        }
    }
    for f in &base_mors {
        for g in &base_mors {
            let Some(fg_base) = d.base_tensor_mor(f, g)? else {
                skipped += 1;
                continue;
            };
            for m in d.morphisms_over(f)? {
                for n in d.morphisms_over(g)? {
                    let Some(mn) = d.tensor_mor(&m, &n)? else {
                        skipped += 1;
                        continue;
                    };
                    checked += 1;
                    if d.proj_mor(&mn)? != fg_base {
                        rep.push("projection-strict", format!("Λ({m}⊗{n}) != {f}⊗{g}"));
                    }
                }
            }
        }
    }

    let base_note = d.bounds_note().map(|b| format!("{b}; ")).unwrap_or_default();
    rep.bounds_note = Some(format!("{base_note}instances checked={checked} skipped={skipped}"));
    Ok(rep)
}

/// Concrete fibered-bipermutative data: full tables.
#[derive(Debug, Clone)]
pub struct FiberBipermData {
    pub fibered: crate::fibration::FiberedFunctor,
    pub base_perm: PermutativeStructure,
    pub total_perm: PermutativeStructure,
    /// `⊕_c` per base object, on the materialized fiber category.
    pub fiber_add: BTreeMap<ObjId, PermutativeStructure>,
    /// `(g, g') → g⊕g'` for morphisms over a common base morphism.
    pub cross_add: BTreeMap<(MorId, MorId), MorId>,
    /// `f → 0_f`.
    pub zero_mors: BTreeMap<MorId, MorId>,
    pub dl: BTreeMap<(ObjId, ObjId, ObjId), MorId>,
    pub dr: BTreeMap<(ObjId, ObjId, ObjId), MorId>,
}

impl FiberBipermData {
    fn fiber_struct(&self, c: &ObjId) -> Result<&PermutativeStructure> {
        self.fiber_add
            .get(c)
            .ok_or_else(|| Error::MissingEntry(format!("fiber structure at {c}")))
    }

    /// Component validations that only make sense for table data: the base
    /// and total permutative structures, the fibration property, strictness
    /// of the projection as a monoidal map, per-fiber structures, and
    /// agreement of cross-fiber ⊕ with the fiberwise tensor.
    pub fn validate_components(&self) -> Result<ValidationReport> {
        let mut rep = ValidationReport::new("fibered bipermutative components");
        rep.absorb("base:", validate_permutative(&self.base_perm)?);
        rep.absorb("total:", validate_permutative(&self.total_perm)?);
        rep.absorb("fibered:", crate::fibration::validate_fibered(&self.fibered)?);
        let lam_map = MonoidalMap {
            object_map: self.fibered.projection.object_map.clone(),
            morphism_map: self.fibered.projection.morphism_map.clone(),
            class: MapClass::Strict,
            lambda: BTreeMap::new(),
            eta: None,
        };
        rep.absorb(
            "projection:",
            validate_monoidal_map(&lam_map, &self.total_perm, &self.base_perm)?,
        );
        for c in &self.fibered.base.objects {
            let fs = self.fiber_struct(c)?;
            rep.absorb(&format!("fiber({c}):"), validate_permutative(fs)?);
            // cross_add restricted to the fiber must equal ⊕_c.
            rep.ran("cross-add-agreement");
            for ((g, gp), sum) in &fs.tensor.mor {
                match self.cross_add.get(&(g.clone(), gp.clone())) {
                    Some(s) if s == sum => {}
                    Some(s) => rep.push(
                        "cross-add-agreement",
                        format!("cross_add({g},{gp}) = {s} != fiber ⊕ {sum}"),
                    ),
                    None => rep.push(
                        "cross-add-agreement",
                        format!("cross_add missing fiber pair ({g},{gp})"),
                    ),
                }
            }
        }
        Ok(rep)
    }
}

impl FiberBipermLike for FiberBipermData {
    fn subject(&self) -> String {
        "fibered bipermutative data".into()
    }
    fn base_objects(&self) -> Result<Vec<ObjId>> {
        Ok(self.fibered.base.objects.clone())
    }
    fn base_morphisms(&self) -> Result<Vec<MorId>> {
        Ok(self.fibered.base.morphisms.iter().map(|r| r.id.clone()).collect())
    }
    fn base_dom(&self, f: &MorId) -> Result<ObjId> {
        self.fibered.base.dom(f)
    }
    fn base_cod(&self, f: &MorId) -> Result<ObjId> {
        self.fibered.base.cod(f)
    }
    fn base_compose(&self, g: &MorId, f: &MorId) -> Result<Option<MorId>> {
        Ok(Some(self.fibered.base.compose2(g, f)?))
    }
    fn base_identity(&self, c: &ObjId) -> Result<MorId> {
        self.fibered.base.identity_of(c)
    }
    fn base_unit(&self) -> ObjId {
        self.base_perm.unit.clone()
    }
    fn base_tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<Option<ObjId>> {
        Ok(Some(self.base_perm.tensor.on_obj(a, b)?))
    }
    fn base_tensor_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        Ok(Some(self.base_perm.tensor.on_mor(f, g)?))
    }
    fn fiber_objects(&self, c: &ObjId) -> Result<Vec<ObjId>> {
        Ok(self.fibered.objects_over(c))
    }
    fn morphisms_over(&self, f: &MorId) -> Result<Vec<MorId>> {
        Ok(self.fibered.morphisms_over(f))
    }
    fn t_dom(&self, m: &MorId) -> Result<ObjId> {
        self.fibered.total.dom(m)
    }
    fn t_cod(&self, m: &MorId) -> Result<ObjId> {
        self.fibered.total.cod(m)
    }
    fn t_compose(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        self.fibered.total.compose2(g, f)
    }
    fn t_identity(&self, x: &ObjId) -> Result<MorId> {
        self.fibered.total.identity_of(x)
    }
    fn proj_obj(&self, x: &ObjId) -> Result<ObjId> {
        self.fibered.proj_obj(x)
    }
    fn proj_mor(&self, m: &MorId) -> Result<MorId> {
        self.fibered.proj_mor(m)
    }
    fn unit_obj(&self) -> ObjId {
        self.total_perm.unit.clone()
    }
    fn tensor_obj(&self, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>> {
        Ok(Some(self.total_perm.tensor.on_obj(x, y)?))
    }
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        Ok(Some(self.total_perm.tensor.on_mor(f, g)?))
    }
    fn gamma_mult(&self, x: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        Ok(Some(self.total_perm.gamma_at(x, y)?))
    }
    fn zero_obj(&self, c: &ObjId) -> Result<ObjId> {
        Ok(self.fiber_struct(c)?.unit.clone())
    }
    fn zero_mor(&self, f: &MorId) -> Result<MorId> {
        self.zero_mors
            .get(f)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("0_{f}")))
    }
    fn add_obj(&self, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>> {
        let c = self.proj_obj(x)?;
        Ok(Some(self.fiber_struct(&c)?.tensor.on_obj(x, y)?))
    }
    fn add_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        Ok(Some(
            self.cross_add
                .get(&(f.clone(), g.clone()))
                .cloned()
                .ok_or_else(|| Error::MissingEntry(format!("cross_add({f},{g})")))?,
        ))
    }
    fn gamma_add(&self, x: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        let c = self.proj_obj(x)?;
        Ok(Some(self.fiber_struct(&c)?.gamma_at(x, y)?))
    }
    fn dl(&self, x: &ObjId, xp: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        Ok(Some(
            self.dl
                .get(&(x.clone(), xp.clone(), y.clone()))
                .cloned()
                .ok_or_else(|| Error::MissingEntry(format!("dl({x},{xp},{y})")))?,
        ))
    }
    fn dr(&self, x: &ObjId, y: &ObjId, yp: &ObjId) -> Result<Option<MorId>> {
        Ok(Some(
            self.dr
                .get(&(x.clone(), y.clone(), yp.clone()))
                .cloned()
                .ok_or_else(|| Error::MissingEntry(format!("dr({x},{y},{yp})")))?,
        ))
    }
}

/// Wrap a bipermutative structure as fibered data over the terminal base;
/// the fibered validator must then reduce to the plain one.
pub fn biperm_over_terminal(d: &BipermData) -> Result<FiberBipermData> {
    use crate::fincat::FunctorData;
    use std::sync::Arc;
    let base_cat = Arc::new(crate::fincat::terminal("pt"));
    let base_perm = crate::monostruct::terminal_permutative("pt");
    let cat = d.additive.base.clone();
    let mut object_map = BTreeMap::new();
    for o in &cat.objects {
        object_map.insert(o.clone(), ObjId::from("pt"));
    }
    let mut morphism_map = BTreeMap::new();
    for r in &cat.morphisms {
        morphism_map.insert(r.id.clone(), MorId::from("id_pt"));
    }
    let projection = FunctorData {
        source: cat.clone(),
        target: base_cat.clone(),
        object_map,
        morphism_map,
    };
    let fibered = crate::fibration::FiberedFunctor::new(cat.clone(), base_cat, projection);
    let mut cross_add = BTreeMap::new();
    for (k, v) in &d.additive.tensor.mor {
        cross_add.insert(k.clone(), v.clone());
    }
    let mut zero_mors = BTreeMap::new();
    zero_mors.insert(MorId::from("id_pt"), cat.identity_of(&d.additive.unit)?);
    let fiber_add = [(ObjId::from("pt"), d.additive.clone())].into();
    Ok(FiberBipermData {
        fibered,
        base_perm,
        total_perm: d.multiplicative.clone(),
        fiber_add,
        cross_add,
        zero_mors,
        dl: d.dl.clone(),
        dr: d.dr.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::{mor, obj};

    #[test]
    fn discrete_rigs_are_bipermutative() {
        for d in [z2_rig(), bool_rig()] {
            let rep = validate_bipermutative(&d).unwrap();
            assert!(rep.is_valid(), "{rep}");
        }
    }

    #[test]
    fn terminal_biperm_is_valid() {
        let d = discrete_rig(&["e"], &|_, _| "e".into(), "e", &|_, _| "e".into(), "e").unwrap();
        assert!(validate_bipermutative(&d).unwrap().is_valid());
    }

    #[test]
    fn mistyped_dl_is_structural_error() {
        let mut d = z2_rig();
        // Retarget one dl component to an identity with the wrong codomain.
        d.dl.insert((obj("1"), obj("1"), obj("1")), mor("id_1"));
        // (1⊗1)⊕(1⊗1) = 0 and (1⊕1)⊗1 = 0, so id_1 : 1→1 is mistyped.
        assert!(matches!(
            validate_bipermutative(&d),
            Err(Error::Rejected(_))
        ));
    }

    #[test]
    fn fibered_validator_over_terminal_matches_plain() {
        for d in [z2_rig(), bool_rig()] {
            let plain = validate_bipermutative(&d).unwrap();
            let fib = biperm_over_terminal(&d).unwrap();
            assert!(fib.validate_components().unwrap().is_valid());
            let fibrep = validate_fibered_biperm(&fib).unwrap();
            assert_eq!(plain.is_valid(), fibrep.is_valid(), "{plain} vs {fibrep}");
            assert!(fibrep.is_valid(), "{fibrep}");
        }
    }

    #[test]
    fn corrupt_zero_functoriality_detected() {
        let d = z2_rig();
        let mut fib = biperm_over_terminal(&d).unwrap();
        // 0_{id∘id} = 0_id∘0_id becomes wrong if 0_id is redirected to a
        // non-idempotent morphism; in a discrete category the only option is
        // a different identity, which breaks typing instead.
        fib.zero_mors.insert(MorId::from("id_pt"), mor("id_1"));
        let rep = validate_fibered_biperm(&fib).unwrap();
        assert!(!rep.is_valid());
        assert!(rep.failed("b.9"), "{rep}");
    }
}
