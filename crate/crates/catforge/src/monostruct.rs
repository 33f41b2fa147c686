//! Symmetric monoidal and permutative structures on finite categories, and
//! the three map classes (strict, lax_*, lax) with their coherence checkers.
//!
//! Tensors are stored as total lookup tables on object and morphism ids; all
//! coherence diagrams are instantiated over every object tuple of the base —
//! no sampling, so these checkers are oracle-grade on small categories.

use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::ids::{MorId, ObjId};
use crate::rebracket::MonoidalOps;
use crate::report::ValidationReport;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Tensor tables: the object and morphism parts of a functor `C×C → C`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorTables {
    pub obj: BTreeMap<(ObjId, ObjId), ObjId>,
    pub mor: BTreeMap<(MorId, MorId), MorId>,
}

impl TensorTables {
    pub fn on_obj(&self, a: &ObjId, b: &ObjId) -> Result<ObjId> {
        self.obj
            .get(&(a.clone(), b.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("tensor({a}, {b})")))
    }

    pub fn on_mor(&self, f: &MorId, g: &MorId) -> Result<MorId> {
        self.mor
            .get(&(f.clone(), g.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("tensor({f}, {g})")))
    }
}

/// A permutative structure: strictly associative tensor, strict unit, and a
/// symmetry `γ` subject to the three diagrams of the definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutativeStructure {
    pub base: Arc<FinCategory>,
    pub tensor: TensorTables,
    pub unit: ObjId,
    /// `γ_{x,y} : x⊗y → y⊗x`.
    pub gamma: BTreeMap<(ObjId, ObjId), MorId>,
}

impl PermutativeStructure {
    pub fn gamma_at(&self, x: &ObjId, y: &ObjId) -> Result<MorId> {
        self.gamma
            .get(&(x.clone(), y.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("gamma({x}, {y})")))
    }

    /// Right-nested product of a list of objects (unit for the empty list).
    pub fn tensor_all(&self, objs: &[ObjId]) -> Result<ObjId> {
        match objs {
            [] => Ok(self.unit.clone()),
            [x] => Ok(x.clone()),
            [x, rest @ ..] => {
                let r = self.tensor_all(rest)?;
                self.tensor.on_obj(x, &r)
            }
        }
    }
}

/// A symmetric monoidal structure with explicit associator and unitor tables
/// (identity tables in the strict case, so the strictifier consumes one
/// uniform type).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMonoidalStructure {
    pub base: Arc<FinCategory>,
    pub tensor: TensorTables,
    pub unit: ObjId,
    pub gamma: BTreeMap<(ObjId, ObjId), MorId>,
    /// `α_{a,b,c} : (a⊗b)⊗c → a⊗(b⊗c)`.
    pub associator: BTreeMap<(ObjId, ObjId, ObjId), MorId>,
    /// `λ_a : 1⊗a → a`.
    pub left_unitor: BTreeMap<ObjId, MorId>,
    /// `ρ_a : a⊗1 → a`.
    pub right_unitor: BTreeMap<ObjId, MorId>,
}

impl SymMonoidalStructure {
    /// View a permutative structure as a symmetric monoidal one with
    /// identity associator/unitors.
    pub fn from_permutative(p: &PermutativeStructure) -> Result<SymMonoidalStructure> {
        let mut associator = BTreeMap::new();
        for a in &p.base.objects {
            for b in &p.base.objects {
                for c in &p.base.objects {
                    let abc = p.tensor.on_obj(&p.tensor.on_obj(a, b)?, c)?;
                    associator.insert(
                        (a.clone(), b.clone(), c.clone()),
                        p.base.identity_of(&abc)?,
                    );
                }
            }
        }
        let mut left_unitor = BTreeMap::new();
        let mut right_unitor = BTreeMap::new();
        for a in &p.base.objects {
            left_unitor.insert(a.clone(), p.base.identity_of(a)?);
            right_unitor.insert(a.clone(), p.base.identity_of(a)?);
        }
        Ok(SymMonoidalStructure {
            base: p.base.clone(),
            tensor: p.tensor.clone(),
            unit: p.unit.clone(),
            gamma: p.gamma.clone(),
            associator,
            left_unitor,
            right_unitor,
        })
    }
}

/// [`MonoidalOps`] view of a symmetric monoidal structure.
pub struct SymMonView<'a> {
    m: &'a SymMonoidalStructure,
}

impl<'a> SymMonView<'a> {
    pub fn new(m: &'a SymMonoidalStructure) -> Self {
        SymMonView { m }
    }
}

impl MonoidalOps for SymMonView<'_> {
    fn unit_obj(&self) -> ObjId {
        self.m.unit.clone()
    }
    fn tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<ObjId> {
        self.m.tensor.on_obj(a, b)
    }
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<MorId> {
        self.m.tensor.on_mor(f, g)
    }
    fn compose(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        self.m.base.compose2(g, f)
    }
    fn identity(&self, a: &ObjId) -> Result<MorId> {
        self.m.base.identity_of(a)
    }
    fn associator(&self, a: &ObjId, b: &ObjId, c: &ObjId) -> Result<MorId> {
        self.m
            .associator
            .get(&(a.clone(), b.clone(), c.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("associator({a},{b},{c})")))
    }
    fn left_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.m
            .left_unitor
            .get(a)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("left_unitor({a})")))
    }
    fn right_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.m
            .right_unitor
            .get(a)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("right_unitor({a})")))
    }
    fn symmetry(&self, a: &ObjId, b: &ObjId) -> Result<MorId> {
        self.m
            .gamma
            .get(&(a.clone(), b.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("gamma({a},{b})")))
    }
    fn invert(&self, m: &MorId) -> Result<MorId> {
        self.m
            .base
            .inverse(m)
            .ok_or_else(|| Error::Precondition(format!("morphism {m} is not invertible")))
    }
}

/// [`MonoidalOps`] view of a permutative structure (identity coherences).
pub struct PermView<'a> {
    p: &'a PermutativeStructure,
}

impl<'a> PermView<'a> {
    pub fn new(p: &'a PermutativeStructure) -> Self {
        PermView { p }
    }
}

impl MonoidalOps for PermView<'_> {
    fn unit_obj(&self) -> ObjId {
        self.p.unit.clone()
    }
    fn tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<ObjId> {
        self.p.tensor.on_obj(a, b)
    }
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<MorId> {
        self.p.tensor.on_mor(f, g)
    }
    fn compose(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        self.p.base.compose2(g, f)
    }
    fn identity(&self, a: &ObjId) -> Result<MorId> {
        self.p.base.identity_of(a)
    }
    fn associator(&self, a: &ObjId, b: &ObjId, c: &ObjId) -> Result<MorId> {
        let abc = self.p.tensor.on_obj(&self.p.tensor.on_obj(a, b)?, c)?;
        self.p.base.identity_of(&abc)
    }
    fn left_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.p.base.identity_of(a)
    }
    fn right_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.p.base.identity_of(a)
    }
    fn symmetry(&self, a: &ObjId, b: &ObjId) -> Result<MorId> {
        self.p.gamma_at(a, b)
    }
    fn invert(&self, m: &MorId) -> Result<MorId> {
        self.p
            .base
            .inverse(m)
            .ok_or_else(|| Error::Precondition(format!("morphism {m} is not invertible")))
    }
}

/// Map classes between permutative categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    Strict,
    LaxStar,
    Lax,
}

/// A monoidal map: an underlying functor plus the structure maps its class
/// requires (`λ` for the lax classes, `η` for lax).
#[derive(Debug, Clone)]
pub struct MonoidalMap {
    pub object_map: BTreeMap<ObjId, ObjId>,
    pub morphism_map: BTreeMap<MorId, MorId>,
    pub class: MapClass,
    /// `λ_{x,y} : f(x)⊗f(y) → f(x⊗y)` in the target.
    pub lambda: BTreeMap<(ObjId, ObjId), MorId>,
    /// `η : 1 → f(1)` (lax only).
    pub eta: Option<MorId>,
}

impl MonoidalMap {
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

    pub fn lambda_at(&self, x: &ObjId, y: &ObjId) -> Result<MorId> {
        self.lambda
            .get(&(x.clone(), y.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("lambda({x}, {y})")))
    }

    /// The identity map on a permutative base, as a strict monoidal map.
    pub fn identity_on(p: &PermutativeStructure) -> MonoidalMap {
        MonoidalMap {
            object_map: p.base.objects.iter().map(|o| (o.clone(), o.clone())).collect(),
            morphism_map: p
                .base
                .morphisms
                .iter()
                .map(|r| (r.id.clone(), r.id.clone()))
                .collect(),
            class: MapClass::Strict,
            lambda: BTreeMap::new(),
            eta: None,
        }
    }
}

/// Exhaustively check a permutative structure: functoriality of the tensor,
/// strict associativity and unit, and the three `γ` diagrams.
pub fn validate_permutative(p: &PermutativeStructure) -> Result<ValidationReport> {
    p.base.check_structure()?;
    let cat = &p.base;
    let mut rep = ValidationReport::new("permutative structure");
    for c in [
        "tensor-totality",
        "tensor-functoriality",
        "strict-associativity",
        "strict-unit",
        "gamma-iso",
        "gamma-naturality",
        "gamma-unit",
        "gamma-involution",
        "gamma-hexagon",
    ] {
        rep.ran(c);
    }

    if !cat.has_object(&p.unit) {
        return Err(Error::UnknownObject(p.unit.clone()));
    }

    // Totality and typing of the tensor tables.
    for a in &cat.objects {
        for b in &cat.objects {
            match p.tensor.obj.get(&(a.clone(), b.clone())) {
                None => rep.push("tensor-totality", format!("tensor({a},{b}) undefined")),
                Some(v) if !cat.has_object(v) => {
                    rep.push("tensor-totality", format!("tensor({a},{b}) = {v} unknown"))
                }
                _ => {}
            }
        }
    }
    for f in &cat.morphisms {
        for g in &cat.morphisms {
            match p.tensor.mor.get(&(f.id.clone(), g.id.clone())) {
                None => rep.push(
                    "tensor-totality",
                    format!("tensor({},{}) undefined", f.id, g.id),
                ),
                Some(v) => {
                    let Ok(r) = cat.morphism(v) else {
                        rep.push("tensor-totality", format!("tensor value {v} unknown"));
                        continue;
                    };
                    let dd = p.tensor.obj.get(&(f.dom.clone(), g.dom.clone()));
                    let cc = p.tensor.obj.get(&(f.cod.clone(), g.cod.clone()));
                    if dd.is_some() && cc.is_some() && (Some(&r.dom) != dd || Some(&r.cod) != cc) {
                        rep.push(
                            "tensor-totality",
                            format!("tensor({},{}) = {v} has wrong (co)domain", f.id, g.id),
                        );
                    }
                }
            }
        }
    }
    if !rep.is_valid() {
        return Ok(rep);
    }

    // Functoriality: identities and composition.
    for a in &cat.objects {
        for b in &cat.objects {
            let lhs = p.tensor.on_mor(&cat.identity_of(a)?, &cat.identity_of(b)?)?;
            let rhs = cat.identity_of(&p.tensor.on_obj(a, b)?)?;
            if lhs != rhs {
                rep.push(
                    "tensor-functoriality",
                    format!("id_{a}⊗id_{b} = {lhs} != identity {rhs}"),
                );
            }
        }
    }
    for ((g1, f1), h1) in &cat.compose {
        for ((g2, f2), h2) in &cat.compose {
            let lhs = p.tensor.on_mor(h1, h2)?;
            let rhs = cat.compose2(&p.tensor.on_mor(g1, g2)?, &p.tensor.on_mor(f1, f2)?)?;
            if lhs != rhs {
                rep.push(
                    "tensor-functoriality",
                    format!("interchange fails at (({g1}∘{f1}), ({g2}∘{f2}))"),
                );
            }
        }
    }

    // Strict associativity on objects and morphisms.
    for a in &cat.objects {
        for b in &cat.objects {
            for c in &cat.objects {
                let l = p.tensor.on_obj(&p.tensor.on_obj(a, b)?, c)?;
                let r = p.tensor.on_obj(a, &p.tensor.on_obj(b, c)?)?;
                if l != r {
                    rep.push("strict-associativity", format!("({a}⊗{b})⊗{c} = {l} != {r}"));
                }
            }
        }
    }
    for f in &cat.morphisms {
        for g in &cat.morphisms {
            for h in &cat.morphisms {
                let l = p.tensor.on_mor(&p.tensor.on_mor(&f.id, &g.id)?, &h.id)?;
                let r = p.tensor.on_mor(&f.id, &p.tensor.on_mor(&g.id, &h.id)?)?;
                if l != r {
                    rep.push(
                        "strict-associativity",
                        format!("({}⊗{})⊗{} = {l} != {r}", f.id, g.id, h.id),
                    );
                }
            }
        }
    }

    // Strict unit on objects and morphisms.
    for a in &cat.objects {
        let l = p.tensor.on_obj(a, &p.unit)?;
        let r = p.tensor.on_obj(&p.unit, a)?;
        if &l != a || &r != a {
            rep.push("strict-unit", format!("{a}⊗1 = {l}, 1⊗{a} = {r}"));
        }
    }
    let unit_id = cat.identity_of(&p.unit)?;
    for f in &cat.morphisms {
        let l = p.tensor.on_mor(&f.id, &unit_id)?;
        let r = p.tensor.on_mor(&unit_id, &f.id)?;
        if l != f.id || r != f.id {
            rep.push("strict-unit", format!("{}⊗id_1 = {l}, id_1⊗{} = {r}", f.id, f.id));
        }
    }

    // γ components: typing, isomorphism, naturality, and the three diagrams.
    for x in &cat.objects {
        for y in &cat.objects {
            let Ok(g) = p.gamma_at(x, y) else {
                rep.push("gamma-iso", format!("gamma({x},{y}) missing"));
                continue;
            };
            let Ok(r) = cat.morphism(&g) else {
                rep.push("gamma-iso", format!("gamma({x},{y}) = {g} unknown"));
                continue;
            };
            if r.dom != p.tensor.on_obj(x, y)? || r.cod != p.tensor.on_obj(y, x)? {
                rep.push("gamma-iso", format!("gamma({x},{y}) has wrong (co)domain"));
            } else if cat.inverse(&g).is_none() {
                rep.push("gamma-iso", format!("gamma({x},{y}) = {g} not invertible"));
            }
        }
    }
    if rep.is_valid() {
        for f in &cat.morphisms {
            for g in &cat.morphisms {
                // γ_{x',y'} ∘ (f⊗g) = (g⊗f) ∘ γ_{x,y}
                let lhs = cat.compose2(&p.gamma_at(&f.cod, &g.cod)?, &p.tensor.on_mor(&f.id, &g.id)?)?;
                let rhs = cat.compose2(&p.tensor.on_mor(&g.id, &f.id)?, &p.gamma_at(&f.dom, &g.dom)?)?;
                if lhs != rhs {
                    rep.push(
                        "gamma-naturality",
                        format!("square at ({}, {}) fails", f.id, g.id),
                    );
                }
            }
        }
        for x in &cat.objects {
            // First diagram: γ over the unit is the identity.
            let g = p.gamma_at(x, &p.unit)?;
            if g != cat.identity_of(x)? {
                rep.push("gamma-unit", format!("gamma({x},1) = {g} != id"));
            }
        }
        for x in &cat.objects {
            for y in &cat.objects {
                // Second diagram: γ∘γ = id.
                let roundtrip = cat.compose2(&p.gamma_at(y, x)?, &p.gamma_at(x, y)?)?;
                if roundtrip != cat.identity_of(&p.tensor.on_obj(x, y)?)? {
                    rep.push("gamma-involution", format!("gamma({y},{x})∘gamma({x},{y}) != id"));
                }
            }
        }
        for x in &cat.objects {
            for y in &cat.objects {
                for z in &cat.objects {
                    // Third diagram: γ_{x⊗y,z} = (γ_{x,z}⊗id_y)∘(id_x⊗γ_{y,z}).
                    let lhs = p.gamma_at(&p.tensor.on_obj(x, y)?, z)?;
                    let step1 = p.tensor.on_mor(&cat.identity_of(x)?, &p.gamma_at(y, z)?)?;
                    let step2 = p.tensor.on_mor(&p.gamma_at(x, z)?, &cat.identity_of(y)?)?;
                    let rhs = cat.compose2(&step2, &step1)?;
                    if lhs != rhs {
                        rep.push("gamma-hexagon", format!("instance ({x},{y},{z}) fails"));
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Check a non-strict symmetric monoidal structure: natural iso components,
/// pentagon, hexagon, unitor triangle, and symmetry involution.
pub fn validate_sym_monoidal(m: &SymMonoidalStructure) -> Result<ValidationReport> {
    m.base.check_structure()?;
    let cat = &m.base;
    let view = SymMonView::new(m);
    let mut rep = ValidationReport::new("symmetric monoidal structure");
    for c in [
        "tensor-functoriality",
        "component-iso",
        "naturality",
        "pentagon",
        "triangle",
        "hexagon",
        "symmetry-involution",
    ] {
        rep.ran(c);
    }

    for a in &cat.objects {
        for b in &cat.objects {
            let lhs = m.tensor.on_mor(&cat.identity_of(a)?, &cat.identity_of(b)?)?;
            if lhs != cat.identity_of(&m.tensor.on_obj(a, b)?)? {
                rep.push("tensor-functoriality", format!("id⊗id at ({a},{b})"));
            }
        }
    }
    for ((g1, f1), h1) in &cat.compose {
        for ((g2, f2), h2) in &cat.compose {
            let lhs = m.tensor.on_mor(h1, h2)?;
            let rhs = cat.compose2(&m.tensor.on_mor(g1, g2)?, &m.tensor.on_mor(f1, f2)?)?;
            if lhs != rhs {
                rep.push(
                    "tensor-functoriality",
                    format!("interchange at (({g1}∘{f1}),({g2}∘{f2}))"),
                );
            }
        }
    }

    // All structure components must be isomorphisms with the right typing.
    for a in &cat.objects {
        for b in &cat.objects {
            for c in &cat.objects {
                let alpha = view.associator(a, b, c)?;
                let r = cat.morphism(&alpha)?;
                let want_dom = m.tensor.on_obj(&m.tensor.on_obj(a, b)?, c)?;
                let want_cod = m.tensor.on_obj(a, &m.tensor.on_obj(b, c)?)?;
                if r.dom != want_dom || r.cod != want_cod || cat.inverse(&alpha).is_none() {
                    rep.push("component-iso", format!("associator({a},{b},{c})"));
                }
            }
            let g = view.symmetry(a, b)?;
            let r = cat.morphism(&g)?;
            if r.dom != m.tensor.on_obj(a, b)? || r.cod != m.tensor.on_obj(b, a)? || cat.inverse(&g).is_none() {
                rep.push("component-iso", format!("gamma({a},{b})"));
            }
        }
        let l = view.left_unitor(a)?;
        let rl = cat.morphism(&l)?;
        if rl.dom != m.tensor.on_obj(&m.unit, a)? || &rl.cod != a || cat.inverse(&l).is_none() {
            rep.push("component-iso", format!("left_unitor({a})"));
        }
        let r = view.right_unitor(a)?;
        let rr = cat.morphism(&r)?;
        if rr.dom != m.tensor.on_obj(a, &m.unit)? || &rr.cod != a || cat.inverse(&r).is_none() {
            rep.push("component-iso", format!("right_unitor({a})"));
        }
    }
    if !rep.is_valid() {
        return Ok(rep);
    }

    // Naturality of associator and γ on all morphism tuples.
    for f in &cat.morphisms {
        for g in &cat.morphisms {
            let lhs = cat.compose2(&view.symmetry(&f.cod, &g.cod)?, &m.tensor.on_mor(&f.id, &g.id)?)?;
            let rhs = cat.compose2(&m.tensor.on_mor(&g.id, &f.id)?, &view.symmetry(&f.dom, &g.dom)?)?;
            if lhs != rhs {
                rep.push("naturality", format!("gamma square at ({},{})", f.id, g.id));
            }
            for h in &cat.morphisms {
                let lhs = cat.compose2(
                    &view.associator(&f.cod, &g.cod, &h.cod)?,
                    &m.tensor.on_mor(&m.tensor.on_mor(&f.id, &g.id)?, &h.id)?,
                )?;
                let rhs = cat.compose2(
                    &m.tensor.on_mor(&f.id, &m.tensor.on_mor(&g.id, &h.id)?)?,
                    &view.associator(&f.dom, &g.dom, &h.dom)?,
                )?;
                if lhs != rhs {
                    rep.push(
                        "naturality",
                        format!("associator square at ({},{},{})", f.id, g.id, h.id),
                    );
                }
            }
        }
    }

    // Pentagon, triangle, hexagon, involution over all object tuples.
    for a in &cat.objects {
        for b in &cat.objects {
            let ab = m.tensor.on_obj(a, b)?;
            // Triangle: (a⊗1)⊗b --α--> a⊗(1⊗b) --id⊗λ--> a⊗b equals ρ⊗id.
            let alpha = view.associator(a, &m.unit, b)?;
            let lam = m.tensor.on_mor(&cat.identity_of(a)?, &view.left_unitor(b)?)?;
            let lhs = cat.compose2(&lam, &alpha)?;
            let rhs = m.tensor.on_mor(&view.right_unitor(a)?, &cat.identity_of(b)?)?;
            if lhs != rhs {
                rep.push("triangle", format!("({a},{b})"));
            }
            // Symmetry involution γ_{b,a}∘γ_{a,b} = id.
            let round = cat.compose2(&view.symmetry(b, a)?, &view.symmetry(a, b)?)?;
            if round != cat.identity_of(&ab)? {
                rep.push("symmetry-involution", format!("({a},{b})"));
            }
            for c in &cat.objects {
                // Hexagon: α∘γ∘α = (id⊗γ)∘α∘(γ⊗id) : (a⊗b)⊗c → b⊗(c⊗a).
                let bc = m.tensor.on_obj(b, c)?;
                let lhs = cat.compose2(
                    &view.associator(b, c, a)?,
                    &cat.compose2(&view.symmetry(a, &bc)?, &view.associator(a, b, c)?)?,
                )?;
                let rhs = cat.compose2(
                    &m.tensor.on_mor(&cat.identity_of(b)?, &view.symmetry(a, c)?)?,
                    &cat.compose2(
                        &view.associator(b, a, c)?,
                        &m.tensor.on_mor(&view.symmetry(a, b)?, &cat.identity_of(c)?)?,
                    )?,
                )?;
                if lhs != rhs {
                    rep.push("hexagon", format!("({a},{b},{c})"));
                }
                for d in &cat.objects {
                    // Pentagon.
                    let cd = m.tensor.on_obj(c, d)?;
                    let top = cat.compose2(
                        &view.associator(a, b, &cd)?,
                        &view.associator(&ab, c, d)?,
                    )?;
                    let bottom = cat.compose2(
                        &m.tensor.on_mor(&cat.identity_of(a)?, &view.associator(b, c, d)?)?,
                        &cat.compose2(
                            &view.associator(a, &bc, d)?,
                            &m.tensor.on_mor(&view.associator(a, b, c)?, &cat.identity_of(d)?)?,
                        )?,
                    )?;
                    if top != bottom {
                        rep.push("pentagon", format!("({a},{b},{c},{d})"));
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Options for the monoidal-map checker. The lax class's unit coherences are
/// stated loosely in the literature; the two standard unit triangles are
/// checked by default and can be switched off.
#[derive(Debug, Clone, Copy)]
pub struct MapCheckOptions {
    pub check_unit_triangles: bool,
}

impl Default for MapCheckOptions {
    fn default() -> Self {
        MapCheckOptions {
            check_unit_triangles: true,
        }
    }
}

/// Check the coherence diagrams of a monoidal map for its declared class.
pub fn validate_monoidal_map(
    m: &MonoidalMap,
    source: &PermutativeStructure,
    target: &PermutativeStructure,
) -> Result<ValidationReport> {
    validate_monoidal_map_with(m, source, target, MapCheckOptions::default())
}

pub fn validate_monoidal_map_with(
    m: &MonoidalMap,
    source: &PermutativeStructure,
    target: &PermutativeStructure,
    opts: MapCheckOptions,
) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("monoidal map");
    rep.ran("functor");

    // Underlying functor must be valid.
    let fd = crate::fincat::FunctorData {
        source: source.base.clone(),
        target: target.base.clone(),
        object_map: m.object_map.clone(),
        morphism_map: m.morphism_map.clone(),
    };
    let frep = crate::fincat::validate_functor(&fd)?;
    if !frep.is_valid() {
        rep.absorb("functor:", frep);
        return Ok(rep);
    }

    let scat = &source.base;
    let tcat = &target.base;

    match m.class {
        MapClass::Strict => {
            for c in ["strict-tensor", "strict-unit", "strict-gamma"] {
                rep.ran(c);
            }
            for x in &scat.objects {
                for y in &scat.objects {
                    let lhs = m.on_obj(&source.tensor.on_obj(x, y)?)?;
                    let rhs = target.tensor.on_obj(&m.on_obj(x)?, &m.on_obj(y)?)?;
                    if lhs != rhs {
                        rep.push("strict-tensor", format!("f({x}⊗{y}) = {lhs} != {rhs}"));
                    }
                }
            }
            for f in &scat.morphisms {
                for g in &scat.morphisms {
                    let lhs = m.on_mor(&source.tensor.on_mor(&f.id, &g.id)?)?;
                    let rhs = target.tensor.on_mor(&m.on_mor(&f.id)?, &m.on_mor(&g.id)?)?;
                    if lhs != rhs {
                        rep.push("strict-tensor", format!("f({}⊗{}) != f⊗f", f.id, g.id));
                    }
                }
            }
            if m.on_obj(&source.unit)? != target.unit {
                rep.push("strict-unit", format!("f(1) = {} != 1", m.on_obj(&source.unit)?));
            }
            for x in &scat.objects {
                for y in &scat.objects {
                    let lhs = m.on_mor(&source.gamma_at(x, y)?)?;
                    let rhs = target.gamma_at(&m.on_obj(x)?, &m.on_obj(y)?)?;
                    if lhs != rhs {
                        rep.push("strict-gamma", format!("f(gamma({x},{y})) != gamma"));
                    }
                }
            }
        }
        MapClass::LaxStar | MapClass::Lax => {
            for c in [
                "lambda-typing",
                "lambda-naturality",
                "lambda-associativity",
                "lambda-gamma",
            ] {
                rep.ran(c);
            }
            let lax_star = m.class == MapClass::LaxStar;
            if lax_star {
                rep.ran("unit-strictness");
                if m.on_obj(&source.unit)? != target.unit {
                    rep.push("unit-strictness", format!("f(1) = {}", m.on_obj(&source.unit)?));
                }
            }
            // λ components defined and typed.
            for x in &scat.objects {
                for y in &scat.objects {
                    let Ok(l) = m.lambda_at(x, y) else {
                        return Err(Error::MissingEntry(format!(
                            "lambda({x},{y}) required for lax classes"
                        )));
                    };
                    let r = tcat.morphism(&l)?;
                    let want_dom = target.tensor.on_obj(&m.on_obj(x)?, &m.on_obj(y)?)?;
                    let want_cod = m.on_obj(&source.tensor.on_obj(x, y)?)?;
                    if r.dom != want_dom || r.cod != want_cod {
                        rep.push("lambda-typing", format!("lambda({x},{y}) mistyped"));
                        continue;
                    }
                    if lax_star && (x == &source.unit || y == &source.unit) {
                        // λ = id when an argument is the unit.
                        if l != tcat.identity_of(&want_dom)? {
                            rep.push("lambda-typing", format!("lambda({x},{y}) != id at unit"));
                        }
                    }
                }
            }
            if !rep.is_valid() {
                return Ok(rep);
            }
            // Naturality of λ.
            for f in &scat.morphisms {
                for g in &scat.morphisms {
                    let lhs = tcat.compose2(
                        &m.on_mor(&source.tensor.on_mor(&f.id, &g.id)?)?,
                        &m.lambda_at(&f.dom, &g.dom)?,
                    )?;
                    let rhs = tcat.compose2(
                        &m.lambda_at(&f.cod, &g.cod)?,
                        &target.tensor.on_mor(&m.on_mor(&f.id)?, &m.on_mor(&g.id)?)?,
                    )?;
                    if lhs != rhs {
                        rep.push("lambda-naturality", format!("({},{})", f.id, g.id));
                    }
                }
            }
            // Associativity square of λ.
            for x in &scat.objects {
                for y in &scat.objects {
                    for z in &scat.objects {
                        let fx = m.on_obj(x)?;
                        let lhs = tcat.compose2(
                            &m.lambda_at(&source.tensor.on_obj(x, y)?, z)?,
                            &target.tensor.on_mor(&m.lambda_at(x, y)?, &tcat.identity_of(&m.on_obj(z)?)?)?,
                        )?;
                        let rhs = tcat.compose2(
                            &m.lambda_at(x, &source.tensor.on_obj(y, z)?)?,
                            &target.tensor.on_mor(&tcat.identity_of(&fx)?, &m.lambda_at(y, z)?)?,
                        )?;
                        if lhs != rhs {
                            rep.push("lambda-associativity", format!("({x},{y},{z})"));
                        }
                    }
                }
            }
            // γ square.
            for x in &scat.objects {
                for y in &scat.objects {
                    let lhs = tcat.compose2(&m.on_mor(&source.gamma_at(x, y)?)?, &m.lambda_at(x, y)?)?;
                    let rhs = tcat.compose2(
                        &m.lambda_at(y, x)?,
                        &target.gamma_at(&m.on_obj(x)?, &m.on_obj(y)?)?,
                    )?;
                    if lhs != rhs {
                        rep.push("lambda-gamma", format!("({x},{y})"));
                    }
                }
            }
            if m.class == MapClass::Lax {
                rep.ran("eta");
                let Some(eta) = &m.eta else {
                    return Err(Error::MissingEntry("eta required for lax class".into()));
                };
                let r = tcat.morphism(eta)?;
                if r.dom != target.unit || r.cod != m.on_obj(&source.unit)? {
                    rep.push("eta", "eta has wrong (co)domain".to_string());
                } else if opts.check_unit_triangles {
                    rep.ran("unit-triangles");
                    for x in &scat.objects {
                        let fx = m.on_obj(x)?;
                        // f(x) = f(x)⊗1 --id⊗η--> f(x)⊗f(1) --λ--> f(x⊗1) = f(x)
                        let right = tcat.compose2(
                            &m.lambda_at(x, &source.unit)?,
                            &target.tensor.on_mor(&tcat.identity_of(&fx)?, eta)?,
                        )?;
                        // 1⊗f(x) --η⊗id--> f(1)⊗f(x) --λ--> f(1⊗x) = f(x)
                        let left = tcat.compose2(
                            &m.lambda_at(&source.unit, x)?,
                            &target.tensor.on_mor(eta, &tcat.identity_of(&fx)?)?,
                        )?;
                        if right != tcat.identity_of(&fx)? || left != tcat.identity_of(&fx)? {
                            rep.push("unit-triangles", format!("at {x}"));
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Build the discrete permutative category of a commutative monoid. The
/// table is validated first; non-commutative or non-associative input is
/// rejected with a witness.
pub fn discrete_from_monoid(
    elements: &[&str],
    op: &dyn Fn(&str, &str) -> String,
    unit: &str,
) -> Result<PermutativeStructure> {
    // Validate the monoid table by enumeration.
    for a in elements {
        for b in elements {
            let ab = op(a, b);
            if !elements.contains(&ab.as_str()) {
                return Err(Error::Rejected(format!("op({a},{b}) = {ab} not an element")));
            }
            let ba = op(b, a);
            if ab != ba {
                return Err(Error::Rejected(format!(
                    "not commutative: op({a},{b}) = {ab} != {ba}"
                )));
            }
            for c in elements {
                let l = op(&op(a, b), c);
                let r = op(a, &op(b, c));
                if l != r {
                    return Err(Error::Rejected(format!(
                        "not associative at ({a},{b},{c}): {l} != {r}"
                    )));
                }
            }
        }
        if op(a, unit) != *a || op(unit, a) != *a {
            return Err(Error::Rejected(format!("unit law fails at {a}")));
        }
    }

    let cat = Arc::new(crate::fincat::discrete(elements));
    let mut tensor = TensorTables::default();
    let mut gamma = BTreeMap::new();
    for a in elements {
        for b in elements {
            let ab = ObjId(op(a, b));
            tensor
                .obj
                .insert((ObjId::from(*a), ObjId::from(*b)), ab.clone());
            tensor.mor.insert(
                (cat.identity_of(&ObjId::from(*a))?, cat.identity_of(&ObjId::from(*b))?),
                cat.identity_of(&ab)?,
            );
            gamma.insert((ObjId::from(*a), ObjId::from(*b)), cat.identity_of(&ab)?);
        }
    }
    Ok(PermutativeStructure {
        base: cat,
        tensor,
        unit: ObjId::from(unit),
        gamma,
    })
}

/// Permutative structure on the opposite category: same objects, unit and
/// tensor tables; `γ^op_{x,y}` is `γ_{y,x}` read backwards.
pub fn opposite_permutative(p: &PermutativeStructure) -> Result<PermutativeStructure> {
    let op_base = Arc::new(crate::fincat::opposite(&p.base));
    let mut gamma = BTreeMap::new();
    for x in &p.base.objects {
        for y in &p.base.objects {
            gamma.insert((x.clone(), y.clone()), p.gamma_at(y, x)?);
        }
    }
    Ok(PermutativeStructure {
        base: op_base,
        tensor: p.tensor.clone(),
        unit: p.unit.clone(),
        gamma,
    })
}

/// Commonly used discrete structures.
pub fn z2_xor_permutative() -> PermutativeStructure {
    discrete_from_monoid(&["0", "1"], &|a, b| {
        if (a == "1") ^ (b == "1") { "1".into() } else { "0".into() }
    }, "0")
    .expect("Z/2 xor is a commutative monoid")
}

pub fn z2_and_permutative() -> PermutativeStructure {
    discrete_from_monoid(&["0", "1"], &|a, b| {
        if a == "1" && b == "1" { "1".into() } else { "0".into() }
    }, "1")
    .expect("Z/2 and is a commutative monoid")
}

pub fn bool_or_permutative() -> PermutativeStructure {
    discrete_from_monoid(&["0", "1"], &|a, b| {
        if a == "1" || b == "1" { "1".into() } else { "0".into() }
    }, "0")
    .expect("boolean or is a commutative monoid")
}

pub fn zn_permutative(n: usize) -> PermutativeStructure {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let elems: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    discrete_from_monoid(&elems, &move |a, b| {
        let x: usize = a.parse().unwrap();
        let y: usize = b.parse().unwrap();
        ((x + y) % n).to_string()
    }, "0")
    .expect("Z/n is a commutative monoid")
}

/// Trivial permutative structure on a one-object category.
pub fn terminal_permutative(obj_name: &str) -> PermutativeStructure {
    discrete_from_monoid(&[obj_name], &|_, _| obj_name.to_string(), obj_name)
        .expect("terminal monoid")
}

#[doc(hidden)]
pub mod tests_support {
    //! Structures shared by tests in several modules.

    use super::*;
    use crate::fincat::{CatBuilder, FinCategory};
    use crate::ids::{mor, obj};

    /// A genuinely non-strict symmetric monoidal category: objects graded
    /// 0, 1, 2 where grade two has two isomorphic presentations `n2a ≅ n2b`
    /// and the tensor is chosen so that different bracketings land on
    /// different representatives. All hom-sets inside the grade-two
    /// component are singletons, so every coherence diagram commutes.
    pub fn graded_nonstrict_monoidal() -> SymMonoidalStructure {
        let cat: FinCategory = CatBuilder::new()
            .object("n0")
            .object("n1")
            .object("n2a")
            .object("n2b")
            .morphism("j", "n2a", "n2b")
            .morphism("k", "n2b", "n2a")
            .compose("k", "j", "id_n2a")
            .compose("j", "k", "id_n2b")
            .build();
        let cat = Arc::new(cat);

        let grade = |o: &ObjId| -> usize {
            match o.as_str() {
                "n0" => 0,
                "n1" => 1,
                _ => 2,
            }
        };
        // The unit n0 is strict. Representative of grade-2 products: n1⊗n1
        // lands on n2a, a grade-2 object tensored on the right by n1 lands on
        // n2b, everything else stays at n2a. Different bracketings therefore
        // hit different (isomorphic) representatives.
        let tensor_obj = |a: &ObjId, b: &ObjId| -> ObjId {
            if grade(a) == 0 {
                return b.clone();
            }
            if grade(b) == 0 {
                return a.clone();
            }
            if grade(a) == 2 && grade(b) == 1 {
                obj("n2b")
            } else {
                obj("n2a")
            }
        };
        // Unique morphism between two objects of this category, when one
        // exists (the grade-2 component is codiscrete).
        let unique_mor = |cat: &FinCategory, a: &ObjId, b: &ObjId| -> MorId {
            if a == b {
                cat.identity_of(a).unwrap()
            } else if a.as_str() == "n2a" {
                mor("j")
            } else {
                mor("k")
            }
        };

        let mut tensor = TensorTables::default();
        for a in &cat.objects {
            for b in &cat.objects {
                tensor.obj.insert((a.clone(), b.clone()), tensor_obj(a, b));
            }
        }
        for f in &cat.morphisms {
            for g in &cat.morphisms {
                let d = tensor_obj(&f.dom, &g.dom);
                let c = tensor_obj(&f.cod, &g.cod);
                tensor
                    .mor
                    .insert((f.id.clone(), g.id.clone()), unique_mor(&cat, &d, &c));
            }
        }
        let mut gamma = BTreeMap::new();
        let mut associator = BTreeMap::new();
        let mut left_unitor = BTreeMap::new();
        let mut right_unitor = BTreeMap::new();
        for a in &cat.objects {
            left_unitor.insert(a.clone(), cat.identity_of(a).unwrap());
            right_unitor.insert(a.clone(), cat.identity_of(a).unwrap());
            for b in &cat.objects {
                let ab = tensor_obj(a, b);
                let ba = tensor_obj(b, a);
                gamma.insert((a.clone(), b.clone()), unique_mor(&cat, &ab, &ba));
                for c in &cat.objects {
                    let l = tensor_obj(&tensor_obj(a, b), c);
                    let r = tensor_obj(a, &tensor_obj(b, c));
                    associator.insert((a.clone(), b.clone(), c.clone()), unique_mor(&cat, &l, &r));
                }
            }
        }
        SymMonoidalStructure {
            base: cat,
            tensor,
            unit: obj("n0"),
            gamma,
            associator,
            left_unitor,
            right_unitor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::z2_category;
    use crate::ids::{mor, obj};

    #[test]
    fn terminal_permutative_is_valid() {
        let t = terminal_permutative("1");
        assert!(validate_permutative(&t).unwrap().is_valid());
    }

    #[test]
    fn z3_discrete_is_valid() {
        // Exhaustive check covers all 27 associativity triples and 9 gamma
        // diagrams of the three-element cyclic monoid.
        let z3 = zn_permutative(3);
        let rep = validate_permutative(&z3).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn z2_group_category_with_bad_gamma_fails_gamma_unit() {
        // Tensor on the one-object group Z/2: trivial on the object, product
        // of group elements on morphisms; γ := u is natural but violates the
        // unit diagram (and u∘u = e also breaks nothing else).
        let base = Arc::new(z2_category());
        let star = obj("*");
        let mut tensor = TensorTables::default();
        tensor.obj.insert((star.clone(), star.clone()), star.clone());
        for f in ["e", "u"] {
            for g in ["e", "u"] {
                let prod = if (f == "u") ^ (g == "u") { "u" } else { "e" };
                tensor
                    .mor
                    .insert((mor(f), mor(g)), mor(prod));
            }
        }
        let good = PermutativeStructure {
            base: base.clone(),
            tensor: tensor.clone(),
            unit: star.clone(),
            gamma: [((star.clone(), star.clone()), mor("e"))].into(),
        };
        let rep = validate_permutative(&good).unwrap();
        assert!(rep.is_valid(), "{rep}");

        let bad = PermutativeStructure {
            base,
            tensor,
            unit: star.clone(),
            gamma: [((star.clone(), star.clone()), mor("u"))].into(),
        };
        let rep = validate_permutative(&bad).unwrap();
        assert!(!rep.is_valid());
        assert!(rep.failed("gamma-unit"), "{rep}");
    }

    #[test]
    fn gamma_symmetry_consequence_holds_on_corpus() {
        // γ_{x,y}∘γ_{y,x} = id follows from the second diagram; assert it
        // independently on every accepted structure.
        for p in [
            terminal_permutative("1"),
            z2_xor_permutative(),
            bool_or_permutative(),
            zn_permutative(3),
        ] {
            assert!(validate_permutative(&p).unwrap().is_valid());
            for x in &p.base.objects {
                for y in &p.base.objects {
                    let round = p
                        .base
                        .compose2(&p.gamma_at(x, y).unwrap(), &p.gamma_at(y, x).unwrap())
                        .unwrap();
                    assert_eq!(
                        round,
                        p.base
                            .identity_of(&p.tensor.on_obj(y, x).unwrap())
                            .unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn discrete_from_monoid_rejects_bad_tables() {
        // Non-commutative table (left projection).
        let err = discrete_from_monoid(&["a", "b"], &|x, _| x.to_string(), "a");
        assert!(matches!(err, Err(Error::Rejected(_))));
        // Non-associative table: subtraction-like on three elements.
        let err = discrete_from_monoid(&["0", "1", "2"], &|x, y| {
            let a: i32 = x.parse().unwrap();
            let b: i32 = y.parse().unwrap();
            (((a - b) % 3 + 3) % 3).to_string()
        }, "0");
        assert!(matches!(err, Err(Error::Rejected(_))));
    }

    #[test]
    fn generator_output_passes_validator() {
        for p in [
            z2_xor_permutative(),
            z2_and_permutative(),
            bool_or_permutative(),
            zn_permutative(4),
            zn_permutative(5),
        ] {
            let rep = validate_permutative(&p).unwrap();
            assert!(rep.is_valid(), "{rep}");
        }
    }

    #[test]
    fn identity_map_is_strict_valid() {
        let p = z2_xor_permutative();
        let id = MonoidalMap::identity_on(&p);
        assert!(validate_monoidal_map(&id, &p, &p).unwrap().is_valid());
    }

    #[test]
    fn strict_map_with_wrong_unit_fails() {
        let p = z2_xor_permutative();
        // Swap 0 and 1: an isomorphism of categories, but not unit-preserving.
        let m = MonoidalMap {
            object_map: [(obj("0"), obj("1")), (obj("1"), obj("0"))].into(),
            morphism_map: [(mor("id_0"), mor("id_1")), (mor("id_1"), mor("id_0"))].into(),
            class: MapClass::Strict,
            lambda: BTreeMap::new(),
            eta: None,
        };
        let rep = validate_monoidal_map(&m, &p, &p).unwrap();
        assert!(rep.failed("strict-unit"), "{rep}");
    }

    #[test]
    fn strict_implies_lax_star_implies_lax() {
        // The implication chain with identity structure maps, on the corpus.
        for p in [z2_xor_permutative(), bool_or_permutative(), zn_permutative(3)] {
            let strict = MonoidalMap::identity_on(&p);
            assert!(validate_monoidal_map(&strict, &p, &p).unwrap().is_valid());

            let mut lambda = BTreeMap::new();
            for x in &p.base.objects {
                for y in &p.base.objects {
                    let xy = p.tensor.on_obj(x, y).unwrap();
                    lambda.insert((x.clone(), y.clone()), p.base.identity_of(&xy).unwrap());
                }
            }
            let lax_star = MonoidalMap {
                class: MapClass::LaxStar,
                lambda: lambda.clone(),
                ..strict.clone()
            };
            assert!(validate_monoidal_map(&lax_star, &p, &p).unwrap().is_valid());

            let lax = MonoidalMap {
                class: MapClass::Lax,
                lambda,
                eta: Some(p.base.identity_of(&p.unit).unwrap()),
                ..strict
            };
            let rep = validate_monoidal_map(&lax, &p, &p).unwrap();
            assert!(rep.is_valid(), "{rep}");
        }
    }

    #[test]
    fn graded_nonstrict_example_is_coherent() {
        let m = tests_support::graded_nonstrict_monoidal();
        let rep = validate_sym_monoidal(&m).unwrap();
        assert!(rep.is_valid(), "{rep}");
        // The example is genuinely non-strict: bracketing changes the object.
        let ab = m.tensor.on_obj(&obj("n1"), &obj("n1")).unwrap();
        let l = m.tensor.on_obj(&ab, &obj("n1")).unwrap();
        let r = m.tensor.on_obj(&obj("n1"), &ab).unwrap();
        assert_ne!(l, r);
    }

    #[test]
    fn opposite_permutative_is_valid() {
        let p = zn_permutative(3);
        let op = opposite_permutative(&p).unwrap();
        assert!(validate_permutative(&op).unwrap().is_valid());
    }
}
