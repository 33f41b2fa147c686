//! The Ψ construction: for a strictified fibered bipermutative structure,
//! the assignment sending a tuple of base words to the permutative category
//! of formal sums of products of canonical sections, with the pairwise
//! products, distributivity, and symmetry data of the ring-data theorem.
//!
//! Objects are kept symbolic (sums of products of sections); evaluation at
//! the canonical base point is on demand and memoized through the
//! strictified structure's own caches. The base for the ring data is the
//! wreath product of the injection category with tuples of strictified base
//! words, materialized inside a window.

use crate::error::{Error, Result};
use crate::ids::{MorId, ObjId};
use crate::perm::Perm;
use crate::rebracket::{permute_iso, MonoidalOps};
use crate::report::ValidationReport;
use crate::strictifier::{seq_id, FiberBipermLike, StrictTotal, StrictTotalObject, StrictTotalView, WindowBounds};
use crate::wreath::InjMorphism;
use std::collections::HashMap;
use std::sync::Mutex;

/// A canonical section over a base word `u`: either the zero section or a
/// pullback-transported window object, possibly multiplied by objects over
/// the empty word (absorbed unit-fiber factors).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sect {
    pub u: Vec<ObjId>,
    pub kind: SectKind,
    /// Multipliers over the empty word, applied on the left.
    pub heads: Vec<ObjId>,
    /// Multipliers over the empty word, applied on the right.
    pub tails: Vec<ObjId>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SectKind {
    Zero,
    /// Transport of the window object `x0` (over word `u_b`) along the
    /// underlying base morphism `route : Φ(u) → Φ(u_b)`.
    Pulled {
        route: MorId,
        u_b: Vec<ObjId>,
        x0: ObjId,
    },
}

/// A Ψ-object: a formal sum of products of sections. Rows containing a zero
/// section are dropped (their evaluation contributes nothing); for the
/// empty tuple each row has exactly one section over the empty word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsiObject {
    pub u: Vec<Vec<ObjId>>,
    pub rows: Vec<Vec<Sect>>,
}

impl PsiObject {
    fn normalize(mut self, st: &StrictTotal) -> Result<PsiObject> {
        let unit_handle = st.obj_id(&st.unit_object()?);
        let mut rows = Vec::new();
        for mut row in std::mem::take(&mut self.rows) {
            let mut zero = false;
            for s in &mut row {
                s.heads.retain(|h| h != &unit_handle);
                s.tails.retain(|t| t != &unit_handle);
                match &s.kind {
                    SectKind::Zero => zero = true,
                    SectKind::Pulled { x0, .. } => {
                        // A zero multiplier or zero body kills the row.
                        let body = st.resolve_obj(x0)?;
                        if body.summands.is_empty() {
                            zero = true;
                        }
                        for h in s.heads.iter().chain(s.tails.iter()) {
                            if st.resolve_obj(h)?.summands.is_empty() {
                                zero = true;
                            }
                        }
                    }
                }
            }
            if !zero {
                rows.push(row);
            }
        }
        self.rows = rows;
        Ok(self)
    }
}

/// Bounds for the Ψ window.
#[derive(Debug, Clone, Copy)]
pub struct PsiBounds {
    /// Maximum base-word length inside tuples.
    pub word_cap: usize,
    /// Maximum tuple length enumerated for the wreath base.
    pub tuple_cap: usize,
    /// Maximum summand rows per enumerated Ψ-object.
    pub row_cap: usize,
    /// Maximum sections per base word.
    pub max_sections: usize,
    /// Maximum Ψ-objects enumerated per tuple.
    pub max_psi_objects: usize,
    pub max_instances_per_check: u64,
}

impl Default for PsiBounds {
    fn default() -> Self {
        PsiBounds {
            word_cap: 1,
            tuple_cap: 2,
            row_cap: 2,
            max_sections: 6,
            max_psi_objects: 10,
            max_instances_per_check: 4_000,
        }
    }
}

/// A wreath morphism over strictified base words: an injection plus
/// componentwise base morphisms `Φ(v_j) → Φ((q_*ū)_j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PsiWreathMor {
    pub dom: Vec<Vec<ObjId>>,
    pub cod: Vec<Vec<ObjId>>,
    pub q: InjMorphism,
    pub comps: Vec<MorId>,
}

/// Ψ as ring data over the wreath window.
pub struct PsiRing<'a> {
    pub st: &'a StrictTotal,
    pub bounds: PsiBounds,
    words: Vec<Vec<ObjId>>,
    tuples: Vec<Vec<Vec<ObjId>>>,
    obj_reg: Mutex<HashMap<ObjId, Vec<Vec<ObjId>>>>,
    mor_reg: Mutex<HashMap<MorId, PsiWreathMor>>,
    psi_reg: Mutex<HashMap<ObjId, PsiObject>>,
    psi_mor_reg: Mutex<HashMap<MorId, (ObjId, ObjId, MorId)>>,
    fiber_cache: Mutex<HashMap<ObjId, Vec<ObjId>>>,
    sect_cache: Mutex<HashMap<ObjId, Vec<Sect>>>,
}

fn tuple_key(t: &[Vec<ObjId>]) -> ObjId {
    let parts: Vec<String> = t.iter().map(|w| seq_id(w).0).collect();
    ObjId(format!("A({})", parts.join(";")))
}

impl<'a> PsiRing<'a> {
    pub fn new(st: &'a StrictTotal, bounds: PsiBounds) -> Result<Self> {
        if !st.input.fibered.base.is_groupoid() {
            return Err(Error::Precondition("Ψ requires a groupoid base".into()));
        }
        let mut words: Vec<Vec<ObjId>> = vec![vec![]];
        let mut layer: Vec<Vec<ObjId>> = vec![vec![]];
        for _ in 0..bounds.word_cap {
            let mut next = Vec::new();
            for w in &layer {
                for o in &st.ccat().objects {
                    let mut w2 = w.clone();
                    w2.push(o.clone());
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        let mut tuples: Vec<Vec<Vec<ObjId>>> = vec![vec![]];
        let mut tlayer: Vec<Vec<Vec<ObjId>>> = vec![vec![]];
        for _ in 0..bounds.tuple_cap {
            let mut next = Vec::new();
            for t in &tlayer {
                for w in &words {
                    let mut t2 = t.clone();
                    t2.push(w.clone());
                    next.push(t2);
                }
            }
            tuples.extend(next.iter().cloned());
            tlayer = next;
        }
        let ring = PsiRing {
            st,
            bounds,
            words,
            tuples,
            obj_reg: Mutex::new(HashMap::new()),
            mor_reg: Mutex::new(HashMap::new()),
            psi_reg: Mutex::new(HashMap::new()),
            psi_mor_reg: Mutex::new(HashMap::new()),
            fiber_cache: Mutex::new(HashMap::new()),
            sect_cache: Mutex::new(HashMap::new()),
        };
        for t in ring.tuples.clone() {
            ring.reg_tuple(&t);
        }
        Ok(ring)
    }

    fn reg_tuple(&self, t: &[Vec<ObjId>]) -> ObjId {
        let id = tuple_key(t);
        self.obj_reg
            .lock()
            .unwrap()
            .entry(id.clone())
            .or_insert_with(|| t.to_vec());
        id
    }

    fn tuple(&self, id: &ObjId) -> Result<Vec<Vec<ObjId>>> {
        self.obj_reg
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownObject(id.clone()))
    }

    fn reg_mor(&self, m: &PsiWreathMor) -> MorId {
        let q: Vec<String> = m.q.map.iter().map(|v| v.to_string()).collect();
        let f: Vec<&str> = m.comps.iter().map(|c| c.as_str()).collect();
        let id = MorId(format!(
            "AW[{};{}]{}>{}",
            q.join(","),
            f.join(","),
            tuple_key(&m.dom).0,
            tuple_key(&m.cod).0
        ));
        self.mor_reg
            .lock()
            .unwrap()
            .entry(id.clone())
            .or_insert_with(|| m.clone());
        id
    }

    fn wmor(&self, id: &MorId) -> Result<PsiWreathMor> {
        self.mor_reg
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownMorphism(id.clone()))
    }

    fn reg_psi(&self, p: &PsiObject) -> Result<ObjId> {
        let p = self.canon(p)?;
        // Identity is the tuple together with the canonical-point
        // evaluation: two presentations with equal evaluation denote the
        // same object of the window (sections are canonical, so over a
        // groupoid base the canonical value determines the functor). The
        // first-registered presentation is kept as the representative.
        let v = self.eval(&p)?;
        let id = ObjId(format!(
            "PSI[{:016x}|{}]",
            stable_hash(&p.u),
            self.st.theta(&v)?
        ));
        self.psi_reg
            .lock()
            .unwrap()
            .entry(id.clone())
            .or_insert_with(|| p.clone());
        Ok(id)
    }

    fn psi(&self, id: &ObjId) -> Result<PsiObject> {
        self.psi_reg
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownObject(id.clone()))
    }

    fn reg_psi_mor(&self, dom: &ObjId, cod: &ObjId, m: &MorId) -> MorId {
        let id = MorId(format!("PM[{}>{}:{}]", dom.0, cod.0, m.0));
        self.psi_mor_reg
            .lock()
            .unwrap()
            .entry(id.clone())
            .or_insert_with(|| (dom.clone(), cod.clone(), m.clone()));
        id
    }

    fn psi_mor(&self, id: &MorId) -> Result<(ObjId, ObjId, MorId)> {
        self.psi_mor_reg
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownMorphism(id.clone()))
    }

    fn phi(&self, w: &[ObjId]) -> Result<ObjId> {
        self.st.base.phi(w)
    }

    /// Canonical sections over a word, deterministic, capped.
    fn sections(&self, u: &[ObjId]) -> Result<Vec<Sect>> {
        let key = seq_id(u);
        if let Some(v) = self.sect_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let st = self.st;
        let view = StrictTotalView::new(
            st,
            WindowBounds {
                seq_cap: self.bounds.word_cap,
                sum_cap: 1,
                max_fiber_objects: self.bounds.max_sections,
                max_morphisms_over: 4,
                max_instances_per_check: 1,
            },
        );
        let phi_u = self.phi(u)?;
        let mut out = vec![Sect {
            u: u.to_vec(),
            kind: SectKind::Zero,
            heads: vec![],
            tails: vec![],
        }];
        'outer: for ub in &self.words {
            let phi_b = self.phi(ub)?;
            for route in st.ccat().hom(&phi_u, &phi_b) {
                if st.ccat().inverse(&route).is_none() {
                    continue;
                }
                for x0 in view.fiber_objects(&seq_id(ub))? {
                    let body = st.resolve_obj(&x0)?;
                    if body.summands.len() != 1 {
                        continue;
                    }
                    out.push(Sect {
                        u: u.to_vec(),
                        kind: SectKind::Pulled {
                            route: route.clone(),
                            u_b: ub.clone(),
                            x0,
                        },
                        heads: vec![],
                        tails: vec![],
                    });
                    if out.len() >= self.bounds.max_sections {
                        break 'outer;
                    }
                }
            }
        }
        out.sort();
        self.sect_cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Canonical form: sections over the empty word are replaced by their
    /// evaluated bodies (the unique representation of objects of Ψ(())),
    /// then zero rows and unit multipliers are normalized away.
    fn canon(&self, p: &PsiObject) -> Result<PsiObject> {
        let mut q = p.clone();
        for row in &mut q.rows {
            for s in row.iter_mut() {
                if s.u.is_empty() && s.kind != SectKind::Zero {
                    let v = self.eval_sect(s)?;
                    *s = Sect {
                        u: vec![],
                        kind: SectKind::Pulled {
                            route: self
                                .st
                                .ccat()
                                .identity_of(&self.st.input.base_mon.unit)?,
                            u_b: vec![],
                            x0: self.st.obj_id(&v),
                        },
                        heads: vec![],
                        tails: vec![],
                    };
                }
            }
        }
        q.normalize(self.st)
    }

    /// Reindex a window object along a base morphism into a new word.
    fn reindex(&self, x: &StrictTotalObject, r: &MorId, w: &[ObjId]) -> Result<StrictTotalObject> {
        let mut summands = Vec::new();
        for (word, f) in &x.summands {
            summands.push((word.clone(), self.st.ccat().compose2(f, r)?));
        }
        Ok(StrictTotalObject {
            base: w.to_vec(),
            summands,
        })
    }

    /// Evaluate a section at the canonical point of its word.
    fn eval_sect(&self, s: &Sect) -> Result<StrictTotalObject> {
        let st = self.st;
        let base = match &s.kind {
            SectKind::Zero => st.zero_object(&s.u),
            SectKind::Pulled { route, u_b, x0 } => {
                let _ = u_b;
                let body = st.resolve_obj(x0)?;
                self.reindex(&body, route, &s.u)?
            }
        };
        let mut acc = base;
        for h in s.heads.iter().rev() {
            acc = st.boxtimes(&*st.resolve_obj(h)?, &acc)?;
        }
        for t in &s.tails {
            acc = st.boxtimes(&acc, &*st.resolve_obj(t)?)?;
        }
        Ok(acc)
    }

    fn eval_row(&self, row: &[Sect]) -> Result<StrictTotalObject> {
        let st = self.st;
        let mut acc: Option<StrictTotalObject> = None;
        for s in row {
            let v = self.eval_sect(s)?;
            acc = Some(match acc {
                None => v,
                Some(prev) => st.boxtimes(&prev, &v)?,
            });
        }
        acc.ok_or_else(|| Error::Internal("empty row".into()))
    }

    /// Evaluate a Ψ-object at the canonical point: ⊞ of row evaluations
    /// over the concatenated word.
    pub fn eval(&self, p: &PsiObject) -> Result<StrictTotalObject> {
        let st = self.st;
        let total_word: Vec<ObjId> = p.u.iter().flatten().cloned().collect();
        let mut acc = st.zero_object(&total_word);
        for row in &p.rows {
            let v = self.eval_row(row)?;
            acc = st.boxplus(&acc, &v)?;
        }
        Ok(acc)
    }

    /// Debug access to a registered Ψ-object.
    pub fn debug_psi(&self, id: &ObjId) -> String {
        format!("{:?}", self.psi(id))
    }

    /// The canonical zero and unit.
    fn zero_psi(&self, u: &[Vec<ObjId>]) -> PsiObject {
        PsiObject {
            u: u.to_vec(),
            rows: vec![],
        }
    }

    fn one_psi(&self) -> Result<PsiObject> {
        let st = self.st;
        let unit = st.obj_id(&st.unit_object()?);
        Ok(PsiObject {
            u: vec![],
            rows: vec![vec![Sect {
                u: vec![],
                kind: SectKind::Pulled {
                    route: st.ccat().identity_of(&self.st.input.base_mon.unit)?,
                    u_b: vec![],
                    x0: unit,
                },
                heads: vec![],
                tails: vec![],
            }]],
        })
    }

    /// The product `F ⊗_{ū,v̄} G`, j-major, with unit-tuple absorption.
    fn psi_tensor(&self, f: &PsiObject, g: &PsiObject) -> Result<PsiObject> {
        let u: Vec<Vec<ObjId>> = f.u.iter().chain(g.u.iter()).cloned().collect();
        let mut rows = Vec::new();
        if f.u.is_empty() && g.u.is_empty() {
            for grow in &g.rows {
                for frow in &f.rows {
                    // Multiply the bare bodies.
                    let fv = self.eval_row(frow)?;
                    let gv = self.eval_row(grow)?;
                    let prod = self.st.boxtimes(&fv, &gv)?;
                    rows.push(vec![Sect {
                        u: vec![],
                        kind: SectKind::Pulled {
                            route: self
                                .st
                                .ccat()
                                .identity_of(&self.st.input.base_mon.unit)?,
                            u_b: vec![],
                            x0: self.st.obj_id(&prod),
                        },
                        heads: vec![],
                        tails: vec![],
                    }]);
                }
            }
        } else if g.u.is_empty() {
            for grow in &g.rows {
                let gv = self.st.obj_id(&self.eval_row(grow)?);
                for frow in &f.rows {
                    let mut row = frow.clone();
                    if let Some(last) = row.last_mut() {
                        last.tails.push(gv.clone());
                    }
                    rows.push(row);
                }
            }
        } else if f.u.is_empty() {
            for grow in &g.rows {
                for frow in &f.rows {
                    let fv = self.st.obj_id(&self.eval_row(frow)?);
                    let mut row = grow.clone();
                    if let Some(first) = row.first_mut() {
                        first.heads.insert(0, fv.clone());
                    }
                    rows.push(row);
                }
            }
        } else {
            for grow in &g.rows {
                for frow in &f.rows {
                    let mut row = frow.clone();
                    row.extend(grow.iter().cloned());
                    rows.push(row);
                }
            }
        }
        self.canon(&PsiObject { u, rows })
    }

    /// Apply `Ψ(q, f̄)` to an object: permute/transport sections and insert
    /// the unit section at missed slots.
    fn psi_map_obj(&self, w: &PsiWreathMor, p: &PsiObject) -> Result<PsiObject> {
        let st = self.st;
        let m = w.q.m;
        let mut rows = Vec::new();
        for row in &p.rows {
            let mut new_row = Vec::new();
            if p.u.is_empty() && m > 0 {
                // Out of Ψ(()): insert unit sections at every slot and carry
                // the bare body as a multiplier on the first.
                for j in 1..=m {
                    new_row.push(Sect {
                        u: w.cod[j - 1].clone(),
                        kind: SectKind::Pulled {
                            route: w.comps[j - 1].clone(),
                            u_b: vec![],
                            x0: st.obj_id(&st.unit_object()?),
                        },
                        heads: vec![],
                        tails: vec![],
                    });
                }
                let body = st.obj_id(&self.eval_row(row)?);
                new_row[0].heads.push(body);
                rows.push(new_row);
                continue;
            }
            for j in 1..=m {
                let comp = &w.comps[j - 1];
                let target_u = w.cod[j - 1].clone();
                match w.q.preimage(j) {
                    Some(i) => {
                        let mut s = if p.u.is_empty() {
                            // Sections of the empty tuple live over ().
                            row[0].clone()
                        } else {
                            row[i - 1].clone()
                        };
                        // f_j^* : precompose the route.
                        match &mut s.kind {
                            SectKind::Zero => {}
                            SectKind::Pulled { route, .. } => {
                                *route = st.ccat().compose2(route, comp)?;
                            }
                        }
                        s.u = target_u;
                        new_row.push(s);
                    }
                    None => {
                        // Unit insertion along f_j : v_j → ().
                        new_row.push(Sect {
                            u: target_u,
                            kind: SectKind::Pulled {
                                route: comp.clone(),
                                u_b: vec![],
                                x0: st.obj_id(&st.unit_object()?),
                            },
                            heads: vec![],
                            tails: vec![],
                        });
                    }
                }
            }
            if new_row.is_empty() {
                // Empty codomain tuple: evaluate the row into a bare body.
                let v = self.eval_row(row)?;
                new_row.push(Sect {
                    u: vec![],
                    kind: SectKind::Pulled {
                        route: st.ccat().identity_of(&self.st.input.base_mon.unit)?,
                        u_b: vec![],
                        x0: st.obj_id(&v),
                    },
                    heads: vec![],
                    tails: vec![],
                });
            }
            rows.push(new_row);
        }
        self.canon(&PsiObject {
            u: w.cod.clone(),
            rows,
        })
    }

    /// The connecting morphism `eval(P) → eval(Ψ(q,f̄)P)` in the total
    /// category (factor rearrangement plus transport comparisons).
    fn transport_iso(&self, w: &PsiWreathMor, p: &PsiObject) -> Result<MorId> {
        let st = self.st;
        let src = self.eval(p)?;
        let dst = self.eval(&self.psi_map_obj(w, p)?)?;
        let ts = st.theta(&src)?;
        let td = st.theta(&dst)?;
        if ts == td {
            return st.dcat().identity_of(&ts);
        }
        // Unique fill-in style comparison through the D homs.
        let mut candidates = Vec::new();
        for m in st.dcat().hom(&ts, &td) {
            if st.dcat().inverse(&m).is_some() {
                candidates.push(m);
            }
        }
        candidates.sort();
        candidates
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("no transport comparison available".into()))
    }
}

fn stable_hash<T: std::hash::Hash>(t: &T) -> u64 {
    // FNV-1a over the std hash stream for stable-ish interning keys within
    // one process run; collisions are broken by the registry contents.
    use std::hash::Hasher;
    struct Fnv(u64);
    impl Hasher for Fnv {
        fn finish(&self) -> u64 {
            self.0
        }
        fn write(&mut self, bytes: &[u8]) {
            for b in bytes {
                self.0 ^= *b as u64;
                self.0 = self.0.wrapping_mul(0x100000001b3);
            }
        }
    }
    let mut h = Fnv(0xcbf29ce484222325);
    t.hash(&mut h);
    std::hash::Hasher::finish(&h)
}

/// Fiber ⊞ view over Ψ evaluations, used for row permutations.
struct PsiAddView<'a, 'b> {
    ring: &'b PsiRing<'a>,
    word: Vec<ObjId>,
}

impl MonoidalOps for PsiAddView<'_, '_> {
    fn unit_obj(&self) -> ObjId {
        self.ring.st.obj_id(&self.ring.st.zero_object(&self.word))
    }
    fn tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<ObjId> {
        let x = self.ring.st.resolve_obj(a)?;
        let y = self.ring.st.resolve_obj(b)?;
        Ok(self.ring.st.obj_id(&self.ring.st.boxplus(&x, &y)?))
    }
    fn tensor_mor(&self, f: &MorId, g: &MorId) -> Result<MorId> {
        let (fd, fc, fm) = self.ring.st.resolve_mor(f)?;
        let (gd, gc, gm) = self.ring.st.resolve_mor(g)?;
        let x = self.ring.st.resolve_obj(&fd)?;
        let xp = self.ring.st.resolve_obj(&gd)?;
        let y = self.ring.st.resolve_obj(&fc)?;
        let yp = self.ring.st.resolve_obj(&gc)?;
        let m = self.ring.st.boxplus_mor(&x, &xp, &y, &yp, &fm, &gm)?;
        let dom = self.ring.st.boxplus(&x, &xp)?;
        let cod = self.ring.st.boxplus(&y, &yp)?;
        Ok(self.ring.st.mor_id(&dom, &cod, &m))
    }
    fn compose(&self, g: &MorId, f: &MorId) -> Result<MorId> {
        let (fd, _, fm) = self.ring.st.resolve_mor(f)?;
        let (_, gc, gm) = self.ring.st.resolve_mor(g)?;
        let comp = self.ring.st.dcat().compose2(&gm, &fm)?;
        let x = self.ring.st.resolve_obj(&fd)?;
        let z = self.ring.st.resolve_obj(&gc)?;
        Ok(self.ring.st.mor_id(&x, &z, &comp))
    }
    fn identity(&self, a: &ObjId) -> Result<MorId> {
        let x = self.ring.st.resolve_obj(a)?;
        let t = self.ring.st.theta(&x)?;
        Ok(self
            .ring
            .st
            .mor_id(&x, &x, &self.ring.st.dcat().identity_of(&t)?))
    }
    fn associator(&self, a: &ObjId, b: &ObjId, c: &ObjId) -> Result<MorId> {
        let ab = self.tensor_obj(a, b)?;
        let abc = self.tensor_obj(&ab, c)?;
        self.identity(&abc)
    }
    fn left_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.identity(a)
    }
    fn right_unitor(&self, a: &ObjId) -> Result<MorId> {
        self.identity(a)
    }
    fn symmetry(&self, a: &ObjId, b: &ObjId) -> Result<MorId> {
        let x = self.ring.st.resolve_obj(a)?;
        let y = self.ring.st.resolve_obj(b)?;
        let m = self.ring.st.gamma_boxplus(&x, &y)?;
        let dom = self.ring.st.boxplus(&x, &y)?;
        let cod = self.ring.st.boxplus(&y, &x)?;
        Ok(self.ring.st.mor_id(&dom, &cod, &m))
    }
    fn invert(&self, m: &MorId) -> Result<MorId> {
        let (d, c, dm) = self.ring.st.resolve_mor(m)?;
        let inv = self
            .ring
            .st
            .dcat()
            .inverse(&dm)
            .ok_or_else(|| Error::Precondition(format!("{dm} not invertible")))?;
        let x = self.ring.st.resolve_obj(&d)?;
        let y = self.ring.st.resolve_obj(&c)?;
        Ok(self.ring.st.mor_id(&y, &x, &inv))
    }
}

impl PsiRing<'_> {
    /// Row-permutation morphism between two Ψ-objects with identical rows in
    /// different order: realized as an iterated fiber symmetry on the
    /// evaluated summands.
    fn row_permutation(&self, src: &PsiObject, perm: &Perm) -> Result<MorId> {
        let st = self.st;
        let word: Vec<ObjId> = src.u.iter().flatten().cloned().collect();
        let view = PsiAddView {
            ring: self,
            word: word.clone(),
        };
        let handles: Vec<ObjId> = src
            .rows
            .iter()
            .map(|row| Ok(st.obj_id(&self.eval_row(row)?)))
            .collect::<Result<_>>()?;
        if handles.is_empty() {
            let z = st.zero_object(&word);
            return Ok(st.dcat().identity_of(&st.theta(&z)?)?);
        }
        let (_, iso) = permute_iso(&view, &handles, perm)?;
        let (_, _, dm) = st.resolve_mor(&iso)?;
        Ok(dm)
    }
}

impl super::RingLike for PsiRing<'_> {
    fn subject(&self) -> String {
        "Ψ ring data".into()
    }
    fn bounds_note(&self) -> Option<String> {
        Some(format!(
            "word_cap={} tuple_cap={} row_cap={} max_sections={} max_psi_objects={}",
            self.bounds.word_cap,
            self.bounds.tuple_cap,
            self.bounds.row_cap,
            self.bounds.max_sections,
            self.bounds.max_psi_objects
        ))
    }
    fn instance_cap(&self) -> Option<u64> {
        Some(self.bounds.max_instances_per_check)
    }

    fn e_objects(&self) -> Result<Vec<ObjId>> {
        Ok(self.tuples.iter().map(|t| tuple_key(t)).collect())
    }
    fn e_morphisms(&self) -> Result<Vec<MorId>> {
        let mut out = Vec::new();
        for u in &self.tuples {
            for v in &self.tuples {
                if u.len() > v.len() {
                    continue;
                }
                for q in InjMorphism::all(u.len(), v.len()) {
                    // q_*ū with the empty word at missed slots.
                    let mut qu: Vec<Vec<ObjId>> = vec![vec![]; v.len()];
                    for (i, w) in u.iter().enumerate() {
                        qu[q.apply(i + 1) - 1] = w.clone();
                    }
                    // Components: base morphisms Φ(v_j) → Φ(qu_j).
                    let mut slots: Vec<Vec<MorId>> = Vec::new();
                    for j in 0..v.len() {
                        let from = self.phi(&v[j])?;
                        let to = self.phi(&qu[j])?;
                        slots.push(self.st.ccat().hom(&from, &to));
                    }
                    let mut stacks: Vec<Vec<MorId>> = vec![vec![]];
                    for s in &slots {
                        let mut next = Vec::new();
                        for st in &stacks {
                            for c in s {
                                let mut st2 = st.clone();
                                st2.push(c.clone());
                                next.push(st2);
                            }
                        }
                        stacks = next;
                    }
                    for comps in stacks {
                        out.push(self.reg_mor(&PsiWreathMor {
                            dom: u.clone(),
                            cod: v.clone(),
                            q: q.clone(),
                            comps,
                        }));
                    }
                }
            }
        }
        Ok(out)
    }
    fn e_dom(&self, f: &MorId) -> Result<ObjId> {
        Ok(self.reg_tuple(&self.wmor(f)?.dom))
    }
    fn e_cod(&self, f: &MorId) -> Result<ObjId> {
        Ok(self.reg_tuple(&self.wmor(f)?.cod))
    }
    fn e_compose(&self, g: &MorId, f: &MorId) -> Result<Option<MorId>> {
        let wf = self.wmor(f)?;
        let wg = self.wmor(g)?;
        if wf.cod != wg.dom {
            return Err(Error::NotComposable {
                second: g.clone(),
                first: f.clone(),
            });
        }
        let q = wg.q.compose(&wf.q)?;
        let mut comps = Vec::new();
        for k in 1..=wg.q.m {
            let pushed = match wg.q.preimage(k) {
                Some(i) => wf.comps[i - 1].clone(),
                None => self
                    .st
                    .ccat()
                    .identity_of(&self.st.input.base_mon.unit)?,
            };
            comps.push(self.st.ccat().compose2(&pushed, &wg.comps[k - 1])?);
        }
        Ok(Some(self.reg_mor(&PsiWreathMor {
            dom: wf.dom.clone(),
            cod: wg.cod.clone(),
            q,
            comps,
        })))
    }
    fn e_identity(&self, c: &ObjId) -> Result<MorId> {
        let t = self.tuple(c)?;
        let comps = t
            .iter()
            .map(|w| self.st.ccat().identity_of(&self.phi(w)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.reg_mor(&PsiWreathMor {
            dom: t.clone(),
            cod: t,
            q: InjMorphism::identity(comps.len()),
            comps,
        }))
    }
    fn e_unit(&self) -> ObjId {
        tuple_key(&[])
    }
    fn e_tensor_obj(&self, a: &ObjId, b: &ObjId) -> Result<Option<ObjId>> {
        let ta = self.tuple(a)?;
        let tb = self.tuple(b)?;
        let cc: Vec<Vec<ObjId>> = ta.iter().chain(tb.iter()).cloned().collect();
        Ok(Some(self.reg_tuple(&cc)))
    }
    fn e_tensor_mor(&self, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        let wf = self.wmor(f)?;
        let wg = self.wmor(g)?;
        let n = wf.q.n + wg.q.n;
        let m = wf.q.m + wg.q.m;
        let mut map = wf.q.map.clone();
        map.extend(wg.q.map.iter().map(|v| v + wf.q.m));
        let mut comps = wf.comps.clone();
        comps.extend(wg.comps.iter().cloned());
        Ok(Some(self.reg_mor(&PsiWreathMor {
            dom: wf.dom.iter().chain(wg.dom.iter()).cloned().collect(),
            cod: wf.cod.iter().chain(wg.cod.iter()).cloned().collect(),
            q: InjMorphism::new(n, m, map)?,
            comps,
        })))
    }
    fn e_gamma(&self, a: &ObjId, b: &ObjId) -> Result<Option<MorId>> {
        let ta = self.tuple(a)?;
        let tb = self.tuple(b)?;
        let (n, m) = (ta.len(), tb.len());
        let xi = crate::perm::block_perm(&Perm::transposition(2, 1, 2), &[n, m]);
        let map: Vec<usize> = (1..=n + m).map(|i| xi.apply(i)).collect();
        let cod: Vec<Vec<ObjId>> = tb.iter().chain(ta.iter()).cloned().collect();
        let comps = cod
            .iter()
            .map(|w| self.st.ccat().identity_of(&self.phi(w)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(self.reg_mor(&PsiWreathMor {
            dom: ta.iter().chain(tb.iter()).cloned().collect(),
            cod,
            q: InjMorphism::new(n + m, n + m, map)?,
            comps,
        })))
    }

    fn f_objects(&self, c: &ObjId) -> Result<Vec<ObjId>> {
        if let Some(v) = self.fiber_cache.lock().unwrap().get(c) {
            return Ok(v.clone());
        }
        let t = self.tuple(c)?;
        // Row pool: products of nonzero sections per slot (a single
        // ()-section for the empty tuple).
        let slot_words: Vec<Vec<ObjId>> = if t.is_empty() { vec![vec![]] } else { t.clone() };
        let mut rows: Vec<Vec<Sect>> = vec![vec![]];
        for w in &slot_words {
            let sections = self.sections(w)?;
            let mut next = Vec::new();
            for r in &rows {
                for s in &sections {
                    if s.kind == SectKind::Zero {
                        continue;
                    }
                    let mut r2 = r.clone();
                    r2.push(s.clone());
                    next.push(r2);
                }
            }
            next.truncate(48);
            rows = next;
        }
        let mut out = Vec::new();
        let mut sums: Vec<Vec<Vec<Sect>>> = vec![vec![]];
        'grow: for _ in 0..=self.bounds.row_cap {
            for s in &sums {
                out.push(self.reg_psi(&PsiObject {
                    u: t.clone(),
                    rows: s.clone(),
                })?);
                if out.len() >= self.bounds.max_psi_objects {
                    break 'grow;
                }
            }
            let mut next = Vec::new();
            for s in &sums {
                for r in &rows {
                    let mut s2 = s.clone();
                    s2.push(r.clone());
                    next.push(s2);
                }
            }
            if next.is_empty() {
                break;
            }
            next.truncate(256);
            sums = next;
        }
        out.sort();
        out.dedup();
        self.fiber_cache.lock().unwrap().insert(c.clone(), out.clone());
        Ok(out)
    }
    fn f_morphisms(&self, c: &ObjId) -> Result<Vec<MorId>> {
        let objs = self.f_objects(c)?;
        let mut out = Vec::new();
        for p in &objs {
            let pe = self.eval(&self.psi(p)?)?;
            let tp = self.st.theta(&pe)?;
            for q in &objs {
                let qe = self.eval(&self.psi(q)?)?;
                let tq = self.st.theta(&qe)?;
                for m in self.st.dcat().hom(&tp, &tq) {
                    if self.st.input.fibered.proj_mor(&m)?
                        == self
                            .st
                            .ccat()
                            .identity_of(&self.st.input.fibered.proj_obj(&tp)?)?
                    {
                        out.push(self.reg_psi_mor(p, q, &m));
                    }
                }
            }
        }
        out.truncate(64);
        Ok(out)
    }
    fn f_dom(&self, _c: &ObjId, m: &MorId) -> Result<ObjId> {
        Ok(self.psi_mor(m)?.0)
    }
    fn f_cod(&self, _c: &ObjId, m: &MorId) -> Result<ObjId> {
        Ok(self.psi_mor(m)?.1)
    }
    fn f_compose(&self, _c: &ObjId, g: &MorId, f: &MorId) -> Result<MorId> {
        let (fd, fc, fm) = self.psi_mor(f)?;
        let (gd, gc, gm) = self.psi_mor(g)?;
        if fc != gd {
            eprintln!("[psi] mismatch mid: fc = {:?}", self.psi(&fc));
            eprintln!("[psi] mismatch mid: gd = {:?}", self.psi(&gd));
            return Err(Error::NotComposable {
                second: g.clone(),
                first: f.clone(),
            });
        }
        Ok(self.reg_psi_mor(&fd, &gc, &self.st.dcat().compose2(&gm, &fm)?))
    }
    fn f_identity(&self, _c: &ObjId, x: &ObjId) -> Result<MorId> {
        let p = self.psi(x)?;
        let t = self.st.theta(&self.eval(&p)?)?;
        Ok(self.reg_psi_mor(x, x, &self.st.dcat().identity_of(&t)?))
    }
    fn f_zero(&self, c: &ObjId) -> Result<ObjId> {
        let t = self.tuple(c)?;
        self.reg_psi(&self.zero_psi(&t))
    }
    fn f_add_obj(&self, _c: &ObjId, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>> {
        let p = self.psi(x)?;
        let q = self.psi(y)?;
        let mut rows = p.rows.clone();
        rows.extend(q.rows.iter().cloned());
        Ok(Some(self.reg_psi(&PsiObject { u: p.u.clone(), rows })?))
    }
    fn f_add_mor(&self, c: &ObjId, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        let (fd, fc, fm) = self.psi_mor(f)?;
        let (gd, gc, gm) = self.psi_mor(g)?;
        let x = self.eval(&self.psi(&fd)?)?;
        let xp = self.eval(&self.psi(&gd)?)?;
        let y = self.eval(&self.psi(&fc)?)?;
        let yp = self.eval(&self.psi(&gc)?)?;
        let m = self.st.boxplus_mor(&x, &xp, &y, &yp, &fm, &gm)?;
        let dom = self.f_add_obj(c, &fd, &gd)?.unwrap();
        let cod = self.f_add_obj(c, &fc, &gc)?.unwrap();
        Ok(Some(self.reg_psi_mor(&dom, &cod, &m)))
    }
    fn f_gamma(&self, c: &ObjId, x: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        let p = self.psi(x)?;
        let q = self.psi(y)?;
        let pe = self.eval(&p)?;
        let qe = self.eval(&q)?;
        let m = self.st.gamma_boxplus(&pe, &qe)?;
        let dom = self.f_add_obj(c, x, y)?.unwrap();
        let cod = self.f_add_obj(c, y, x)?.unwrap();
        Ok(Some(self.reg_psi_mor(&dom, &cod, &m)))
    }
    fn fmap_obj(&self, f: &MorId, x: &ObjId) -> Result<ObjId> {
        let w = self.wmor(f)?;
        let p = self.psi(x)?;
        self.reg_psi(&self.psi_map_obj(&w, &p)?)
    }
    fn fmap_mor(&self, f: &MorId, m: &MorId) -> Result<MorId> {
        let w = self.wmor(f)?;
        let (md, mc, dm) = self.psi_mor(m)?;
        let p = self.psi(&md)?;
        let q = self.psi(&mc)?;
        let a = self.transport_iso(&w, &p)?;
        let b = self.transport_iso(&w, &q)?;
        let a_inv = self
            .st
            .dcat()
            .inverse(&a)
            .ok_or_else(|| Error::Precondition("transport not invertible".into()))?;
        let conj = self
            .st
            .dcat()
            .compose2(&b, &self.st.dcat().compose2(&dm, &a_inv)?)?;
        let dom = self.fmap_obj(f, &md)?;
        let cod = self.fmap_obj(f, &mc)?;
        Ok(self.reg_psi_mor(&dom, &cod, &conj))
    }
    fn fmap_lambda(&self, f: &MorId, x: &ObjId, y: &ObjId) -> Result<MorId> {
        // Ψ(q, f̄) is a strict map: λ components are identities.
        let sum = self
            .f_add_obj(&self.e_dom(f)?, x, y)?
            .ok_or_else(|| Error::Internal("psi add".into()))?;
        let mapped = self.fmap_obj(f, &sum)?;
        self.f_identity(&self.e_cod(f)?, &mapped)
    }
    fn one_obj(&self) -> ObjId {
        self.reg_psi(&self.one_psi().expect("unit section"))
            .expect("unit registration")
    }
    fn t2_obj(&self, _c1: &ObjId, _c2: &ObjId, x: &ObjId, y: &ObjId) -> Result<Option<ObjId>> {
        let p = self.psi(x)?;
        let q = self.psi(y)?;
        Ok(Some(self.reg_psi(&self.psi_tensor(&p, &q)?)?))
    }
    fn t2_mor(&self, c1: &ObjId, c2: &ObjId, f: &MorId, g: &MorId) -> Result<Option<MorId>> {
        let (fd, fc, fm) = self.psi_mor(f)?;
        let (gd, gc, gm) = self.psi_mor(g)?;
        let pd = self.psi(&fd)?;
        let pc = self.psi(&fc)?;
        let qd = self.psi(&gd)?;
        let qc = self.psi(&gc)?;
        let xd = self.eval(&pd)?;
        let xc = self.eval(&pc)?;
        let yd = self.eval(&qd)?;
        let yc = self.eval(&qc)?;
        let raw = self.st.boxtimes_mor(&xd, &xc, &yd, &yc, &fm, &gm)?;
        // Reorder the boxtimes (i-major) summands into the j-major rows of
        // the Ψ product.
        let reorder = |p: &PsiObject, q: &PsiObject, xv: &StrictTotalObject, yv: &StrictTotalObject| -> Result<(MorId, ObjId)> {
            let prod_obj = self.psi_tensor(p, q)?;
            let target = self.eval(&prod_obj)?;
            let bt = self.st.boxtimes(xv, yv)?;
            let tb = self.st.theta(&bt)?;
            let tt = self.st.theta(&target)?;
            if tb == tt {
                return Ok((self.st.dcat().identity_of(&tb)?, self.reg_psi(&prod_obj)?));
            }
            let m = p.rows.len();
            let s = q.rows.len();
            let total = m * s;
            let mut images = Vec::with_capacity(total);
            for t in 0..total {
                // Target slot t = (j, i) j-major; source is i-major.
                let (j, i) = (t / m, t % m);
                images.push(i * s + j + 1);
            }
            let view = PsiAddView {
                ring: self,
                word: target.base.clone(),
            };
            let handles: Vec<ObjId> = (0..total)
                .map(|t| {
                    let (i, j) = (t / s, t % s);
                    let row = self
                        .eval_row(&p.rows[i])
                        .and_then(|a| Ok(self.st.boxtimes(&a, &self.eval_row(&q.rows[j])?)?))?;
                    Ok(self.st.obj_id(&row))
                })
                .collect::<Result<_>>()?;
            let sigma = Perm::from_images(&images)
                .ok_or_else(|| Error::Internal("bad product reorder".into()))?;
            let (_, iso) = permute_iso(&view, &handles, &sigma)?;
            let (_, _, dm) = self.st.resolve_mor(&iso)?;
            Ok((dm, self.reg_psi(&prod_obj)?))
        };
        let (rd, dom) = reorder(&pd, &qd, &xd, &yd)?;
        let (rc, cod) = reorder(&pc, &qc, &xc, &yc)?;
        let rd_inv = self
            .st
            .dcat()
            .inverse(&rd)
            .ok_or_else(|| Error::Precondition("reorder not invertible".into()))?;
        let m = self
            .st
            .dcat()
            .compose2(&rc, &self.st.dcat().compose2(&raw, &rd_inv)?)?;
        let _ = (c1, c2);
        Ok(Some(self.reg_psi_mor(&dom, &cod, &m)))
    }
    fn dl2(
        &self,
        c1: &ObjId,
        c2: &ObjId,
        x: &ObjId,
        xp: &ObjId,
        y: &ObjId,
    ) -> Result<Option<MorId>> {
        // (F⊗G)⊕(F'⊗G) → (F⊕F')⊗G: a row permutation (j-major interleave).
        let p = self.psi(x)?;
        let pp = self.psi(xp)?;
        let q = self.psi(y)?;
        let fg = self.psi_tensor(&p, &q)?;
        let fpg = self.psi_tensor(&pp, &q)?;
        let src = self.canon(&PsiObject {
            u: fg.u.clone(),
            rows: fg.rows.iter().chain(fpg.rows.iter()).cloned().collect(),
        })?;
        let sum = self.canon(&PsiObject {
            u: p.u.clone(),
            rows: p.rows.iter().chain(pp.rows.iter()).cloned().collect(),
        })?;
        let tgt = self.psi_tensor(&sum, &q)?;
        let (r, s1, s2) = (p.rows.len(), pp.rows.len(), q.rows.len());
        let total = (r + s1) * s2;
        let mut images = Vec::with_capacity(total);
        for t in 0..total {
            // Target rows are j-major over (F rows ++ F' rows).
            let (j, i) = (t / (r + s1), t % (r + s1));
            let source = if i < r { j * r + i } else { s2 * r + j * s1 + (i - r) };
            images.push(source + 1);
        }
        let m = if src.rows.is_empty() {
            self.st
                .dcat()
                .identity_of(&self.st.theta(&self.eval(&src)?)?)?
        } else if images.len() == src.rows.len() {
            let sigma = Perm::from_images(&images)
                .ok_or_else(|| Error::Internal("bad dl permutation".into()))?;
            self.row_permutation(&src, &sigma)?
        } else {
            // Normalization dropped zero rows asymmetrically; fall back to
            // the unique comparison.
            let ts = self.st.theta(&self.eval(&src)?)?;
            let tt = self.st.theta(&self.eval(&tgt)?)?;
            if ts == tt {
                self.st.dcat().identity_of(&ts)?
            } else {
                let mut cands = self.st.dcat().hom(&ts, &tt);
                cands.sort();
                cands
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::Internal("no dl comparison".into()))?
            }
        };
        let dom = self
            .f_add_obj(
                &self.reg_tuple(&src.u),
                &self.reg_psi(&fg)?,
                &self.reg_psi(&fpg)?,
            )?
            .unwrap();
        let cod = self.reg_psi(&tgt)?;
        let _ = (c1, c2);
        Ok(Some(self.reg_psi_mor(&dom, &cod, &m)))
    }
    fn dr2(
        &self,
        c1: &ObjId,
        c2: &ObjId,
        x: &ObjId,
        y: &ObjId,
        yp: &ObjId,
    ) -> Result<Option<MorId>> {
        // (F⊗G)⊕(F⊗G') and F⊗(G⊕G') have identical row lists (j-major).
        let p = self.psi(x)?;
        let q = self.psi(y)?;
        let qp = self.psi(yp)?;
        let fg = self.psi_tensor(&p, &q)?;
        let fgp = self.psi_tensor(&p, &qp)?;
        let sum = self.canon(&PsiObject {
            u: q.u.clone(),
            rows: q.rows.iter().chain(qp.rows.iter()).cloned().collect(),
        })?;
        let tgt = self.psi_tensor(&p, &sum)?;
        let src = self.canon(&PsiObject {
            u: fg.u.clone(),
            rows: fg.rows.iter().chain(fgp.rows.iter()).cloned().collect(),
        })?;
        if src != tgt {
            return Err(Error::Internal("dr operands disagree".into()));
        }
        let m = self
            .st
            .dcat()
            .identity_of(&self.st.theta(&self.eval(&src)?)?)?;
        let dom = self
            .f_add_obj(
                &self.reg_tuple(&src.u),
                &self.reg_psi(&fg)?,
                &self.reg_psi(&fgp)?,
            )?
            .unwrap();
        let cod = self.reg_psi(&tgt)?;
        let _ = (c1, c2);
        Ok(Some(self.reg_psi_mor(&dom, &cod, &m)))
    }
    fn has_mu(&self) -> bool {
        true
    }
    fn mu(&self, c1: &ObjId, c2: &ObjId, x: &ObjId, y: &ObjId) -> Result<Option<MorId>> {
        // F⊗G → Ψ(ξ)(G⊗F): the (i-major ↔ j-major) row reorder.
        let p = self.psi(x)?;
        let q = self.psi(y)?;
        let fg = self.psi_tensor(&p, &q)?;
        let gamma_e = self
            .e_gamma(c2, c1)?
            .ok_or_else(|| Error::Internal("e gamma".into()))?;
        let gf = self.psi_tensor(&q, &p)?;
        let target = self.psi_map_obj(&self.wmor(&gamma_e)?, &gf)?;
        let (m, s) = (p.rows.len(), q.rows.len());
        let total = m * s;
        let mm = if fg.rows.len() != total || target.rows.len() != total {
            let ts = self.st.theta(&self.eval(&fg)?)?;
            let tt = self.st.theta(&self.eval(&target)?)?;
            if ts == tt {
                self.st.dcat().identity_of(&ts)?
            } else {
                let mut cands = self.st.dcat().hom(&ts, &tt);
                cands.sort();
                cands
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::Internal("no mu comparison".into()))?
            }
        } else {
            let mut images = Vec::with_capacity(total);
            for t in 0..total {
                // fg rows are j-major (j over q, i over p); the target rows
                // follow gf's j-major order (i over p outer).
                let (i, j) = (t / s, t % s);
                images.push(j * m + i + 1);
            }
            let sigma = Perm::from_images(&images)
                .ok_or_else(|| Error::Internal("bad mu permutation".into()))?;
            self.row_permutation(&fg, &sigma)?
        };
        let dom = self.reg_psi(&fg)?;
        let cod = self.reg_psi(&target)?;
        Ok(Some(self.reg_psi_mor(&dom, &cod, &mm)))
    }
}

/// Build the Ψ window at one tuple: the permutative shell (category of
/// bounded formal sums with ⊕ tables inside the window) plus a strictness
/// report for the sampled wreath morphisms.
pub fn psi_build(
    st: &StrictTotal,
    u: &[Vec<ObjId>],
    bounds: PsiBounds,
) -> Result<(PsiWindow, ValidationReport)> {
    let ring = PsiRing::new(st, bounds)?;
    let cid = ring.reg_tuple(u);
    let objects = <PsiRing<'_> as super::RingLike>::f_objects(&ring, &cid)?;
    let mut report = ValidationReport::new(format!("Ψ window at {}", cid));
    for c in ["strict-unit", "strict-add", "map-strictness"] {
        report.ran(c);
    }
    // 𝕆 is a strict unit for ⊕ (zero rows are absorbed by normalization).
    let zero = <PsiRing<'_> as super::RingLike>::f_zero(&ring, &cid)?;
    for x in &objects {
        let l = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cid, x, &zero)?;
        let r = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cid, &zero, x)?;
        if l.as_ref() != Some(x) || r.as_ref() != Some(x) {
            report.push("strict-unit", format!("at {x}"));
        }
    }
    // Strict associativity of ⊕.
    for x in objects.iter().take(4) {
        for y in objects.iter().take(4) {
            for z in objects.iter().take(4) {
                let xy = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cid, x, y)?.unwrap();
                let yz = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cid, y, z)?.unwrap();
                let l = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cid, &xy, z)?;
                let r = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cid, x, &yz)?;
                if l != r {
                    report.push("strict-add", format!("({x},{y},{z})"));
                }
            }
        }
    }
    // Sampled map strictness: Ψ(q,f̄)(x ⊕ y) = Ψ(q,f̄)x ⊕ Ψ(q,f̄)y.
    let mors = <PsiRing<'_> as super::RingLike>::e_morphisms(&ring)?;
    for f in mors.iter().take(12) {
        if <PsiRing<'_> as super::RingLike>::e_dom(&ring, f)? != cid {
            continue;
        }
        let cod = <PsiRing<'_> as super::RingLike>::e_cod(&ring, f)?;
        for x in objects.iter().take(3) {
            for y in objects.iter().take(3) {
                let sum = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cid, x, y)?.unwrap();
                let l = <PsiRing<'_> as super::RingLike>::fmap_obj(&ring, f, &sum)?;
                let fx = <PsiRing<'_> as super::RingLike>::fmap_obj(&ring, f, x)?;
                let fy = <PsiRing<'_> as super::RingLike>::fmap_obj(&ring, f, y)?;
                let r = <PsiRing<'_> as super::RingLike>::f_add_obj(&ring, &cod, &fx, &fy)?.unwrap();
                if l != r {
                    report.push("map-strictness", format!("{f} at ({x},{y})"));
                }
            }
        }
    }
    Ok((
        PsiWindow {
            tuple: u.to_vec(),
            objects,
        },
        report,
    ))
}

/// The materialized part of one Ψ(ū) window.
#[derive(Debug, Clone)]
pub struct PsiWindow {
    pub tuple: Vec<Vec<ObjId>>,
    pub objects: Vec<ObjId>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::z2_fibered;
    use crate::multicat::{validate_ring_data, RingLike};
    use crate::strictifier::{strictify_total, SymBimonFiberData};

    fn strictified() -> StrictTotal {
        let data = SymBimonFiberData::from_strict(&z2_fibered()).unwrap();
        strictify_total(&data).unwrap()
    }

    #[test]
    fn psi_of_empty_tuple_matches_unit_fiber() {
        let st = strictified();
        let ring = PsiRing::new(&st, PsiBounds::default()).unwrap();
        let empty = ring.e_unit();
        let objs = ring.f_objects(&empty).unwrap();
        // Ψ(()) objects evaluate to window objects of the unit fiber; the
        // zero and some singleton sums must be present.
        assert!(objs.len() >= 2);
        let zero = ring.f_zero(&empty).unwrap();
        assert!(objs.contains(&zero));
        // Evaluation of the unit object is the strictified unit.
        let one = ring.one_obj();
        let p = ring.psi(&one).unwrap();
        let v = ring.eval(&p).unwrap();
        assert_eq!(st.theta(&v).unwrap(), ObjId::from("1"));
    }

    #[test]
    fn unit_is_strict_for_tensor() {
        let st = strictified();
        let ring = PsiRing::new(&st, PsiBounds::default()).unwrap();
        let one = ring.one_obj();
        let unit_e = ring.e_unit();
        let tuples = ring.e_objects().unwrap();
        for c in tuples.iter().take(4) {
            for x in ring.f_objects(c).unwrap().iter().take(5) {
                let l = ring.t2_obj(&unit_e, c, &one, x).unwrap().unwrap();
                let r = ring.t2_obj(c, &unit_e, x, &one).unwrap().unwrap();
                assert_eq!(&l, x, "1⊗x at {c}");
                assert_eq!(&r, x, "x⊗1 at {c}");
            }
        }
    }

    #[test]
    fn zero_absorbs_in_tensor() {
        let st = strictified();
        let ring = PsiRing::new(&st, PsiBounds::default()).unwrap();
        let tuples = ring.e_objects().unwrap();
        let c = &tuples[1];
        let zero = ring.f_zero(c).unwrap();
        for x in ring.f_objects(c).unwrap().iter().take(5) {
            let prod = ring.t2_obj(c, c, &zero, x).unwrap().unwrap();
            let cc = ring.e_tensor_obj(c, c).unwrap().unwrap();
            assert_eq!(prod, ring.f_zero(&cc).unwrap());
        }
    }

    #[test]
    fn psi_build_window_reports_clean() {
        let st = strictified();
        let u = vec![vec![ObjId::from("pt")]];
        let (win, rep) = psi_build(&st, &u, PsiBounds::default()).unwrap();
        assert!(!win.objects.is_empty());
        assert!(rep.is_valid(), "{rep}");
    }

    #[test]
    fn ring_conditions_hold_on_strictified_z2() {
        let st = strictified();
        let mut bounds = PsiBounds::default();
        bounds.max_psi_objects = 6;
        bounds.max_instances_per_check = 1_500;
        let ring = PsiRing::new(&st, bounds).unwrap();
        let rep = validate_ring_data(&ring).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }
}
