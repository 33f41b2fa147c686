//! Truncated multicategories: the interface, table-backed data, the axiom
//! checker, Σ_*/EΣ_*, the k-linear fragment of the multicategory of
//! permutative categories, the functor multicategory M^E, push-forwards,
//! ring data with conditions (c.1)–(c.14), and the Ψ construction.

mod functor_mc;
mod plinear;
mod psi;
mod ring;
mod sigma;

pub use functor_mc::{
    pushforward_family, pushforward_functor, validate_pushforward, FunctorMulticat, MeBounds,
    MeFamily, MeFunctor, TableMultifunctor,
};
pub use plinear::{klinear_identity, KLinearMap, PFragment, PlBounds};
pub use psi::{psi_build, PsiBounds, PsiRing};
pub use ring::{
    build_multifunctor, extract_ring_data, validate_ring_data, validate_ring_multifunctor,
    RingLike, RingMultifunctor, SigmaMode, TableRingData, TwoLinear,
};
pub use sigma::{perm_as_multicat, perm_id, sigma_multicat};

use crate::error::{Error, Result};
use crate::ids::ObjId;
use crate::perm::{block_perm, block_sum, Perm};
use crate::report::ValidationReport;
use std::collections::BTreeMap;
use std::fmt::Debug;

/// What the Multi(1)–Multi(4) checker needs from a truncated multicategory.
/// K-morphisms are values carrying their own typing; enumated sets may be
/// window-limited for lazy structures.
pub trait Multicat {
    type Obj: Clone + Eq + Ord + Debug;
    type KMor: Clone + Eq + Ord + Debug;

    fn subject(&self) -> String;
    fn arity_cap(&self) -> usize;
    fn bounds_note(&self) -> Option<String> {
        None
    }
    /// Per-check instance budget (None = exhaustive).
    fn instance_cap(&self) -> Option<u64> {
        None
    }

    fn objects(&self) -> Result<Vec<Self::Obj>>;
    fn kmorphisms(&self, inputs: &[Self::Obj], output: &Self::Obj) -> Result<Vec<Self::KMor>>;
    /// Inputs and output of a k-morphism.
    fn profile(&self, m: &Self::KMor) -> Result<(Vec<Self::Obj>, Self::Obj)>;
    fn unit(&self, a: &Self::Obj) -> Result<Self::KMor>;
    /// The right action `σ* : M(a₁..a_k;b) → M(a_{σ(1)}..a_{σ(k)};b)`.
    fn act(&self, sigma: &Perm, phi: &Self::KMor) -> Result<Self::KMor>;
    /// The multiproduct `Γ(ψ; φ₁,…,φ_k)`.
    fn gamma(&self, psi: &Self::KMor, phis: &[&Self::KMor]) -> Result<Self::KMor>;
}

/// A table-backed truncated multicategory. K-morphisms are ids with stored
/// profiles; the Σ-action and Γ are total lookup tables within the cap. The
/// optional codiscete flag models Cat-enrichment with exactly one cell
/// between any two parallel k-morphisms (the translation-category case).
#[derive(Debug, Clone)]
pub struct TableMulticat {
    pub name: String,
    pub objects: Vec<ObjId>,
    pub cap: usize,
    /// id → (inputs, output).
    pub kmors: BTreeMap<String, (Vec<ObjId>, ObjId)>,
    pub units: BTreeMap<ObjId, String>,
    pub action: BTreeMap<(String, Perm), String>,
    pub gamma: BTreeMap<(String, Vec<String>), String>,
    /// Cat-enrichment: one morphism between every parallel pair.
    pub codiscrete_cells: bool,
}

impl Multicat for TableMulticat {
    type Obj = ObjId;
    type KMor = String;

    fn subject(&self) -> String {
        self.name.clone()
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn objects(&self) -> Result<Vec<ObjId>> {
        Ok(self.objects.clone())
    }
    fn kmorphisms(&self, inputs: &[ObjId], output: &ObjId) -> Result<Vec<String>> {
        Ok(self
            .kmors
            .iter()
            .filter(|(_, (i, o))| i == inputs && o == output)
            .map(|(k, _)| k.clone())
            .collect())
    }
    fn profile(&self, m: &String) -> Result<(Vec<ObjId>, ObjId)> {
        self.kmors
            .get(m)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("k-morphism {m}")))
    }
    fn unit(&self, a: &ObjId) -> Result<String> {
        self.units
            .get(a)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("unit at {a}")))
    }
    fn act(&self, sigma: &Perm, phi: &String) -> Result<String> {
        self.action
            .get(&(phi.clone(), sigma.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("action of {sigma} on {phi}")))
    }
    fn gamma(&self, psi: &String, phis: &[&String]) -> Result<String> {
        let key = (psi.clone(), phis.iter().map(|p| (*p).clone()).collect::<Vec<_>>());
        self.gamma
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("gamma({psi}; ...)")))
    }
}

/// Enumerate the tuples (j₁,…,j_k) of arities with the given sum bound.
fn arity_tuples(k: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..=left {
            cur.push(j);
            rec(k, left - j, cur, out);
            cur.pop();
        }
    }
    rec(k, max_total, &mut cur, &mut out);
    out
}

/// Exhaustively (within caps and budgets) check Multi(1)–Multi(4), the unit
/// laws, the right-action law, and result typing.
pub fn validate_multicat<M: Multicat>(m: &M) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new(m.subject());
    for c in [
        "typing",
        "units",
        "right-action",
        "Multi(1)",
        "Multi(2)",
        "Multi(3)",
        "Multi(4)",
    ] {
        rep.ran(c);
    }
    let mut checked: u64 = 0;
    let mut skipped: u64 = 0;
    let cap = m.instance_cap();
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

    let objects = m.objects()?;
    let acap = m.arity_cap();

    // Gather all k-morphisms per (inputs, output) profile within the cap.
    let mut profiles: Vec<(Vec<M::Obj>, M::Obj)> = Vec::new();
    {
        let mut tuples: Vec<Vec<M::Obj>> = vec![vec![]];
        for _ in 0..=acap {
            for t in &tuples {
                for b in &objects {
                    profiles.push((t.clone(), b.clone()));
                }
            }
            let mut next = Vec::new();
            for t in &tuples {
                for a in &objects {
                    let mut t2 = t.clone();
                    t2.push(a.clone());
                    next.push(t2);
                }
            }
            tuples = next;
        }
        // The loop above pushed arity 0..=acap profiles; tuples of arity
        // acap+1 are discarded.
        profiles.dedup();
    }

    let mut all_kmors: Vec<M::KMor> = Vec::new();
    for (inputs, output) in &profiles {
        for phi in m.kmorphisms(inputs, output)? {
            let (pi, po) = m.profile(&phi)?;
            checked += 1;
            if &pi != inputs || &po != output {
                rep.push("typing", format!("{phi:?} profile mismatch"));
            }
            all_kmors.push(phi);
        }
    }

    // Units exist and satisfy Multi(2).
    for a in &objects {
        let u = m.unit(a)?;
        let (pi, po) = m.profile(&u)?;
        checked += 1;
        if pi != vec![a.clone()] || &po != a {
            rep.push("units", format!("unit at {a:?} mistyped"));
        }
    }
    for phi in &all_kmors {
        if !within_budget!("Multi(2)") {
            skipped += 1;
            continue;
        }
        let (inputs, output) = m.profile(phi)?;
        let ub = m.unit(&output)?;
        checked += 1;
        if m.gamma(&ub, &[phi])? != *phi {
            rep.push("Multi(2)", format!("Γ(1;{phi:?}) != {phi:?}"));
        }
        if !inputs.is_empty() {
            let units: Vec<M::KMor> = inputs
                .iter()
                .map(|a| m.unit(a))
                .collect::<Result<_>>()?;
            let refs: Vec<&M::KMor> = units.iter().collect();
            checked += 1;
            if m.gamma(phi, &refs)? != *phi {
                rep.push("Multi(2)", format!("Γ({phi:?};1,…,1) != {phi:?}"));
            }
        }
    }

    // Right action: id* = id and (στ)* = τ*σ*.
    for phi in &all_kmors {
        let (inputs, _) = m.profile(phi)?;
        let k = inputs.len();
        if k == 0 {
            continue;
        }
        checked += 1;
        if m.act(&Perm::identity(k), phi)? != *phi {
            rep.push("right-action", format!("id* on {phi:?}"));
        }
        for sigma in Perm::all(k) {
            for tau in Perm::all(k) {
                if !within_budget!("right-action") {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let lhs = m.act(&sigma.compose(&tau), phi)?;
                let rhs = m.act(&tau, &m.act(&sigma, phi)?)?;
                if lhs != rhs {
                    rep.push("right-action", format!("(στ)* != τ*σ* on {phi:?}"));
                }
            }
        }
    }

    // Composable selections for Multi(1), (3), (4): ψ of arity k with
    // φ_i matching ψ's inputs.
    let composable: Vec<(M::KMor, Vec<M::KMor>)> = {
        let mut out = Vec::new();
        for psi in &all_kmors {
            let (inputs, _) = m.profile(psi)?;
            let k = inputs.len();
            if k == 0 {
                continue;
            }
            for arities in arity_tuples(k, acap) {
                // Candidate φ_i lists per slot.
                let mut slot_cands: Vec<Vec<M::KMor>> = Vec::new();
                let mut dead = false;
                for (i, b) in inputs.iter().enumerate() {
                    let mut cands = Vec::new();
                    for phi in &all_kmors {
                        let (pi, po) = m.profile(phi)?;
                        if &po == b && pi.len() == arities[i] {
                            cands.push(phi.clone());
                        }
                    }
                    if cands.is_empty() {
                        dead = true;
                        break;
                    }
                    slot_cands.push(cands);
                }
                if dead {
                    continue;
                }
                // Deterministic cartesian product, truncated.
                let mut stacks: Vec<Vec<M::KMor>> = vec![vec![]];
                for cands in &slot_cands {
                    let mut next = Vec::new();
                    for s in &stacks {
                        for c in cands {
                            let mut s2 = s.clone();
                            s2.push(c.clone());
                            next.push(s2);
                            if next.len() > 64 {
                                break;
                            }
                        }
                        if next.len() > 64 {
                            break;
                        }
                    }
                    next.truncate(64);
                    stacks = next;
                }
                for s in stacks {
                    out.push((psi.clone(), s));
                }
            }
        }
        out
    };

    for (psi, phis) in &composable {
        let refs: Vec<&M::KMor> = phis.iter().collect();
        // Typing of the multiproduct.
        if !within_budget!("typing") {
            skipped += 1;
        } else {
            checked += 1;
            let got = m.gamma(psi, &refs)?;
            let (gi, go) = m.profile(&got)?;
            let want_inputs: Vec<M::Obj> = phis
                .iter()
                .map(|p| m.profile(p).map(|(i, _)| i))
                .collect::<Result<Vec<_>>>()?
                .concat();
            let (_, want_out) = m.profile(psi)?;
            if gi != want_inputs || go != want_out {
                rep.push("typing", format!("Γ result mistyped for {psi:?}"));
            }
        }

        // Multi(3): Γ(σ*ψ; φ_{σ(1)},…) = σ⟨j_{σ(1)},…⟩* Γ(ψ; φ's).
        let k = phis.len();
        for sigma in Perm::all(k) {
            if !within_budget!("Multi(3)") {
                skipped += 1;
                continue;
            }
            checked += 1;
            let permuted: Vec<&M::KMor> =
                (1..=k).map(|t| &phis[sigma.apply(t) - 1]).collect();
            let lhs = m.gamma(&m.act(&sigma, psi)?, &permuted)?;
            let sizes: Vec<usize> = permuted
                .iter()
                .map(|p| m.profile(p).map(|(i, _)| i.len()))
                .collect::<Result<_>>()?;
            let rhs = m.act(&block_perm(&sigma, &sizes), &m.gamma(psi, &refs)?)?;
            if lhs != rhs {
                rep.push("Multi(3)", format!("σ = {sigma} at {psi:?}"));
            }
        }

        // Multi(4): Γ(ψ; τ₁*φ₁,…) = (τ₁⊕…⊕τ_k)* Γ(ψ; φ's).
        let arity_lists: Vec<usize> = phis
            .iter()
            .map(|p| m.profile(p).map(|(i, _)| i.len()))
            .collect::<Result<_>>()?;
        let mut tau_choices: Vec<Vec<Perm>> = Vec::new();
        for &j in &arity_lists {
            tau_choices.push(Perm::all(j));
        }
        let mut tuples: Vec<Vec<Perm>> = vec![vec![]];
        for choices in &tau_choices {
            let mut next = Vec::new();
            for t in &tuples {
                for c in choices {
                    let mut t2 = t.clone();
                    t2.push(c.clone());
                    next.push(t2);
                }
            }
            next.truncate(24);
            tuples = next;
        }
        for taus in &tuples {
            if !within_budget!("Multi(4)") {
                skipped += 1;
                continue;
            }
            checked += 1;
            let acted: Vec<M::KMor> = phis
                .iter()
                .zip(taus.iter())
                .map(|(p, t)| m.act(t, p))
                .collect::<Result<_>>()?;
            let acted_refs: Vec<&M::KMor> = acted.iter().collect();
            let lhs = m.gamma(psi, &acted_refs)?;
            let tau_refs: Vec<&Perm> = taus.iter().collect();
            let rhs = m.act(&block_sum(&tau_refs), &m.gamma(psi, &refs)?)?;
            if lhs != rhs {
                rep.push("Multi(4)", format!("at {psi:?}"));
            }
        }

        // Multi(1): associativity against inner decompositions.
        let gamma_out = m.gamma(psi, &refs)?;
        let (gi, _) = m.profile(&gamma_out)?;
        if gi.len() <= acap {
            // Choose χ's: unit-only tuples to keep the instance count sane
            // plus one nontrivial layer when available.
            let mut chi_lists: Vec<Vec<M::KMor>> = Vec::new();
            {
                // χ_i = units of φ_i's inputs.
                let mut chis = Vec::new();
                for p in phis.iter() {
                    let (pi, _) = m.profile(p)?;
                    for a in pi {
                        chis.push(m.unit(&a)?);
                    }
                }
                chi_lists.push(chis);
            }
            // Nontrivial χ's over the first slot when the arity budget
            // allows: replace the first unit with every 1-ary morphism of
            // matching profile.
            if let Some(first) = gi.first() {
                for cand in m.kmorphisms(&[first.clone()], first)? {
                    let mut chis = Vec::new();
                    for (t, a) in gi.iter().enumerate() {
                        if t == 0 {
                            chis.push(cand.clone());
                        } else {
                            chis.push(m.unit(a)?);
                        }
                    }
                    chi_lists.push(chis);
                }
            }
            for chis in &chi_lists {
                if chis.is_empty() {
                    // Γ of a 0-ary morphism against nothing is trivial.
                    continue;
                }
                if !within_budget!("Multi(1)") {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let chi_refs: Vec<&M::KMor> = chis.iter().collect();
                let lhs = m.gamma(&gamma_out, &chi_refs)?;
                // Right side: distribute the χ's to the φ's.
                let mut offset = 0usize;
                let mut inner: Vec<M::KMor> = Vec::new();
                for p in phis.iter() {
                    let (pi, _) = m.profile(p)?;
                    let take: Vec<&M::KMor> =
                        chis[offset..offset + pi.len()].iter().collect();
                    offset += pi.len();
                    if pi.is_empty() {
                        inner.push(p.clone());
                    } else {
                        inner.push(m.gamma(p, &take)?);
                    }
                }
                let inner_refs: Vec<&M::KMor> = inner.iter().collect();
                let rhs = m.gamma(psi, &inner_refs)?;
                if lhs != rhs {
                    rep.push("Multi(1)", format!("at {psi:?}"));
                }
            }
        }
    }

    let base = m.bounds_note().map(|b| format!("{b}; ")).unwrap_or_default();
    rep.bounds_note = Some(format!("{base}instances checked={checked} skipped={skipped}"));
    Ok(rep)
}
