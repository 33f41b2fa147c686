//! k-linear maps between permutative categories and the finite fragment of
//! the multicategory ℙ they generate.

use crate::error::{Error, Result};
use crate::ids::{MorId, ObjId};
use crate::monostruct::PermutativeStructure;
use crate::perm::Perm;
use crate::report::ValidationReport;
use std::collections::BTreeMap;

use super::Multicat;

/// A k-linear map as explicit tables: a functor from a product of fragment
/// categories that vanishes on zeros, together with its distributivity
/// transformations δ^i.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct KLinearMap {
    /// Indices of the source categories inside the fragment.
    pub sources: Vec<usize>,
    pub target: usize,
    pub obj: BTreeMap<Vec<ObjId>, ObjId>,
    pub mor: BTreeMap<Vec<MorId>, MorId>,
    /// `deltas[i]` keyed by (full object tuple with x_i at slot i, x'_i).
    pub deltas: Vec<BTreeMap<(Vec<ObjId>, ObjId), MorId>>,
}

impl KLinearMap {
    pub fn on_obj(&self, xs: &[ObjId]) -> Result<ObjId> {
        self.obj
            .get(xs)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("k-linear obj at {xs:?}")))
    }

    pub fn on_mor(&self, fs: &[MorId]) -> Result<MorId> {
        self.mor
            .get(fs)
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("k-linear mor at {fs:?}")))
    }

    pub fn delta(&self, i: usize, xs: &[ObjId], xp: &ObjId) -> Result<MorId> {
        self.deltas[i]
            .get(&(xs.to_vec(), xp.clone()))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("delta^{i} at {xs:?}, {xp}")))
    }
}

/// Enumeration bounds for the fragment.
#[derive(Debug, Clone, Copy)]
pub struct PlBounds {
    pub max_kmors_per_profile: usize,
    pub max_instances_per_check: u64,
}

impl Default for PlBounds {
    fn default() -> Self {
        PlBounds {
            max_kmors_per_profile: 16,
            max_instances_per_check: 20_000,
        }
    }
}

/// A finite set of permutative categories regarded as a sub-multicategory
/// of ℙ: k-morphisms are all k-linear maps between them (enumerated within
/// bounds).
#[derive(Debug, Clone)]
pub struct PFragment {
    pub cats: Vec<PermutativeStructure>,
    pub cap: usize,
    pub bounds: PlBounds,
}

impl PFragment {
    pub fn new(cats: Vec<PermutativeStructure>, cap: usize) -> Self {
        PFragment {
            cats,
            cap,
            bounds: PlBounds::default(),
        }
    }

    fn cat(&self, i: usize) -> &PermutativeStructure {
        &self.cats[i]
    }

    /// All object tuples of the given sources.
    fn object_tuples(&self, sources: &[usize]) -> Vec<Vec<ObjId>> {
        let mut tuples: Vec<Vec<ObjId>> = vec![vec![]];
        for &s in sources {
            let mut next = Vec::new();
            for t in &tuples {
                for o in &self.cat(s).base.objects {
                    let mut t2 = t.clone();
                    t2.push(o.clone());
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples
    }

    fn morphism_tuples(&self, sources: &[usize]) -> Vec<Vec<MorId>> {
        let mut tuples: Vec<Vec<MorId>> = vec![vec![]];
        for &s in sources {
            let mut next = Vec::new();
            for t in &tuples {
                for m in &self.cat(s).base.morphisms {
                    let mut t2 = t.clone();
                    t2.push(m.id.clone());
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples
    }

    /// Enumerate every k-linear map with the given profile, within bounds,
    /// validated before inclusion. Deterministic order.
    pub fn enumerate(&self, sources: &[usize], target: usize) -> Result<Vec<KLinearMap>> {
        let tcat = &self.cat(target).base;
        let tzero = &self.cat(target).unit_zero();
        let obj_tuples = self.object_tuples(sources);
        // Free positions: tuples with no zero entry.
        let mut free: Vec<&Vec<ObjId>> = Vec::new();
        for t in &obj_tuples {
            let has_zero = t
                .iter()
                .enumerate()
                .any(|(i, o)| o == &self.cat(sources[i]).unit_zero());
            if !has_zero {
                free.push(t);
            }
        }
        // Candidate object maps: mixed-radix over target objects at the free
        // positions; zero positions forced.
        let radix = tcat.objects.len().max(1);
        let mut obj_maps: Vec<BTreeMap<Vec<ObjId>, ObjId>> = Vec::new();
        let combos: u64 = (radix as u64)
            .checked_pow(free.len() as u32)
            .unwrap_or(u64::MAX);
        let limit = combos.min(4096);
        for mut idx in 0..limit {
            let mut map = BTreeMap::new();
            for t in &obj_tuples {
                let has_zero = t
                    .iter()
                    .enumerate()
                    .any(|(i, o)| o == &self.cat(sources[i]).unit_zero());
                if has_zero {
                    map.insert(t.clone(), tzero.clone());
                }
            }
            for t in &free {
                let choice = (idx % radix as u64) as usize;
                idx /= radix as u64;
                map.insert((*t).clone(), tcat.objects[choice].clone());
            }
            obj_maps.push(map);
        }

        let mor_tuples = self.morphism_tuples(sources);
        let mut out: Vec<KLinearMap> = Vec::new();
        'obj: for obj in obj_maps {
            // Morphism maps: per tuple, candidates limited by typing; take
            // the deterministic product, with functoriality filtering.
            let mut mor_choices: Vec<(Vec<MorId>, Vec<MorId>)> = Vec::new();
            for ft in &mor_tuples {
                let doms: Vec<ObjId> = ft
                    .iter()
                    .enumerate()
                    .map(|(i, f)| self.cat(sources[i]).base.dom(f))
                    .collect::<Result<_>>()?;
                let cods: Vec<ObjId> = ft
                    .iter()
                    .enumerate()
                    .map(|(i, f)| self.cat(sources[i]).base.cod(f))
                    .collect::<Result<_>>()?;
                let d = obj[&doms].clone();
                let c = obj[&cods].clone();
                let mut cands = tcat.hom(&d, &c);
                if &d == tzero && &c == tzero {
                    // Vanishing: morphisms over a zero slot collapse.
                    cands = vec![tcat.identity_of(tzero)?];
                }
                if cands.is_empty() {
                    continue 'obj;
                }
                mor_choices.push((ft.clone(), cands));
            }
            let mut mor_maps: Vec<BTreeMap<Vec<MorId>, MorId>> = vec![BTreeMap::new()];
            for (ft, cands) in &mor_choices {
                let mut next = Vec::new();
                for m in &mor_maps {
                    for c in cands {
                        let mut m2 = m.clone();
                        m2.insert(ft.clone(), c.clone());
                        next.push(m2);
                    }
                }
                next.truncate(2048);
                mor_maps = next;
            }
            for mor in mor_maps {
                let Some(deltas) = self.forced_deltas(sources, target, &obj)? else {
                    continue;
                };
                let cand = KLinearMap {
                    sources: sources.to_vec(),
                    target,
                    obj: obj.clone(),
                    mor,
                    deltas,
                };
                if validate_klinear(self, &cand)?.is_valid() {
                    out.push(cand);
                    if out.len() >= self.bounds.max_kmors_per_profile {
                        return Ok(out);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The δ tables when the target hom-sets force them (one candidate per
    /// component); `None` when some component has no candidate.
    fn forced_deltas(
        &self,
        sources: &[usize],
        target: usize,
        obj: &BTreeMap<Vec<ObjId>, ObjId>,
    ) -> Result<Option<Vec<BTreeMap<(Vec<ObjId>, ObjId), MorId>>>> {
        let t = self.cat(target);
        let mut deltas = Vec::new();
        for i in 0..sources.len() {
            let mut table = BTreeMap::new();
            for xs in self.object_tuples(sources) {
                for xp in &self.cat(sources[i]).base.objects {
                    let mut xs2 = xs.clone();
                    xs2[i] = xp.clone();
                    let mut xsum = xs.clone();
                    xsum[i] = self.cat(sources[i]).tensor.on_obj(&xs[i], xp)?;
                    let dom = t.tensor.on_obj(&obj[&xs], &obj[&xs2])?;
                    let cod = obj[&xsum].clone();
                    let mut cands = t.base.hom(&dom, &cod);
                    cands.sort();
                    match cands.first() {
                        None => return Ok(None),
                        Some(c) => {
                            table.insert((xs.clone(), xp.clone()), c.clone());
                        }
                    }
                }
            }
            deltas.push(table);
        }
        Ok(Some(deltas))
    }

    /// The composite `Γ(ψ; φ¹,…,φ^k)` of k-linear maps.
    pub fn compose(&self, psi: &KLinearMap, phis: &[&KLinearMap]) -> Result<KLinearMap> {
        let sources: Vec<usize> = phis.iter().flat_map(|p| p.sources.iter().copied()).collect();
        let target = psi.target;
        let mut obj = BTreeMap::new();
        let mut mor = BTreeMap::new();
        for xs in self.object_tuples(&sources) {
            let mut offset = 0;
            let mut mids = Vec::new();
            for p in phis {
                let part = &xs[offset..offset + p.sources.len()];
                offset += p.sources.len();
                mids.push(p.on_obj(part)?);
            }
            obj.insert(xs.clone(), psi.on_obj(&mids)?);
        }
        for fs in self.morphism_tuples(&sources) {
            let mut offset = 0;
            let mut mids = Vec::new();
            for p in phis {
                let part = &fs[offset..offset + p.sources.len()];
                offset += p.sources.len();
                mids.push(p.on_mor(part)?);
            }
            mor.insert(fs.clone(), psi.on_mor(&mids)?);
        }
        // δ of the composite at global slot (i, s):
        // ψ(1,…,δ^s_{φ^i},…,1) ∘ δ^i_ψ.
        let tcat = &self.cat(target).base;
        let mut deltas = Vec::new();
        for (i, p) in phis.iter().enumerate() {
            for s in 0..p.sources.len() {
                let mut table = BTreeMap::new();
                let global = deltas.len();
                for xs in self.object_tuples(&sources) {
                    for xp in &self.cat(sources[global]).base.objects {
                        let mut parts: Vec<Vec<ObjId>> = Vec::new();
                        let mut offset = 0;
                        for q in phis {
                            parts.push(xs[offset..offset + q.sources.len()].to_vec());
                            offset += q.sources.len();
                        }
                        let mids: Vec<ObjId> = phis
                            .iter()
                            .zip(parts.iter())
                            .map(|(q, part)| q.on_obj(part))
                            .collect::<Result<_>>()?;
                        let mut part2 = parts[i].clone();
                        part2[s] = xp.clone();
                        let mid2 = p.on_obj(&part2)?;
                        // δ^i_ψ at the mid tuple.
                        let dpsi = psi.delta(i, &mids, &mid2)?;
                        // ψ applied to identities with δ^s_{φ^i} at slot i.
                        let dphi = p.delta(s, &parts[i], xp)?;
                        let mut arg: Vec<MorId> = Vec::new();
                        for (t, q) in mids.iter().enumerate() {
                            if t == i {
                                arg.push(dphi.clone());
                            } else {
                                arg.push(
                                    self.cat(psi.sources[t]).base.identity_of(q)?,
                                );
                            }
                        }
                        let outer = psi.on_mor(&arg)?;
                        table.insert(
                            (xs.clone(), xp.clone()),
                            tcat.compose2(&outer, &dpsi)?,
                        );
                    }
                }
                deltas.push(table);
            }
        }
        Ok(KLinearMap {
            sources,
            target,
            obj,
            mor,
            deltas,
        })
    }
}

trait ZeroName {
    fn unit_zero(&self) -> ObjId;
}

impl ZeroName for PermutativeStructure {
    fn unit_zero(&self) -> ObjId {
        self.unit.clone()
    }
}

/// The identity 1-linear map on fragment category `i`.
pub fn klinear_identity(frag: &PFragment, i: usize) -> Result<KLinearMap> {
    let c = &frag.cats[i];
    let mut obj = BTreeMap::new();
    let mut mor = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for o in &c.base.objects {
        obj.insert(vec![o.clone()], o.clone());
        for op in &c.base.objects {
            let sum = c.tensor.on_obj(o, op)?;
            delta.insert((vec![o.clone()], op.clone()), c.base.identity_of(&sum)?);
        }
    }
    for m in &c.base.morphisms {
        mor.insert(vec![m.id.clone()], m.id.clone());
    }
    Ok(KLinearMap {
        sources: vec![i],
        target: i,
        obj,
        mor,
        deltas: vec![delta],
    })
}

/// Validate the k-linear axioms: vanishing, functor laws, δ typing, the
/// zero-identity conditions, δ naturality, and the per-slot coherence
/// diagrams.
pub fn validate_klinear(frag: &PFragment, f: &KLinearMap) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("k-linear map");
    for c in ["vanishing", "functor", "delta-typing", "delta-coherence"] {
        rep.ran(c);
    }
    let t = &frag.cats[f.target];
    let tcat = &t.base;
    let k = f.sources.len();

    for xs in frag.object_tuples(&f.sources) {
        let has_zero = xs
            .iter()
            .enumerate()
            .any(|(i, o)| o == &frag.cats[f.sources[i]].unit);
        if has_zero && f.on_obj(&xs)? != t.unit {
            rep.push("vanishing", format!("{xs:?}"));
        }
    }
    // Functor laws.
    for xs in frag.object_tuples(&f.sources) {
        let ids: Vec<MorId> = xs
            .iter()
            .enumerate()
            .map(|(i, o)| frag.cats[f.sources[i]].base.identity_of(o))
            .collect::<Result<_>>()?;
        if f.on_mor(&ids)? != tcat.identity_of(&f.on_obj(&xs)?)? {
            rep.push("functor", format!("identities at {xs:?}"));
        }
    }
    for fs in frag.morphism_tuples(&f.sources) {
        for gs in frag.morphism_tuples(&f.sources) {
            let composable = fs.iter().zip(gs.iter()).enumerate().all(|(i, (fm, gm))| {
                let cat = &frag.cats[f.sources[i]].base;
                cat.cod(fm).ok() == cat.dom(gm).ok()
            });
            if !composable {
                continue;
            }
            let comp: Vec<MorId> = fs
                .iter()
                .zip(gs.iter())
                .enumerate()
                .map(|(i, (fm, gm))| frag.cats[f.sources[i]].base.compose2(gm, fm))
                .collect::<Result<_>>()?;
            if f.on_mor(&comp)? != tcat.compose2(&f.on_mor(&gs)?, &f.on_mor(&fs)?)? {
                rep.push("functor", format!("composite at {fs:?};{gs:?}"));
            }
        }
    }
    // δ typing, zero conditions, naturality, and slot coherence (the
    // analogues of the bipermutative a.1/a.2 per slot).
    for i in 0..k {
        let ci = &frag.cats[f.sources[i]];
        for xs in frag.object_tuples(&f.sources) {
            for xp in &ci.base.objects {
                let d = f.delta(i, &xs, xp)?;
                let mut xs2 = xs.clone();
                xs2[i] = xp.clone();
                let mut xsum = xs.clone();
                xsum[i] = ci.tensor.on_obj(&xs[i], xp)?;
                let r = tcat.morphism(&d)?;
                let want_dom = t.tensor.on_obj(&f.on_obj(&xs)?, &f.on_obj(&xs2)?)?;
                if r.dom != want_dom || r.cod != f.on_obj(&xsum)? {
                    rep.push("delta-typing", format!("slot {i} at {xs:?}, {xp}"));
                    continue;
                }
                let zero_elsewhere = xs
                    .iter()
                    .enumerate()
                    .any(|(j, o)| j != i && o == &frag.cats[f.sources[j]].unit);
                if (xs[i] == ci.unit || *xp == ci.unit || zero_elsewhere)
                    && d != tcat.identity_of(&want_dom)?
                {
                    rep.push("delta-typing", format!("zero condition at slot {i}, {xs:?}"));
                }
                // a.1 analogue: δ(x⊕x', x'') ∘ (δ(x,x')⊕id) = δ(x, x'⊕x'') ∘ (id⊕δ(x',x'')).
                for xpp in &ci.base.objects {
                    let mut xs_p = xs.clone();
                    xs_p[i] = xp.clone();
                    let mut xs_pp = xs.clone();
                    xs_pp[i] = xpp.clone();
                    let mut xs_sum = xs.clone();
                    xs_sum[i] = ci.tensor.on_obj(&xs[i], xp)?;
                    let lhs = tcat.compose2(
                        &f.delta(i, &xs_sum, xpp)?,
                        &t.tensor
                            .on_mor(&f.delta(i, &xs, xp)?, &tcat.identity_of(&f.on_obj(&xs_pp)?)?)?,
                    )?;
                    let sum2 = ci.tensor.on_obj(xp, xpp)?;
                    let rhs = tcat.compose2(
                        &f.delta(i, &xs, &sum2)?,
                        &t.tensor
                            .on_mor(&tcat.identity_of(&f.on_obj(&xs)?)?, &f.delta(i, &xs_p, xpp)?)?,
                    )?;
                    if lhs != rhs {
                        rep.push("delta-coherence", format!("slot {i} associativity at {xs:?}"));
                    }
                }
                // a.2 analogue: δ(x',x)∘γ = F(γ-image)∘δ(x,x') in the target.
                let g_t = t.gamma_at(&f.on_obj(&xs)?, &f.on_obj(&xs2)?)?;
                let lhs = tcat.compose2(&f.delta(i, &xs2, &xs[i])?, &g_t)?;
                let g_s = ci.gamma_at(&xs[i], xp)?;
                let mut arg: Vec<MorId> = xs
                    .iter()
                    .enumerate()
                    .map(|(j, o)| frag.cats[f.sources[j]].base.identity_of(o))
                    .collect::<Result<_>>()?;
                arg[i] = g_s;
                let mut xs_sum2 = xs.clone();
                xs_sum2[i] = ci.tensor.on_obj(&xs[i], xp)?;
                let img = {
                    // F applied to the tuple with γ at slot i; its domain is
                    // the x_i⊕x'_i tuple.
                    let mut dom_tuple = xs.clone();
                    dom_tuple[i] = ci.tensor.on_obj(&xs[i], xp)?;
                    let _ = dom_tuple;
                    f.on_mor(&arg)?
                };
                let rhs = tcat.compose2(&img, &f.delta(i, &xs, xp)?)?;
                if lhs != rhs {
                    rep.push("delta-coherence", format!("slot {i} symmetry at {xs:?}, {xp}"));
                }
            }
        }
    }
    Ok(rep)
}

impl Multicat for PFragment {
    type Obj = usize;
    type KMor = KLinearMap;

    fn subject(&self) -> String {
        format!("P-fragment on {} categories", self.cats.len())
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn instance_cap(&self) -> Option<u64> {
        Some(self.bounds.max_instances_per_check)
    }
    fn bounds_note(&self) -> Option<String> {
        Some(format!("max_kmors_per_profile={}", self.bounds.max_kmors_per_profile))
    }
    fn objects(&self) -> Result<Vec<usize>> {
        Ok((0..self.cats.len()).collect())
    }
    fn kmorphisms(&self, inputs: &[usize], output: &usize) -> Result<Vec<KLinearMap>> {
        self.enumerate(inputs, *output)
    }
    fn profile(&self, m: &KLinearMap) -> Result<(Vec<usize>, usize)> {
        Ok((m.sources.clone(), m.target))
    }
    fn unit(&self, a: &usize) -> Result<KLinearMap> {
        klinear_identity(self, *a)
    }
    fn act(&self, sigma: &Perm, phi: &KLinearMap) -> Result<KLinearMap> {
        let k = phi.sources.len();
        let sources: Vec<usize> = (1..=k).map(|t| phi.sources[sigma.apply(t) - 1]).collect();
        let reorder = |ys: &[ObjId]| -> Vec<ObjId> {
            // x_i = y_{σ⁻¹(i)}.
            let inv = sigma.inverse();
            (1..=k).map(|i| ys[inv.apply(i) - 1].clone()).collect()
        };
        let mut obj = BTreeMap::new();
        for ys in self.object_tuples(&sources) {
            obj.insert(ys.clone(), phi.on_obj(&reorder(&ys))?);
        }
        let mut mor = BTreeMap::new();
        for ys in self.morphism_tuples(&sources) {
            let inv = sigma.inverse();
            let xs: Vec<MorId> = (1..=k).map(|i| ys[inv.apply(i) - 1].clone()).collect();
            mor.insert(ys.clone(), phi.on_mor(&xs)?);
        }
        let mut deltas = Vec::new();
        for t in 0..k {
            let mut table = BTreeMap::new();
            for ys in self.object_tuples(&sources) {
                for yp in &self.cats[sources[t]].base.objects {
                    table.insert(
                        (ys.clone(), yp.clone()),
                        phi.delta(sigma.apply(t + 1) - 1, &reorder(&ys), yp)?,
                    );
                }
            }
            deltas.push(table);
        }
        Ok(KLinearMap {
            sources,
            target: phi.target,
            obj,
            mor,
            deltas,
        })
    }
    fn gamma(&self, psi: &KLinearMap, phis: &[&KLinearMap]) -> Result<KLinearMap> {
        self.compose(psi, phis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monostruct::{terminal_permutative, z2_xor_permutative};
    use crate::multicat::validate_multicat;

    fn fragment() -> PFragment {
        PFragment::new(vec![terminal_permutative("pt"), z2_xor_permutative()], 2)
    }

    #[test]
    fn identity_is_klinear() {
        let f = fragment();
        for i in 0..2 {
            let id = klinear_identity(&f, i).unwrap();
            assert!(validate_klinear(&f, &id).unwrap().is_valid());
        }
    }

    #[test]
    fn enumeration_finds_multiplication() {
        let f = fragment();
        // 2-linear maps Z/2 × Z/2 → Z/2 vanish off (1,1); the free value
        // f(1,1) ∈ {0,1} gives exactly two maps.
        let maps = f.enumerate(&[1, 1], 1).unwrap();
        assert_eq!(maps.len(), 2);
    }

    #[test]
    fn fragment_validates_as_multicat() {
        let f = fragment();
        let rep = validate_multicat(&f).unwrap();
        assert!(rep.is_valid(), "{rep}");
    }
}
