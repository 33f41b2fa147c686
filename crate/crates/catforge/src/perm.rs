//! Finite permutations, block sums, and block permutations.
//!
//! A [`Perm`] is a bijection of `{1,..,n}` stored 0-indexed. These are the
//! combinatorial backbone of the symmetric-group operad and of every
//! equivariance diagram in the multicategory checkers.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    /// Build from 1-based images; `None` if not a bijection.
    pub fn from_images(images: &[usize]) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return None;
            }
            seen[v - 1] = true;
        }
        Some(Perm(images.iter().map(|v| v - 1).collect()))
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1] + 1
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The transposition (m n) in Σ_k (1-based, m != n).
    pub fn transposition(k: usize, m: usize, n: usize) -> Perm {
        let mut v: Vec<usize> = (0..k).collect();
        v.swap(m - 1, n - 1);
        Perm(v)
    }

    /// All elements of Σ_n in lexicographic order of their image vectors.
    pub fn all(n: usize) -> Vec<Perm> {
        if n == 0 {
            return vec![Perm(vec![])];
        }
        let mut out = Vec::new();
        let mut v: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(v.clone()));
            // next_permutation
            let mut i = n - 1;
            while i > 0 && v[i - 1] >= v[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while v[j] <= v[i - 1] {
                j -= 1;
            }
            v.swap(i - 1, j);
            v[i..].reverse();
        }
        out
    }

    /// Decompose into adjacent transpositions: applying the returned swaps
    /// (as position swaps, left to right) to the identity arrangement yields
    /// the arrangement `[σ⁻¹(1),...,σ⁻¹(n)]`, i.e. the arrangement where the
    /// element originally at position i ends at position σ(i).
    pub fn adjacent_swaps(&self) -> Vec<usize> {
        // Bubble-sort positions: we move items until item at output slot t is
        // the input index self.inverse().apply(t).
        let n = self.degree();
        let target: Vec<usize> = self.inverse().0.clone(); // 0-based input index per output slot
        let mut current: Vec<usize> = (0..n).collect();
        let mut swaps = Vec::new();
        for t in 0..n {
            let pos = current.iter().position(|&x| x == target[t]).unwrap();
            for p in (t..pos).rev() {
                current.swap(p, p + 1);
                swaps.push(p + 1); // 1-based position of the left element
            }
        }
        swaps
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

/// Operadic substitution for the associative operad: `Γ(ψ; φ₁,...,φ_k)`
/// permutes k blocks of sizes `|φ_i|` as ψ permutes k letters, acting inside
/// block i by φ_i.
pub fn gamma_perm(psi: &Perm, phis: &[&Perm]) -> Perm {
    let k = psi.degree();
    assert_eq!(phis.len(), k);
    let sizes: Vec<usize> = phis.iter().map(|p| p.degree()).collect();
    // Output offset of input block i: total size of blocks placed before slot ψ(i).
    let inv = psi.inverse();
    let mut offset = vec![0usize; k];
    for i in 0..k {
        let slot = psi.apply(i + 1);
        let mut off = 0;
        for t in 1..slot {
            off += sizes[inv.apply(t) - 1];
        }
        offset[i] = off;
    }
    let total: usize = sizes.iter().sum();
    let mut images = vec![0usize; total];
    let mut pos = 0;
    for i in 0..k {
        for o in 1..=sizes[i] {
            images[pos] = offset[i] + phis[i].apply(o);
            pos += 1;
        }
    }
    Perm::from_images(&images).expect("gamma_perm produced a non-bijection")
}

/// Block sum φ₁ ⊕ ... ⊕ φ_k (the canonical embedding of the product of
/// symmetric groups).
pub fn block_sum(phis: &[&Perm]) -> Perm {
    let k = phis.len();
    gamma_perm(&Perm::identity(k), phis)
}

/// Block permutation σ⟨j₁,...,j_k⟩: σ acting on blocks of the given sizes.
pub fn block_perm(sigma: &Perm, sizes: &[usize]) -> Perm {
    let ids: Vec<Perm> = sizes.iter().map(|&j| Perm::identity(j)).collect();
    let refs: Vec<&Perm> = ids.iter().collect();
    gamma_perm(sigma, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        for p in Perm::all(4) {
            assert!(p.compose(&p.inverse()).is_identity());
            assert!(p.inverse().compose(&p).is_identity());
        }
        assert_eq!(Perm::all(0).len(), 1);
        assert_eq!(Perm::all(3).len(), 6);
    }

    #[test]
    fn operad_identities() {
        // Γ(ψ; 1,...,1) with singleton blocks is ψ itself.
        for psi in Perm::all(3) {
            let ones = [Perm::identity(1), Perm::identity(1), Perm::identity(1)];
            let refs: Vec<&Perm> = ones.iter().collect();
            assert_eq!(gamma_perm(&psi, &refs), psi);
        }
        // Γ(1; φ) = φ.
        for phi in Perm::all(4) {
            assert_eq!(gamma_perm(&Perm::identity(1), &[&phi]), phi);
        }
    }

    #[test]
    fn gamma_perm_associativity() {
        // Operadic associativity on a mixed instance:
        // Γ(Γ(ψ;φ₁,φ₂); χ₁,χ₂,χ₃) = Γ(ψ; Γ(φ₁;χ₁,χ₂), Γ(φ₂;χ₃)).
        for psi in Perm::all(2) {
            for phi1 in Perm::all(2) {
                for phi2 in Perm::all(1) {
                    for chi1 in Perm::all(1) {
                        for chi2 in Perm::all(2) {
                            for chi3 in Perm::all(2) {
                                let inner = gamma_perm(&psi, &[&phi1, &phi2]);
                                let lhs = gamma_perm(&inner, &[&chi1, &chi2, &chi3]);
                                let g1 = gamma_perm(&phi1, &[&chi1, &chi2]);
                                let g2 = gamma_perm(&phi2, &[&chi3]);
                                let rhs = gamma_perm(&psi, &[&g1, &g2]);
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn adjacent_swaps_reconstruct() {
        for p in Perm::all(4) {
            // Applying the swaps to the identity arrangement must place input
            // index i at output position p(i).
            let mut arrangement: Vec<usize> = (1..=4).collect();
            for s in p.adjacent_swaps() {
                arrangement.swap(s - 1, s);
            }
            for (slot, &item) in arrangement.iter().enumerate() {
                assert_eq!(p.apply(item), slot + 1);
            }
        }
    }
}
