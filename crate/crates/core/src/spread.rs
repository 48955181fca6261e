//! Spread sets: the F_p-space of right-multiplication matrices of a presemifield.

use std::collections::HashSet;

use crate::fpmat::{next_vec, nonsingular_in_place, span_canonical, FpMatrix, FpVec};

#[derive(Clone, Debug)]
pub struct SpreadSet {
    p: u32,
    n: usize,
    basis: Vec<FpMatrix>,
}

impl SpreadSet {
    /// Spread set spanned by `basis`; the j-th matrix is the image of e_j.
    pub fn new(p: u32, n: usize, basis: Vec<FpMatrix>) -> SpreadSet {
        assert!(basis.iter().all(|b| b.rows() == n && b.cols() == n && b.p() == p));
        SpreadSet { p, n, basis }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[FpMatrix] {
        &self.basis
    }

    /// `Σ y_j B_j`.
    pub fn member(&self, y: &[u8]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p, self.n, self.n);
        for (b, &c) in self.basis.iter().zip(y) {
            m.add_scaled_assign(b, c as u32);
        }
        m
    }

    /// All members, indexed by the encoding of y.
    pub fn members(&self) -> Vec<FpMatrix> {
        let mut out = Vec::new();
        let mut y = vec![0u8; self.basis.len()];
        loop {
            out.push(self.member(&y));
            if !next_vec(&mut y, self.p) {
                break;
            }
        }
        out
    }

    pub fn dimension(&self) -> usize {
        span_canonical(self.p, &self.flattened()).len()
    }

    fn flattened(&self) -> Vec<FpVec> {
        self.basis.iter().map(|b| b.data().to_vec()).collect()
    }

    /// Canonical basis of the span, equal for equal sets.
    pub fn canonical(&self) -> Vec<FpVec> {
        span_canonical(self.p, &self.flattened())
    }

    pub fn same_set(&self, other: &SpreadSet) -> bool {
        self.p == other.p && self.n == other.n && self.canonical() == other.canonical()
    }

    /// Coordinates of `m` in the basis, if `m` is a member.
    pub fn coords_of(&self, m: &FpMatrix) -> Option<FpVec> {
        let k = self.basis.len();
        let sys = FpMatrix::from_fn(self.p, self.n * self.n, k, |r, c| self.basis[c].data()[r] as u32);
        sys.solve(m.data())
    }

    pub fn contains(&self, m: &FpMatrix) -> bool {
        self.coords_of(m).is_some()
    }

    /// Every nonzero member is invertible and the basis is independent.
    pub fn is_spread(&self) -> bool {
        self.dimension() == self.n && self.first_singular().is_none()
    }

    /// First nonzero coefficient vector (leading coordinate 1) with a singular member.
    pub fn first_singular(&self) -> Option<FpVec> {
        first_singular_combination(self.p, self.n, &self.basis)
    }

    /// `{A M B : M in self}` with the same parametrization.
    pub fn transform(&self, a: &FpMatrix, b: &FpMatrix) -> SpreadSet {
        SpreadSet::new(self.p, self.n, self.basis.iter().map(|m| a.mul(m).mul(b)).collect())
    }

    /// Members as a hash set, for repeated membership queries.
    pub fn member_set(&self) -> HashSet<FpMatrix> {
        self.members().into_iter().collect()
    }
}

/// Scans projective representatives of `Σ y_j M_j` for a singular one.
pub(crate) fn first_singular_combination(p: u32, n: usize, mats: &[FpMatrix]) -> Option<FpVec> {
    let k = mats.len();
    let mut buf = vec![0u32; n * n];
    let mut scratch = vec![0u8; n * n];
    for lead in 0..k {
        // y has y_lead = 1 and zeros before it.
        let mut tail = vec![0u8; k - lead - 1];
        loop {
            buf.iter_mut().zip(mats[lead].data()).for_each(|(b, &x)| *b = x as u32);
            for (t, &c) in tail.iter().enumerate() {
                if c != 0 {
                    let m = mats[lead + 1 + t].data();
                    for (b, &x) in buf.iter_mut().zip(m) {
                        *b += c as u32 * x as u32;
                    }
                }
            }
            for (s, &b) in scratch.iter_mut().zip(&buf) {
                *s = (b % p) as u8;
            }
            if !nonsingular_in_place(p, n, &mut scratch) {
                let mut y = vec![0u8; k];
                y[lead] = 1;
                y[lead + 1..].copy_from_slice(&tail);
                return Some(y);
            }
            if !next_vec(&mut tail, p) {
                break;
            }
        }
    }
    None
}
