//! Dense matrices and vectors over a prime field F_p, p < 256.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Column vector over F_p; entries are reduced residues.
pub type FpVec = Vec<u8>;

pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

/// Base-p integer of a vector: `v[0] + v[1] p + ...`.
pub fn encode_vec(v: &[u8], p: u32) -> u64 {
    v.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

pub fn decode_vec(mut idx: u64, p: u32, n: usize) -> FpVec {
    let mut v = vec![0u8; n];
    for c in v.iter_mut() {
        *c = (idx % p as u64) as u8;
        idx /= p as u64;
    }
    v
}

/// Advances `v` to the next vector in encoding order; false after the last one.
pub fn next_vec(v: &mut [u8], p: u32) -> bool {
    for c in v.iter_mut() {
        if (*c as u32) + 1 < p {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

pub fn add_vec(a: &[u8], b: &[u8], p: u32) -> FpVec {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
        .collect()
}

pub fn scale_vec(a: &[u8], c: u32, p: u32) -> FpVec {
    a.iter().map(|&x| ((x as u32 * c) % p) as u8).collect()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}) [", self.p)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c))?;
                if c + 1 < self.cols {
                    write!(f, " ")?;
                }
            }
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        assert!((2..256).contains(&p), "prime field characteristic must be below 256");
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(p, rows.len(), cols, |r, c| rows[r][c])
    }

    pub fn from_columns(p: u32, rows: usize, columns: &[FpVec]) -> Self {
        Self::from_fn(p, rows, columns.len(), |r, c| columns[c][r] as u32)
    }

    /// Builds a matrix from row-major entries that are already reduced.
    pub fn from_data(p: u32, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| (x as u32) < p));
        FpMatrix { p, rows, cols, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = (v % self.p) as u8;
    }

    pub fn column(&self, c: usize) -> FpVec {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> FpVec {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, self.cols, self.rows, |r, c| self.get(c, r) as u32)
    }

    pub fn mul(&self, other: &FpMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        let mut acc = vec![0u32; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u32;
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (s, &b) in acc.iter_mut().zip(row) {
                    *s += a * b as u32;
                }
            }
            for (c, s) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = (s % p) as u8;
            }
        }
        out
    }

    pub fn apply(&self, v: &[u8]) -> FpVec {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                let s: u32 = row.iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                (s % self.p) as u8
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = add_vec(&self.data, &other.data, self.p);
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMatrix) -> Self {
        self.add(&other.scale(self.p - 1))
    }

    pub fn scale(&self, c: u32) -> Self {
        let data = scale_vec(&self.data, c % self.p, self.p);
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    /// Adds `c * other` into `self`.
    pub fn add_scaled_assign(&mut self, other: &FpMatrix, c: u32) {
        if c % self.p == 0 {
            return;
        }
        let p = self.p;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = ((*a as u32 + c * b as u32) % p) as u8;
        }
    }

    pub fn block_diag(blocks: &[&FpMatrix]) -> Self {
        let p = blocks[0].p;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c) as u32);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = inv_mod(m.get(row, col) as u32, p);
            for c in 0..m.cols {
                let v = m.get(row, c) as u32 * inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                let f = m.get(r, col) as u32;
                if r != row && f != 0 {
                    let f = p - f;
                    for c in col..m.cols {
                        let v = m.get(r, c) as u32 + f * m.get(row, c) as u32;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.data.clone();
        rank_in_place(self.p, self.rows, self.cols, &mut buf)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c) as u32);
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(self.p, n, n, |r, c| red.get(r, n + c) as u32))
    }

    /// Basis of the null space {v : self v = 0}.
    pub fn kernel(&self) -> Vec<FpVec> {
        let (red, pivots) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u8; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    let x = red.get(i, f) as u32;
                    v[pc] = ((p - x) % p) as u8;
                }
                v
            })
            .collect()
    }

    /// Some solution of `self x = b`, if one exists.
    pub fn solve(&self, b: &[u8]) -> Option<FpVec> {
        let mut aug = Self::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c) as u32);
            }
            aug.set(r, self.cols, b[r] as u32);
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(i, self.cols);
        }
        Some(x)
    }
}

/// Canonical basis (nonzero RREF rows) of the span of `vectors`.
pub fn span_canonical(p: u32, vectors: &[FpVec]) -> Vec<FpVec> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let cols = vectors[0].len();
    let m = FpMatrix::from_fn(p, vectors.len(), cols, |r, c| vectors[r][c] as u32);
    let (red, pivots) = m.rref();
    (0..pivots.len()).map(|r| red.row(r)).collect()
}

/// Rank by Gaussian elimination, destroying `buf` (row-major `rows x cols`).
pub fn rank_in_place(p: u32, rows: usize, cols: usize, buf: &mut [u8]) -> usize {
    match p {
        2 => rank_generic::<2>(rows, cols, buf),
        3 => rank_generic::<3>(rows, cols, buf),
        5 => rank_generic::<5>(rows, cols, buf),
        7 => rank_generic::<7>(rows, cols, buf),
        _ => rank_dyn(p, rows, cols, buf),
    }
}

fn rank_generic<const P: u32>(rows: usize, cols: usize, buf: &mut [u8]) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| buf[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in col..cols {
                buf.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = inv_mod(buf[rank * cols + col] as u32, P);
        for r in rank + 1..rows {
            let x = buf[r * cols + col] as u32;
            if x == 0 {
                continue;
            }
            let f = P - (x * inv) % P;
            let (top, bottom) = buf.split_at_mut(r * cols);
            let src = &top[rank * cols + col..rank * cols + cols];
            let dst = &mut bottom[col..cols];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = ((*d as u32 + f * s as u32) % P) as u8;
            }
        }
        rank += 1;
    }
    rank
}

/// Whether a square `n x n` buffer is invertible; stops at the first missing pivot.
pub fn nonsingular_in_place(p: u32, n: usize, buf: &mut [u8]) -> bool {
    match p {
        2 => nonsingular_generic::<2>(n, buf),
        3 => nonsingular_generic::<3>(n, buf),
        5 => nonsingular_generic::<5>(n, buf),
        7 => nonsingular_generic::<7>(n, buf),
        _ => rank_dyn(p, n, n, buf) == n,
    }
}

fn nonsingular_generic<const P: u32>(n: usize, buf: &mut [u8]) -> bool {
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| buf[r * n + col] != 0) else {
            return false;
        };
        if piv != col {
            for c in col..n {
                buf.swap(piv * n + c, col * n + c);
            }
        }
        let inv = inv_mod(buf[col * n + col] as u32, P);
        for r in col + 1..n {
            let x = buf[r * n + col] as u32;
            if x == 0 {
                continue;
            }
            let f = P - (x * inv) % P;
            let (top, bottom) = buf.split_at_mut(r * n);
            let src = &top[col * n + col..col * n + n];
            let dst = &mut bottom[col..n];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = ((*d as u32 + f * s as u32) % P) as u8;
            }
        }
    }
    true
}

fn rank_dyn(p: u32, rows: usize, cols: usize, buf: &mut [u8]) -> usize {
    FpMatrix::from_data(p, rows, cols, buf.to_vec()).rref().1.len()
}
