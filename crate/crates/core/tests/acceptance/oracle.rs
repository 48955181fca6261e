//! Reference computations for the acceptance run. Everything here works on raw structure
//! constants and plain field arithmetic, never on the library's derived objects.

use semifield::{FieldCtx, Fq, Frob, PreSemifield};

/// Row-major square or rectangular matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub d: Vec<u32>,
}

impl Mat {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Mat {
        Mat { p, rows, cols, d: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Mat {
        let mut m = Mat::zero(p, n, n);
        for i in 0..n {
            m.d[i * n + i] = 1;
        }
        m
    }

    pub fn from_columns(p: u32, cols: &[Vec<u32>]) -> Mat {
        let rows = cols[0].len();
        let mut m = Mat::zero(p, rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                m.d[r * cols.len() + c] = v % p;
            }
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> u32 {
        self.d[r * self.cols + c]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let mut out = Mat::zero(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let x = &mut out.d[i * o.cols + j];
                    *x = (*x + a * o.at(k, j)) % self.p;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.at(r, c) * v[c]).sum::<u32>() % self.p).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.d[c * self.rows + r] = self.at(r, c);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, o: &Mat, s: u32) {
        for (a, &b) in self.d.iter_mut().zip(&o.d) {
            *a = (*a + s * b) % self.p;
        }
    }

    pub fn rank(&self) -> usize {
        rank(self.p, self.rows, self.cols, self.d.clone())
    }

    pub fn inverse(&self) -> Option<Mat> {
        let n = self.rows;
        let p = self.p;
        let mut a: Vec<u32> = Vec::with_capacity(n * 2 * n);
        for r in 0..n {
            a.extend_from_slice(&self.d[r * n..(r + 1) * n]);
            a.extend((0..n).map(|c| u32::from(c == r)));
        }
        let w = 2 * n;
        for c in 0..n {
            let piv = (c..n).find(|&r| a[r * w + c] != 0)?;
            for k in 0..w {
                a.swap(c * w + k, piv * w + k);
            }
            let inv = inv_mod(a[c * w + c], p);
            for k in 0..w {
                a[c * w + k] = a[c * w + k] * inv % p;
            }
            for r in 0..n {
                let f = a[r * w + c];
                if r != c && f != 0 {
                    for k in 0..w {
                        a[r * w + k] = (a[r * w + k] + (p - f) * a[c * w + k]) % p;
                    }
                }
            }
        }
        let d = (0..n).flat_map(|r| a[r * w + n..(r + 1) * w].to_vec()).collect();
        Some(Mat { p, rows: n, cols: n, d })
    }

    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zero(blocks[0].p, n, n);
        let mut o = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.d[(o + r) * n + o + c] = b.at(r, c);
                }
            }
            o += b.rows;
        }
        out
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let (mut b, mut e) = (a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Rank of a rows×cols matrix by Gaussian elimination mod p.
pub fn rank(p: u32, rows: usize, cols: usize, mut a: Vec<u32>) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
        for k in 0..cols {
            a.swap(r * cols + k, piv * cols + k);
        }
        let inv = inv_mod(a[r * cols + c], p);
        for i in r + 1..rows {
            let f = a[i * cols + c] * inv % p;
            if f != 0 {
                for k in c..cols {
                    a[i * cols + k] = (a[i * cols + k] + (p - f) * a[r * cols + k]) % p;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

// ---------------------------------------------------------------- presemifields

/// `R_j` with `R_j(k, i) = c[i][j][k]`, so `R_y = Σ y_j R_j` maps x to `x ∘ y`.
pub fn right_basis(s: &PreSemifield) -> Vec<Mat> {
    let (p, n, c) = (s.p(), s.n(), s.consts());
    (0..n)
        .map(|j| {
            let mut m = Mat::zero(p, n, n);
            for i in 0..n {
                for k in 0..n {
                    m.d[k * n + i] = c[(i * n + j) * n + k] as u32;
                }
            }
            m
        })
        .collect()
}

pub fn product(s: &PreSemifield, x: &[u32], y: &[u32]) -> Vec<u32> {
    let (p, n, c) = (s.p(), s.n(), s.consts());
    let mut out = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            let a = x[i] * y[j] % p;
            if a == 0 {
                continue;
            }
            for k in 0..n {
                out[k] = (out[k] + a * c[(i * n + j) * n + k] as u32) % p;
            }
        }
    }
    out
}

fn combine(p: u32, basis: &[Mat], y: &[u32]) -> Mat {
    let mut m = Mat::zero(p, basis[0].rows, basis[0].cols);
    for (b, &c) in basis.iter().zip(y) {
        if c != 0 {
            m.add_scaled(b, c);
        }
    }
    m
}

/// Every `R_y` with `y ≠ 0` is invertible; checks one y per F_p-line.
pub fn no_zero_divisors(s: &PreSemifield) -> bool {
    let (p, n) = (s.p(), s.n());
    let basis = right_basis(s);
    let mut y = vec![0u32; n];
    for lead in 0..n {
        // y has its last nonzero coordinate at `lead`, equal to 1
        y.iter_mut().for_each(|c| *c = 0);
        y[lead] = 1;
        loop {
            if combine(p, &basis, &y).rank() != n {
                return false;
            }
            let mut i = 0;
            while i < lead {
                y[i] = (y[i] + 1) % p;
                if y[i] != 0 {
                    break;
                }
                i += 1;
            }
            if i == lead {
                break;
            }
        }
    }
    true
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    (0..n).map(|k| u32::from(k == i)).collect()
}

/// `N1(x ∘1 y) = N2(x) ∘2 N3(y)` on all basis pairs, with invertible N's.
pub fn is_isotopism(s1: &PreSemifield, s2: &PreSemifield, n1: &Mat, n2: &Mat, n3: &Mat) -> bool {
    let n = s1.n();
    if s1.p() != s2.p() || n != s2.n() || [n1, n2, n3].iter().any(|m| m.rank() != n) {
        return false;
    }
    (0..n).all(|i| {
        (0..n).all(|j| {
            let lhs = n1.apply(&product(s1, &unit(n, i), &unit(n, j)));
            lhs == product(s2, &n2.apply(&unit(n, i)), &n3.apply(&unit(n, j)))
        })
    })
}

pub fn mat_of(m: &semifield::FpMatrix) -> Mat {
    let (r, c) = (m.rows(), m.cols());
    let d = (0..r).flat_map(|i| (0..c).map(move |j| m.get(i, j) as u32)).collect();
    Mat { p: m.p(), rows: r, cols: c, d }
}

fn span_rank(p: u32, mats: &[&Mat]) -> usize {
    let cols = mats[0].d.len();
    let d = mats.iter().flat_map(|m| m.d.iter().copied()).collect();
    rank(p, mats.len(), cols, d)
}

/// Equality of the F_p-spans, which is equality of spread sets.
pub fn same_span(a: &[Mat], b: &[Mat]) -> bool {
    let p = a[0].p;
    let ra: Vec<&Mat> = a.iter().collect();
    let rb: Vec<&Mat> = b.iter().collect();
    let all: Vec<&Mat> = a.iter().chain(b).collect();
    let (x, y) = (span_rank(p, &ra), span_rank(p, &rb));
    x == y && span_rank(p, &all) == x
}

pub fn same_spread(s1: &PreSemifield, s2: &PreSemifield) -> bool {
    same_span(&right_basis(s1), &right_basis(s2))
}

pub fn transform(mats: &[Mat], a: &Mat, b: &Mat) -> Vec<Mat> {
    mats.iter().map(|m| a.mul(m).mul(b)).collect()
}

// ---------------------------------------------------------------- field helpers

pub fn basis_elem(f: &FieldCtx, i: u32) -> Fq {
    Fq(f.p().pow(i))
}

pub fn digits(f: &FieldCtx, x: Fq) -> Vec<u32> {
    let mut v = x.0;
    (0..f.m())
        .map(|_| {
            let c = v % f.p();
            v /= f.p();
            c
        })
        .collect()
}

/// `Tr(a) = Σ a^(p^i)`, an element of the prime field.
pub fn trace(f: &FieldCtx, a: Fq) -> u32 {
    let mut acc = Fq::ZERO;
    let mut x = a;
    for _ in 0..f.m() {
        acc = f.add(acc, x);
        x = f.pow(x, f.p() as u64);
    }
    assert!(acc.0 < f.p(), "trace lies in the prime field");
    acc.0
}

/// `N_{L:Fix(σ)}(a) = a^((q−1)/(|K|−1))`.
pub fn norm(f: &FieldCtx, sigma: Frob, a: Fq) -> Fq {
    let t = gcd(sigma.k() as u64, f.m() as u64) as u32;
    f.pow(a, (f.order() - 1) / ((f.p() as u64).pow(t) - 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

/// `F_p`-matrix of an additive map of L.
pub fn field_map(f: &FieldCtx, g: impl Fn(Fq) -> Fq) -> Mat {
    let cols: Vec<Vec<u32>> = (0..f.m()).map(|i| digits(f, g(basis_elem(f, i)))).collect();
    Mat::from_columns(f.p(), &cols)
}

pub fn mul_map(f: &FieldCtx, r: Fq) -> Mat {
    field_map(f, |x| f.mul(r, x))
}

/// Trace-form Gram matrix summed over the L-blocks; the identity for plain coordinates.
pub fn gram(s: &PreSemifield) -> Mat {
    match s.field() {
        None => Mat::identity(s.p(), s.n()),
        Some((f, dim)) => {
            let m = f.m() as usize;
            let mut g = Mat::zero(f.p(), m, m);
            for i in 0..m {
                for j in 0..m {
                    g.d[i * m + j] = trace(f, f.mul(basis_elem(f, i as u32), basis_elem(f, j as u32)));
                }
            }
            let blocks: Vec<&Mat> = (0..dim).map(|_| &g).collect();
            Mat::block_diag(&blocks)
        }
    }
}

/// Spread basis of the transpose: trace-form adjoints `G^{-1} R_jᵀ G`.
pub fn transpose_basis(s: &PreSemifield) -> Vec<Mat> {
    let g = gram(s);
    let gi = g.inverse().expect("trace form is nondegenerate");
    right_basis(s).iter().map(|r| gi.mul(&r.transpose()).mul(&g)).collect()
}

/// Presemifield whose `R_{e_j}` is the j-th matrix.
pub fn from_right_basis(s: &PreSemifield, mats: &[Mat]) -> PreSemifield {
    let n = s.n();
    let mut consts = vec![0u8; n * n * n];
    for (j, m) in mats.iter().enumerate() {
        for i in 0..n {
            for k in 0..n {
                consts[(i * n + j) * n + k] = m.at(k, i) as u8;
            }
        }
    }
    PreSemifield::from_structure_constants(s.p(), n, consts, s.coords().clone(), s.provenance().clone())
        .expect("same shape")
}

pub fn transpose(s: &PreSemifield) -> PreSemifield {
    from_right_basis(s, &transpose_basis(s))
}

pub fn dual(s: &PreSemifield) -> PreSemifield {
    let n = s.n();
    let c = s.consts();
    let mut consts = vec![0u8; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                consts[(i * n + j) * n + k] = c[(j * n + i) * n + k];
            }
        }
    }
    PreSemifield::from_structure_constants(s.p(), n, consts, s.coords().clone(), s.provenance().clone())
        .expect("same shape")
}

// ---------------------------------------------------------------- nuclei

/// Dimension of the kernel of a rows×cols system.
fn kernel_dim(p: u32, rows: usize, cols: usize, a: Vec<u32>) -> usize {
    cols - rank(p, rows, cols, a)
}

/// `(left, middle, right)` orders from the normalized spread set `C' = C R_{e_0}^{-1}`:
/// right `{X : X C' ⊆ C'}`, middle `{X : C' X ⊆ C'}`, left the centralizer of C'.
pub fn nuclei(s: &PreSemifield) -> (u64, u64, u64) {
    let (p, n) = (s.p(), s.n());
    let basis = right_basis(s);
    let r0i = basis[0].inverse().expect("R at a nonzero element is invertible");
    let c: Vec<Mat> = basis.iter().map(|b| b.mul(&r0i)).collect();
    let nn = n * n;
    // unknowns: X = Σ a_j C'_j (n), plus n coefficients per product; equations: n blocks of n² entries
    let closure = |left: bool| -> usize {
        let cols = n + n * n;
        let mut a = vec![0u32; n * nn * cols];
        for i in 0..n {
            for j in 0..n {
                let prod = if left { c[j].mul(&c[i]) } else { c[i].mul(&c[j]) };
                for e in 0..nn {
                    a[(i * nn + e) * cols + j] = prod.d[e];
                }
            }
            for t in 0..n {
                for e in 0..nn {
                    a[(i * nn + e) * cols + n + i * n + t] = (p - c[t].d[e]) % p;
                }
            }
        }
        kernel_dim(p, n * nn, cols, a)
    };
    let right = closure(true);
    let middle = closure(false);
    // X C'_i − C'_i X = 0 for all i, X with n² unknowns
    let mut a = vec![0u32; n * nn * nn];
    for (i, ci) in c.iter().enumerate() {
        for r in 0..n {
            for col in 0..n {
                let row = i * nn + r * n + col;
                for k in 0..n {
                    // (X C)_{r,col} = Σ_k X_{r,k} C_{k,col}
                    let e = &mut a[row * nn + r * n + k];
                    *e = (*e + ci.at(k, col)) % p;
                    // (C X)_{r,col} = Σ_k C_{r,k} X_{k,col}
                    let e = &mut a[row * nn + k * n + col];
                    *e = (*e + p - ci.at(r, k)) % p;
                }
            }
        }
    }
    let left = kernel_dim(p, n * nn, nn, a);
    let q = |d: usize| (p as u64).pow(d as u32);
    (q(left), q(middle), q(right))
}

// ---------------------------------------------------------------- semilinear maps on L^d

/// `v -> M v^σ` with M row-major d×d.
pub fn semilinear_apply(f: &FieldCtx, m: &[Fq], sigma: Frob, v: &[Fq]) -> Vec<Fq> {
    let d = v.len();
    let vs: Vec<Fq> = v.iter().map(|&x| f.frob(sigma, x)).collect();
    (0..d).map(|r| (0..d).fold(Fq::ZERO, |acc, c| f.add(acc, f.mul(m[r * d + c], vs[c])))).collect()
}

fn all_vectors(f: &FieldCtx, d: usize) -> Vec<Vec<Fq>> {
    let q = f.order() as u32;
    (0..q.pow(d as u32))
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let x = Fq(i % q);
                    i /= q;
                    x
                })
                .collect()
        })
        .collect()
}

fn scalar_multiple(f: &FieldCtx, w: &[Fq], v: &[Fq]) -> bool {
    // w ∈ L v for v ≠ 0: all 2×2 minors vanish
    (0..v.len()).all(|i| (0..v.len()).all(|j| f.mul(v[i], w[j]) == f.mul(v[j], w[i])))
}

/// No invariant L-subspace of dimension 1 or d−1; for d ≤ 3 that is every proper one.
pub fn irreducible(f: &FieldCtx, m: &[Fq], sigma: Frob, d: usize) -> bool {
    assert!(d <= 3);
    // one representative per line: the last nonzero coordinate is 1
    let vecs = all_vectors(f, d);
    let nonzero: Vec<&Vec<Fq>> =
        vecs.iter().filter(|v| v.iter().rev().find(|x| !x.is_zero()) == Some(&Fq::ONE)).collect();
    for v in &nonzero {
        if scalar_multiple(f, &semilinear_apply(f, m, sigma, v), v) {
            return false;
        }
    }
    if d == 3 {
        // hyperplanes ker(φ): invariant iff φ(T w) = 0 on ker(φ)
        let dot = |a: &[Fq], b: &[Fq]| a.iter().zip(b).fold(Fq::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
        for phi in &nonzero {
            let inv = nonzero
                .iter()
                .filter(|w| dot(phi, w).is_zero())
                .all(|w| dot(phi, &semilinear_apply(f, m, sigma, w)).is_zero());
            if inv {
                return false;
            }
        }
    }
    true
}

/// `F_y = Σ y_i T^i` as an F_p-matrix; `powers[i]` is T^i applied to each F_p basis vector.
pub fn f_y_rank(f: &FieldCtx, powers: &[Vec<Vec<Fq>>], y: &[Fq]) -> usize {
    let nb = powers[0].len();
    let cols: Vec<Vec<u32>> = (0..nb)
        .map(|b| {
            let d = powers[0][b].len();
            let mut acc = vec![Fq::ZERO; d];
            for (i, &yi) in y.iter().enumerate() {
                for r in 0..d {
                    acc[r] = f.add(acc[r], f.mul(yi, powers[i][b][r]));
                }
            }
            acc.iter().flat_map(|&x| digits(f, x)).collect()
        })
        .collect();
    Mat::from_columns(f.p(), &cols).rank()
}

/// `T^i(b)` for i = 0..=d and each F_p basis vector b of L^d.
pub fn power_table(f: &FieldCtx, m: &[Fq], sigma: Frob, d: usize) -> Vec<Vec<Vec<Fq>>> {
    let basis: Vec<Vec<Fq>> = (0..d)
        .flat_map(|blk| {
            (0..f.m()).map(move |i| {
                let mut v = vec![Fq::ZERO; d];
                v[blk] = Fq(f.p().pow(i));
                v
            })
        })
        .collect();
    let mut out = vec![basis];
    for _ in 0..d {
        let next = out.last().unwrap().iter().map(|v| semilinear_apply(f, m, sigma, v)).collect();
        out.push(next);
    }
    out
}

pub fn det(f: &FieldCtx, m: &[Fq], d: usize) -> Fq {
    match d {
        1 => m[0],
        2 => f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])),
        3 => {
            let t = |a: usize, b: usize, c: usize| f.mul(f.mul(m[a], m[b]), m[c]);
            let pos = f.add(f.add(t(0, 4, 8), t(1, 5, 6)), t(2, 3, 7));
            let neg = f.add(f.add(t(2, 4, 6), t(0, 5, 7)), t(1, 3, 8));
            f.sub(pos, neg)
        }
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------- γ_r

/// `x ↦ (x0 r, x1 r)` style block scaling on L^2 coordinates.
fn scale_blocks(f: &FieldCtx, a: Fq, b: Fq) -> Mat {
    Mat::block_diag(&[&mul_map(f, a), &mul_map(f, b)])
}

/// `γ_r = (diag(r^(σ+1), r^(τ+1)), diag(r, r), diag(r, r))` for all r ∈ L*.
pub fn gamma_holds(s: &PreSemifield, sigma: Frob, tau: Frob) -> bool {
    let (f, _) = s.field().expect("field coordinates");
    f.nonzero().all(|r| {
        let n1 = scale_blocks(f, f.mul(f.frob(sigma, r), r), f.mul(f.frob(tau, r), r));
        let n2 = scale_blocks(f, r, r);
        is_isotopism(s, s, &n1, &n2, &n2)
    })
}
