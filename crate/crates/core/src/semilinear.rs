//! Semilinear maps `v -> M v^σ` on L^d and irreducibility tests.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::fpmat::FpMatrix;
use crate::gf::{FieldCtx, Fq, Frob};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vec2 {
    pub x0: Fq,
    pub x1: Fq,
}

impl Vec2 {
    pub fn new(x0: Fq, x1: Fq) -> Vec2 {
        Vec2 { x0, x1 }
    }

    pub fn is_zero(self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    pub fn add(self, ctx: &FieldCtx, o: Vec2) -> Vec2 {
        Vec2::new(ctx.add(self.x0, o.x0), ctx.add(self.x1, o.x1))
    }

    pub fn scale(self, ctx: &FieldCtx, a: Fq) -> Vec2 {
        Vec2::new(ctx.mul(a, self.x0), ctx.mul(a, self.x1))
    }

    pub fn frob(self, ctx: &FieldCtx, s: Frob) -> Vec2 {
        Vec2::new(ctx.frob(s, self.x0), ctx.frob(s, self.x1))
    }
}

/// `M v^σ` for a row-major 2×2 matrix that may be singular.
pub fn apply_matrix(ctx: &FieldCtx, m: &[Fq; 4], s: Frob, v: Vec2) -> Vec2 {
    let a = ctx.frob(s, v.x0);
    let b = ctx.frob(s, v.x1);
    Vec2::new(
        ctx.add(ctx.mul(m[0], a), ctx.mul(m[1], b)),
        ctx.add(ctx.mul(m[2], a), ctx.mul(m[3], b)),
    )
}

pub fn det2(ctx: &FieldCtx, m: &[Fq; 4]) -> Fq {
    ctx.sub(ctx.mul(m[0], m[3]), ctx.mul(m[1], m[2]))
}

fn mat_mul2(ctx: &FieldCtx, a: &[Fq; 4], b: &[Fq; 4]) -> [Fq; 4] {
    let e = |i: usize, j: usize| ctx.add(ctx.mul(a[2 * i], b[j]), ctx.mul(a[2 * i + 1], b[2 + j]));
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

fn frob_mat2(ctx: &FieldCtx, s: Frob, m: &[Fq; 4]) -> [Fq; 4] {
    m.map(|x| ctx.frob(s, x))
}

/// `v -> M v^σ` on L² with `det M != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    mat: [Fq; 4],
    sigma: Frob,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearSpec {
    #[serde(rename = "M")]
    pub mat: [u32; 4],
    pub sigma: u32,
}

impl SemilinearMap {
    pub fn new(ctx: &FieldCtx, mat: [Fq; 4], sigma: Frob) -> Result<SemilinearMap> {
        for &x in &mat {
            ctx.check(x)?;
        }
        if det2(ctx, &mat).is_zero() {
            return param("semilinear map needs an invertible matrix");
        }
        Ok(SemilinearMap { mat, sigma })
    }

    pub fn identity(ctx: &FieldCtx, sigma: Frob) -> SemilinearMap {
        let _ = ctx;
        SemilinearMap { mat: [Fq::ONE, Fq::ZERO, Fq::ZERO, Fq::ONE], sigma }
    }

    /// `[[0, α], [1, β]]` with automorphism σ.
    pub fn companion(ctx: &FieldCtx, alpha: Fq, beta: Fq, sigma: Frob) -> Result<SemilinearMap> {
        Self::new(ctx, [Fq::ZERO, alpha, Fq::ONE, beta], sigma)
    }

    pub fn from_spec(ctx: &FieldCtx, spec: &SemilinearSpec) -> Result<SemilinearMap> {
        Self::new(ctx, spec.mat.map(Fq), ctx.frob_k(spec.sigma as i64))
    }

    pub fn spec(&self) -> SemilinearSpec {
        SemilinearSpec { mat: self.mat.map(|x| x.0), sigma: self.sigma.k() }
    }

    pub fn matrix(&self) -> [Fq; 4] {
        self.mat
    }

    pub fn sigma(&self) -> Frob {
        self.sigma
    }

    pub fn det(&self, ctx: &FieldCtx) -> Fq {
        det2(ctx, &self.mat)
    }

    pub fn apply(&self, ctx: &FieldCtx, v: Vec2) -> Vec2 {
        apply_matrix(ctx, &self.mat, self.sigma, v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, ctx: &FieldCtx, other: &SemilinearMap) -> SemilinearMap {
        let m = mat_mul2(ctx, &self.mat, &frob_mat2(ctx, self.sigma, &other.mat));
        SemilinearMap { mat: m, sigma: self.sigma.compose(other.sigma) }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> SemilinearMap {
        let d = ctx.inv(self.det(ctx)).expect("invertible by construction");
        let [a, b, c, e] = self.mat;
        let inv = [ctx.mul(d, e), ctx.mul(d, ctx.neg(b)), ctx.mul(d, ctx.neg(c)), ctx.mul(d, a)];
        let sbar = self.sigma.inverse();
        SemilinearMap { mat: frob_mat2(ctx, sbar, &inv), sigma: sbar }
    }

    pub fn power(&self, ctx: &FieldCtx, i: i64) -> SemilinearMap {
        if i < 0 {
            return self.inverse(ctx).power(ctx, -i);
        }
        let mut acc = SemilinearMap::identity(ctx, Frob::identity(self.sigma.m()));
        for _ in 0..i {
            acc = acc.compose(ctx, self);
        }
        acc
    }

    /// `v -> a T(v)`; needs `a != 0`.
    pub fn scale(&self, ctx: &FieldCtx, a: Fq) -> Result<SemilinearMap> {
        Self::new(ctx, self.mat.map(|x| ctx.mul(a, x)), self.sigma)
    }

    /// `g ∘ self ∘ g^{-1}`.
    pub fn conjugate(&self, ctx: &FieldCtx, g: &SemilinearMap) -> SemilinearMap {
        g.compose(ctx, self).compose(ctx, &g.inverse(ctx))
    }

    /// `(α, β)` when the matrix is `[[0, α], [1, β]]`.
    pub fn companion_params(&self) -> Option<(Fq, Fq)> {
        (self.mat[0].is_zero() && self.mat[2] == Fq::ONE).then_some((self.mat[1], self.mat[3]))
    }

    /// The F_p-linear map on L² in the basis (x^j, 0), then (0, x^j).
    pub fn as_fp_matrix(&self, ctx: &FieldCtx) -> FpMatrix {
        self.to_general().as_fp_matrix(ctx)
    }

    pub fn to_general(&self) -> SemilinearMapN {
        SemilinearMapN { d: 2, mat: self.mat.to_vec(), sigma: self.sigma }
    }
}

/// A companion-form map is irreducible iff `X^(p^k+1) - βX - α` has no root in L.
pub fn is_irreducible_criterion(ctx: &FieldCtx, t: &SemilinearMap) -> Result<bool> {
    let (alpha, beta) = t
        .companion_params()
        .ok_or_else(|| Error::Parameter("criterion needs M = [[0, α], [1, β]]".into()))?;
    Ok(projective_polynomial_root(ctx, t.sigma(), alpha, beta).is_none())
}

/// Smallest root of `X^(σ+1) - βX - α`, if any.
pub fn projective_polynomial_root(ctx: &FieldCtx, sigma: Frob, alpha: Fq, beta: Fq) -> Option<Fq> {
    ctx.elements().find(|&x| {
        let v = ctx.mul(ctx.frob(sigma, x), x);
        ctx.sub(ctx.sub(v, ctx.mul(beta, x)), alpha).is_zero()
    })
}

/// The p^m + 1 projective points: (1, 0), then (z, 1) in encoding order.
pub fn projective_points(ctx: &FieldCtx) -> impl Iterator<Item = Vec2> + '_ {
    std::iter::once(Vec2::new(Fq::ONE, Fq::ZERO)).chain(ctx.elements().map(|z| Vec2::new(z, Fq::ONE)))
}

/// First projective point spanning an invariant line of T.
pub fn reducibility_witness(ctx: &FieldCtx, t: &SemilinearMap) -> Option<Vec2> {
    projective_points(ctx).find(|&v| {
        let w = t.apply(ctx, v);
        ctx.sub(ctx.mul(w.x0, v.x1), ctx.mul(w.x1, v.x0)).is_zero()
    })
}

pub fn is_irreducible_oracle(ctx: &FieldCtx, t: &SemilinearMap) -> bool {
    reducibility_witness(ctx, t).is_none()
}

/// `v -> M v^σ` on L^d for small d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMapN {
    d: usize,
    mat: Vec<Fq>,
    sigma: Frob,
}

impl SemilinearMapN {
    pub fn new(ctx: &FieldCtx, d: usize, mat: Vec<Fq>, sigma: Frob) -> Result<SemilinearMapN> {
        if d == 0 || mat.len() != d * d {
            return param("matrix must be d×d");
        }
        for &x in &mat {
            ctx.check(x)?;
        }
        let t = SemilinearMapN { d, mat, sigma };
        if t.det(ctx).is_zero() {
            return param("semilinear map needs an invertible matrix");
        }
        Ok(t)
    }

    pub fn identity(d: usize, sigma: Frob) -> SemilinearMapN {
        let mut mat = vec![Fq::ZERO; d * d];
        for i in 0..d {
            mat[i * d + i] = Fq::ONE;
        }
        SemilinearMapN { d, mat, sigma }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &[Fq] {
        &self.mat
    }

    pub fn sigma(&self) -> Frob {
        self.sigma
    }

    pub fn apply(&self, ctx: &FieldCtx, v: &[Fq]) -> Vec<Fq> {
        let vs: Vec<Fq> = v.iter().map(|&x| ctx.frob(self.sigma, x)).collect();
        (0..self.d)
            .map(|i| {
                (0..self.d).fold(Fq::ZERO, |acc, j| ctx.add(acc, ctx.mul(self.mat[i * self.d + j], vs[j])))
            })
            .collect()
    }

    pub fn compose(&self, ctx: &FieldCtx, other: &SemilinearMapN) -> SemilinearMapN {
        let d = self.d;
        let mut mat = vec![Fq::ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = Fq::ZERO;
                for k in 0..d {
                    let b = ctx.frob(self.sigma, other.mat[k * d + j]);
                    acc = ctx.add(acc, ctx.mul(self.mat[i * d + k], b));
                }
                mat[i * d + j] = acc;
            }
        }
        SemilinearMapN { d, mat, sigma: self.sigma.compose(other.sigma) }
    }

    pub fn power(&self, ctx: &FieldCtx, i: u32) -> SemilinearMapN {
        let mut acc = SemilinearMapN::identity(self.d, Frob::identity(self.sigma.m()));
        for _ in 0..i {
            acc = acc.compose(ctx, self);
        }
        acc
    }

    /// Determinant by Gaussian elimination over L.
    pub fn det(&self, ctx: &FieldCtx) -> Fq {
        let d = self.d;
        let mut a = self.mat.clone();
        let mut det = Fq::ONE;
        for c in 0..d {
            let Some(piv) = (c..d).find(|&r| !a[r * d + c].is_zero()) else {
                return Fq::ZERO;
            };
            if piv != c {
                for j in 0..d {
                    a.swap(piv * d + j, c * d + j);
                }
                det = ctx.neg(det);
            }
            let pv = a[c * d + c];
            det = ctx.mul(det, pv);
            let inv = ctx.inv(pv).expect("nonzero pivot");
            for r in c + 1..d {
                let f = ctx.mul(a[r * d + c], inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..d {
                    a[r * d + j] = ctx.sub(a[r * d + j], ctx.mul(f, a[c * d + j]));
                }
            }
        }
        det
    }

    pub fn as_fp_matrix(&self, ctx: &FieldCtx) -> FpMatrix {
        let m = ctx.m() as usize;
        let n = self.d * m;
        let mut cols = Vec::with_capacity(n);
        for blk in 0..self.d {
            for j in 0..m {
                let mut v = vec![Fq::ZERO; self.d];
                v[blk] = ctx.basis(j as u32);
                cols.push(vec_to_fp(ctx, &self.apply(ctx, &v)));
            }
        }
        FpMatrix::from_columns(ctx.p(), n, &cols)
    }

    /// Invariant-subspace search: points for d = 2, points and lines for d = 3.
    pub fn is_irreducible_oracle(&self, ctx: &FieldCtx) -> Result<bool> {
        match self.d {
            1 => Ok(false),
            2 | 3 => {
                for v in projective_points_n(ctx, self.d) {
                    if is_parallel(ctx, &self.apply(ctx, &v), &v) {
                        return Ok(false);
                    }
                }
                if self.d == 3 {
                    for phi in projective_points_n(ctx, 3) {
                        let basis = functional_kernel(ctx, &phi);
                        let inv = basis.iter().all(|w| dot(ctx, &phi, &self.apply(ctx, w)).is_zero());
                        if inv {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            _ => param("irreducibility oracle supports d <= 3"),
        }
    }
}

/// Coordinates of a vector of L^d in the F_p basis used throughout.
pub fn vec_to_fp(ctx: &FieldCtx, v: &[Fq]) -> Vec<u8> {
    v.iter().flat_map(|&x| ctx.digits(x).into_iter().map(|c| c as u8)).collect()
}

pub fn vec_from_fp(ctx: &FieldCtx, v: &[u8]) -> Vec<Fq> {
    let m = ctx.m() as usize;
    v.chunks(m)
        .map(|c| ctx.from_digits(&c.iter().map(|&x| x as u32).collect::<Vec<_>>()))
        .collect()
}

/// Projective points of L^d, normalized so the last nonzero coordinate is 1.
pub fn projective_points_n(ctx: &FieldCtx, d: usize) -> Vec<Vec<Fq>> {
    let q = ctx.order();
    let mut out = Vec::new();
    for j in 0..d {
        let count = q.pow(j as u32);
        for idx in 0..count {
            let mut v = vec![Fq::ZERO; d];
            let mut r = idx;
            for slot in v.iter_mut().take(j) {
                *slot = Fq((r % q) as u32);
                r /= q;
            }
            v[j] = Fq::ONE;
            out.push(v);
        }
    }
    out
}

fn dot(ctx: &FieldCtx, a: &[Fq], b: &[Fq]) -> Fq {
    a.iter().zip(b).fold(Fq::ZERO, |acc, (&x, &y)| ctx.add(acc, ctx.mul(x, y)))
}

fn is_parallel(ctx: &FieldCtx, w: &[Fq], v: &[Fq]) -> bool {
    let d = v.len();
    (0..d).all(|i| (i + 1..d).all(|j| ctx.sub(ctx.mul(w[i], v[j]), ctx.mul(w[j], v[i])).is_zero()))
}

fn functional_kernel(ctx: &FieldCtx, phi: &[Fq]) -> Vec<Vec<Fq>> {
    let d = phi.len();
    let i = (0..d).find(|&i| !phi[i].is_zero()).expect("nonzero functional");
    let inv = ctx.inv(phi[i]).expect("nonzero");
    (0..d)
        .filter(|&j| j != i)
        .map(|j| {
            let mut v = vec![Fq::ZERO; d];
            v[j] = Fq::ONE;
            v[i] = ctx.neg(ctx.mul(phi[j], inv));
            v
        })
        .collect()
}
