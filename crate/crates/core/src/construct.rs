//! Semifields on L² from admissible mappings, and twisted cyclic semifields on L^d.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::admissible::AdmissibleFamily;
use crate::error::{param, Error, Result};
use crate::fpmat::FpMatrix;
use crate::gf::{gcd_u64, FieldCtx, Fq, Frob};
use crate::semifield::{Coords, PreSemifield, Provenance};
use crate::semilinear::{apply_matrix, vec_from_fp, vec_to_fp, SemilinearMapN, Vec2};

/// Brute-force rank checks in [`nonsingular_criterion`] run up to this order of L^d.
pub const CRITERION_BRUTE_LIMIT: u64 = 4096;

fn require_admissible(ctx: &FieldCtx, fam: &AdmissibleFamily) -> Result<()> {
    let r = fam.is_admissible(ctx)?;
    if !r.admissible {
        return param(format!("mapping is not admissible: {}", r.reason));
    }
    Ok(())
}

fn family_provenance(name: &str, fam: &AdmissibleFamily) -> Provenance {
    let mut prov = Provenance::named(name).with_params(serde_json::to_value(fam.descriptor()).expect("serializable"));
    if fam.is_trivial_equivalent() {
        prov = prov.flag("trivial-equivalent");
    }
    prov
}

/// `x ∘ y = y0 x + η T_{y1}(x) + det(M_{T_{y1}})^σ̄ T_{y1}^{-1}(x)`, needs `N_{L:K}(η) != 1`.
pub fn construction1(field: &Arc<FieldCtx>, fam: &AdmissibleFamily, eta: Fq) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    ctx.check(eta)?;
    require_admissible(ctx, fam)?;
    let sigma = fam.sigma();
    if ctx.norm(sigma, eta) == Fq::ONE {
        return param("η must satisfy N_{L:K}(η) ≠ 1");
    }
    let mut prov = family_provenance("C1", fam).with_eta(eta);
    if eta.is_zero() {
        prov = prov.flag("eta-zero");
    }
    let sbar = sigma.inverse();
    PreSemifield::from_l2(field, prov, |x, y| {
        let base = x.scale(ctx, y.x0);
        if y.x1.is_zero() {
            // T_0 = T_0^{-1} = 0
            return base;
        }
        let m = fam.matrix_at(ctx, y.x1);
        let t = apply_matrix(ctx, &m, sigma, x).scale(ctx, eta);
        // det^σ̄ T^{-1}(x) = adj(M)^σ̄ x^σ̄
        let adj = [m[3], ctx.neg(m[1]), ctx.neg(m[2]), m[0]].map(|c| ctx.frob(sbar, c));
        let inv = apply_matrix(ctx, &adj, sbar, x);
        base.add(ctx, t).add(ctx, inv)
    })
}

/// `x ∘ y = y0 x + T_{y1}(x)`.
pub fn construction2(field: &Arc<FieldCtx>, fam: &AdmissibleFamily) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    require_admissible(ctx, fam)?;
    let sigma = fam.sigma();
    PreSemifield::from_l2(field, family_provenance("C2", fam), |x, y| {
        let m = fam.matrix_at(ctx, y.x1);
        x.scale(ctx, y.x0).add(ctx, apply_matrix(ctx, &m, sigma, x))
    })
}

/// `c = (-1)^(d(t-1)) N_{L:K}(det M_T)`, the obstruction value shared by the nonsingularity results.
fn obstruction(ctx: &FieldCtx, t: &SemilinearMapN) -> Fq {
    let sigma = t.sigma();
    let order = sigma.order() as usize;
    let nd = ctx.norm(sigma, t.det(ctx));
    if (t.dim() * (order - 1)) % 2 == 1 {
        ctx.neg(nd)
    } else {
        nd
    }
}

/// Degree of `K' = Fix(ρ) ∩ K`.
fn twist_fixed_degree(sigma: Frob, rho: Frob) -> u32 {
    gcd_u64(sigma.fixed_degree() as u64, rho.fixed_degree() as u64) as u32
}

/// Whether η passes `N_{L:K'}(η) N_{K:K'}((-1)^(d(t-1)) N_{L:K}(det M_T)) ≠ 1`.
pub fn twisted_eta_valid(ctx: &FieldCtx, t: &SemilinearMapN, rho: Frob, eta: Fq) -> bool {
    let kd = t.sigma().fixed_degree();
    let kp = twist_fixed_degree(t.sigma(), rho);
    let lhs = ctx.norm_to_degree(eta, kp);
    let rhs = ctx.norm_between(obstruction(ctx, t), kd, kp);
    ctx.mul(lhs, rhs) != Fq::ONE
}

/// `x ∘ y = Σ_{i<d} y_i T^i(x) + η y_0^ρ T^d(x)` on L^d.
pub fn twisted_cyclic(field: &Arc<FieldCtx>, t: &SemilinearMapN, rho: Frob, eta: Fq) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    ctx.check(eta)?;
    let d = t.dim();
    if d > 3 {
        return param("twisted cyclic construction supports d <= 3");
    }
    if !t.is_irreducible_oracle(ctx)? {
        return param("T must be irreducible");
    }
    if !twisted_eta_valid(ctx, t, rho, eta) {
        return param("η must satisfy N_{L:K'}(η) N_{K:K'}((−1)^{d(t−1)} det(M_T)) ≠ 1");
    }
    let powers: Vec<SemilinearMapN> = (0..=d as u32).map(|i| t.power(ctx, i)).collect();
    let mut prov = Provenance::named("twisted-cyclic")
        .with_params(serde_json::json!({
            "d": d,
            "M": t.matrix().iter().map(|x| x.0).collect::<Vec<_>>(),
            "sigma": t.sigma().k(),
            "rho": rho.k(),
        }))
        .with_eta(eta);
    if eta.is_zero() {
        prov = prov.flag("eta-zero");
    }
    let n = d * ctx.m() as usize;
    PreSemifield::from_multiplication(ctx.p(), n, Coords::Field { field: field.clone(), dim: d }, prov, |xv, yv| {
        let x = vec_from_fp(ctx, xv);
        let y = vec_from_fp(ctx, yv);
        let mut acc = vec![Fq::ZERO; d];
        let mut add_term = |c: Fq, i: usize| {
            if c.is_zero() {
                return;
            }
            for (a, v) in acc.iter_mut().zip(powers[i].apply(ctx, &x)) {
                *a = ctx.add(*a, ctx.mul(c, v));
            }
        };
        for (i, &yi) in y.iter().enumerate() {
            add_term(yi, i);
        }
        add_term(ctx.mul(eta, ctx.frob(rho, y[0])), d);
        vec_to_fp(ctx, &acc)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    /// `y_d = 0` or `N_{L:K}(y0/y_d) ≠ (−1)^(d(t−1)) N_{L:K}(det M_T)`; depends only on `(y_0, y_d)`.
    pub criterion: bool,
    /// Rank verdict for this coefficient tuple.
    pub tuple_nonsingular: Option<bool>,
    /// Rank verdict over every choice of `y_1, ..., y_{d-1}` with the given `y0, y_d`.
    pub all_middle_nonsingular: Option<bool>,
}

/// F_p-matrix of `F_y = Σ_{i<=d} y_i T^i`.
pub fn f_y_matrix(ctx: &FieldCtx, powers: &[SemilinearMapN], y: &[Fq]) -> FpMatrix {
    let d = powers[0].dim();
    let m = ctx.m() as usize;
    let mut cols = Vec::with_capacity(d * m);
    for blk in 0..d {
        for j in 0..m {
            let mut x = vec![Fq::ZERO; d];
            x[blk] = ctx.basis(j as u32);
            let mut acc = vec![Fq::ZERO; d];
            for (pw, &c) in powers.iter().zip(y) {
                if c.is_zero() {
                    continue;
                }
                for (a, v) in acc.iter_mut().zip(pw.apply(ctx, &x)) {
                    *a = ctx.add(*a, ctx.mul(c, v));
                }
            }
            cols.push(vec_to_fp(ctx, &acc));
        }
    }
    FpMatrix::from_columns(ctx.p(), d * m, &cols)
}

/// The closed-form verdict for `(y_0, y_d)`.
pub fn criterion_verdict(ctx: &FieldCtx, t: &SemilinearMapN, y0: Fq, yd: Fq) -> bool {
    if yd.is_zero() {
        return true;
    }
    let r = ctx.div(y0, yd).expect("y_d nonzero");
    ctx.norm(t.sigma(), r) != obstruction(ctx, t)
}

/// Evaluates the nonsingularity criterion for `y = (y_0, ..., y_d)` and, on small spaces,
/// the rank of `F_y` and of every `F` sharing `y_0` and `y_d`.
pub fn nonsingular_criterion(ctx: &FieldCtx, t: &SemilinearMapN, y: &[Fq]) -> Result<CriterionReport> {
    let d = t.dim();
    if y.len() != d + 1 {
        return param(format!("expected {} coefficients y_0..y_d", d + 1));
    }
    if !t.is_irreducible_oracle(ctx)? {
        return param("T must be irreducible");
    }
    let (y0, yd) = (y[0], y[d]);
    let criterion = criterion_verdict(ctx, t, y0, yd);
    let zero = y.iter().all(|c| c.is_zero());
    let small = ctx.order().checked_pow(d as u32).is_some_and(|o| o <= CRITERION_BRUTE_LIMIT);
    if !small {
        return Ok(CriterionReport { criterion, tuple_nonsingular: None, all_middle_nonsingular: None });
    }
    let powers: Vec<SemilinearMapN> = (0..=d as u32).map(|i| t.power(ctx, i)).collect();
    let tuple = !zero && f_y_matrix(ctx, &powers, y).is_invertible();
    let mut all = true;
    let q = ctx.order();
    let middle = q.pow(d as u32 - 1);
    for idx in 0..middle {
        let mut yy = y.to_vec();
        let mut r = idx;
        for slot in yy.iter_mut().take(d).skip(1) {
            *slot = Fq((r % q) as u32);
            r /= q;
        }
        if yy.iter().all(|c| c.is_zero()) {
            continue;
        }
        if !f_y_matrix(ctx, &powers, &yy).is_invertible() {
            all = false;
            break;
        }
    }
    if criterion != all {
        return Err(Error::Consistency(format!(
            "criterion says {criterion} for (y0, y_d) = ({}, {}) but the rank scan says {all}",
            y0.0, yd.0
        )));
    }
    if criterion && !tuple && !zero {
        return Err(Error::Consistency("criterion holds but this F_y is singular".into()));
    }
    Ok(CriterionReport { criterion, tuple_nonsingular: Some(tuple), all_middle_nonsingular: Some(all) })
}

/// Multiplication of a family member on L² as a closure, used by several constructors.
pub fn l2_eval(s: &PreSemifield, x: Vec2, y: Vec2) -> Vec2 {
    s.mul_l2(x, y).expect("two-block field coordinates")
}
