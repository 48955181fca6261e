//! Known semifield families of order p^2m, the new biprojective family, and the explicit
//! transposed multiplications used as oracles for the computed transposes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissible::{AdmissibleFamily, FamilyDescriptor};
use crate::construct::{construction1, construction2, twisted_cyclic};
use crate::error::{param, Error, Result};
use crate::gf::{gcd_u128, gcd_u64, pow_u128, Elem, FieldCtx, Fq, Frob};
use crate::semifield::{PreSemifield, Provenance};
use crate::semilinear::{projective_polynomial_root, SemilinearMap, SemilinearSpec, Vec2};

/// Constructors verify the axioms themselves up to this order when a condition is in doubt.
pub const SELF_CHECK_LIMIT: u64 = 6561;

type E<'a> = Elem<'a>;

fn build<'a>(
    field: &'a Arc<FieldCtx>,
    prov: Provenance,
    f: impl Fn(E<'a>, E<'a>, E<'a>, E<'a>) -> (E<'a>, E<'a>),
) -> Result<PreSemifield> {
    let c: &'a FieldCtx = field.as_ref();
    PreSemifield::from_l2(field, prov, |x, y| {
        let (a, b) = f(c.e(x.x0), c.e(x.x1), c.e(y.x0), c.e(y.x1));
        Vec2::new(a.fq(), b.fq())
    })
}

fn rootless(ctx: &FieldCtx, sigma: Frob, alpha: Fq, beta: Fq) -> Result<()> {
    if let Some(r) = projective_polynomial_root(ctx, sigma, alpha, beta) {
        return param(format!("X^(σ+1) − βX − α must have no roots in L, but {} is a root", r.0));
    }
    Ok(())
}

/// `η` is a (σ−1)-st power iff `η != 0` and `N_{L:K}(η) = 1`.
pub fn is_sigma_minus_one_power(ctx: &FieldCtx, sigma: Frob, eta: Fq) -> bool {
    !eta.is_zero() && ctx.norm(sigma, eta) == Fq::ONE
}

fn not_sigma_minus_one_power(ctx: &FieldCtx, sigma: Frob, eta: Fq) -> Result<()> {
    if is_sigma_minus_one_power(ctx, sigma, eta) {
        return param("η must not be a (σ−1)-st power");
    }
    Ok(())
}

fn check_all(ctx: &FieldCtx, xs: &[Fq]) -> Result<()> {
    xs.iter().try_for_each(|&x| ctx.check(x).map(|_| ()))
}

fn exps(ctx: &FieldCtx, ks: &[u32]) -> Vec<Frob> {
    ks.iter().map(|&k| ctx.frob_k(k as i64)).collect()
}

// ---------------------------------------------------------------- Dickson

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicksonParams {
    pub k: u32,
    pub l: u32,
    pub r: u32,
    pub alpha: u32,
}

/// The two readings of the Dickson condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicksonCondition {
    /// `α ∉ L^(p^r+1) L^(p^k+1) L^(p^l−1)`, i.e. outside the e-th powers.
    pub literal_exponent: u64,
    pub literal: bool,
    /// Exact zero-divisor condition `α ∉ L^(σρ−1) L^(ρ+1) L^(ρ+τ)`.
    pub exact_exponent: u64,
    pub exact: bool,
}

pub fn dickson_condition(ctx: &FieldCtx, k: u32, l: u32, r: u32, alpha: Fq) -> Result<DicksonCondition> {
    if alpha.is_zero() {
        return param("α = 0 gives zero divisors");
    }
    let p = ctx.p() as u64;
    let q1 = (ctx.order() - 1) as u128;
    let g = |xs: &[u128]| xs.iter().fold(q1, |acc, &x| gcd_u128(acc, x)) as u64;
    let literal_exponent = g(&[pow_u128(p, r) + 1, pow_u128(p, k) + 1, pow_u128(p, l) - 1]);
    let exact_exponent = g(&[pow_u128(p, k + r) - 1, pow_u128(p, r) + 1, pow_u128(p, r) + pow_u128(p, l)]);
    Ok(DicksonCondition {
        literal_exponent,
        literal: ctx.power_class_index(alpha, literal_exponent)? != 0,
        exact_exponent,
        exact: ctx.power_class_index(alpha, exact_exponent)? != 0,
    })
}

/// `(x0 y0 + α x1^ρ y1^τ, x0^σ y1 + x1 y0)`.
pub fn dickson(field: &Arc<FieldCtx>, p: &DicksonParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let alpha = ctx.check(Fq(p.alpha))?;
    let cond = dickson_condition(ctx, p.k, p.l, p.r, alpha)?;
    if !cond.literal {
        return param(format!(
            "α ∉ L^(p^r+1)L^(p^k+1)L^(p^t−1) fails with t = l: α is a {}-th power",
            cond.literal_exponent
        ));
    }
    let mut prov = Provenance::named("dickson").with_params(serde_json::to_value(p)?);
    if cond.literal != cond.exact {
        prov = prov.flag("dickson-condition-disagreement");
    }
    let s = dickson_unchecked(field, p, prov)?;
    if cond.literal != cond.exact && s.order() <= SELF_CHECK_LIMIT {
        let rep = s.verify_axioms();
        if let Some((x, y)) = rep.witness {
            return Err(Error::Consistency(format!(
                "the printed Dickson condition holds but x = {x:?}, y = {y:?} is a zero divisor pair"
            )));
        }
    }
    Ok(s)
}

fn dickson_unchecked(field: &Arc<FieldCtx>, p: &DicksonParams, prov: Provenance) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let [s, t, r] = exps(ctx, &[p.k, p.l, p.r])[..] else { unreachable!() };
    let a = ctx.el(p.alpha);
    build(field, prov, |x0, x1, y0, y1| (x0 * y0 + a * x1.frob(r) * y1.frob(t), x0.frob(s) * y1 + x1 * y0))
}

/// `(x0 y0 + (x1 y1)^σ̄, (α x0)^ρ̄ y1^(τρ̄) + x1 y0)`.
pub fn dickson_transpose(field: &Arc<FieldCtx>, p: &DicksonParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    ctx.check(Fq(p.alpha))?;
    let [s, t, r] = exps(ctx, &[p.k, p.l, p.r])[..] else { unreachable!() };
    let (sb, rb) = (s.inverse(), r.inverse());
    let a = ctx.el(p.alpha);
    let prov = Provenance::named("dickson-transpose-formula").with_params(serde_json::to_value(p)?);
    build(field, prov, |x0, x1, y0, y1| {
        (x0 * y0 + (x1 * y1).frob(sb), (a * x0).frob(rb) * y1.frob(t.compose(rb)) + x1 * y0)
    })
}

// ---------------------------------------------------------------- Knuth

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnuthParams {
    pub k: u32,
    pub alpha: u32,
    pub beta: u32,
}

/// Knuth's semifields quadratic over a weak nucleus; `which` is 1 to 4 and 2 is Hughes–Kleinfeld.
pub fn knuth(field: &Arc<FieldCtx>, which: u8, p: &KnuthParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    check_all(ctx, &[Fq(p.alpha), Fq(p.beta)])?;
    let s = ctx.frob_k(p.k as i64);
    if s.is_identity() {
        return param("σ ≠ id is required");
    }
    rootless(ctx, s, Fq(p.alpha), Fq(p.beta))?;
    let sb = s.inverse();
    let sb2 = sb.compose(sb);
    let (a, b) = (ctx.el(p.alpha), ctx.el(p.beta));
    let prov = Provenance::named(&format!("knuth{which}")).with_params(serde_json::to_value(p)?);
    match which {
        1 => build(field, prov, |x0, x1, y0, y1| {
            (x0 * y0 + a * x1.frob(s) * y1.frob(sb2), x1 * y0 + x0.frob(s) * y1 + b * x1.frob(s) * y1.frob(sb))
        }),
        2 => build(field, prov, |x0, x1, y0, y1| {
            (x0 * y0 + a * x1.frob(s) * y1, x1 * y0 + x0.frob(s) * y1 + b * x1.frob(s) * y1)
        }),
        3 => build(field, prov, |x0, x1, y0, y1| {
            (x0 * y0 + a * x1.frob(sb) * y1.frob(sb2), x1 * y0 + x0.frob(s) * y1 + b * x1 * y1.frob(sb))
        }),
        4 => build(field, prov, |x0, x1, y0, y1| {
            (x0 * y0 + a * x1.frob(sb) * y1, x1 * y0 + x0.frob(s) * y1 + b * x1 * y1)
        }),
        _ => param("Knuth families are numbered 1 to 4"),
    }
}

// ---------------------------------------------------------------- Bierbrauer

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BierbrauerParams {
    pub k: u32,
    pub alpha: u32,
    /// 0 or 1.
    pub beta: u32,
    pub eta: u32,
}

fn bierbrauer_check(ctx: &FieldCtx, p: &BierbrauerParams) -> Result<Frob> {
    check_all(ctx, &[Fq(p.alpha), Fq(p.eta)])?;
    if p.beta > 1 {
        return param("β must be 0 or 1 in the normalized form δ = 1, γ = 0");
    }
    let s = ctx.frob_k(p.k as i64);
    not_sigma_minus_one_power(ctx, s, Fq(p.eta))?;
    rootless(ctx, s, Fq(p.alpha), Fq(p.beta))?;
    Ok(s)
}

/// `(x1 y1^σ + β x1 y0^σ + α x0 y0^σ + η(x1^σ y1 − β x0^σ y1 + α x0^σ y0), x0 y1 + x1 y0)`.
pub fn bierbrauer(field: &Arc<FieldCtx>, p: &BierbrauerParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let s = bierbrauer_check(ctx, p)?;
    let (a, b, h) = (ctx.el(p.alpha), ctx.el(p.beta), ctx.el(p.eta));
    let prov = Provenance::named("bierbrauer").with_params(serde_json::to_value(p)?).with_eta(h.fq());
    build(field, prov, |x0, x1, y0, y1| {
        let (xs0, xs1, ys0, ys1) = (x0.frob(s), x1.frob(s), y0.frob(s), y1.frob(s));
        (
            x1 * ys1 + b * x1 * ys0 + a * x0 * ys0 + h * (xs1 * y1 - b * xs0 * y1 + a * xs0 * y0),
            x0 * y1 + x1 * y0,
        )
    })
}

/// The printed transpose of [`bierbrauer`].
pub fn bierbrauer_transpose(field: &Arc<FieldCtx>, p: &BierbrauerParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let s = bierbrauer_check(ctx, p)?;
    let sb = s.inverse();
    let (a, b, h) = (ctx.el(p.alpha), ctx.el(p.beta), ctx.el(p.eta));
    let hb = h.frob(sb);
    let prov = Provenance::named("bierbrauer-transpose-formula").with_params(serde_json::to_value(p)?);
    build(field, prov, |x0, x1, y0, y1| {
        (
            a * x0 * y0.frob(s) + hb * (-(b.frob(sb)) * (x0 * y1).frob(sb) + a.frob(sb) * (x0 * y0).frob(sb)) + x1 * y1,
            x0 * y1.frob(s) + b * x0 * y0.frob(s) + hb * (x0 * y1).frob(sb) + x1 * y0,
        )
    })
}

// ---------------------------------------------------------------- Dempwolff

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DempwolffParams {
    pub k: u32,
    pub l: u32,
    pub alpha: u32,
    pub eta: u32,
}

/// `(x0 y0 + x1 y1^σ − η x1^τ y1^σ̄, x0 y1 + α(x1 y0^σ − η x1^τ y0^σ̄))`, p odd.
pub fn dempwolff(field: &Arc<FieldCtx>, p: &DempwolffParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    check_all(ctx, &[Fq(p.alpha), Fq(p.eta)])?;
    if ctx.p() == 2 {
        return param("the Dempwolff family is stated for odd characteristic; use the twisted variant");
    }
    let [s, t] = exps(ctx, &[p.k, p.l])[..] else { unreachable!() };
    if p.alpha == 0 || ctx.is_power(Fq(p.alpha), 2)? {
        return param("α must be a non-square");
    }
    if ctx.norm(s, Fq(p.eta)) == Fq::ONE {
        return param("η must satisfy N_{L:K}(η) ≠ 1");
    }
    if s.fixed_degree() % t.fixed_degree() != 0 {
        return param("τ must have fixed field K' ≤ K");
    }
    let sb = s.inverse();
    let (a, h) = (ctx.el(p.alpha), ctx.el(p.eta));
    let prov = Provenance::named("dempwolff").with_params(serde_json::to_value(p)?).with_eta(h.fq());
    build(field, prov, |x0, x1, y0, y1| {
        (
            x0 * y0 + x1 * y1.frob(s) - h * x1.frob(t) * y1.frob(sb),
            x0 * y1 + a * (x1 * y0.frob(s) - h * x1.frob(t) * y0.frob(sb)),
        )
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedDempwolffParams {
    pub t: SemilinearSpec,
    pub l: u32,
    pub eta: u32,
}

/// Whether `N_{K:K'}(N_{L:K}(η)) ≠ N_{K:K'}(N_{L:K}(det M_T))`, K' the fixed field of τ inside K.
pub fn twisted_dempwolff_valid(ctx: &FieldCtx, t: &SemilinearMap, tau: Frob, eta: Fq) -> bool {
    let kd = t.sigma().fixed_degree();
    let kp = gcd_u64(kd as u64, tau.fixed_degree() as u64) as u32;
    let n = |x: Fq| ctx.norm_between(ctx.norm_to_degree(x, kd), kd, kp);
    n(eta) != n(t.det(ctx))
}

/// `x ∘ y = x0 y + x1 T(y) + η x1^τ T^{-1}(y)` for any irreducible T, any characteristic.
pub fn dempwolff_twisted(field: &Arc<FieldCtx>, p: &TwistedDempwolffParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let eta = ctx.check(Fq(p.eta))?;
    let t = SemilinearMap::from_spec(ctx, &p.t)?;
    if !crate::semilinear::is_irreducible_oracle(ctx, &t) {
        return param("T must be irreducible");
    }
    let tau = ctx.frob_k(p.l as i64);
    if !twisted_dempwolff_valid(ctx, &t, tau, eta) {
        return param("η must satisfy N_{K:K'}(N_{L:K}(η)) ≠ N_{K:K'}(N_{L:K}(det M_T))");
    }
    let ti = t.inverse(ctx);
    let prov = Provenance::named("dempwolff-twisted").with_params(serde_json::to_value(p)?).with_eta(eta);
    PreSemifield::from_l2(field, prov, |x, y| {
        let a = y.scale(ctx, x.x0);
        let b = t.apply(ctx, y).scale(ctx, x.x1);
        let c = ti.apply(ctx, y).scale(ctx, ctx.mul(eta, ctx.frob(tau, x.x1)));
        a.add(ctx, b).add(ctx, c)
    })
}

// ---------------------------------------------------------------- Zhou–Pott

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZhouPottParams {
    pub k: u32,
    pub l: u32,
    pub alpha: u32,
}

fn zhou_pott_check(ctx: &FieldCtx, p: &ZhouPottParams) -> Result<(Frob, Frob)> {
    ctx.check(Fq(p.alpha))?;
    if ctx.p() == 2 {
        return param("p must be odd");
    }
    let [s, t] = exps(ctx, &[p.k, p.l])[..] else { unreachable!() };
    if s.order() % 2 == 0 {
        return param("σ has odd order is required");
    }
    if p.alpha == 0 || ctx.is_power(Fq(p.alpha), 2)? {
        return param("α must be a non-square");
    }
    Ok((s, t))
}

/// `(x0^σ y0 + x0 y0^σ + α(x1^σ y1 + x1 y1^σ)^τ, x0 y1 + x1 y0)`; commutative.
pub fn zhou_pott(field: &Arc<FieldCtx>, p: &ZhouPottParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let (s, t) = zhou_pott_check(ctx, p)?;
    let a = ctx.el(p.alpha);
    let prov = Provenance::named("zhou-pott").with_params(serde_json::to_value(p)?);
    build(field, prov, |x0, x1, y0, y1| {
        (
            x0.frob(s) * y0 + x0 * y0.frob(s) + a * (x1.frob(s) * y1 + x1 * y1.frob(s)).frob(t),
            x0 * y1 + x1 * y0,
        )
    })
}

/// The printed transpose of [`zhou_pott`].
pub fn zhou_pott_transpose(field: &Arc<FieldCtx>, p: &ZhouPottParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let (s, t) = zhou_pott_check(ctx, p)?;
    let (sb, tb) = (s.inverse(), t.inverse());
    let tsb = t.compose(s).inverse();
    let a = ctx.el(p.alpha);
    let prov = Provenance::named("zhou-pott-transpose-formula").with_params(serde_json::to_value(p)?);
    build(field, prov, |x0, x1, y0, y1| {
        (
            x0.frob(sb) * y0.frob(sb) + x0 * y0.frob(s) + x1 * y1,
            a.frob(tsb) * x0.frob(tsb) * y1.frob(sb) + a.frob(tb) * x0.frob(tb) * y1.frob(s) + x1 * y0,
        )
    })
}

/// `(x, y) -> C1((y1, y0), (x1, −λ x0))`: the recoordinatization that turns Construction 1
/// into the transposed Zhou–Pott and Taniguchi forms.
pub fn swapped_construction1(
    field: &Arc<FieldCtx>,
    fam: &AdmissibleFamily,
    eta: Fq,
    lambda: Fq,
) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let c1 = construction1(field, fam, eta)?;
    let mut prov = c1.provenance().clone();
    prov.flags.push("swapped".into());
    PreSemifield::from_l2(field, prov, |x, y| {
        let u = Vec2::new(y.x1, y.x0);
        let v = Vec2::new(x.x1, ctx.neg(ctx.mul(lambda, x.x0)));
        c1.mul_l2(u, v).expect("field coordinates")
    })
}

/// Construction 1 recoordinatized as the Zhou–Pott transpose: Diag(σ, τ̄, 1/α) with η = −1.
pub fn zhou_pott_as_construction1(field: &Arc<FieldCtx>, p: &ZhouPottParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let (s, t) = zhou_pott_check(ctx, p)?;
    let a = Fq(p.alpha);
    let fam = AdmissibleFamily::diag(ctx, s, t.inverse(), ctx.inv(a)?)?;
    swapped_construction1(field, &fam, ctx.neg(Fq::ONE), a)
}

// ---------------------------------------------------------------- Taniguchi

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaniguchiParams {
    pub k: u32,
    /// α′
    pub alpha: u32,
    /// β′
    pub beta: u32,
    pub eta: u32,
}

fn taniguchi_check(ctx: &FieldCtx, p: &TaniguchiParams) -> Result<Frob> {
    check_all(ctx, &[Fq(p.alpha), Fq(p.beta), Fq(p.eta)])?;
    let s = ctx.frob_k(p.k as i64);
    not_sigma_minus_one_power(ctx, s, Fq(p.eta))?;
    rootless(ctx, s, Fq(p.alpha), Fq(p.beta))?;
    Ok(s)
}

/// `((x0^σ y0 − η x0 y0^σ)^σ² + β′(x0^σ y1 + η y0^σ x1)^σ + α′(x1^σ y1 − η x1 y1^σ), x1 y0 + x0 y1)`.
pub fn taniguchi(field: &Arc<FieldCtx>, p: &TaniguchiParams) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let s = taniguchi_check(ctx, p)?;
    let s2 = s.compose(s);
    let (a, b, h) = (ctx.el(p.alpha), ctx.el(p.beta), ctx.el(p.eta));
    let prov = Provenance::named("taniguchi").with_params(serde_json::to_value(p)?).with_eta(h.fq());
    build(field, prov, |x0, x1, y0, y1| {
        (
            (x0.frob(s) * y0 - h * x0 * y0.frob(s)).frob(s2)
                + b * (x0.frob(s) * y1 + h * y0.frob(s) * x1).frob(s)
                + a * (x1.frob(s) * y1 - h * x1 * y1.frob(s)),
            x1 * y0 + x0 * y1,
        )
    })
}

/// The intermediate forms of the Taniguchi transpose computation.
#[derive(Clone, Debug)]
pub struct TaniguchiSteps {
    /// σ̄² applied to the first component; α^(σ²) = α′, β^(σ²) = β′.
    pub adjusted: PreSemifield,
    /// The printed transpose of `adjusted`, in its matrix form.
    pub transpose_formula: PreSemifield,
    /// `C1((y1, y0), (x1, −α x0))` for Triang(σ, 1/α, −(β/α)^σ).
    pub construction: PreSemifield,
    pub alpha: Fq,
    pub beta: Fq,
}

pub fn taniguchi_transpose_steps(field: &Arc<FieldCtx>, p: &TaniguchiParams) -> Result<TaniguchiSteps> {
    let ctx = field.as_ref();
    let s = taniguchi_check(ctx, p)?;
    let sb = s.inverse();
    let (s2, sb2) = (s.compose(s), sb.compose(sb));
    let h = ctx.el(p.eta);
    let a = ctx.el(p.alpha).frob(sb2);
    let b = ctx.el(p.beta).frob(sb2);
    let prov = |name: &str| Provenance::named(name).with_params(serde_json::to_value(p).expect("serializable"));
    let adjusted = build(field, prov("taniguchi-adjusted"), |x0, x1, y0, y1| {
        (
            x0.frob(s) * y0 - h * x0 * y0.frob(s)
                + b * (x0.frob(s) * y1 + h * y0.frob(s) * x1).frob(sb)
                + a * (x1.frob(s) * y1 - h * x1 * y1.frob(s)).frob(sb2),
            x1 * y0 + x0 * y1,
        )
    })?;
    // x1 y' + η [[0, −x0], [−(α x0)^σ², (β x0)^σ]] y'^σ + [[β x0, x0^σ̄], [(α x0)^σ, 0]] y'^σ̄, y' = (y1, y0)
    let transpose_formula = build(field, prov("taniguchi-transpose-formula"), |x0, x1, y0, y1| {
        let (u0, u1) = (y1, y0);
        (
            x1 * u0 + h * (-x0 * u1.frob(s)) + b * x0 * u0.frob(sb) + x0.frob(sb) * u1.frob(sb),
            x1 * u1 + h * (-(a * x0).frob(s2) * u0.frob(s) + (b * x0).frob(s) * u1.frob(s)) + (a * x0).frob(s) * u0.frob(sb),
        )
    })?;
    let fam = AdmissibleFamily::triang(ctx, s, a.inv().fq(), (-(b / a).frob(s)).fq())?;
    let construction = swapped_construction1(field, &fam, h.fq(), a.fq())?;
    Ok(TaniguchiSteps { adjusted, transpose_formula, construction, alpha: a.fq(), beta: b.fq() })
}

// ---------------------------------------------------------------- the new family

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewFamilySpec {
    pub k: u32,
    pub l: u32,
    pub alpha: u32,
    pub eta: u32,
}

/// `d = gcd(p^k+1, p^l−1, p^m−1)`, the index of `L^(σ+1) L^(τ−1)` in L*.
pub fn new_family_d(ctx: &FieldCtx, k: u32, l: u32) -> u64 {
    crate::admissible::diag_power_index(ctx.p(), ctx.m(), k, l)
}

pub fn new_family_check(ctx: &FieldCtx, p: &NewFamilySpec) -> Result<(Frob, Frob)> {
    check_all(ctx, &[Fq(p.alpha), Fq(p.eta)])?;
    let [s, t] = exps(ctx, &[p.k, p.l])[..] else { unreachable!() };
    if p.alpha == 0 {
        return param("α must be nonzero");
    }
    let d = new_family_d(ctx, p.k, p.l);
    if ctx.power_class_index(Fq(p.alpha), d)? == 0 {
        return param(format!("α must lie outside L^(σ+1)L^(τ−1), the {d}-th powers"));
    }
    if ctx.norm(s, Fq(p.eta)) == Fq::ONE {
        return param("η must satisfy N_{L:K}(η) ≠ 1");
    }
    Ok((s, t))
}

/// `(x1 y1^σ − η x1^σ y1 + α(x0 y0^σ − η^τ̄ x0^σ y0), x0^τ y1 + x1 y0^τ)`: the transposed
/// Construction 1 form with τ applied to x0 and y0. The two η's agree when η is fixed by τ.
pub fn new_family(field: &Arc<FieldCtx>, p: &NewFamilySpec) -> Result<PreSemifield> {
    new_family_with(field, p, "new-family", true)
}

/// The same formula with η in place of η^τ̄; it has zero divisors for most η outside Fix(τ).
pub fn new_family_printed(field: &Arc<FieldCtx>, p: &NewFamilySpec) -> Result<PreSemifield> {
    new_family_with(field, p, "new-family-printed", false)
}

fn new_family_with(field: &Arc<FieldCtx>, p: &NewFamilySpec, name: &str, twist: bool) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let (s, t) = new_family_check(ctx, p)?;
    let (a, h) = (ctx.el(p.alpha), ctx.el(p.eta));
    let h2 = if twist { h.frob(t.inverse()) } else { h };
    let mut prov = Provenance::named(name).with_params(serde_json::to_value(p)?).with_eta(h.fq());
    if h.is_zero() {
        prov = prov.flag("eta-zero");
    }
    build(field, prov, |x0, x1, y0, y1| {
        (
            x1 * y1.frob(s) - h * x1.frob(s) * y1 + a * (x0 * y0.frob(s) - h2 * x0.frob(s) * y0),
            x0.frob(t) * y1 + x1 * y0.frob(t),
        )
    })
}

/// The Construction 1 semifield behind [`new_family`]: its transpose, with τ applied to
/// x0 and y0, is the new family. For η ≠ 0 this is
/// `(z, y) -> swap C1(y, (z1, η z0/β))` over Diag(σ, τ, β), η' = 1/η, `β = η^(1−τ̄)/α`;
/// for η = 0 it is the same shape over Construction 2 with `β = 1/α`.
pub fn new_family_source(field: &Arc<FieldCtx>, p: &NewFamilySpec) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    let (s, t) = new_family_check(ctx, p)?;
    let tb = t.inverse();
    let (a, h) = (ctx.el(p.alpha), ctx.el(p.eta));
    let (inner, scale) = if h.is_zero() {
        let beta = a.inv();
        (construction2(field, &AdmissibleFamily::diag(ctx, s, t, beta.fq())?)?, beta.inv())
    } else {
        let beta = (h / h.frob(tb)) / a;
        let fam = AdmissibleFamily::diag(ctx, s, t, beta.fq())?;
        (construction1(field, &fam, h.inv().fq())?, h / beta)
    };
    let mut prov = inner.provenance().clone();
    prov.flags.push("new-family-source".into());
    PreSemifield::from_l2(field, prov, |z, y| {
        let w = inner.mul_l2(y, Vec2::new(z.x1, ctx.mul(scale.fq(), z.x0))).expect("field coordinates");
        Vec2::new(w.x1, w.x0)
    })
}

// ---------------------------------------------------------------- registry

/// Every constructor reachable by name, with its parameter record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum FamilyRequest {
    Field,
    Dickson(DicksonParams),
    Knuth1(KnuthParams),
    Knuth2(KnuthParams),
    Knuth3(KnuthParams),
    Knuth4(KnuthParams),
    Bierbrauer(BierbrauerParams),
    Dempwolff(DempwolffParams),
    DempwolffTwisted(TwistedDempwolffParams),
    ZhouPott(ZhouPottParams),
    Taniguchi(TaniguchiParams),
    NewFamily(NewFamilySpec),
    C1 { family: FamilyDescriptor, eta: u32 },
    C2 { family: FamilyDescriptor },
    TwistedCyclic { d: usize, mat: Vec<u32>, sigma: u32, rho: u32, eta: u32 },
}

pub const FAMILY_NAMES: &[&str] = &[
    "field",
    "dickson",
    "knuth1",
    "knuth2",
    "knuth3",
    "knuth4",
    "bierbrauer",
    "dempwolff",
    "dempwolff-twisted",
    "zhou-pott",
    "taniguchi",
    "new-family",
    "c1",
    "c2",
    "twisted-cyclic",
];

fn int(desc: &str) -> Value {
    json!({"type": "integer", "minimum": 0, "description": desc})
}

/// JSON schema of a family's parameter object.
pub fn schema(name: &str) -> Result<Value> {
    let elem = |what: &str| int(&format!("{what}, a field element in base-p encoding"));
    let exp = |what: &str| int(&format!("exponent of {what}: x -> x^(p^e)"));
    let obj = |props: Vec<(&str, Value)>| {
        let required: Vec<&str> = props.iter().map(|(k, _)| *k).collect();
        let map: serde_json::Map<String, Value> = props.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        json!({"type": "object", "required": required, "properties": map, "additionalProperties": false})
    };
    let knuth = || obj(vec![("k", exp("σ")), ("alpha", elem("α")), ("beta", elem("β"))]);
    let admissible = json!({
        "type": "object",
        "description": "admissible mapping: {variant: trivial, t: {M, sigma}} | {variant: diag, k, l, alpha} | {variant: triang, k, alpha, beta}",
        "required": ["variant"]
    });
    Ok(match name {
        "field" => obj(vec![]),
        "dickson" => obj(vec![("k", exp("σ")), ("l", exp("τ")), ("r", exp("ρ")), ("alpha", elem("α"))]),
        "knuth1" | "knuth2" | "knuth3" | "knuth4" => knuth(),
        "bierbrauer" => obj(vec![
            ("k", exp("σ")),
            ("alpha", elem("α")),
            ("beta", json!({"type": "integer", "enum": [0, 1]})),
            ("eta", elem("η")),
        ]),
        "dempwolff" => obj(vec![("k", exp("σ")), ("l", exp("τ")), ("alpha", elem("α")), ("eta", elem("η"))]),
        "dempwolff-twisted" => obj(vec![
            ("t", json!({"type": "object", "required": ["M", "sigma"], "description": "T = M x^σ, M row-major"})),
            ("l", exp("τ")),
            ("eta", elem("η")),
        ]),
        "zhou-pott" => obj(vec![("k", exp("σ")), ("l", exp("τ")), ("alpha", elem("α"))]),
        "taniguchi" => obj(vec![("k", exp("σ")), ("alpha", elem("α′")), ("beta", elem("β′")), ("eta", elem("η"))]),
        "new-family" => obj(vec![("k", exp("σ")), ("l", exp("τ")), ("alpha", elem("α")), ("eta", elem("η"))]),
        "c1" => obj(vec![("family", admissible), ("eta", elem("η"))]),
        "c2" => obj(vec![("family", admissible)]),
        "twisted-cyclic" => obj(vec![
            ("d", json!({"type": "integer", "minimum": 1, "maximum": 3})),
            ("mat", json!({"type": "array", "items": {"type": "integer"}, "description": "M, d×d row-major"})),
            ("sigma", exp("σ")),
            ("rho", exp("ρ")),
            ("eta", elem("η")),
        ]),
        _ => return param(format!("unknown family {name:?}; known: {}", FAMILY_NAMES.join(", "))),
    })
}

/// Parses `params` against the named family.
pub fn request(name: &str, params: Value) -> Result<FamilyRequest> {
    let s = schema(name)?;
    let v = if name == "field" { json!({"family": name}) } else { json!({"family": name, "params": params}) };
    serde_json::from_value(v).map_err(|e| Error::Parameter(format!("parameters for {name} do not match {s}: {e}")))
}

pub fn build_family(field: &Arc<FieldCtx>, req: &FamilyRequest) -> Result<PreSemifield> {
    let ctx = field.as_ref();
    match req {
        FamilyRequest::Field => PreSemifield::from_field(field),
        FamilyRequest::Dickson(p) => dickson(field, p),
        FamilyRequest::Knuth1(p) => knuth(field, 1, p),
        FamilyRequest::Knuth2(p) => knuth(field, 2, p),
        FamilyRequest::Knuth3(p) => knuth(field, 3, p),
        FamilyRequest::Knuth4(p) => knuth(field, 4, p),
        FamilyRequest::Bierbrauer(p) => bierbrauer(field, p),
        FamilyRequest::Dempwolff(p) => dempwolff(field, p),
        FamilyRequest::DempwolffTwisted(p) => dempwolff_twisted(field, p),
        FamilyRequest::ZhouPott(p) => zhou_pott(field, p),
        FamilyRequest::Taniguchi(p) => taniguchi(field, p),
        FamilyRequest::NewFamily(p) => new_family(field, p),
        FamilyRequest::C1 { family, eta } => {
            construction1(field, &AdmissibleFamily::from_descriptor(ctx, family)?, Fq(*eta))
        }
        FamilyRequest::C2 { family } => construction2(field, &AdmissibleFamily::from_descriptor(ctx, family)?),
        FamilyRequest::TwistedCyclic { d, mat, sigma, rho, eta } => {
            let t = crate::semilinear::SemilinearMapN::new(
                ctx,
                *d,
                mat.iter().map(|&x| Fq(x)).collect(),
                ctx.frob_k(*sigma as i64),
            )?;
            twisted_cyclic(field, &t, ctx.frob_k(*rho as i64), Fq(*eta))
        }
    }
}
