//! The correspondence suite: every family placed against the constructions, and every printed
//! transpose against the computed one, each at the smallest legal order.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::admissible::AdmissibleFamily;
use crate::construct::{construction1, construction2, twisted_cyclic};
use crate::equivalence::brute_force_isotopic;
use crate::error::{Error, Result};
use crate::families::*;
use crate::fpmat::FpMatrix;
use crate::gf::{FieldCtx, Fq, Frob};
use crate::semifield::{verify_isotopism, IsotopismTriple, PreSemifield};
use crate::semilinear::{projective_polynomial_root, SemilinearMap, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub order: u64,
    /// `spread-equality`, `structure-constants`, `isotopism` or `search`.
    pub method: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

fn gf(p: u32, m: u32) -> Result<Arc<FieldCtx>> {
    Ok(Arc::new(FieldCtx::new(p, m)?))
}

fn run(name: &str, method: &str, body: impl FnOnce() -> Result<(u64, bool, String)>) -> Check {
    let t = Instant::now();
    let (order, passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (0, false, e.to_string()),
    };
    Check { name: name.into(), order, method: method.into(), passed, detail, millis: t.elapsed().as_millis() }
}

fn same_spread(a: &PreSemifield, b: &PreSemifield) -> bool {
    a.spread_set().same_set(&b.spread_set())
}

fn rootless_pair(f: &FieldCtx, s: Frob, beta_zero: bool) -> Result<(Fq, Fq)> {
    let betas: Vec<Fq> = if beta_zero { vec![Fq::ZERO] } else { f.elements().collect() };
    f.nonzero()
        .flat_map(|a| betas.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| projective_polynomial_root(f, s, a, b).is_none())
        .ok_or_else(|| Error::Parameter("no rootless projective polynomial".into()))
}

fn legal_eta(f: &FieldCtx, s: Frob) -> Result<Fq> {
    f.nonzero()
        .find(|&e| !is_sigma_minus_one_power(f, s, e))
        .ok_or_else(|| Error::Parameter("every nonzero η is a (σ−1)-st power".into()))
}

fn nonsquare(f: &FieldCtx) -> Result<Fq> {
    f.smallest_nonsquare().ok_or_else(|| Error::Parameter("no non-squares in characteristic 2".into()))
}

fn searched(order: u64, found: Option<IsotopismTriple>, what: &str) -> (u64, bool, String) {
    match found {
        Some(_) => (order, true, format!("witness found: {what}")),
        None => (order, false, format!("no isotopism: {what}")),
    }
}

/// Printed transpose formulas against the trace-form transpose.
pub fn transpose_suite() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(run("dickson-transpose", "spread-equality", || {
        let f = gf(3, 2)?;
        let p = DicksonParams { k: 1, l: 1, r: 1, alpha: nonsquare(&f)?.0 };
        let d = dickson(&f, &p)?;
        Ok((d.order(), same_spread(&d.transpose()?, &dickson_transpose(&f, &p)?), "transpose of (σ, τ, ρ) = Frob(1)".into()))
    }));
    for (p, m, beta) in [(2, 2, 0u32), (3, 2, 0), (3, 2, 1)] {
        let name = format!("bierbrauer-transpose-{}-beta{beta}", (p as u64).pow(2 * m));
        out.push(run(&name, "spread-equality", || {
            let f = gf(p, m)?;
            let s = f.frob_k(1);
            let (a, _) = rootless_pair_beta(&f, s, Fq(beta))?;
            // order 16 allows only η = 0
            let eta = if p == 2 { Fq::ZERO } else { legal_eta(&f, s)? };
            let q = BierbrauerParams { k: 1, alpha: a.0, beta, eta: eta.0 };
            let b = bierbrauer(&f, &q)?;
            Ok((b.order(), same_spread(&b.transpose()?, &bierbrauer_transpose(&f, &q)?), format!("η = {}", eta.0)))
        }));
    }
    out.push(run("zhou-pott-transpose", "spread-equality", || {
        let f = gf(3, 3)?;
        let q = ZhouPottParams { k: 1, l: 0, alpha: nonsquare(&f)?.0 };
        let z = zhou_pott(&f, &q)?;
        Ok((z.order(), same_spread(&z.transpose()?, &zhou_pott_transpose(&f, &q)?), "σ = Frob(1), τ = id".into()))
    }));
    out.push(run("taniguchi-transpose", "spread-equality", || {
        let f = gf(3, 2)?;
        let s = f.frob_k(1);
        let (a, b) = rootless_nonzero(&f, s)?;
        let q = TaniguchiParams { k: 1, alpha: a.0, beta: b.0, eta: legal_eta(&f, s)?.0 };
        let st = taniguchi_transpose_steps(&f, &q)?;
        Ok((
            st.adjusted.order(),
            same_spread(&st.adjusted.transpose()?, &st.transpose_formula),
            "σ̄²-adjusted form against its matrix-form transpose".into(),
        ))
    }));
    out
}

fn rootless_pair_beta(f: &FieldCtx, s: Frob, beta: Fq) -> Result<(Fq, Fq)> {
    f.nonzero()
        .find(|&a| projective_polynomial_root(f, s, a, beta).is_none())
        .map(|a| (a, beta))
        .ok_or_else(|| Error::Parameter("no rootless projective polynomial".into()))
}

fn rootless_nonzero(f: &FieldCtx, s: Frob) -> Result<(Fq, Fq)> {
    f.nonzero()
        .flat_map(|a| f.nonzero().map(move |b| (a, b)))
        .find(|&(a, b)| projective_polynomial_root(f, s, a, b).is_none())
        .ok_or_else(|| Error::Parameter("no rootless projective polynomial".into()))
}

/// The family-to-construction correspondences.
pub fn table1_suite() -> Vec<Check> {
    let mut out = Vec::new();

    out.push(run("dickson-c2-diag", "spread-equality", || {
        let f = gf(3, 2)?;
        let a = nonsquare(&f)?;
        let p = DicksonParams { k: 1, l: 1, r: 1, alpha: a.0 };
        let dt = dickson_transpose(&f, &p)?;
        let s = f.frob_k(1);
        let sb = s.inverse();
        let fam = AdmissibleFamily::diag(&f, sb, s, f.frob(sb.compose(sb), a))?;
        let c2 = construction2(&f, &fam)?;
        let dm = FpMatrix::block_diag(&[&FpMatrix::identity(3, 2), &f.mul_matrix(f.frob(sb, a))]);
        let dinv = dm.inverse().expect("invertible");
        let ok = c2.spread_set().same_set(&dt.spread_set().transform(&dinv, &dm));
        Ok((c2.order(), ok, "C2(Diag(σ̄, σ, α^σ̄²)) = D^{-1} spread(∘_D^t) D, D = diag(1, α^σ̄)".into()))
    }));

    let knuth16 = || -> Result<(Arc<FieldCtx>, Frob, KnuthParams)> {
        let f = gf(2, 2)?;
        let s = f.frob_k(1);
        let (a, b) = rootless_pair(&f, s, false)?;
        Ok((f, s, KnuthParams { k: 1, alpha: a.0, beta: b.0 }))
    };
    out.push(run("knuth1-c2-triang", "spread-equality", || {
        let (f, s, p) = knuth16()?;
        let k1 = knuth(&f, 1, &p)?;
        let c2 = construction2(&f, &AdmissibleFamily::triang(&f, s, Fq(p.alpha), Fq(p.beta))?)?;
        let s2 = s.compose(s);
        let rc = PreSemifield::from_l2(&f, k1.provenance().clone(), |x, y| {
            k1.mul_l2(x, Vec2::new(y.x0, f.frob(s2, y.x1))).expect("field coordinates")
        })?;
        Ok((k1.order(), same_spread(&c2, &rc), "C2(Triang(σ, α, β))(x, y) = K1(x, (y0, y1^σ²))".into()))
    }));
    out.push(run("knuth1-c1-triang", "search", || {
        let (f, s, p) = knuth16()?;
        let k1 = knuth(&f, 1, &p)?;
        let c1 = construction1(&f, &AdmissibleFamily::triang(&f, s, Fq(p.alpha), Fq(p.beta))?, Fq::ZERO)?;
        Ok(searched(k1.order(), brute_force_isotopic(&k1, &c1, false)?, "Knuth I ~ C1(Triang(σ, α, β)), η = 0"))
    }));
    out.push(run("knuth2-twisted-cyclic", "search", || {
        let (f, s, p) = knuth16()?;
        let k2 = knuth(&f, 2, &p)?;
        let t = SemilinearMap::companion(&f, Fq(p.alpha), Fq(p.beta), s)?;
        let tc = twisted_cyclic(&f, &t.to_general(), f.frob_k(0), Fq::ZERO)?;
        let exact = k2.consts() == tc.consts();
        let (o, found, d) = searched(k2.order(), brute_force_isotopic(&k2, &tc, false)?, "Knuth II ~ twisted cyclic");
        Ok((o, found && exact, format!("{d}; identical structure constants: {exact}")))
    }));
    out.push(run("bierbrauer-c1-trivial", "search", || {
        let f = gf(3, 2)?;
        let s = f.frob_k(1);
        let (a, b) = rootless_pair_beta(&f, s, Fq::ONE)?;
        let eta = legal_eta(&f, s)?;
        let bb = bierbrauer(&f, &BierbrauerParams { k: 1, alpha: a.0, beta: b.0, eta: eta.0 })?;
        let fam = AdmissibleFamily::trivial(&f, SemilinearMap::companion(&f, a, b, s)?)?;
        let c1 = construction1(&f, &fam, eta)?;
        let target = c1.dual().transpose()?;
        Ok(searched(bb.order(), brute_force_isotopic(&bb, &target, true)?, "Bierbrauer ~ transpose of the dual of C1(T), T = [[0, α], [1, β]]"))
    }));
    out.push(run("dempwolff-c1-trivial", "search", || {
        let f = gf(3, 2)?;
        let s = f.frob_k(1);
        let a = nonsquare(&f)?;
        let t = SemilinearMap::new(&f, [Fq::ZERO, Fq::ONE, a, Fq::ZERO], s)?;
        let eta = f
            .nonzero()
            .find(|&e| twisted_dempwolff_valid(&f, &t, s, e))
            .ok_or_else(|| Error::Parameter("no valid η".into()))?;
        let d = dempwolff_twisted(&f, &TwistedDempwolffParams { t: t.spec(), l: 1, eta: eta.0 })?;
        let c1 = construction1(&f, &AdmissibleFamily::trivial(&f, t)?, legal_eta(&f, s)?)?;
        Ok(searched(d.order(), brute_force_isotopic(&d, &c1.dual(), true)?, "Dempwolff T-form ~ dual of C1(T), T = [[0, 1], [α, 0]]"))
    }));
    out.push(run("zhou-pott-c1-diag", "spread-equality", || {
        let f = gf(3, 3)?;
        let q = ZhouPottParams { k: 1, l: 0, alpha: nonsquare(&f)?.0 };
        let zt = zhou_pott_transpose(&f, &q)?;
        Ok((zt.order(), same_spread(&zt, &zhou_pott_as_construction1(&f, &q)?), "eq. zp: C1(Diag(σ, τ̄, 1/α)), η = −1, recoordinatized".into()))
    }));
    out.push(run("zhou-pott-new-family", "isotopism", || zhou_pott_new_family(3, 3, 1, 0)));
    out.push(run("taniguchi-c1-triang", "spread-equality", || {
        let f = gf(3, 2)?;
        let s = f.frob_k(1);
        let (a, b) = rootless_nonzero(&f, s)?;
        let q = TaniguchiParams { k: 1, alpha: a.0, beta: b.0, eta: legal_eta(&f, s)?.0 };
        let st = taniguchi_transpose_steps(&f, &q)?;
        Ok((st.construction.order(), same_spread(&st.transpose_formula, &st.construction), "C1(Triang(σ, 1/α, −(β/α)^σ)) recoordinatized".into()))
    }));
    out.push(run("new-family-c1-diag", "spread-equality", || {
        let f = gf(3, 4)?;
        let d = new_family_d(&f, 1, 2);
        let alpha = f.smallest_non_power(d).ok_or_else(|| Error::Parameter("no admissible α".into()))?;
        let s = f.frob_k(1);
        let eta = f
            .nonzero()
            .find(|&e| f.norm(s, e) != Fq::ONE && e != Fq::ONE)
            .ok_or_else(|| Error::Parameter("no η".into()))?;
        let p = NewFamilySpec { k: 1, l: 2, alpha: alpha.0, eta: eta.0 };
        let nf = new_family(&f, &p)?;
        let src = new_family_source(&f, &p)?;
        let dm = FpMatrix::block_diag(&[&f.frob_matrix(f.frob_k(2)), &FpMatrix::identity(3, 4)]);
        let want = src.transpose()?.spread_set().transform(&FpMatrix::identity(3, 8), &dm);
        Ok((nf.order(), nf.spread_set().same_set(&want), "transpose of C1(Diag(σ, τ, β)), τ applied to x0 and y0".into()))
    }));
    out
}

/// `S_{σ,τ,α,−1}(x, y) = ZP_{α,τ̄}(s D x, s D y)` with s the block swap and `D = diag(τ, 1)`.
pub fn zhou_pott_new_family(p: u32, m: u32, k: u32, l: u32) -> Result<(u64, bool, String)> {
    let f = gf(p, m)?;
    let alpha = nonsquare(&f)?;
    let lb = (m - l % m) % m;
    let zp = zhou_pott(&f, &ZhouPottParams { k, l: lb, alpha: alpha.0 })?;
    let nf = new_family(&f, &NewFamilySpec { k, l, alpha: alpha.0, eta: f.neg(Fq::ONE).0 })?;
    let mm = m as usize;
    let swap = FpMatrix::from_fn(p, 2 * mm, 2 * mm, |r, c| u32::from(c == (r + mm) % (2 * mm)));
    let dm = FpMatrix::block_diag(&[&f.frob_matrix(f.frob_k(l as i64)), &FpMatrix::identity(p, mm)]);
    let sd = swap.mul(&dm);
    let t = IsotopismTriple { n1: FpMatrix::identity(p, 2 * mm), n2: sd.clone(), n3: sd.clone() };
    let iso = verify_isotopism(&nf, &zp, &t);
    let spread = nf.spread_set().same_set(&zp.spread_set().transform(&FpMatrix::identity(p, 2 * mm), &sd));
    Ok((nf.order(), iso && spread, format!("isotopism verified: {iso}; spread(S) = spread(ZP)·sD: {spread}")))
}

pub fn run_all() -> Vec<Check> {
    let mut v = transpose_suite();
    v.extend(table1_suite());
    v
}
