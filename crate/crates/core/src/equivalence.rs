//! Isotopy: brute-force spread-set equivalence at tiny orders, explicit isotopisms inside the
//! new family, the parameter-level classifier, centralizer counts and orbit counts.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::admissible::AdmissibleFamily;
use crate::construct::{construction1, construction2};
use crate::error::{consistency, param, Error, Result};
use crate::families::{new_family, new_family_check, new_family_d, NewFamilySpec};
use crate::fpmat::{next_vec, FpMatrix, FpVec};
use crate::gf::{gcd_u64, FieldCtx, Fq, Frob};
use crate::semifield::{verify_isotopism, IsotopismTriple, PreSemifield};

/// Orders searched without asking.
pub const FAST_SEARCH_LIMIT: u64 = 16;
/// Orders searched only with the slow flag.
pub const SLOW_SEARCH_LIMIT: u64 = 81;

// ---------------------------------------------------------------- parameters

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewFamilyParams {
    pub p: u32,
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub alpha: u32,
    pub eta: u32,
}

impl NewFamilyParams {
    pub fn spec(&self) -> NewFamilySpec {
        NewFamilySpec { k: self.k, l: self.l, alpha: self.alpha, eta: self.eta }
    }

    pub fn field(&self) -> Result<Arc<FieldCtx>> {
        Ok(Arc::new(FieldCtx::new(self.p, self.m)?))
    }

    pub fn from_spec(ctx: &FieldCtx, s: &NewFamilySpec) -> NewFamilyParams {
        NewFamilyParams { p: ctx.p(), m: ctx.m(), k: s.k, l: s.l, alpha: s.alpha, eta: s.eta }
    }

    pub fn build(&self, field: &Arc<FieldCtx>) -> Result<PreSemifield> {
        self.check_field(field)?;
        new_family(field, &self.spec())
    }

    fn check_field(&self, field: &FieldCtx) -> Result<()> {
        if field.p() != self.p || field.m() != self.m {
            return param("parameters belong to a different field");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub order: u64,
    /// Nuclei orders, sorted.
    pub nuclei: [u64; 3],
    /// `N_{L:K}(η)` for members of the new family.
    pub norm_class: Option<u32>,
    /// Index of α modulo the d-th powers, for members of the new family.
    pub alpha_coset: Option<u64>,
}

pub fn invariants(s: &PreSemifield) -> Result<InvariantRecord> {
    let nuclei = s.nuclei()?.sorted();
    let (mut norm_class, mut alpha_coset) = (None, None);
    if let (Some((f, 2)), "new-family") = (s.field(), s.provenance().construction.as_str()) {
        let spec: NewFamilySpec = serde_json::from_value(s.provenance().params.clone())?;
        norm_class = Some(f.norm(f.frob_k(spec.k as i64), Fq(spec.eta)).0);
        alpha_coset = Some(f.power_class_index(Fq(spec.alpha), new_family_d(f, spec.k, spec.l))?);
    }
    Ok(InvariantRecord { order: s.order(), nuclei, norm_class, alpha_coset })
}

// ---------------------------------------------------------------- matrices on L²

fn blocks(f: &FieldCtx, a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
    let _ = f;
    FpMatrix::block_diag(&[a, b])
}

fn frob2(f: &FieldCtx, r: Frob) -> FpMatrix {
    let m = f.frob_matrix(r);
    blocks(f, &m, &m)
}

fn mul2(f: &FieldCtx, a: Fq, b: Fq) -> FpMatrix {
    blocks(f, &f.mul_matrix(a), &f.mul_matrix(b))
}

/// `(x0, x1) -> (x1, x0)`.
fn swap2(f: &FieldCtx) -> FpMatrix {
    let m = f.m() as usize;
    FpMatrix::from_fn(f.p(), 2 * m, 2 * m, |r, c| u32::from(c == (r + m) % (2 * m)))
}

// ---------------------------------------------------------------- brute force

/// Searches for `A, B` with `A·C1·B = C2`; returns the isotopism triple, verified.
///
/// With `R0 ∈ C1` fixed, `A R0 B = S ∈ C2`, so `A (C1 R0^{-1}) A^{-1} = C2 S^{-1}`: for each S the
/// images of one element of `C1 R0^{-1}` are candidates, and A solves a linear intertwining system.
pub fn brute_force_isotopic(s1: &PreSemifield, s2: &PreSemifield, slow: bool) -> Result<Option<IsotopismTriple>> {
    if s1.p() != s2.p() || s1.n() != s2.n() {
        return param("isotopy needs presemifields of the same order");
    }
    let order = s1.order();
    if order > SLOW_SEARCH_LIMIT {
        return Err(Error::TooLarge(format!(
            "order {order} exceeds the search limit {SLOW_SEARCH_LIMIT}; compare invariants instead"
        )));
    }
    if order > FAST_SEARCH_LIMIT && !slow {
        return Err(Error::TooLarge(format!("order {order} needs the slow flag")));
    }
    let (p, n) = (s1.p(), s1.n());
    let c1 = s1.spread_set();
    let c2 = s2.spread_set();
    let r0 = &c1.basis()[0];
    let r0i = r0.inverse().ok_or_else(|| Error::Consistency("spread element is singular".into()))?;
    let c1n: Vec<FpMatrix> = c1.basis().iter().map(|b| b.mul(&r0i)).collect();
    let members2 = c2.members();
    let set2: HashSet<FpMatrix> = members2.iter().cloned().collect();

    let x1 = pick_probe(p, n, &c1n, &c1);
    let cdim = intertwiners(&x1, &x1).len();
    for s in members2.iter().filter(|m| !m.is_zero()) {
        let si = s.inverse().ok_or_else(|| Error::Consistency("spread element is singular".into()))?;
        for m in &members2 {
            let y1 = m.mul(&si);
            let ker = intertwiners(&x1, &y1);
            if ker.len() != cdim {
                continue;
            }
            let mut coef = vec![0u8; ker.len()];
            while next_vec(&mut coef, p) {
                let mut a = FpMatrix::zeros(p, n, n);
                for (v, &c) in ker.iter().zip(&coef) {
                    a.add_scaled_assign(v, c as u32);
                }
                let Some(ai) = a.inverse() else { continue };
                if c1n.iter().all(|b| set2.contains(&a.mul(b).mul(&ai).mul(s))) {
                    let b = r0i.mul(&ai).mul(s);
                    let t = triple_from_spread_map(s1, s2, &a, &b)?;
                    if !verify_isotopism(s1, s2, &t) {
                        return consistency("search witness failed the isotopism equation");
                    }
                    return Ok(Some(t));
                }
            }
        }
    }
    Ok(None)
}

/// A member of `C1 R0^{-1}` with the smallest centralizer, to keep the intertwiner spaces small.
fn pick_probe(p: u32, n: usize, c1n: &[FpMatrix], c1: &crate::spread::SpreadSet) -> FpMatrix {
    let r0i = c1.basis()[0].inverse().expect("spread element");
    let mut best: Option<(usize, FpMatrix)> = None;
    for m in c1.members() {
        let x = m.mul(&r0i);
        if x.is_zero() || is_scalar(&x) {
            continue;
        }
        let d = intertwiners(&x, &x).len();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, x));
        }
    }
    best.map(|b| b.1).unwrap_or_else(|| c1n.first().cloned().unwrap_or_else(|| FpMatrix::identity(p, n)))
}

fn is_scalar(m: &FpMatrix) -> bool {
    let c = m.get(0, 0) as u32;
    *m == FpMatrix::identity(m.p(), m.rows()).scale(c)
}

/// Basis of `{A : A X = Y A}`.
fn intertwiners(x: &FpMatrix, y: &FpMatrix) -> Vec<FpMatrix> {
    let (p, n) = (x.p(), x.rows());
    // unknown A[(r, c)] at index r*n + c; equation for entry (i, j) of A X − Y A
    let sys = FpMatrix::from_fn(p, n * n, n * n, |eq, var| {
        let (i, j) = (eq / n, eq % n);
        let (r, c) = (var / n, var % n);
        let mut v = 0u32;
        if r == i {
            v += x.get(c, j) as u32;
        }
        if c == j {
            v += p - y.get(i, r) as u32;
        }
        v % p
    });
    sys.kernel().into_iter().map(|k| FpMatrix::from_data(p, n, n, k)).collect()
}

/// The presemifield `x ∘' y = N1(N2^{-1} x ∘ N3^{-1} y)`, so that `t` is an isotopism onto it.
pub fn isotope(s: &PreSemifield, t: &IsotopismTriple) -> Result<PreSemifield> {
    let inv = |m: &FpMatrix| m.inverse().ok_or_else(|| Error::Parameter("isotopism maps must be invertible".into()));
    let (n2i, n3i) = (inv(&t.n2)?, inv(&t.n3)?);
    inv(&t.n1)?;
    let n = s.n();
    let mut consts = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let x = n2i.column(i);
        for j in 0..n {
            consts.extend(t.n1.apply(&s.mul(&x, &n3i.column(j))));
        }
    }
    let prov = s.provenance().clone().flag("isotope");
    PreSemifield::from_structure_constants(s.p(), n, consts, crate::semifield::Coords::Plain, prov)
}

/// Turns `C2 = A·C1·B` into `(N1, N2, N3) = (A, B^{-1}, y -> coordinates of A R1_y B)`.
pub fn triple_from_spread_map(
    s1: &PreSemifield,
    s2: &PreSemifield,
    a: &FpMatrix,
    b: &FpMatrix,
) -> Result<IsotopismTriple> {
    let c2 = s2.spread_set();
    let n = s1.n();
    let cols: Vec<FpVec> = s1
        .right_basis()
        .iter()
        .map(|r| c2.coords_of(&a.mul(r).mul(b)).ok_or_else(|| Error::Consistency("A·C1·B ⊄ C2".into())))
        .collect::<Result<_>>()?;
    let n3 = FpMatrix::from_columns(s1.p(), n, &cols);
    let n2 = b.inverse().ok_or_else(|| Error::Consistency("B is singular".into()))?;
    Ok(IsotopismTriple { n1: a.clone(), n2, n3 })
}

// ---------------------------------------------------------------- explicit isotopisms

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExplicitIsotopism {
    pub target: NewFamilyParams,
    pub triple: IsotopismTriple,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropIsotopies {
    /// `S_{σ,τ,α,η} -> S_{σ,τ̄,1/α,η^τ̄}`.
    pub swap: ExplicitIsotopism,
    /// `S_{σ,τ,α,η} -> S_{σ̄,τ,α η^(τ̄−1),1/η}`; needs η ≠ 0.
    pub invert: Option<ExplicitIsotopism>,
}

fn neg_exp(m: u32, k: u32) -> u32 {
    (m - k % m) % m
}

pub fn prop_isotopies(params: &NewFamilyParams) -> Result<PropIsotopies> {
    let field = params.field()?;
    let f = field.as_ref();
    let s1 = params.build(&field)?;
    let (alpha, eta) = (f.el(params.alpha), f.el(params.eta));
    let tau = f.frob_k(params.l as i64);
    let (tb, sigma) = (tau.inverse(), f.frob_k(params.k as i64));

    // swap x0 <-> x1 and y0 <-> y1, divide the first component by α, apply τ̄ to the second
    let target = NewFamilyParams {
        l: neg_exp(params.m, params.l),
        alpha: alpha.inv().fq().0,
        eta: eta.frob(tb).fq().0,
        ..*params
    };
    let n1 = blocks(f, &f.mul_matrix(alpha.inv().fq()), &f.frob_matrix(tb));
    let sw = swap2(f);
    let triple = IsotopismTriple { n1, n2: sw.clone(), n3: sw };
    let verified = verify_isotopism(&s1, &target.build(&field)?, &triple);
    let swap = ExplicitIsotopism { target, triple, verified };

    // σ̄ on x and y, multiply the first component by −1/η, apply σ to the second
    let invert = if eta.is_zero() {
        None
    } else {
        let target = NewFamilyParams {
            k: neg_exp(params.m, params.k),
            alpha: (alpha * eta.frob(tb) / eta).fq().0,
            eta: eta.inv().fq().0,
            ..*params
        };
        let n1 = blocks(f, &f.mul_matrix((-eta.inv()).fq()), &f.frob_matrix(sigma));
        let fs = frob2(f, sigma);
        let triple = IsotopismTriple { n1, n2: fs.clone(), n3: fs };
        let verified = verify_isotopism(&s1, &target.build(&field)?, &triple);
        Some(ExplicitIsotopism { target, triple, verified })
    };
    Ok(PropIsotopies { swap, invert })
}

/// An isotopism `S1 -> S2` of the shape used in the classifier proof: Frobenius ρ on every
/// coordinate, then diagonal multiplications. `None` when no such map exists.
pub fn diagonal_isotopism(p1: &NewFamilyParams, p2: &NewFamilyParams) -> Result<Option<IsotopismTriple>> {
    if p1.p != p2.p || p1.m != p2.m || p1.k != p2.k || p1.l != p2.l {
        return Ok(None);
    }
    let field = p1.field()?;
    let f = field.as_ref();
    let sigma = f.frob_k(p1.k as i64);
    let tau = f.frob_k(p1.l as i64);
    let kdeg = sigma.fixed_degree();
    let kstar: Vec<Fq> = f.nonzero().filter(|&x| f.in_subfield(x, kdeg)).collect();
    let s1 = p1.build(&field)?;
    let s2 = p2.build(&field)?;
    for r in 0..p1.m {
        let rho = f.frob_k(r as i64);
        let a = f.e(f.frob(rho, Fq(p1.alpha)));
        let h = f.e(f.frob(rho, Fq(p1.eta)));
        let (a2, h2) = (f.el(p2.alpha), f.el(p2.eta));
        let Some(w0) = (if h.is_zero() || h2.is_zero() {
            (h.is_zero() && h2.is_zero()).then(|| f.e(Fq::ONE))
        } else {
            // z^(σ−1) = (η/η2)^τ̄
            let nu = (h / h2).frob(tau.inverse());
            f.nonzero().map(|z| f.e(z)).find(|&z| z.frob(sigma) / z == nu)
        }) else {
            continue;
        };
        for &kappa in &kstar {
            let z = w0 * f.e(kappa);
            // w^(σ+1) = (α/α2) z^(τ−1)
            let target = a / a2 * z.frob(tau) / z;
            let Some(w) = f.nonzero().map(|w| f.e(w)).find(|&w| w.frob(sigma) * w == target) else {
                continue;
            };
            let (a3, d3, a2c, d2) = (w, f.e(Fq::ONE), z * w, z.frob(tau));
            let (a1, d1) = (d2 * d3.frob(sigma), (a2c).frob(tau) * d3);
            let fr = IsotopismTriple { n1: frob2(f, rho), n2: frob2(f, rho), n3: frob2(f, rho) };
            let dg = IsotopismTriple {
                n1: mul2(f, a1.fq(), d1.fq()),
                n2: mul2(f, a2c.fq(), d2.fq()),
                n3: mul2(f, a3.fq(), d3.fq()),
            };
            let t = fr.then(&dg);
            if !verify_isotopism(&s1, &s2, &t) {
                return consistency(format!("diagonal isotopism for ρ = Frob({r}) fails the isotopism equation"));
            }
            return Ok(Some(t));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------- classifier

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    pub params: NewFamilyParams,
    /// Names of the [`prop_isotopies`] steps applied.
    pub steps: Vec<String>,
}

/// Brings k and l below m/2 with [`prop_isotopies`], then checks the classifier hypotheses.
pub fn normalize(params: &NewFamilyParams) -> Result<Normalized> {
    let field = params.field()?;
    let f = field.as_ref();
    new_family_check(f, &params.spec())?;
    let mut q = *params;
    let mut steps = Vec::new();
    if 2 * q.k > q.m {
        if q.eta == 0 {
            return Err(Error::Inapplicable("k > m/2 with η = 0 cannot be normalized".into()));
        }
        let tb = f.frob_k(q.l as i64).inverse();
        let (a, h) = (f.el(q.alpha), f.el(q.eta));
        q = NewFamilyParams { k: neg_exp(q.m, q.k), alpha: (a * h.frob(tb) / h).fq().0, eta: h.inv().fq().0, ..q };
        steps.push("invert".into());
    }
    if 2 * q.l > q.m {
        let tb = f.frob_k(q.l as i64).inverse();
        let (a, h) = (f.el(q.alpha), f.el(q.eta));
        q = NewFamilyParams { l: neg_exp(q.m, q.l), alpha: a.inv().fq().0, eta: h.frob(tb).fq().0, ..q };
        steps.push("swap".into());
    }
    let why = if q.m <= 2 {
        Some("m > 2 is required".to_string())
    } else if (q.p, q.m) == (2, 6) {
        Some("(p, m) = (2, 6) has no p-primitive divisor".into())
    } else if q.k == 0 || q.l == 0 {
        Some("σ and τ must be nontrivial".into())
    } else if 2 * q.k == q.m {
        Some("σ² = id is the Dickson case".into())
    } else if 2 * q.l == q.m {
        Some("2l = m is excluded".into())
    } else if q.k == q.l {
        Some("k = l is excluded".into())
    } else {
        None
    };
    match why {
        Some(w) => Err(Error::Inapplicable(w)),
        None => Ok(Normalized { params: q, steps }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierVerdict {
    pub isotopic: bool,
    /// The exponent r of the first ρ = Frob(r) that works.
    pub rho: Option<u32>,
    pub normalized: [NewFamilyParams; 2],
    /// Set when either η is 0, which lies outside the counted family.
    pub eta_zero: bool,
}

/// Isotopic iff σ and τ agree and some ρ has `N(η1)^ρ = N(η2)` and `α1^ρ/α2 ∈ L^(σ+1)L^(τ−1)`.
pub fn new_family_isotopic(p1: &NewFamilyParams, p2: &NewFamilyParams) -> Result<ClassifierVerdict> {
    if (p1.p, p1.m) != (p2.p, p2.m) {
        return param("parameters live over different fields");
    }
    let n1 = normalize(p1)?.params;
    let n2 = normalize(p2)?.params;
    let eta_zero = n1.eta == 0 || n2.eta == 0;
    let verdict = |isotopic, rho| ClassifierVerdict { isotopic, rho, normalized: [n1, n2], eta_zero };
    if (n1.k, n1.l) != (n2.k, n2.l) {
        return Ok(verdict(false, None));
    }
    let f = FieldCtx::new(n1.p, n1.m)?;
    let sigma = f.frob_k(n1.k as i64);
    let d = new_family_d(&f, n1.k, n1.l);
    let (nu1, nu2) = (f.norm(sigma, Fq(n1.eta)), f.norm(sigma, Fq(n2.eta)));
    for r in 0..n1.m {
        let rho = f.frob_k(r as i64);
        if f.frob(rho, nu1) != nu2 {
            continue;
        }
        let q = f.div(f.frob(rho, Fq(n1.alpha)), Fq(n2.alpha))?;
        if f.power_class_index(q, d)? == 0 {
            return Ok(verdict(true, Some(r)));
        }
    }
    Ok(verdict(false, None))
}

// ---------------------------------------------------------------- counting

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub lower: f64,
    pub upper: u64,
    pub exact: u64,
    pub d: u64,
    pub k_size: u64,
}

/// Orbits of `ρ = Frob(r)` on (norm value in K∖{0,1}) × (nontrivial coset of the d-th powers).
pub fn new_family_count(p: u32, m: u32, k: u32, l: u32) -> Result<CountReport> {
    let probe = NewFamilyParams { p, m, k, l, alpha: 0, eta: 0 };
    let q = NewFamilyParams { k: k % m.max(1), l: l % m.max(1), ..probe };
    hypotheses(&q)?;
    if !crate::gf::is_prime(p as u64) {
        return param(format!("{p} is not prime"));
    }
    let qm1 = (p as u64)
        .checked_pow(m)
        .ok_or_else(|| Error::Parameter(format!("{p}^{m} does not fit in 64 bits")))?
        - 1;
    let kdeg = gcd_u64(k as u64, m as u64) as u32;
    let k_size = (p as u64).pow(kdeg);
    let d = crate::admissible::diag_power_index(p, m, k, l);
    // norm values as logs in K* = <g^c>, c = (q−1)/(|K|−1); ρ multiplies logs by p^r
    let c = qm1 / (k_size - 1);
    let klogs: Vec<u64> = (1..k_size - 1).map(|i| (i * c) % qm1).collect();
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut exact = 0u64;
    for &nl in &klogs {
        for i in 1..d {
            if seen.contains(&(nl, i)) {
                continue;
            }
            exact += 1;
            let (mut a, mut b) = (nl, i);
            for _ in 0..m {
                seen.insert((a, b));
                a = (a as u128 * p as u128 % qm1 as u128) as u64;
                b = (b * p as u64) % d;
            }
        }
    }
    let upper = (k_size - 2) * (d - 1);
    let lower = upper as f64 / m as f64;
    if (exact as f64) < lower || exact > upper {
        return consistency(format!("orbit count {exact} is outside [{lower}, {upper}]"));
    }
    Ok(CountReport { lower, upper, exact, d, k_size })
}

fn hypotheses(q: &NewFamilyParams) -> Result<()> {
    let bad = |w: &str| Err(Error::Inapplicable(w.into()));
    if q.m <= 2 {
        return bad("m > 2 is required");
    }
    if (q.p, q.m) == (2, 6) {
        return bad("(p, m) = (2, 6) has no p-primitive divisor");
    }
    if q.k == 0 || q.l == 0 || 2 * q.k >= q.m || 2 * q.l >= q.m {
        return bad("the count needs 1 ≤ k, l < m/2");
    }
    if q.k == q.l {
        return bad("k = l is excluded");
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerReport {
    pub enumerated: u64,
    pub formula: u64,
}

/// Counts `(a2, d2, a3, d3) ∈ (L*)^4` with `a2^σ a3 = a2 a3^σ`, `d2^σ d3 = d2 d3^σ`,
/// `a2 a3^σ = d2 d3^σ` and `a2^τ d3 = d2 a3^τ`.
pub fn centralizer_count(p: u32, m: u32, k: u32, l: u32) -> Result<CentralizerReport> {
    let f = FieldCtx::new(p, m)?;
    let (s, t) = (f.frob_k(k as i64), f.frob_k(l as i64));
    if s == t || s == t.inverse() {
        return param("σ ∉ {τ, τ̄} is required");
    }
    if s.compose(s).is_identity() {
        return param("σ² ≠ id is required");
    }
    let sb = s.inverse();
    let kstar: Vec<Fq> = f.nonzero().filter(|&x| f.in_subfield(x, s.fixed_degree())).collect();
    let mut count = 0u64;
    for a2 in f.nonzero() {
        for &z in &kstar {
            let a3 = f.mul(a2, z);
            debug_assert_eq!(f.mul(f.frob(s, a2), a3), f.mul(a2, f.frob(s, a3)));
            let lhs = f.mul(a2, f.frob(s, a3));
            let a2t = f.frob(t, a2);
            let a3t = f.frob(t, a3);
            for d2 in f.nonzero() {
                let d3 = f.frob(sb, f.div(lhs, d2)?);
                if f.mul(f.frob(s, d2), d3) != f.mul(d2, f.frob(s, d3)) {
                    continue;
                }
                if f.mul(a2t, d3) == f.mul(d2, a3t) {
                    count += 1;
                }
            }
        }
    }
    let qm1 = f.order() - 1;
    let g = gcd_u64((p as u64).pow(k) + 1, qm1);
    let formula = qm1 * g * ((p as u64).pow(gcd_u64(k as u64, m as u64) as u32) - 1);
    if count != formula {
        return consistency(format!("centralizer enumeration gives {count}, the formula {formula}"));
    }
    Ok(CentralizerReport { enumerated: count, formula })
}

/// The new family meets the Zhou–Pott family exactly when `N_{L:K}(η) = −1`.
pub fn zhou_pott_member(params: &NewFamilyParams) -> Result<bool> {
    let f = FieldCtx::new(params.p, params.m)?;
    new_family_check(&f, &params.spec())?;
    if params.p == 2 {
        // −1 = 1 is excluded by the η condition
        return Ok(false);
    }
    Ok(f.norm(f.frob_k(params.k as i64), Fq(params.eta)) == f.neg(Fq::ONE))
}

// ---------------------------------------------------------------- σ² = id

#[derive(Clone, Debug)]
pub struct HalbecaseResult {
    pub source: PreSemifield,
    pub target: PreSemifield,
    pub triple: IsotopismTriple,
    /// The printed script: `diag(P^{-1}, P^{-1})` on the product, `y0 -> P(y0)`, `y1 -> −y1`.
    pub script_verified: bool,
    /// Whether the target uses the source's admissible mapping.
    pub same_mapping: bool,
    /// How the returned triple was obtained: `script` or `search`.
    pub method: String,
}

/// `P(y) = y^σ − η y` as an F_p-matrix on L.
pub fn halbe_p(f: &FieldCtx, sigma: Frob, eta: Fq) -> FpMatrix {
    f.frob_matrix(sigma).sub(&f.mul_matrix(eta))
}

/// Construction 1 with Diag(σ, τ, α), σ² = id, against Construction 2.
///
/// The printed script only works for σ = id, since `P^{-1}` does not pass through the products
/// `P(c) x1^σ`. Otherwise the search tries the same mapping first, then every Diag(σ, τ', α').
pub fn halbecase_isotopism(field: &Arc<FieldCtx>, k: u32, l: u32, alpha: Fq, eta: Fq) -> Result<HalbecaseResult> {
    let f = field.as_ref();
    let sigma = f.frob_k(k as i64);
    if !sigma.compose(sigma).is_identity() {
        return param("σ² = id is required");
    }
    if f.norm(sigma, eta) == Fq::ONE {
        return param("η must satisfy N_{L:K}(η) ≠ 1");
    }
    let pm = halbe_p(f, sigma, eta);
    let pinv = pm
        .inverse()
        .ok_or_else(|| Error::Consistency("P(y) = y^σ − ηy has a kernel although N(η) ≠ 1".into()))?;
    let fam = AdmissibleFamily::diag(f, sigma, f.frob_k(l as i64), alpha)?;
    let source = construction1(field, &fam, eta)?;
    let target = construction2(field, &fam)?;
    let m = f.m() as usize;
    let minus = FpMatrix::identity(f.p(), m).scale(f.p() - 1);
    let script = IsotopismTriple {
        n1: blocks(f, &pinv, &pinv),
        n2: FpMatrix::identity(f.p(), 2 * m),
        n3: blocks(f, &pinv, &minus),
    };
    let script_verified = verify_isotopism(&source, &target, &script);
    let found = |target: PreSemifield, triple, same_mapping| HalbecaseResult {
        source: source.clone(),
        target,
        triple,
        script_verified,
        same_mapping,
        method: if script_verified { "script" } else { "search" }.into(),
    };
    if script_verified {
        return Ok(found(target, script, true));
    }
    if let Some(t) = brute_force_isotopic(&source, &target, true)? {
        return Ok(found(target, t, true));
    }
    for l2 in 0..f.m() {
        for a2 in f.nonzero() {
            let Ok(fam2) = AdmissibleFamily::diag(f, sigma, f.frob_k(l2 as i64), a2) else { continue };
            let Ok(c2) = construction2(field, &fam2) else { continue };
            if let Some(t) = brute_force_isotopic(&source, &c2, true)? {
                return Ok(found(c2, t, false));
            }
        }
    }
    consistency("no Construction 2 semifield with a diagonal mapping is isotopic")
}

/// Distinct nuclei multisets prove non-isotopy.
pub fn invariants_differ(a: &InvariantRecord, b: &InvariantRecord) -> bool {
    a.order != b.order || a.nuclei != b.nuclei
}

/// All parameter tuples of the new family over one field with fixed (k, l), up to `limit` each of α and η.
pub fn sample_params(f: &FieldCtx, k: u32, l: u32, limit: usize) -> Vec<NewFamilyParams> {
    let d = new_family_d(f, k, l);
    let sigma = f.frob_k(k as i64);
    let alphas: Vec<Fq> = f.nonzero().filter(|&a| f.power_class_index(a, d).map(|i| i != 0).unwrap_or(false)).collect();
    let mut classes = BTreeSet::new();
    let etas: Vec<Fq> = f
        .nonzero()
        .filter(|&e| {
            let nv = f.norm(sigma, e);
            nv != Fq::ONE && classes.insert(nv.0)
        })
        .collect();
    let mut out = Vec::new();
    for &a in alphas.iter().take(limit) {
        for &e in etas.iter().take(limit) {
            out.push(NewFamilyParams { p: f.p(), m: f.m(), k, l, alpha: a.0, eta: e.0 });
        }
    }
    out
}
