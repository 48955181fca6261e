//! The eleven acceptance properties. Each prints one PASS or FAIL line; the run fails when the
//! set of failing properties differs from the documented one.

mod oracle;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use oracle::Mat;
use semifield::admissible::AdmissibleFamily;
use semifield::construct::{construction1, construction2, criterion_verdict, twisted_cyclic};
use semifield::equivalence::{
    brute_force_isotopic, centralizer_count, halbecase_isotopism, new_family_count, prop_isotopies, NewFamilyParams,
};
use semifield::families::*;
use semifield::semilinear::{is_irreducible_criterion, projective_polynomial_root, SemilinearMap, SemilinearMapN};
use semifield::{FieldCtx, Fq, Frob, IsotopismTriple, PreSemifield};

/// Properties that cannot hold as stated; the reasons are printed with the FAIL line.
const EXPECTED_FAILURES: &[usize] = &[8];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn gf(p: u32, m: u32) -> Arc<FieldCtx> {
    Arc::new(FieldCtx::new(p, m).expect("field"))
}

fn nonsquare(f: &FieldCtx) -> Fq {
    f.nonzero().find(|&a| f.pow(a, (f.order() - 1) / 2) != Fq::ONE).expect("odd characteristic")
}

/// Smallest α outside the d-th powers.
fn non_power(f: &FieldCtx, d: u64) -> Fq {
    f.nonzero().find(|&a| f.pow(a, (f.order() - 1) / d) != Fq::ONE).expect("d > 1")
}

fn triple_ok(s1: &PreSemifield, s2: &PreSemifield, t: &IsotopismTriple) -> bool {
    oracle::is_isotopism(s1, s2, &oracle::mat_of(&t.n1), &oracle::mat_of(&t.n2), &oracle::mat_of(&t.n3))
}

fn witness_ok(s1: &PreSemifield, s2: &PreSemifield, slow: bool) -> bool {
    matches!(brute_force_isotopic(s1, s2, slow), Ok(Some(t)) if triple_ok(s1, s2, &t))
}

// ---------------------------------------------------------------- 1

fn sweep_families(ctx: &FieldCtx) -> Vec<AdmissibleFamily> {
    let m = ctx.m() as i64;
    let mut v = Vec::new();
    for k in 0..m {
        let s = ctx.frob_k(k);
        for l in 0..m {
            for a in ctx.elements() {
                v.push(AdmissibleFamily::diag(ctx, s, ctx.frob_k(l), a).expect("element"));
            }
        }
        for a in ctx.elements() {
            for b in ctx.elements() {
                v.push(AdmissibleFamily::triang(ctx, s, a, b).expect("element"));
                let m = [Fq::ZERO, a, Fq::ONE, b];
                if !a.is_zero() && oracle::irreducible(ctx, &m, s, 2) {
                    let t = SemilinearMap::companion(ctx, a, b, s).expect("companion");
                    v.push(AdmissibleFamily::trivial(ctx, t).expect("irreducible companion"));
                }
            }
        }
    }
    v
}

fn construction_soundness() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, m) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
        let f = gf(p, m);
        let ctx = f.as_ref();
        let (mut fams, mut built, mut bad, mut disagree) = (0, 0, 0, 0);
        for fam in sweep_families(ctx) {
            let adm = ctx.nonzero().all(|a| {
                let mat = fam.matrix_at(ctx, a);
                oracle::irreducible(ctx, &mat, fam.sigma(), 2) && !oracle::det(ctx, &mat, 2).is_zero()
            });
            if fam.is_admissible(ctx).map(|r| r.admissible).unwrap_or(!adm) != adm {
                disagree += 1;
            }
            if !adm {
                continue;
            }
            fams += 1;
            let mut outs = vec![construction2(&f, &fam)];
            // every η up to GF(16); a fixed prefix of the legal η at GF(27) keeps the run short
            let cap = if ctx.order() > 16 { 6 } else { usize::MAX };
            for eta in ctx.elements().filter(|&e| oracle::norm(ctx, fam.sigma(), e) != Fq::ONE).take(cap) {
                outs.push(construction1(&f, &fam, eta));
            }
            for s in outs {
                built += 1;
                if !s.is_ok_and(|s| oracle::no_zero_divisors(&s)) {
                    bad += 1;
                }
            }
        }
        ok &= bad == 0 && disagree == 0 && fams > 0;
        parts.push(format!("GF({}): {fams} families, {built} semifields, {bad} bad, {disagree} verdict mismatches", ctx.order()));
    }
    outcome(ok, parts.join("; "))
}

// ---------------------------------------------------------------- 2

fn irreducibility() -> Outcome {
    let (mut total, mut agree) = (0, 0);
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
        let f = FieldCtx::new(p, m).expect("field");
        for k in 0..m {
            let s = f.frob_k(k as i64);
            for a in f.nonzero() {
                for b in f.elements() {
                    let t = SemilinearMap::companion(&f, a, b, s).expect("companion");
                    let want = oracle::irreducible(&f, &[Fq::ZERO, a, Fq::ONE, b], s, 2);
                    let crit = is_irreducible_criterion(&f, &t).expect("criterion");
                    let rootless = projective_polynomial_root(&f, s, a, b).is_none();
                    total += 1;
                    agree += usize::from(crit == want && rootless == want);
                }
            }
        }
    }
    outcome(total == agree, format!("{agree}/{total} companion maps over all fields of order ≤ 16 and all σ"))
}

// ---------------------------------------------------------------- 3

fn companions(f: &FieldCtx, d: usize, s: Frob) -> Vec<Vec<Fq>> {
    let q = f.order() as u32;
    let mut out = Vec::new();
    for mut idx in 0..q.pow(d as u32) {
        let col: Vec<Fq> = (0..d)
            .map(|_| {
                let x = Fq(idx % q);
                idx /= q;
                x
            })
            .collect();
        if col[0].is_zero() {
            continue;
        }
        let mut mat = vec![Fq::ZERO; d * d];
        for i in 1..d {
            mat[i * d + i - 1] = Fq::ONE;
        }
        for (i, &c) in col.iter().enumerate() {
            mat[i * d + d - 1] = c;
        }
        if oracle::irreducible(f, &mat, s, d) {
            out.push(mat);
        }
    }
    out
}

fn nonsingularity() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, m, d) in [(2u32, 2u32, 2usize), (2, 2, 3), (3, 2, 2), (2, 3, 2)] {
        let f = FieldCtx::new(p, m).expect("field");
        let q = f.order() as u32;
        let n = m as usize * d;
        let (mut maps, mut tuples, mut pairs, mut pair_agree, mut unsound, mut lone) = (0, 0, 0, 0, 0, 0);
        for k in 0..m {
            let s = f.frob_k(k as i64);
            for mat in companions(&f, d, s) {
                maps += 1;
                let powers = oracle::power_table(&f, &mat, s, d);
                let t = SemilinearMapN::new(&f, d, mat.clone(), s).expect("map");
                // pair-level verdict: nonsingular for every y with the given (y_0, y_d)
                let mut all: HashMap<(u32, u32), bool> = HashMap::new();
                for mut idx in 1..q.pow(d as u32 + 1) {
                    let y: Vec<Fq> = (0..=d)
                        .map(|_| {
                            let x = Fq(idx % q);
                            idx /= q;
                            x
                        })
                        .collect();
                    let nonsingular = oracle::f_y_rank(&f, &powers, &y) == n;
                    tuples += 1;
                    let crit = criterion_verdict(&f, &t, y[0], y[d]);
                    if crit && !nonsingular {
                        unsound += 1;
                    }
                    if !crit && nonsingular {
                        lone += 1;
                    }
                    *all.entry((y[0].0, y[d].0)).or_insert(true) &= nonsingular;
                }
                for (&(y0, yd), &v) in &all {
                    pairs += 1;
                    pair_agree += usize::from(criterion_verdict(&f, &t, Fq(y0), Fq(yd)) == v);
                }
            }
        }
        ok &= unsound == 0 && pairs == pair_agree && maps > 0;
        parts.push(format!(
            "({p},{m},{d}): {maps} maps, {tuples} tuples, {unsound} unsound, {pair_agree}/{pairs} (y0, yd) classes agree, {lone} singular-class tuples nonsingular"
        ));
    }
    outcome(ok, parts.join("; "))
}

// ---------------------------------------------------------------- 4

fn lib_nuclei(s: &PreSemifield) -> (u64, u64, u64) {
    let n = s.nuclei().expect("nuclei");
    (n.left, n.middle, n.right)
}

fn nuclei_formula() -> Outcome {
    let f = gf(3, 4);
    let s = f.frob_k(1);
    let d = oracle::gcd128(oracle::gcd128(3 + 1, 9 - 1), 80) as u64;
    let alphas: Vec<Fq> = f.nonzero().filter(|&a| f.pow(a, 80 / d) != Fq::ONE).take(2).collect();
    let etas: Vec<Fq> = f.nonzero().filter(|&e| oracle::norm(&f, s, e) == Fq(2)).take(2).collect();
    let mut ok = !alphas.is_empty() && !etas.is_empty();
    let mut seen = Vec::new();
    for &a in &alphas {
        for &e in &etas {
            let nf = new_family(&f, &NewFamilySpec { k: 1, l: 2, alpha: a.0, eta: e.0 }).expect("new family");
            let got = oracle::nuclei(&nf);
            ok &= got == (3, 9, 3) && lib_nuclei(&nf) == got;
            seen.push(got);
        }
    }
    let f2 = gf(2, 4);
    let a = non_power(&f2, oracle::gcd128(oracle::gcd128(3, 3), 15) as u64);
    let z = new_family(&f2, &NewFamilySpec { k: 1, l: 2, alpha: a.0, eta: 0 }).expect("η = 0 member");
    let got = oracle::nuclei(&z);
    ok &= lib_nuclei(&z) == got;
    outcome(
        ok,
        format!(
            "(3,4,1,2), N(η) = 2: {seen:?}, expected (3, 9, 3); (2,4,1,2), η = 0 (outside the family's hypotheses): {got:?} against the formula (2, 4, 2)"
        ),
    )
}

// ---------------------------------------------------------------- 5

fn transpose_matches(s: &PreSemifield, printed: &PreSemifield) -> bool {
    let want = oracle::transpose_basis(s);
    oracle::same_span(&want, &oracle::right_basis(printed))
        && oracle::same_span(&want, &oracle::right_basis(&s.transpose().expect("transpose")))
}

fn legal_eta(f: &FieldCtx, s: Frob) -> Fq {
    f.nonzero().find(|&e| !is_sigma_minus_one_power(f, s, e)).expect("legal η")
}

fn transpose_oracle() -> Outcome {
    let mut parts = Vec::new();
    let f9 = gf(3, 2);
    let s9 = f9.frob_k(1);
    let dp = DicksonParams { k: 1, l: 1, r: 1, alpha: nonsquare(&f9).0 };
    let ok_d = transpose_matches(&dickson(&f9, &dp).unwrap(), &dickson_transpose(&f9, &dp).unwrap());
    parts.push(format!("Dickson 81: {ok_d}"));
    let mut ok_b = true;
    for (f, beta) in [(gf(2, 2), 0u32), (f9.clone(), 0), (f9.clone(), 1)] {
        let s = f.frob_k(1);
        let a = f.nonzero().find(|&a| projective_polynomial_root(&f, s, a, Fq(beta)).is_none()).unwrap();
        let eta = if f.p() == 2 { Fq::ZERO } else { legal_eta(&f, s) };
        let q = BierbrauerParams { k: 1, alpha: a.0, beta, eta: eta.0 };
        let r = transpose_matches(&bierbrauer(&f, &q).unwrap(), &bierbrauer_transpose(&f, &q).unwrap());
        parts.push(format!("Bierbrauer {} β = {beta}: {r}", f.order().pow(2)));
        ok_b &= r;
    }
    let f27 = gf(3, 3);
    let zq = ZhouPottParams { k: 1, l: 0, alpha: nonsquare(&f27).0 };
    let ok_z = transpose_matches(&zhou_pott(&f27, &zq).unwrap(), &zhou_pott_transpose(&f27, &zq).unwrap());
    parts.push(format!("Zhou–Pott 729: {ok_z}"));
    let (a, b) = f9
        .nonzero()
        .flat_map(|a| f9.nonzero().map(move |b| (a, b)))
        .find(|&(a, b)| projective_polynomial_root(&f9, s9, a, b).is_none())
        .unwrap();
    let tq = TaniguchiParams { k: 1, alpha: a.0, beta: b.0, eta: legal_eta(&f9, s9).0 };
    let st = taniguchi_transpose_steps(&f9, &tq).unwrap();
    let ok_t = transpose_matches(&st.adjusted, &st.transpose_formula) && oracle::same_spread(&st.transpose_formula, &st.construction);
    parts.push(format!("Taniguchi chain 81: {ok_t}"));
    outcome(ok_d && ok_b && ok_z && ok_t, parts.join("; "))
}

// ---------------------------------------------------------------- 6

fn swap_blocks(p: u32, m: usize) -> Mat {
    let n = 2 * m;
    let mut s = Mat::zero(p, n, n);
    for r in 0..n {
        s.d[r * n + (r + m) % n] = 1;
    }
    s
}

fn correspondences() -> Outcome {
    let mut parts = Vec::new();
    let f4 = gf(2, 2);
    let s4 = f4.frob_k(1);
    let (a, b) = f4
        .nonzero()
        .flat_map(|a| f4.elements().map(move |b| (a, b)))
        .find(|&(a, b)| projective_polynomial_root(&f4, s4, a, b).is_none())
        .unwrap();
    let kp = KnuthParams { k: 1, alpha: a.0, beta: b.0 };
    let k2 = knuth(&f4, 2, &kp).unwrap();
    let t = SemilinearMap::companion(&f4, a, b, s4).unwrap();
    let tc = twisted_cyclic(&f4, &t.to_general(), f4.frob_k(0), Fq::ZERO).unwrap();
    let ok_k2 = witness_ok(&k2, &tc, false);
    parts.push(format!("Knuth II ~ twisted cyclic (16): {ok_k2}"));
    let k1 = knuth(&f4, 1, &kp).unwrap();
    let c1 = construction1(&f4, &AdmissibleFamily::triang(&f4, s4, a, b).unwrap(), Fq::ZERO).unwrap();
    let ok_k1 = witness_ok(&k1, &c1, false);
    parts.push(format!("Knuth I ~ C1 + Triang (16): {ok_k1}"));

    let f27 = gf(3, 3);
    let alpha = nonsquare(&f27);
    let zq = ZhouPottParams { k: 1, l: 0, alpha: alpha.0 };
    let zt = zhou_pott_transpose(&f27, &zq).unwrap();
    let ok_zc = oracle::same_spread(&zt, &zhou_pott_as_construction1(&f27, &zq).unwrap());
    // S_{σ,τ,α,−1}(x, y) = ZP(sDx, sDy), D = diag(τ, 1), here τ = id
    let nf = new_family(&f27, &NewFamilySpec { k: 1, l: 0, alpha: alpha.0, eta: f27.neg(Fq::ONE).0 }).unwrap();
    let zp = zhou_pott(&f27, &zq).unwrap();
    let sd = swap_blocks(3, 3);
    let ok_zn = oracle::is_isotopism(&nf, &zp, &Mat::identity(3, 6), &sd, &sd);
    let zn_spread = oracle::same_span(&oracle::right_basis(&nf), &oracle::transform(&oracle::right_basis(&zp), &Mat::identity(3, 6), &sd));
    parts.push(format!("Zhou–Pott transpose = C1 (729): {ok_zc}; new family η = −1 ~ Zhou–Pott (729): {}", ok_zn && zn_spread));

    let f9 = gf(3, 2);
    let s = f9.frob_k(1);
    let sb = s.inverse();
    let a9 = nonsquare(&f9);
    let dt = dickson_transpose(&f9, &DicksonParams { k: 1, l: 1, r: 1, alpha: a9.0 }).unwrap();
    let c2 = construction2(&f9, &AdmissibleFamily::diag(&f9, sb, s, f9.frob(sb.compose(sb), a9)).unwrap()).unwrap();
    let dm = Mat::block_diag(&[&Mat::identity(3, 2), &oracle::mul_map(&f9, f9.frob(sb, a9))]);
    let want = oracle::transform(&oracle::right_basis(&dt), &dm.inverse().unwrap(), &dm);
    let ok_dc = oracle::same_span(&oracle::right_basis(&c2), &want);
    parts.push(format!("Dickson transpose ~ C2 + Diag (81): {ok_dc}"));
    outcome(ok_k2 && ok_k1 && ok_zc && ok_zn && zn_spread && ok_dc, parts.join("; "))
}

// ---------------------------------------------------------------- 7

fn centralizer_enumeration(p: u32, m: u32, k: u32, l: u32) -> u64 {
    let f = FieldCtx::new(p, m).unwrap();
    let (s, t) = (f.frob_k(k as i64), f.frob_k(l as i64));
    let pairs: Vec<(Fq, Fq)> = f
        .nonzero()
        .flat_map(|a| f.nonzero().map(move |b| (a, b)))
        .filter(|&(a2, a3)| f.mul(f.frob(s, a2), a3) == f.mul(a2, f.frob(s, a3)))
        .collect();
    let mut n = 0;
    for &(a2, a3) in &pairs {
        for &(d2, d3) in &pairs {
            let c1 = f.mul(a2, f.frob(s, a3)) == f.mul(d2, f.frob(s, d3));
            let c2 = f.mul(f.frob(t, a2), d3) == f.mul(d2, f.frob(t, a3));
            n += u64::from(c1 && c2);
        }
    }
    n
}

fn centralizer() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, m, k, l, expected) in [(2u32, 5u32, 1u32, 2u32, 31u64), (3, 4, 1, 2, 640)] {
        let q = (p as u64).pow(m);
        let g = oracle::gcd((p as u64).pow(k) + 1, q - 1);
        let formula = (q - 1) * g * ((p as u64).pow(oracle::gcd(k as u64, m as u64) as u32) - 1);
        let enumerated = centralizer_enumeration(p, m, k, l);
        let lib = centralizer_count(p, m, k, l).map(|r| (r.enumerated, r.formula));
        ok &= enumerated == formula && formula == expected && lib.as_ref().ok() == Some(&(expected, expected));
        parts.push(format!("({p},{m},{k},{l}): enumerated {enumerated}, formula {formula}"));
    }
    outcome(ok, parts.join("; "))
}

// ---------------------------------------------------------------- 8

fn new_family_samples(f: &FieldCtx, k: u32, l: u32, limit: usize) -> Vec<NewFamilyParams> {
    let d = oracle::gcd128(
        oracle::gcd128((f.p() as u128).pow(k) + 1, (f.p() as u128).pow(l) - 1),
        f.order() as u128 - 1,
    ) as u64;
    let s = f.frob_k(k as i64);
    let alphas: Vec<Fq> = f.nonzero().filter(|&a| d > 1 && f.pow(a, (f.order() - 1) / d) != Fq::ONE).take(limit).collect();
    let etas: Vec<Fq> = f.nonzero().filter(|&e| oracle::norm(f, s, e) != Fq::ONE).take(limit).collect();
    alphas
        .iter()
        .flat_map(|a| etas.iter().map(move |e| NewFamilyParams { p: f.p(), m: f.m(), k, l, alpha: a.0, eta: e.0 }))
        .collect()
}

fn explicit_isotopisms() -> Outcome {
    let mut parts = Vec::new();
    let (mut prop_total, mut prop_ok) = (0, 0);
    for (p, m, kls) in [(3u32, 2u32, vec![(1u32, 0u32), (1, 1)]), (3, 4, vec![(1, 2), (3, 2), (1, 3)])] {
        let f = gf(p, m);
        for (k, l) in kls {
            for q in new_family_samples(&f, k, l, 2) {
                let r = prop_isotopies(&q).expect("explicit isotopisms");
                let src = q.build(&f).unwrap();
                let mut one = |t: &semifield::equivalence::ExplicitIsotopism| {
                    prop_total += 1;
                    let tgt = t.target.build(&t.target.field().unwrap()).unwrap();
                    prop_ok += usize::from(t.verified && triple_ok(&src, &tgt, &t.triple));
                };
                one(&r.swap);
                if let Some(i) = &r.invert {
                    one(i);
                }
            }
        }
    }
    parts.push(format!("swap/invert: {prop_ok}/{prop_total} triples verify at 81 and 6561"));

    // σ² = id: Construction 1 against Construction 2 with the same Diag mapping
    let (mut h_total, mut h_same, mut h_script) = (0, 0, 0);
    let mut notes = Vec::new();
    for (p, m, k, l) in [(3u32, 2u32, 0u32, 1u32), (3, 2, 1, 0), (3, 2, 1, 1), (3, 4, 0, 1), (3, 4, 2, 1)] {
        let f = gf(p, m);
        let sigma = f.frob_k(k as i64);
        let tau = f.frob_k(l as i64);
        let alpha = f
            .nonzero()
            .find(|&a| AdmissibleFamily::diag(&f, sigma, tau, a).unwrap().is_admissible(&f).is_ok_and(|r| r.admissible))
            .expect("admissible α");
        let etas: Vec<Fq> = f.elements().filter(|&e| oracle::norm(&f, sigma, e) != Fq::ONE).take(5).collect();
        for eta in etas {
            h_total += 1;
            let fam = AdmissibleFamily::diag(&f, sigma, tau, alpha).unwrap();
            let c1 = construction1(&f, &fam, eta).unwrap();
            let c2 = construction2(&f, &fam).unwrap();
            match halbecase_isotopism(&f, k, l, alpha, eta) {
                Ok(r) => {
                    let verified = triple_ok(&r.source, &r.target, &r.triple);
                    h_script += usize::from(r.script_verified);
                    if r.same_mapping && verified {
                        h_same += 1;
                    } else if !r.same_mapping {
                        let (n1, n2) = (oracle::nuclei(&c1), oracle::nuclei(&c2));
                        notes.push(format!("order {}, k = {k}, l = {l}, η = {}: C1 nuclei {n1:?}, C2 nuclei {n2:?}", f.order().pow(2), eta.0));
                    }
                }
                Err(e) if f.order() <= 9 => {
                    let (n1, n2) = (oracle::nuclei(&c1), oracle::nuclei(&c2));
                    notes.push(format!("order 81, k = {k}, l = {l}, η = {}: {e}; C1 nuclei {n1:?}, C2 nuclei {n2:?}", eta.0));
                }
                Err(e) => notes.push(format!("order {}, k = {k}, l = {l}, η = {}: {e}", f.order().pow(2), eta.0)),
            }
        }
    }
    parts.push(format!(
        "σ² = id: {h_same}/{h_total} C1 → C2 triples verify, the printed script in {h_script}; {}",
        notes.join("; ")
    ));
    outcome(prop_ok == prop_total && prop_total > 0 && h_same == h_total, parts.join("; "))
}

// ---------------------------------------------------------------- 9

/// Burnside count of Frob(r)-orbits on (ν ∈ K∖{0,1}) × (i ∈ 1..d−1), i ↦ i p^r mod d.
fn burnside(p: u64, m: u32, kdeg: u32, d: u128) -> u64 {
    let mut fixed = 0u128;
    for r in 0..m {
        let nu = (p as u128).pow(oracle::gcd(r as u64, kdeg as u64) as u32) - 2;
        let cos = oracle::gcd128((p as u128).pow(r) - 1, d) - 1;
        fixed += nu * cos;
    }
    assert_eq!(fixed % m as u128, 0);
    (fixed / m as u128) as u64
}

fn counting() -> Outcome {
    let (mut n, mut ok) = (0, true);
    let mut specific = HashMap::new();
    for p in [2u64, 3, 5] {
        for m in 3..=12u32 {
            if (p, m) == (2, 6) {
                continue;
            }
            for k in 1..m {
                for l in 1..m {
                    if 2 * k >= m || 2 * l >= m || k == l {
                        continue;
                    }
                    let kdeg = oracle::gcd(k as u64, m as u64) as u32;
                    let ks = p.pow(kdeg) as f64;
                    let d = oracle::gcd128(oracle::gcd128((p as u128).pow(k) + 1, (p as u128).pow(l) - 1), (p as u128).pow(m) - 1);
                    let exact = burnside(p, m, kdeg, d);
                    let upper = (ks - 2.0) * (d as f64 - 1.0);
                    let lower = upper / m as f64;
                    let lib = new_family_count(p as u32, m, k, l);
                    ok &= (exact as f64) >= lower && (exact as f64) <= upper && lib.is_ok_and(|c| c.exact == exact && c.upper as f64 == upper);
                    n += 1;
                    if [(3, 5, 1, 2), (5, 5, 1, 2), (3, 10, 1, 2)].contains(&(p, m, k, l)) {
                        specific.insert((p, m), exact);
                    }
                }
            }
        }
    }
    let specific: Vec<u64> = [(3, 5), (5, 5), (3, 10)].iter().map(|k| specific.get(k).copied().unwrap_or(0)).collect();
    ok &= specific == [1, 3, 2];
    outcome(ok, format!("{n} parameter sets within bounds; (3,5,1,2), (5,5,1,2), (3,10,1,2) give {specific:?}"))
}

// ---------------------------------------------------------------- 10

/// First member of a family built from a grid of integer parameters over the given fields,
/// preferring one that is not isotopic to a field.
fn first_member(name: &str, fields: &[(u32, u32)]) -> Option<PreSemifield> {
    let mut fallback = None;
    let schema = schema(name).ok()?;
    let props: Vec<String> = schema["required"].as_array()?.iter().map(|v| v.as_str().unwrap().to_string()).collect();
    for &(p, m) in fields {
        let f = gf(p, m);
        let q = f.order() as u32;
        let range = |key: &str| -> u32 {
            match key {
                "k" | "l" | "r" => m,
                "beta" if name == "bierbrauer" => 2,
                _ => q,
            }
        };
        let sizes: Vec<u32> = props.iter().map(|k| range(k)).collect();
        let total: u64 = sizes.iter().map(|&s| s as u64).product();
        for mut idx in 0..total {
            let mut obj = serde_json::Map::new();
            for (key, &size) in props.iter().zip(&sizes) {
                obj.insert(key.clone(), (idx % size as u64).into());
                idx /= size as u64;
            }
            let Ok(req) = request(name, serde_json::Value::Object(obj)) else { continue };
            if let Ok(s) = build_family(&f, &req) {
                if !oracle::no_zero_divisors(&s) {
                    continue;
                }
                let q = s.order();
                if oracle::nuclei(&s) != (q, q, q) || name == "field" {
                    return Some(s);
                }
                fallback.get_or_insert(s);
            }
        }
    }
    fallback
}

fn representatives() -> Vec<(String, Option<PreSemifield>)> {
    let small = [(2, 2), (3, 2), (2, 4)];
    let mut v: Vec<(String, Option<PreSemifield>)> = Vec::new();
    for name in FAMILY_NAMES {
        let s = match *name {
            "c1" | "c2" => {
                let f = gf(3, 2);
                let s = f.frob_k(1);
                let fam = AdmissibleFamily::diag(&f, s, f.frob_k(0), non_power(&f, 4)).unwrap();
                if *name == "c1" { construction1(&f, &fam, legal_eta(&f, s)).ok() } else { construction2(&f, &fam).ok() }
            }
            "twisted-cyclic" => {
                let f = gf(2, 2);
                let s = f.frob_k(1);
                let (a, b) = f
                    .nonzero()
                    .flat_map(|a| f.elements().map(move |b| (a, b)))
                    .find(|&(a, b)| projective_polynomial_root(&f, s, a, b).is_none())
                    .unwrap();
                let t = SemilinearMap::companion(&f, a, b, s).unwrap();
                twisted_cyclic(&f, &t.to_general(), f.frob_k(0), Fq::ZERO).ok()
            }
            "dempwolff-twisted" => {
                let f = gf(3, 2);
                let s = f.frob_k(1);
                let t = SemilinearMap::new(&f, [Fq::ZERO, Fq::ONE, nonsquare(&f), Fq::ZERO], s).unwrap();
                let eta = f.nonzero().find(|&e| twisted_dempwolff_valid(&f, &t, s, e)).unwrap_or(Fq::ZERO);
                dempwolff_twisted(&f, &TwistedDempwolffParams { t: t.spec(), l: 1, eta: eta.0 }).ok()
            }
            other => first_member(other, &small),
        };
        v.push((name.to_string(), s));
    }
    v
}

fn knuth_orbits() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, s) in representatives() {
        let Some(s) = s else {
            ok = false;
            parts.push(format!("{name}: no member at order ≤ 256"));
            continue;
        };
        let d = oracle::dual(&s);
        let t = oracle::transpose(&s);
        let dual_inv = oracle::dual(&d).consts() == s.consts();
        let tr_inv = oracle::same_spread(&oracle::transpose(&t), &s);
        let lib_agree = oracle::same_spread(&s.transpose().unwrap(), &t) && s.dual().consts() == d.consts();
        let td = oracle::transpose(&d);
        let orbit = [s.clone(), d.clone(), t.clone(), td.clone(), oracle::dual(&t), oracle::dual(&td)];
        let sorted = |x: (u64, u64, u64)| {
            let mut v = [x.0, x.1, x.2];
            v.sort_unstable();
            v
        };
        let base = sorted(oracle::nuclei(&s));
        let constant = orbit.iter().all(|o| sorted(oracle::nuclei(o)) == base);
        let good = dual_inv && tr_inv && lib_agree && constant;
        ok &= good;
        parts.push(format!("{name} ({}): {base:?}{}", s.order(), if good { "" } else { " FAILED" }));
    }
    outcome(ok, parts.join(", "))
}

// ---------------------------------------------------------------- 11

fn gamma_autotopisms() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let f81 = gf(3, 4);
    let nf = new_family(
        &f81,
        &NewFamilySpec {
            k: 1,
            l: 2,
            alpha: non_power(&f81, 4).0,
            eta: f81.nonzero().find(|&e| oracle::norm(&f81, f81.frob_k(1), e) == Fq(2)).unwrap().0,
        },
    )
    .unwrap();
    let (s1, s2) = (f81.frob_k(1), f81.frob_k(2));
    let r = (oracle::gamma_holds(&nf, s1, s2), oracle::gamma_holds(&nf, s2, s1));
    ok &= r == (true, false) && nf.verify_gamma_autotopism(s1, s2).unwrap();
    parts.push(format!("new family (σ, τ) = (Frob 1, Frob 2): {}, swapped pair: {}", r.0, r.1));

    // biprojective forms found in the new family, tied to the printed families by search
    let f9 = gf(3, 2);
    let (id, s) = (f9.frob_k(0), f9.frob_k(1));
    let a = nonsquare(&f9);
    let k2 = knuth(&f9, 2, &KnuthParams { k: 1, alpha: 1, beta: 1 }).unwrap();
    let hk = f9
        .elements()
        .filter(|&e| oracle::norm(&f9, s, e) != Fq::ONE)
        .filter_map(|e| new_family(&f9, &NewFamilySpec { k: 1, l: 1, alpha: a.0, eta: e.0 }).ok())
        .find(|c| oracle::nuclei(c) == (9, 9, 9))
        .unwrap();
    let r = (witness_ok(&hk, &k2, true), oracle::gamma_holds(&hk, s, s), oracle::gamma_holds(&hk, id, s));
    ok &= r == (true, true, false);
    parts.push(format!("Knuth II form ~ Knuth II: {}, (σ, σ): {}, (id, σ): {}", r.0, r.1, r.2));

    let dk = dickson(&f9, &DicksonParams { k: 0, l: 1, r: 1, alpha: a.0 }).unwrap();
    let eta = f9.nonzero().find(|&e| e != Fq::ONE).unwrap();
    let df = new_family(&f9, &NewFamilySpec { k: 0, l: 1, alpha: a.0, eta: eta.0 }).unwrap();
    let r = (witness_ok(&df, &dk, true), oracle::gamma_holds(&df, id, s), oracle::gamma_holds(&df, s, s));
    ok &= r == (true, true, false);
    parts.push(format!("Dickson form ~ Dickson: {}, (id, σ): {}, (σ, σ): {}", r.0, r.1, r.2));
    outcome(ok, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("construction soundness", construction_soundness),
        ("irreducibility criterion", irreducibility),
        ("nonsingularity criterion", nonsingularity),
        ("nuclei", nuclei_formula),
        ("transpose formulas", transpose_oracle),
        ("family correspondences", correspondences),
        ("centralizer count", centralizer),
        ("explicit isotopisms", explicit_isotopisms),
        ("class counts", counting),
        ("Knuth orbits", knuth_orbits),
        ("γ autotopisms", gamma_autotopisms),
    ];
    let results: Vec<(Outcome, u128)> = std::thread::scope(|sc| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, run)| {
                sc.spawn(move || {
                    let t = Instant::now();
                    let o = run();
                    (o, t.elapsed().as_millis())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (outcome(false, "panicked"), 0))).collect()
    });
    let mut failed = Vec::new();
    for (i, ((name, _), (o, ms))) in criteria.iter().zip(&results).enumerate() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name} [{ms} ms]: {}", i + 1, o.detail);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if failed != EXPECTED_FAILURES {
        eprintln!("failing criteria {failed:?}, documented {EXPECTED_FAILURES:?}");
        std::process::exit(1);
    }
}
