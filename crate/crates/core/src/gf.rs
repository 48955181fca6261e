//! Arithmetic in L = GF(p^m).
//!
//! The element `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` of `F_p[x]/(f)` is encoded as the
//! integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Prime-field elements therefore
//! encode as themselves.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::conway::conway_polynomial;
use crate::error::{param, Error, Result};
use crate::fpmat::FpMatrix;

/// exp/log tables are built eagerly up to this order.
pub const TABLE_LIMIT: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u64 = 729;

/// A field element under the context's encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The automorphism `x -> x^(p^k)` of GF(p^m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frob {
    k: u32,
    m: u32,
}

impl Frob {
    pub fn new(k: i64, m: u32) -> Frob {
        assert!(m >= 1);
        Frob { k: k.rem_euclid(m as i64) as u32, m }
    }

    pub fn identity(m: u32) -> Frob {
        Frob::new(0, m)
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn m(self) -> u32 {
        self.m
    }

    pub fn is_identity(self) -> bool {
        self.k == 0
    }

    pub fn inverse(self) -> Frob {
        Frob::new(-(self.k as i64), self.m)
    }

    /// `self ∘ other`, i.e. `x -> (x^other)^self`.
    pub fn compose(self, other: Frob) -> Frob {
        assert_eq!(self.m, other.m, "automorphisms of different fields");
        Frob::new(self.k as i64 + other.k as i64, self.m)
    }

    pub fn pow(self, e: i64) -> Frob {
        Frob::new(self.k as i64 * e, self.m)
    }

    /// Degree over F_p of the fixed field, `gcd(k, m)`.
    pub fn fixed_degree(self) -> u32 {
        gcd_u64(self.k as u64, self.m as u64) as u32
    }

    /// Order of the automorphism in Gal(L/F_p).
    pub fn order(self) -> u32 {
        self.m / self.fixed_degree()
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pow_u128(base: u64, e: u32) -> u128 {
    (base as u128).pow(e)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn least_primitive_root(p: u32) -> u32 {
    let p64 = p as u64;
    let fs = prime_factors(p64 - 1);
    let pow = |b: u64, mut e: u64| {
        let (mut r, mut b) = (1u64, b % p64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p64;
            }
            b = b * b % p64;
            e >>= 1;
        }
        r
    };
    (1..p64).find(|&g| fs.iter().all(|&f| pow(g, (p64 - 1) / f) != 1)).expect("a prime has a primitive root") as u32
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GcdKind {
    MinusMinus,
    PlusMinus,
    PlusPlus,
}

/// Integer gcd of `p^k ± 1` and `p^l ± 1` next to its closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdReport {
    pub value: u128,
    pub case: String,
    pub closed_form: u128,
    pub agrees: bool,
}

/// Computes the gcd by Euclid and compares it with the closed-form case split, read with d = t.
pub fn gcd_formula(p: u64, k: u32, l: u32, kind: GcdKind) -> Result<GcdReport> {
    if k == 0 || l == 0 {
        return param("gcd formula needs k, l >= 1");
    }
    let pk = pow_u128(p, k);
    let pl = pow_u128(p, l);
    let t = gcd_u64(k as u64, l as u64) as u32;
    let pt = pow_u128(p, t);
    let two_or_one = if p == 2 { 1 } else { 2 };
    let (value, case, closed_form) = match kind {
        GcdKind::MinusMinus => (gcd_u128(pk - 1, pl - 1), "always".to_string(), pt - 1),
        GcdKind::PlusMinus => {
            let v = gcd_u128(pk + 1, pl - 1);
            if (l / t) % 2 == 0 {
                (v, "l/t even".to_string(), pt - 1)
            } else {
                (v, "l/t odd".to_string(), two_or_one)
            }
        }
        GcdKind::PlusPlus => {
            let v = gcd_u128(pk + 1, pl + 1);
            if (l / t) % 2 == 1 && (k / t) % 2 == 1 {
                (v, "l/t odd and k/t odd".to_string(), pt + 1)
            } else {
                (v, "otherwise".to_string(), two_or_one)
            }
        }
    };
    Ok(GcdReport { value, case, closed_form, agrees: value == closed_form })
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field L = GF(p^m) with a fixed modulus and generator.
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u64,
    modulus: Vec<u32>,
    generator: Fq,
    pk_mod: Vec<u64>,
    tables: Option<Tables>,
    add_table: Option<Vec<u16>>,
    neg_table: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Serialized form of a field context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldCtx {
    /// GF(p^m) with the Conway polynomial as modulus.
    pub fn new(p: u32, m: u32) -> Result<FieldCtx> {
        if m == 1 && conway_polynomial(p, 1).is_none() && is_prime(p as u64) {
            // the degree-one Conway polynomial is x − g for the least primitive root g
            let g = least_primitive_root(p);
            return Self::with_modulus(p, 1, vec![p - g, 1]);
        }
        let modulus = conway_polynomial(p, m).ok_or(Error::NoModulus { p, m })?;
        Self::with_modulus(p, m, modulus.to_vec())
    }

    /// GF(p^m) with an explicit monic modulus `c_0, ..., c_m`.
    pub fn with_modulus(p: u32, m: u32, modulus: Vec<u32>) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return param(format!("{p} is not prime"));
        }
        if !(1..=20).contains(&m) {
            return param(format!("extension degree {m} outside 1..=20"));
        }
        let q = pow_u128(p as u64, m);
        if q > 1u128 << 32 {
            return param(format!("field order {p}^{m} exceeds 2^32"));
        }
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return param("modulus must be monic of degree m with reduced coefficients");
        }
        if !poly_irreducible(p, &modulus) {
            return param(format!("modulus {modulus:?} is reducible over F_{p}"));
        }
        let q = q as u64;
        let pk_mod = (0..m).map(|k| (pow_u128(p as u64, k) % (q - 1).max(1) as u128) as u64).collect();
        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            generator: Fq(0),
            pk_mod,
            tables: None,
            add_table: None,
            neg_table: None,
        };
        ctx.generator = ctx.find_generator();
        if q <= ADD_TABLE_LIMIT {
            let mut add = vec![0u16; (q * q) as usize];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    add[(a as u64 * q + b as u64) as usize] = ctx.add_digits(a, b) as u16;
                }
            }
            ctx.add_table = Some(add);
        }
        if q <= TABLE_LIMIT {
            ctx.neg_table = Some((0..q as u32).map(|a| ctx.neg_digits(a)).collect());
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for (i, slot) in exp.iter_mut().take(n).enumerate() {
                *slot = x;
                log[x as usize] = i as u32;
                x = ctx.mul_poly(x, ctx.generator.0);
            }
            if x != 1 {
                return Err(Error::Consistency("generator order mismatch".into()));
            }
            for i in n..2 * n {
                exp[i] = exp[i - n];
            }
            ctx.tables = Some(Tables { exp, log });
        }
        Ok(ctx)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<FieldCtx> {
        Self::with_modulus(spec.p, spec.m, spec.modulus.clone())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, m: self.m, modulus: self.modulus.clone() }
    }

    fn find_generator(&self) -> Fq {
        let n = self.q - 1;
        let factors = prime_factors(n);
        let is_primitive = |g: u32| factors.iter().all(|&r| self.pow_poly(g, n / r) != 1);
        // x itself is primitive for Conway moduli.
        let first = if self.m == 1 { ((self.p - self.modulus[0]) % self.p).max(1) } else { self.p };
        if self.q == 2 {
            return Fq(1);
        }
        if is_primitive(first) {
            return Fq(first);
        }
        (2..self.q as u32).find(|&g| is_primitive(g)).map(Fq).expect("multiplicative group is cyclic")
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Field order p^m.
    pub fn order(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Fq {
        self.generator
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q as u32).map(Fq)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fq> {
        (1..self.q as u32).map(Fq)
    }

    pub fn el(&self, v: u32) -> Elem<'_> {
        assert!((v as u64) < self.q, "element {v} out of range");
        Elem { ctx: self, v: Fq(v) }
    }

    pub fn e(&self, v: Fq) -> Elem<'_> {
        Elem { ctx: self, v }
    }

    pub fn check(&self, v: Fq) -> Result<Fq> {
        if (v.0 as u64) < self.q {
            Ok(v)
        } else {
            Err(Error::Domain(format!("{} is not an element of GF({}^{})", v.0, self.p, self.m)))
        }
    }

    pub fn digits(&self, x: Fq) -> Vec<u32> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Fq {
        Fq(d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c % self.p))
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale = scale.wrapping_mul(self.p);
        }
        out
    }

    fn neg_digits(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale = scale.wrapping_mul(self.p);
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let da = self.digits(Fq(a));
        let db = self.digits(Fq(b));
        let m = self.m as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] += x as u64 * y as u64;
            }
        }
        for c in prod.iter_mut() {
            *c %= p;
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c != 0 {
                for j in 0..m {
                    prod[i - m + j] = (prod[i - m + j] + (p - c) * self.modulus[j] as u64) % p;
                }
                prod[i] = 0;
            }
        }
        let d: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.from_digits(&d).0
    }

    fn pow_poly(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if let Some(t) = &self.add_table {
            return Fq(t[(a.0 as u64 * self.q + b.0 as u64) as usize] as u32);
        }
        Fq(self.add_digits(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if let Some(t) = &self.neg_table {
            return Fq(t[a.0 as usize]);
        }
        Fq(self.neg_digits(a.0))
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        match &self.tables {
            Some(t) => Fq(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => Fq(self.mul_poly(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            return Err(Error::Domain("inversion of zero".into()));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for `e >= 0`; `0^0 = 1`.
    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq(1);
        }
        if a.0 == 0 {
            return Fq(0);
        }
        let n = self.q - 1;
        match &self.tables {
            Some(t) => {
                let l = (t.log[a.0 as usize] as u128 * (e % n) as u128 % n as u128) as usize;
                Fq(t.exp[l])
            }
            None => Fq(self.pow_poly(a.0, e % n + if e % n == 0 { n } else { 0 })),
        }
    }

    /// `a^e` for any integer `e`; negative exponents need `a != 0`.
    pub fn pow_signed(&self, a: Fq, e: i64) -> Result<Fq> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
    }

    pub fn frob(&self, s: Frob, a: Fq) -> Fq {
        if s.k == 0 || a.0 == 0 {
            return a;
        }
        debug_assert_eq!(s.m, self.m);
        match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                let l = (t.log[a.0 as usize] as u64 * self.pk_mod[s.k as usize]) % n;
                Fq(t.exp[l as usize])
            }
            None => self.pow(a, self.pk_mod[s.k as usize]),
        }
    }

    pub fn frob_k(&self, k: i64) -> Frob {
        Frob::new(k, self.m)
    }

    /// `N_{L:K}(a)` with K the fixed field of `s`.
    pub fn norm(&self, s: Frob, a: Fq) -> Fq {
        self.norm_to_degree(a, s.fixed_degree())
    }

    /// Norm from L down to GF(p^t), `t | m`.
    pub fn norm_to_degree(&self, a: Fq, t: u32) -> Fq {
        assert!(t >= 1 && self.m % t == 0, "GF(p^{t}) is not a subfield");
        let e = (self.q - 1) / (pow_u128(self.p as u64, t) as u64 - 1);
        self.pow(a, e)
    }

    /// Norm from GF(p^from) down to GF(p^to) of an element of GF(p^from).
    pub fn norm_between(&self, a: Fq, from: u32, to: u32) -> Fq {
        assert!(from % to == 0 && self.m % from == 0);
        let e = (pow_u128(self.p as u64, from) - 1) / (pow_u128(self.p as u64, to) - 1);
        self.pow(a, e as u64)
    }

    /// Absolute trace to F_p, encoded as an integer below p.
    pub fn trace(&self, a: Fq) -> u32 {
        let mut acc = Fq(0);
        let mut x = a;
        let s = self.frob_k(1);
        for _ in 0..self.m {
            acc = self.add(acc, x);
            x = self.frob(s, x);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    pub fn in_subfield(&self, a: Fq, t: u32) -> bool {
        self.frob(self.frob_k(t as i64), a) == a
    }

    /// Discrete logarithm to the fixed generator.
    pub fn log(&self, a: Fq) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        match &self.tables {
            Some(t) => Ok(t.log[a.0 as usize] as u64),
            None => {
                let mut x = Fq(1);
                for i in 0..self.q - 1 {
                    if x == a {
                        return Ok(i);
                    }
                    x = self.mul(x, self.generator);
                }
                Err(Error::Consistency("generator does not reach every element".into()))
            }
        }
    }

    /// Index of `a` in L*/(L*)^d, i.e. `log(a) mod d`; requires `d | p^m - 1`.
    pub fn power_class_index(&self, a: Fq, d: u64) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::Domain("power class of zero".into()));
        }
        if d == 0 || (self.q - 1) % d != 0 {
            return Err(Error::Domain(format!("{d} does not divide {}", self.q - 1)));
        }
        if self.tables.is_some() {
            return Ok(self.log(a)? % d);
        }
        let e = (self.q - 1) / d;
        let target = self.pow(a, e);
        let zeta = self.pow(self.generator, e);
        let mut z = Fq(1);
        for i in 0..d {
            if z == target {
                return Ok(i);
            }
            z = self.mul(z, zeta);
        }
        Err(Error::Consistency("power class not found".into()))
    }

    /// Whether `a != 0` is an e-th power; e is arbitrary (reduced by gcd with p^m - 1).
    pub fn is_power(&self, a: Fq, e: u64) -> Result<bool> {
        let d = gcd_u64(e, self.q - 1);
        Ok(self.power_class_index(a, d)? == 0)
    }

    /// Smallest nonzero element (in encoding order) that is not an e-th power.
    pub fn smallest_non_power(&self, e: u64) -> Option<Fq> {
        self.nonzero().find(|&a| !self.is_power(a, e).unwrap_or(true))
    }

    pub fn smallest_nonsquare(&self) -> Option<Fq> {
        self.smallest_non_power(2)
    }

    /// F_p-matrix of `x -> r x` in the polynomial basis.
    pub fn mul_matrix(&self, r: Fq) -> FpMatrix {
        let cols: Vec<Vec<u8>> = (0..self.m)
            .map(|i| self.digits(self.mul(r, self.basis(i))).iter().map(|&c| c as u8).collect())
            .collect();
        FpMatrix::from_columns(self.p, self.m as usize, &cols)
    }

    /// F_p-matrix of the automorphism `s` in the polynomial basis.
    pub fn frob_matrix(&self, s: Frob) -> FpMatrix {
        let cols: Vec<Vec<u8>> = (0..self.m)
            .map(|i| self.digits(self.frob(s, self.basis(i))).iter().map(|&c| c as u8).collect())
            .collect();
        FpMatrix::from_columns(self.p, self.m as usize, &cols)
    }

    /// Gram matrix of the trace form `Tr(xy)` in the polynomial basis.
    pub fn trace_gram(&self) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.m as usize, self.m as usize, |i, j| {
            self.trace(self.mul(self.basis(i as u32), self.basis(j as u32)))
        })
    }

    /// The basis element x^i.
    pub fn basis(&self, i: u32) -> Fq {
        Fq(self.p.pow(i))
    }

    /// An element with square -1 if one exists, found by search.
    pub fn sqrt_minus_one(&self) -> Option<Fq> {
        let m1 = self.neg(Fq(1));
        self.elements().find(|&x| self.mul(x, x) == m1)
    }
}

/// Irreducibility by trial division with all monic polynomials of degree <= deg/2.
fn poly_irreducible(p: u32, f: &[u32]) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(p: u32, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = f.to_vec();
    let dg = g.len() - 1;
    for i in (dg..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            for j in 0..=dg {
                r[i - dg + j] = (r[i - dg + j] + (p - c) * g[j]) % p;
            }
        }
    }
    r.truncate(dg);
    r
}

/// An element bound to its context, for writing formulas with operators.
#[derive(Clone, Copy)]
pub struct Elem<'a> {
    ctx: &'a FieldCtx,
    v: Fq,
}

impl fmt::Debug for Elem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({})", self.v.0)
    }
}

impl PartialEq for Elem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl Eq for Elem<'_> {}

impl<'a> Elem<'a> {
    pub fn fq(self) -> Fq {
        self.v
    }
    pub fn value(self) -> u32 {
        self.v.0
    }
    pub fn is_zero(self) -> bool {
        self.v.0 == 0
    }
    pub fn ctx(self) -> &'a FieldCtx {
        self.ctx
    }
    pub fn frob(self, s: Frob) -> Self {
        self.ctx.e(self.ctx.frob(s, self.v))
    }
    pub fn pow(self, e: u64) -> Self {
        self.ctx.e(self.ctx.pow(self.v, e))
    }
    /// Panics on zero, like integer division.
    pub fn inv(self) -> Self {
        self.ctx.e(self.ctx.inv(self.v).expect("inverse of zero field element"))
    }
    pub fn norm(self, s: Frob) -> Self {
        self.ctx.e(self.ctx.norm(s, self.v))
    }
    pub fn zero(&self) -> Self {
        self.ctx.e(Fq(0))
    }
    pub fn one(&self) -> Self {
        self.ctx.e(Fq(1))
    }
}

impl<'a> Add for Elem<'a> {
    type Output = Elem<'a>;
    fn add(self, o: Self) -> Self {
        self.ctx.e(self.ctx.add(self.v, o.v))
    }
}

impl<'a> Sub for Elem<'a> {
    type Output = Elem<'a>;
    fn sub(self, o: Self) -> Self {
        self.ctx.e(self.ctx.sub(self.v, o.v))
    }
}

impl<'a> Mul for Elem<'a> {
    type Output = Elem<'a>;
    fn mul(self, o: Self) -> Self {
        self.ctx.e(self.ctx.mul(self.v, o.v))
    }
}

impl<'a> Div for Elem<'a> {
    type Output = Elem<'a>;
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

impl<'a> Neg for Elem<'a> {
    type Output = Elem<'a>;
    fn neg(self) -> Self {
        self.ctx.e(self.ctx.neg(self.v))
    }
}
