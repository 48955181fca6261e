//! Presemifields stored as structure constants over F_p.
//!
//! `consts[(i * n + j) * n + k]` is the k-th coordinate of `e_i ∘ e_j`, so the right
//! multiplication `R_y : x -> x ∘ y` is `Σ y_j R_{e_j}` with `R_{e_j}[k][i] = consts[i][j][k]`.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::fpmat::{decode_vec, next_vec, span_canonical, FpMatrix, FpVec};
use crate::gf::{FieldCtx, Fq, Frob};
use crate::semilinear::{vec_from_fp, vec_to_fp, Vec2};
use crate::spread::{first_singular_combination, SpreadSet};

/// How the F_p coordinates relate to L^dim.
#[derive(Clone, Debug)]
pub enum Coords {
    Plain,
    /// Coordinates are `dim` consecutive blocks of L in the polynomial basis.
    Field { field: Arc<FieldCtx>, dim: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl Provenance {
    pub fn named(construction: &str) -> Provenance {
        Provenance { construction: construction.to_string(), ..Default::default() }
    }

    pub fn with_params(mut self, params: serde_json::Value) -> Provenance {
        self.params = params;
        self
    }

    pub fn with_eta(mut self, eta: Fq) -> Provenance {
        self.eta = Some(eta.0);
        self
    }

    pub fn flag(mut self, f: &str) -> Provenance {
        self.flags.push(f.to_string());
        self
    }
}

#[derive(Clone, Debug)]
pub struct PreSemifield {
    p: u32,
    n: usize,
    consts: Vec<u8>,
    right: Vec<FpMatrix>,
    left: Vec<FpMatrix>,
    coords: Coords,
    provenance: Provenance,
}

impl PartialEq for PreSemifield {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.consts == other.consts
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub ok: bool,
    /// Nonzero `(x, y)` with `x ∘ y = 0`.
    pub witness: Option<(FpVec, FpVec)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NucleiTriple {
    pub left: u64,
    pub middle: u64,
    pub right: u64,
}

impl NucleiTriple {
    pub fn sorted(&self) -> [u64; 3] {
        let mut v = [self.left, self.middle, self.right];
        v.sort_unstable();
        v
    }
}

impl std::fmt::Display for NucleiTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.left, self.middle, self.right)
    }
}

/// `N1(x ∘1 y) = N2(x) ∘2 N3(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotopismTriple {
    pub n1: FpMatrix,
    pub n2: FpMatrix,
    pub n3: FpMatrix,
}

impl IsotopismTriple {
    pub fn identity(p: u32, n: usize) -> IsotopismTriple {
        let i = FpMatrix::identity(p, n);
        IsotopismTriple { n1: i.clone(), n2: i.clone(), n3: i }
    }

    pub fn is_invertible(&self) -> bool {
        self.n1.is_invertible() && self.n2.is_invertible() && self.n3.is_invertible()
    }

    /// Triple for `S1 -> S3` given triples `S1 -> S2` and `S2 -> S3`.
    pub fn then(&self, next: &IsotopismTriple) -> IsotopismTriple {
        IsotopismTriple {
            n1: next.n1.mul(&self.n1),
            n2: next.n2.mul(&self.n2),
            n3: next.n3.mul(&self.n3),
        }
    }

    pub fn inverse(&self) -> Option<IsotopismTriple> {
        Some(IsotopismTriple { n1: self.n1.inverse()?, n2: self.n2.inverse()?, n3: self.n3.inverse()? })
    }
}

/// Checks the isotopism equation on all basis pairs.
pub fn verify_isotopism(s1: &PreSemifield, s2: &PreSemifield, t: &IsotopismTriple) -> bool {
    if s1.p != s2.p || s1.n != s2.n || !t.is_invertible() {
        return false;
    }
    let n = s1.n;
    let n2cols: Vec<FpVec> = (0..n).map(|i| t.n2.column(i)).collect();
    let n3cols: Vec<FpVec> = (0..n).map(|j| t.n3.column(j)).collect();
    (0..n).all(|i| (0..n).all(|j| t.n1.apply(s1.basis_product(i, j)) == s2.mul(&n2cols[i], &n3cols[j])))
}

#[derive(Clone, Debug)]
pub struct OrbitMember {
    pub label: &'static str,
    pub semifield: PreSemifield,
}

impl PreSemifield {
    pub fn from_structure_constants(
        p: u32,
        n: usize,
        consts: Vec<u8>,
        coords: Coords,
        provenance: Provenance,
    ) -> Result<PreSemifield> {
        if consts.len() != n * n * n {
            return param(format!("expected {} structure constants, got {}", n * n * n, consts.len()));
        }
        if consts.iter().any(|&c| c as u32 >= p) {
            return param("structure constants must be reduced modulo p");
        }
        if let Coords::Field { field, dim } = &coords {
            if field.p() != p || field.m() as usize * dim != n {
                return param("field coordinates do not match the dimension");
            }
        }
        let right = (0..n)
            .map(|j| FpMatrix::from_fn(p, n, n, |k, i| consts[(i * n + j) * n + k] as u32))
            .collect();
        let left = (0..n)
            .map(|i| FpMatrix::from_fn(p, n, n, |k, j| consts[(i * n + j) * n + k] as u32))
            .collect();
        Ok(PreSemifield { p, n, consts, right, left, coords, provenance })
    }

    /// Tabulates a bi-additive map on basis pairs and spot-checks bi-additivity elsewhere.
    pub fn from_multiplication(
        p: u32,
        n: usize,
        coords: Coords,
        provenance: Provenance,
        mult: impl Fn(&[u8], &[u8]) -> FpVec,
    ) -> Result<PreSemifield> {
        let mut consts = vec![0u8; n * n * n];
        let basis: Vec<FpVec> = (0..n).map(|i| unit(n, i)).collect();
        for i in 0..n {
            for j in 0..n {
                let v = mult(&basis[i], &basis[j]);
                if v.len() != n {
                    return param("multiplication returned a vector of the wrong length");
                }
                consts[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&v);
            }
        }
        let s = Self::from_structure_constants(p, n, consts, coords, provenance)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..16 {
            let x: FpVec = (0..n).map(|_| rng.gen_range(0..p) as u8).collect();
            let y: FpVec = (0..n).map(|_| rng.gen_range(0..p) as u8).collect();
            if mult(&x, &y) != s.mul(&x, &y) {
                return param(format!("multiplication is not bi-additive at x = {x:?}, y = {y:?}"));
            }
        }
        Ok(s)
    }

    /// A multiplication on L² given in field coordinates.
    pub fn from_l2(
        field: &Arc<FieldCtx>,
        provenance: Provenance,
        mult: impl Fn(Vec2, Vec2) -> Vec2,
    ) -> Result<PreSemifield> {
        let f = field.as_ref();
        let n = 2 * f.m() as usize;
        let to_l2 = |v: &[u8]| {
            let c = vec_from_fp(f, v);
            Vec2::new(c[0], c[1])
        };
        Self::from_multiplication(
            f.p(),
            n,
            Coords::Field { field: field.clone(), dim: 2 },
            provenance,
            |x, y| {
                let z = mult(to_l2(x), to_l2(y));
                vec_to_fp(f, &[z.x0, z.x1])
            },
        )
    }

    /// The field L itself.
    pub fn from_field(field: &Arc<FieldCtx>) -> Result<PreSemifield> {
        let f = field.as_ref();
        Self::from_multiplication(
            f.p(),
            f.m() as usize,
            Coords::Field { field: field.clone(), dim: 1 },
            Provenance::named("field"),
            |x, y| {
                let a = vec_from_fp(f, x)[0];
                let b = vec_from_fp(f, y)[0];
                vec_to_fp(f, &[f.mul(a, b)])
            },
        )
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.n as u32)
    }
    pub fn consts(&self) -> &[u8] {
        &self.consts
    }
    pub fn coords(&self) -> &Coords {
        &self.coords
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> PreSemifield {
        self.provenance = provenance;
        self
    }

    /// The field and dimension when coordinates come from L^dim.
    pub fn field(&self) -> Option<(&Arc<FieldCtx>, usize)> {
        match &self.coords {
            Coords::Field { field, dim } => Some((field, *dim)),
            Coords::Plain => None,
        }
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[u8] {
        let n = self.n;
        &self.consts[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn mul(&self, x: &[u8], y: &[u8]) -> FpVec {
        let n = self.n;
        let mut acc = vec![0u32; n];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = a as u32 * b as u32;
                for (s, &v) in acc.iter_mut().zip(self.basis_product(i, j)) {
                    *s += c * v as u32;
                }
            }
        }
        acc.into_iter().map(|s| (s % self.p) as u8).collect()
    }

    /// Product of two L² vectors; needs two-block field coordinates.
    pub fn mul_l2(&self, x: Vec2, y: Vec2) -> Option<Vec2> {
        let (f, dim) = self.field()?;
        if dim != 2 {
            return None;
        }
        let z = self.mul(&vec_to_fp(f, &[x.x0, x.x1]), &vec_to_fp(f, &[y.x0, y.x1]));
        let c = vec_from_fp(f, &z);
        Some(Vec2::new(c[0], c[1]))
    }

    pub fn right_basis(&self) -> &[FpMatrix] {
        &self.right
    }

    pub fn left_basis(&self) -> &[FpMatrix] {
        &self.left
    }

    /// `R_y : x -> x ∘ y`.
    pub fn right(&self, y: &[u8]) -> FpMatrix {
        combine(self.p, self.n, &self.right, y)
    }

    /// `L_x : y -> x ∘ y`.
    pub fn left(&self, x: &[u8]) -> FpMatrix {
        combine(self.p, self.n, &self.left, x)
    }

    /// Exhaustive zero-divisor check over every R_y and L_x.
    pub fn verify_axioms(&self) -> AxiomReport {
        if let Some(y) = first_singular_combination(self.p, self.n, &self.right) {
            let x = self.right(&y).kernel().remove(0);
            return AxiomReport { ok: false, witness: Some((x, y)) };
        }
        if let Some(x) = first_singular_combination(self.p, self.n, &self.left) {
            let y = self.left(&x).kernel().remove(0);
            return AxiomReport { ok: false, witness: Some((x, y)) };
        }
        AxiomReport { ok: true, witness: None }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// The two-sided identity, if there is one.
    pub fn identity(&self) -> Option<FpVec> {
        let n = self.n;
        // Σ e_j R_j = I and Σ e_i L_i = I.
        let sys = FpMatrix::from_fn(self.p, 2 * n * n, n, |r, c| {
            let (blk, idx) = (r / (n * n), r % (n * n));
            let m = if blk == 0 { &self.right[c] } else { &self.left[c] };
            m.data()[idx] as u32
        });
        let id = FpMatrix::identity(self.p, n);
        let rhs: Vec<u8> = id.data().iter().chain(id.data()).copied().collect();
        sys.solve(&rhs)
    }

    /// `x ∗ y = R_e^{-1}(x) ∘ L_e^{-1}(y)`, unital with identity `e ∘ e`, plus the triple `(id, R_e, L_e)`.
    pub fn kaplansky(&self, e: &[u8]) -> Result<(PreSemifield, IsotopismTriple)> {
        let re = self.right(e);
        let le = self.left(e);
        let (Some(ri), Some(li)) = (re.inverse(), le.inverse()) else {
            return Err(Error::Parameter("R_e or L_e is singular; verify the axioms first".into()));
        };
        let n = self.n;
        let rcols: Vec<FpVec> = (0..n).map(|i| ri.column(i)).collect();
        let lcols: Vec<FpVec> = (0..n).map(|j| li.column(j)).collect();
        let mut consts = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                consts.extend(self.mul(&rcols[i], &lcols[j]));
            }
        }
        let mut prov = self.provenance.clone();
        prov.flags.push("kaplansky".into());
        let u = Self::from_structure_constants(self.p, n, consts, self.coords.clone(), prov)?;
        let t = IsotopismTriple { n1: FpMatrix::identity(self.p, n), n2: re, n3: le };
        Ok((u, t))
    }

    pub fn spread_set(&self) -> SpreadSet {
        SpreadSet::new(self.p, self.n, self.right.clone())
    }

    /// `x ∗ y = y ∘ x`.
    pub fn dual(&self) -> PreSemifield {
        let n = self.n;
        let mut consts = vec![0u8; n * n * n];
        for i in 0..n {
            for j in 0..n {
                consts[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(self.basis_product(j, i));
            }
        }
        let mut prov = self.provenance.clone();
        prov.flags.push("dual".into());
        Self::from_structure_constants(self.p, n, consts, self.coords.clone(), prov).expect("same shape")
    }

    /// Gram matrix of `Tr(x·y)` summed over the L-blocks; the identity for plain coordinates.
    pub fn gram(&self) -> FpMatrix {
        match &self.coords {
            Coords::Plain => FpMatrix::identity(self.p, self.n),
            Coords::Field { field, dim } => {
                let g = field.trace_gram();
                let blocks: Vec<&FpMatrix> = (0..*dim).map(|_| &g).collect();
                FpMatrix::block_diag(&blocks)
            }
        }
    }

    /// Right multiplications of the transpose, from the perps of `{(x, R_y x)}` under
    /// `((x, y), (x', y')) -> B(x, y') - B(y, x')`, B the trace form.
    pub fn transpose_matrices(&self) -> Result<Vec<FpMatrix>> {
        let n = self.n;
        let g = self.gram();
        let mut out = Vec::with_capacity(n);
        for rj in &self.right {
            let grj = g.mul(rj);
            let sys = FpMatrix::from_fn(self.p, n, 2 * n, |i, c| {
                if c < n {
                    (self.p - grj.get(c, i) as u32) % self.p
                } else {
                    g.get(c - n, i) as u32
                }
            });
            let ker = sys.kernel();
            if ker.len() != n {
                return Err(Error::Consistency("perp of a spread element has the wrong dimension".into()));
            }
            let a = FpMatrix::from_fn(self.p, n, n, |r, c| ker[c][r] as u32);
            let cm = FpMatrix::from_fn(self.p, n, n, |r, c| ker[c][n + r] as u32);
            let ainv = a
                .inverse()
                .ok_or_else(|| Error::Consistency("dual spread element is not a graph".into()))?;
            out.push(cm.mul(&ainv));
        }
        Ok(out)
    }

    /// Trace-form adjoints `G^{-1} R_jᵀ G` of the right-multiplication basis.
    pub fn adjoint_matrices(&self) -> Vec<FpMatrix> {
        let g = self.gram();
        let gi = g.inverse().expect("trace form is nondegenerate");
        self.right.iter().map(|r| gi.mul(&r.transpose()).mul(&g)).collect()
    }

    /// The transposed presemifield; the j-th dual-spread basis matrix becomes `R_{e_j}`.
    pub fn transpose(&self) -> Result<PreSemifield> {
        let mats = self.transpose_matrices()?;
        let adj = self.adjoint_matrices();
        if mats != adj {
            return Err(Error::Consistency("dual spread differs from the trace adjoints".into()));
        }
        let n = self.n;
        let mut consts = vec![0u8; n * n * n];
        for (j, m) in mats.iter().enumerate() {
            for i in 0..n {
                for k in 0..n {
                    consts[(i * n + j) * n + k] = m.get(k, i);
                }
            }
        }
        let mut prov = self.provenance.clone();
        prov.flags.push("transpose".into());
        Self::from_structure_constants(self.p, n, consts, self.coords.clone(), prov)
    }

    /// `S, π1 S, π2 S, π2π1 S, π1π2 S, π1π2π1 S`, keeping distinct spread sets.
    pub fn knuth_orbit(&self) -> Result<Vec<OrbitMember>> {
        let d = self.dual();
        let t = self.transpose()?;
        let td = d.transpose()?;
        let dt = t.dual();
        let dtd = td.dual();
        let all = [("id", self.clone()), ("pi1", d), ("pi2", t), ("pi2pi1", td), ("pi1pi2", dt), ("pi1pi2pi1", dtd)];
        let mut out: Vec<OrbitMember> = Vec::new();
        let mut seen: Vec<Vec<FpVec>> = Vec::new();
        for (label, s) in all {
            let c = s.spread_set().canonical();
            if !seen.contains(&c) {
                seen.push(c);
                out.push(OrbitMember { label, semifield: s });
            }
        }
        Ok(out)
    }

    /// Orders of the left, middle and right nucleus of the Kaplansky semifield at e_0.
    pub fn nuclei(&self) -> Result<NucleiTriple> {
        let (u, _) = self.kaplansky(&unit(self.n, 0))?;
        let left = u.nucleus(Nucleus::Left)?;
        let middle = u.nucleus(Nucleus::Middle)?;
        let right = u.nucleus(Nucleus::Right)?;
        Ok(NucleiTriple { left, middle, right })
    }

    /// Elements of one nucleus, by the associativity definition restricted to basis pairs.
    pub fn nucleus_elements(&self, which: Nucleus) -> Vec<FpVec> {
        let n = self.n;
        let p = self.p;
        let mut out = Vec::new();
        let mut z = vec![0u8; n];
        let e: Vec<FpVec> = (0..n).map(|i| unit(n, i)).collect();
        loop {
            let ok = match which {
                Nucleus::Right => {
                    let w: Vec<FpVec> = (0..n).map(|k| self.mul(&e[k], &z)).collect();
                    (0..n).all(|i| {
                        (0..n).all(|j| {
                            let lhs = lin_comb(p, &w, self.basis_product(i, j));
                            lhs == self.mul(&e[i], &w[j])
                        })
                    })
                }
                Nucleus::Left => {
                    let u: Vec<FpVec> = (0..n).map(|i| self.mul(&z, &e[i])).collect();
                    (0..n).all(|i| {
                        (0..n).all(|j| self.mul(&u[i], &e[j]) == lin_comb(p, &u, self.basis_product(i, j)))
                    })
                }
                Nucleus::Middle => {
                    let a: Vec<FpVec> = (0..n).map(|i| self.mul(&e[i], &z)).collect();
                    let b: Vec<FpVec> = (0..n).map(|j| self.mul(&z, &e[j])).collect();
                    (0..n).all(|i| (0..n).all(|j| self.mul(&a[i], &e[j]) == self.mul(&e[i], &b[j])))
                }
            };
            if ok {
                out.push(z.clone());
            }
            if !next_vec(&mut z, p) {
                break;
            }
        }
        out
    }

    fn nucleus(&self, which: Nucleus) -> Result<u64> {
        let elems = self.nucleus_elements(which);
        let size = elems.len() as u64;
        let basis = span_canonical(self.p, &elems);
        let t = basis.len();
        if size != (self.p as u64).pow(t as u32) || self.n % t.max(1) != 0 || t == 0 {
            return Err(Error::Consistency(format!("{which:?} nucleus has {size} elements, not a subfield")));
        }
        let set: HashSet<FpVec> = elems.into_iter().collect();
        for a in &basis {
            for b in &basis {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::Consistency(format!("{which:?} nucleus is not closed under ∗")));
                }
            }
        }
        Ok(size)
    }

    /// Checks `γ_r = (diag(r^(σ+1), r^(τ+1)), diag(r, r), diag(r, r))` for every `r ∈ L*`.
    pub fn verify_gamma_autotopism(&self, sigma: Frob, tau: Frob) -> Result<bool> {
        let Some((f, 2)) = self.field() else {
            return param("γ_r autotopisms need two-block field coordinates");
        };
        for r in f.nonzero() {
            let rs = f.mul(f.frob(sigma, r), r);
            let rt = f.mul(f.frob(tau, r), r);
            let n1 = FpMatrix::block_diag(&[&f.mul_matrix(rs), &f.mul_matrix(rt)]);
            let mr = f.mul_matrix(r);
            let n2 = FpMatrix::block_diag(&[&mr, &mr]);
            let t = IsotopismTriple { n1, n2: n2.clone(), n3: n2 };
            if !verify_isotopism(self, self, &t) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every element, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FpVec> + '_ {
        (0..self.order()).map(move |i| decode_vec(i, self.p, self.n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nucleus {
    Left,
    Middle,
    Right,
}

pub fn unit(n: usize, i: usize) -> FpVec {
    let mut v = vec![0u8; n];
    v[i] = 1;
    v
}

fn lin_comb(p: u32, vs: &[FpVec], coeffs: &[u8]) -> FpVec {
    let n = vs[0].len();
    let mut acc = vec![0u32; n];
    for (v, &c) in vs.iter().zip(coeffs) {
        if c != 0 {
            for (s, &x) in acc.iter_mut().zip(v) {
                *s += c as u32 * x as u32;
            }
        }
    }
    acc.into_iter().map(|s| (s % p) as u8).collect()
}

fn combine(p: u32, n: usize, mats: &[FpMatrix], y: &[u8]) -> FpMatrix {
    let mut m = FpMatrix::zeros(p, n, n);
    for (b, &c) in mats.iter().zip(y) {
        m.add_scaled_assign(b, c as u32);
    }
    m
}
