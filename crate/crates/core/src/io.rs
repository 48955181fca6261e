//! File formats: presemifields as JSON, spread sets as plain text.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::fpmat::{decode_vec, encode_vec, FpMatrix};
use crate::gf::{FieldCtx, FieldSpec};
use crate::semifield::{Coords, PreSemifield, Provenance};

pub const FORMAT: &str = "presemifield/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreSemifieldFile {
    pub format: String,
    pub p: u32,
    pub n: usize,
    /// The field and number of L-blocks when coordinates come from L^dim.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// `consts[(i n + j) n + k]`: coordinate k of `e_i ∘ e_j`.
    pub consts: Vec<u8>,
    pub provenance: Provenance,
}

impl PreSemifieldFile {
    pub fn from_semifield(s: &PreSemifield) -> PreSemifieldFile {
        let (field, dim) = match s.field() {
            Some((f, d)) => (Some(f.spec()), Some(d)),
            None => (None, None),
        };
        PreSemifieldFile {
            format: FORMAT.into(),
            p: s.p(),
            n: s.n(),
            field,
            dim,
            consts: s.consts().to_vec(),
            provenance: s.provenance().clone(),
        }
    }

    pub fn into_semifield(self) -> Result<PreSemifield> {
        if self.format != FORMAT {
            return param(format!("unknown format {:?}, expected {FORMAT:?}", self.format));
        }
        let coords = match (self.field, self.dim) {
            (Some(spec), Some(dim)) => {
                if spec.p != self.p || dim * spec.m as usize != self.n {
                    return param("field description does not match p and n");
                }
                Coords::Field { field: Arc::new(FieldCtx::from_spec(&spec)?), dim }
            }
            (None, None) => Coords::Plain,
            _ => return param("field and dim must be given together"),
        };
        PreSemifield::from_structure_constants(self.p, self.n, self.consts, coords, self.provenance)
    }
}

pub fn to_json(s: &PreSemifield) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PreSemifieldFile::from_semifield(s))?)
}

pub fn from_json(text: &str) -> Result<PreSemifield> {
    serde_json::from_str::<PreSemifieldFile>(text)?.into_semifield()
}

pub fn write_json(s: &PreSemifield, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(s)? + "\n")?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<PreSemifield> {
    from_json(&std::fs::read_to_string(path)?)
}

/// Header `p m n`, then one line per y in encoding order holding the n rows of `R_y` as base-p
/// integers. m is the field degree, or 0 without field coordinates.
pub fn spread_text(s: &PreSemifield) -> String {
    let (p, n) = (s.p(), s.n());
    let m = s.field().map(|(f, _)| f.m()).unwrap_or(0);
    let mut out = format!("{p} {m} {n}\n");
    for mat in s.spread_set().members() {
        let rows: Vec<String> = (0..n).map(|r| encode_vec(&mat.row(r), p).to_string()).collect();
        let _ = writeln!(out, "{}", rows.join(" "));
    }
    out
}

/// Rebuilds structure constants from a spread-set file, checking that every line is the
/// matching combination of the basis lines.
pub fn parse_spread_text(text: &str) -> Result<PreSemifield> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parameter("empty spread-set file".into()))?;
    let nums = |l: &str| -> Result<Vec<u64>> {
        l.split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parameter(format!("not an integer: {t:?}"))))
            .collect()
    };
    let h = nums(header)?;
    let [p, m, n] = h[..] else { return param("header must be `p m n`") };
    let (p, n) = (p as u32, n as usize);
    if !crate::gf::is_prime(p as u64) || p > 255 || n == 0 {
        return param("header has an invalid p or n");
    }
    if m != 0 && 2 * m as usize != n && m as usize != n {
        return param("m must divide n as 1 or 2 blocks");
    }
    let count = (p as u64).checked_pow(n as u32).ok_or_else(|| Error::Parameter("order overflow".into()))?;
    let mut mats = Vec::with_capacity(count as usize);
    for line in lines {
        let rows = nums(line)?;
        if rows.len() != n || rows.iter().any(|&r| r >= count) {
            return param(format!("malformed matrix line {:?}", line));
        }
        let data = rows.iter().flat_map(|&r| decode_vec(r, p, n)).collect();
        mats.push(FpMatrix::from_data(p, n, n, data));
    }
    if mats.len() as u64 != count {
        return param(format!("expected {count} matrix lines, got {}", mats.len()));
    }
    // R_{e_j} sits at index p^j; R_j(k, i) = c[i][j][k]
    let basis: Vec<&FpMatrix> = (0..n).map(|j| &mats[(p as usize).pow(j as u32)]).collect();
    let mut consts = vec![0u8; n * n * n];
    for i in 0..n {
        for (j, b) in basis.iter().enumerate() {
            for k in 0..n {
                consts[(i * n + j) * n + k] = b.get(k, i);
            }
        }
    }
    let s = PreSemifield::from_structure_constants(p, n, consts, Coords::Plain, Provenance::named("import"))?;
    if s.spread_set().members() != mats {
        return param("matrix lines are not the span of the basis lines");
    }
    Ok(s)
}

pub fn write_spread(s: &PreSemifield, path: &Path) -> Result<()> {
    std::fs::write(path, spread_text(s))?;
    Ok(())
}

pub fn read_spread(path: &Path) -> Result<PreSemifield> {
    parse_spread_text(&std::fs::read_to_string(path)?)
}
