//! File formats: code spec JSON, alist and dense 0/1 matrices.
//!
//! Spec files look like
//!
//! ```json
//! {"family": "bb", "l": 6, "m": 6, "a_terms": ["x3", "y1", "y2"], "b_terms": ["y3", "x1", "x2"]}
//! ```
//!
//! `gamma` defaults to 0; `name` and `d` are optional. A term is `1` or a
//! product of the factors `x`, `p`, `y`, `q` in that order, each optionally
//! followed by an exponent (`x2y3`, `x^-1 y`, `x1p1y0q1`). Exponents are
//! reduced on the lattice; reductions are returned as warnings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{LatticeSpec, PolySpec};
use crate::codes::{CodeSpec, Family};
use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub family: Family,
    pub l: usize,
    pub m: usize,
    #[serde(default)]
    pub gamma: usize,
    pub a_terms: Vec<String>,
    pub b_terms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Known or claimed distance, carried along for reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

fn invalid(field: &str, reason: impl ToString) -> Error {
    Error::InvalidSpec { field: field.into(), reason: reason.to_string() }
}

impl SpecFile {
    pub fn lattice(&self) -> LatticeSpec {
        match self.family {
            Family::Reflection => LatticeSpec::reflection(self.l, self.m),
            _ => LatticeSpec { l: self.l, m: self.m, twist: self.gamma, allow_reflection: false },
        }
    }

    /// Parses and validates, returning reduction warnings.
    pub fn to_spec(&self) -> Result<(CodeSpec, Vec<String>)> {
        if self.l == 0 {
            return Err(invalid("l", "must be positive"));
        }
        if self.m == 0 {
            return Err(invalid("m", "must be positive"));
        }
        if self.gamma > 0 && self.gamma >= self.m {
            return Err(invalid("gamma", format!("must be below m={}", self.m)));
        }
        let lattice = self.lattice();
        let (a, mut warnings) = PolySpec::parse(&lattice, &self.a_terms).map_err(|e| invalid("a_terms", e))?;
        let (b, wb) = PolySpec::parse(&lattice, &self.b_terms).map_err(|e| invalid("b_terms", e))?;
        warnings.extend(wb);
        let spec = CodeSpec { family: self.family, lattice, a, b, name: self.name.clone() };
        spec.validate()?;
        Ok((spec, warnings))
    }

    pub fn from_spec(spec: &CodeSpec) -> Self {
        let terms = |p: &PolySpec| p.terms().iter().map(|t| t.to_string()).collect();
        SpecFile {
            family: spec.family,
            l: spec.lattice.l,
            m: spec.lattice.m,
            gamma: spec.lattice.twist,
            a_terms: terms(&spec.a),
            b_terms: terms(&spec.b),
            name: spec.name.clone(),
            d: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("spec file: {e}")))
    }
}

impl Serialize for CodeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecFile::from_spec(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CodeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = SpecFile::deserialize(d)?;
        file.to_spec().map(|(s, _)| s).map_err(serde::de::Error::custom)
    }
}

/// MacKay's alist format: sizes, maximum weights, per-column and per-row
/// weights, then 1-based column supports and row supports padded with 0.
pub fn to_alist(h: &BinMatrix) -> String {
    let t = h.transpose();
    let cols: Vec<Vec<usize>> = (0..t.rows()).map(|c| t.row_support(c)).collect();
    let rows: Vec<Vec<usize>> = (0..h.rows()).map(|r| h.row_support(r)).collect();
    let max_c = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_r = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(out, "{max_c} {max_r}").unwrap();
    writeln!(out, "{}", join(&mut cols.iter().map(Vec::len))).unwrap();
    writeln!(out, "{}", join(&mut rows.iter().map(Vec::len))).unwrap();
    for (list, width) in [(&cols, max_c), (&rows, max_r)] {
        for s in list.iter() {
            let padded = s.iter().map(|&i| i + 1).chain(std::iter::repeat(0)).take(width);
            writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
        }
    }
    out
}

pub fn from_alist(text: &str) -> Result<BinMatrix> {
    let bad = |what: &str| Error::Parse(format!("alist: {what}"));
    let mut nums = text.split_whitespace().map(|w| w.parse::<usize>().map_err(|_| bad("non-numeric token")));
    let mut next = || nums.next().unwrap_or_else(|| Err(bad("truncated")));
    let (n, m) = (next()?, next()?);
    let (max_c, max_r) = (next()?, next()?);
    let col_w: Vec<usize> = (0..n).map(|_| next()).collect::<Result<_>>()?;
    let row_w: Vec<usize> = (0..m).map(|_| next()).collect::<Result<_>>()?;
    let mut h = BinMatrix::zeros(m, n);
    for (c, &w) in col_w.iter().enumerate() {
        for i in 0..max_c {
            let r = next()?;
            match (i < w, r) {
                (true, r) if (1..=m).contains(&r) => h.set(r - 1, c, true),
                (false, 0) => {}
                _ => return Err(bad("column entry out of range")),
            }
        }
    }
    for (r, &w) in row_w.iter().enumerate() {
        let mut seen = 0;
        for i in 0..max_r {
            let c = next()?;
            match (i < w, c) {
                (true, c) if (1..=n).contains(&c) && h.get(r, c - 1) => seen += 1,
                (false, 0) => {}
                _ => return Err(bad("row list disagrees with column lists")),
            }
        }
        if seen != w {
            return Err(bad("row weight mismatch"));
        }
    }
    Ok(h)
}

/// One row per line, characters `0`/`1`.
pub fn to_dense(h: &BinMatrix) -> String {
    h.to_dense_string()
}

pub fn from_dense(text: &str) -> Result<BinMatrix> {
    let rows: Vec<BinVector> =
        text.lines().map(str::trim).filter(|l| !l.is_empty()).map(BinVector::parse_bit_string).collect::<Result<_>>()?;
    let cols = rows.first().map_or(0, BinVector::len);
    BinMatrix::from_rows(cols, &rows)
}

pub fn vectors_to_dense(vs: &[BinVector]) -> String {
    vs.iter().map(|v| v.to_bit_string() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alist_round_trip() {
        let h = BinMatrix::from_dense(&[vec![1, 1, 0, 1], vec![0, 1, 1, 0], vec![0, 0, 0, 0]]).unwrap();
        let text = to_alist(&h);
        assert!(text.starts_with("4 3\n2 3\n"));
        assert_eq!(from_alist(&text).unwrap(), h);
    }

    #[test]
    fn dense_round_trip() {
        let h = BinMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(from_dense(&to_dense(&h)).unwrap(), h);
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"family":"bb","l":6,"m":6,"a_terms":["x3","y","y2"],"b_terms":["y3","x","x2"]}"#;
        let (spec, warnings) = SpecFile::from_json(text).unwrap().to_spec().unwrap();
        assert!(warnings.is_empty());
        let json = serde_json::to_string(&spec).unwrap();
        let back: CodeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn spec_errors_name_the_field() {
        let text = r#"{"family":"bb","l":6,"m":6,"a_terms":["x3","z"],"b_terms":["y3"]}"#;
        match SpecFile::from_json(text).unwrap().to_spec() {
            Err(Error::InvalidSpec { field, .. }) => assert_eq!(field, "a_terms"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"family":"twisted-bb","l":2,"m":4,"gamma":4,"a_terms":["x"],"b_terms":["y"]}"#;
        match SpecFile::from_json(text).unwrap().to_spec() {
            Err(Error::InvalidSpec { field, .. }) => assert_eq!(field, "gamma"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn oversized_exponent_is_reduced_with_warning() {
        let text = r#"{"family":"bicycle","l":9,"m":1,"a_terms":["x9","x2"],"b_terms":["x3","x4"]}"#;
        let (spec, warnings) = SpecFile::from_json(text).unwrap().to_spec().unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(spec.a.terms()[0].ex, 0);
    }
}
