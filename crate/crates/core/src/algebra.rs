//! Translation and reflection generators on an `l × m` lattice of unit cells,
//! polynomial specifications over them, and the quotient-ring dimension of
//! the stacked-code ideal.
//!
//! Cells are indexed row-major, `cell = jx * m + jy`, so `T_x = S_l ⊗ I_m`
//! and `T_y = I_l ⊗ S_m`. Every generator is a permutation matrix; monomials
//! are evaluated as composed permutations and only materialized as
//! [`BinMatrix`] at the end.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector};

/// Lattice sizes and boundary condition.
///
/// `twist == 0` is periodic in both directions. A positive twist imposes
/// `y^m = 1` and `x^l = y^twist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub l: usize,
    pub m: usize,
    pub twist: usize,
    pub allow_reflection: bool,
}

impl LatticeSpec {
    pub fn periodic(l: usize, m: usize) -> Self {
        Self { l, m, twist: 0, allow_reflection: false }
    }

    pub fn twisted(l: usize, m: usize, twist: usize) -> Self {
        Self { l, m, twist, allow_reflection: false }
    }

    pub fn reflection(l: usize, m: usize) -> Self {
        Self { l, m, twist: 0, allow_reflection: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 || self.m == 0 {
            return Err(Error::InvalidLattice(format!(
                "sizes must be positive, got l={} m={}",
                self.l, self.m
            )));
        }
        if self.twist > 0 {
            if self.twist >= self.m {
                return Err(Error::InvalidLattice(format!(
                    "twist {} must be below m={}",
                    self.twist, self.m
                )));
            }
            if self.allow_reflection {
                return Err(Error::InvalidLattice("twisted lattices cannot carry reflections".into()));
            }
        }
        Ok(())
    }

    /// Number of unit cells, `l·m`.
    pub fn cells(&self) -> usize {
        self.l * self.m
    }

    #[inline]
    pub fn cell(&self, jx: usize, jy: usize) -> usize {
        jx * self.m + jy
    }

    #[inline]
    pub fn coords(&self, cell: usize) -> (usize, usize) {
        (cell / self.m, cell % self.m)
    }

    /// Canonical `(jx, jy)` for the translation `x^ex y^ey` with arbitrary
    /// integer exponents, folding whole turns in x into y via the twist.
    pub fn reduce_translation(&self, ex: i64, ey: i64) -> (usize, usize) {
        let l = self.l as i64;
        let m = self.m as i64;
        let turns = ex.div_euclid(l);
        let jx = ex.rem_euclid(l);
        let jy = (ey + turns * self.twist as i64).rem_euclid(m);
        (jx as usize, jy as usize)
    }

    /// Product of two translations in canonical form.
    pub fn compose(&self, a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
        self.reduce_translation((a.0 + b.0) as i64, (a.1 + b.1) as i64)
    }

    /// Group inverse of a translation.
    pub fn inverse(&self, a: (usize, usize)) -> (usize, usize) {
        self.reduce_translation(-(a.0 as i64), -(a.1 as i64))
    }

    fn perm_x(&self) -> Vec<usize> {
        (0..self.cells())
            .map(|c| {
                let (i, j) = self.coords(c);
                if i + 1 < self.l {
                    self.cell(i + 1, j)
                } else {
                    self.cell(0, (j + self.twist) % self.m)
                }
            })
            .collect()
    }

    fn perm_y(&self) -> Vec<usize> {
        (0..self.cells())
            .map(|c| {
                let (i, j) = self.coords(c);
                self.cell(i, (j + 1) % self.m)
            })
            .collect()
    }

    fn perm_p(&self) -> Vec<usize> {
        (0..self.cells())
            .map(|c| {
                let (i, j) = self.coords(c);
                self.cell(self.l - 1 - i, j)
            })
            .collect()
    }

    fn perm_q(&self) -> Vec<usize> {
        (0..self.cells())
            .map(|c| {
                let (i, j) = self.coords(c);
                self.cell(i, self.m - 1 - j)
            })
            .collect()
    }
}

/// `row -> column` map of a permutation matrix.
type Perm = Vec<usize>;

/// Permutation of the matrix product `P1 · P2`.
fn perm_product(p1: &[usize], p2: &[usize]) -> Perm {
    p1.iter().map(|&k| p2[k]).collect()
}

fn perm_power(p: &[usize], e: usize) -> Perm {
    let mut out: Perm = (0..p.len()).collect();
    for _ in 0..e {
        out = perm_product(&out, p);
    }
    out
}

fn perm_matrix(p: &[usize]) -> BinMatrix {
    let mut m = BinMatrix::zeros(p.len(), p.len());
    for (r, &c) in p.iter().enumerate() {
        m.set(r, c, true);
    }
    m
}

/// `l × l` cyclic shift: row `j` has its single one in column `(j+1) mod l`.
pub fn shift_matrix(l: usize) -> Result<BinMatrix> {
    if l == 0 {
        return Err(Error::InvalidLattice("shift matrix of size 0".into()));
    }
    Ok(perm_matrix(&(0..l).map(|j| (j + 1) % l).collect::<Vec<_>>()))
}

/// `l × l` anti-diagonal reflection.
pub fn reflection_matrix(l: usize) -> Result<BinMatrix> {
    if l == 0 {
        return Err(Error::InvalidLattice("reflection matrix of size 0".into()));
    }
    Ok(perm_matrix(&(0..l).map(|i| l - 1 - i).collect::<Vec<_>>()))
}

/// The lattice generators as `lm × lm` matrices.
#[derive(Debug, Clone)]
pub struct Generators {
    pub x: BinMatrix,
    pub y: BinMatrix,
    pub p: Option<BinMatrix>,
    pub q: Option<BinMatrix>,
}

pub fn generator_matrices(spec: &LatticeSpec) -> Result<Generators> {
    spec.validate()?;
    let (p, q) = if spec.allow_reflection {
        (Some(perm_matrix(&spec.perm_p())), Some(perm_matrix(&spec.perm_q())))
    } else {
        (None, None)
    };
    Ok(Generators { x: perm_matrix(&spec.perm_x()), y: perm_matrix(&spec.perm_y()), p, q })
}

/// One monomial `x^ex · p^px · y^ey · q^qy`, factors in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub ex: usize,
    pub ey: usize,
    pub px: bool,
    pub qy: bool,
}

impl MonomialTerm {
    pub const ONE: MonomialTerm = MonomialTerm { ex: 0, ey: 0, px: false, qy: false };

    pub fn translation(ex: usize, ey: usize) -> Self {
        Self { ex, ey, px: false, qy: false }
    }

    pub fn has_reflection(&self) -> bool {
        self.px || self.qy
    }
}

impl fmt::Display for MonomialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.ex)?;
        if self.px {
            f.write_str("p1")?;
        }
        write!(f, "y{}", self.ey)?;
        if self.qy {
            f.write_str("q1")?;
        }
        Ok(())
    }
}

/// A monomial as written, before reduction by the lattice relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawTerm {
    pub ex: i64,
    pub ey: i64,
    pub px: u32,
    pub qy: u32,
}

impl FromStr for RawTerm {
    type Err = Error;

    /// Grammar: `"1"` or one or more factors from `x`, `p`, `y`, `q` in that
    /// order, each optionally followed by `^` and/or a signed integer
    /// exponent (default 1). Whitespace and `*` are ignored.
    /// Examples: `x2y3`, `x1p1y0q1`, `x^2py`, `pyq`.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        if cleaned == "1" {
            return Ok(RawTerm { ex: 0, ey: 0, px: 0, qy: 0 });
        }
        let order = ['x', 'p', 'y', 'q'];
        let mut exps = [None::<i64>; 4];
        let mut last = None::<usize>;
        let chars: Vec<char> = cleaned.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let var = chars[i];
            let slot = order
                .iter()
                .position(|&v| v == var)
                .ok_or_else(|| Error::Parse(format!("unexpected {var:?} in monomial {s:?}")))?;
            if last.is_some_and(|l| slot <= l) {
                return Err(Error::Parse(format!(
                    "factors of {s:?} must appear once each in the order x, p, y, q"
                )));
            }
            last = Some(slot);
            i += 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
            }
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let e = if digits.is_empty() {
                1
            } else {
                digits.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?
            };
            exps[slot] = Some(e);
        }
        let reflect = |e: Option<i64>, name: char| -> Result<u32> {
            match e {
                None => Ok(0),
                Some(v) if v >= 0 => Ok((v % 2) as u32),
                Some(_) => Err(Error::Parse(format!("negative exponent on reflection {name}"))),
            }
        };
        Ok(RawTerm {
            ex: exps[0].unwrap_or(0),
            px: reflect(exps[1], 'p')?,
            ey: exps[2].unwrap_or(0),
            qy: reflect(exps[3], 'q')?,
        })
    }
}

impl RawTerm {
    /// Reduces exponents by the lattice relations. Returns the canonical term
    /// and whether anything changed.
    pub fn reduce(&self, lattice: &LatticeSpec) -> Result<(MonomialTerm, bool)> {
        if (self.px | self.qy) != 0 && !lattice.allow_reflection {
            return Err(Error::InvalidPolynomial(
                "reflection factor on a lattice without reflections".into(),
            ));
        }
        let (ex, ey) = if lattice.allow_reflection {
            (self.ex.rem_euclid(lattice.l as i64) as usize, self.ey.rem_euclid(lattice.m as i64) as usize)
        } else {
            lattice.reduce_translation(self.ex, self.ey)
        };
        let term = MonomialTerm { ex, ey, px: self.px == 1, qy: self.qy == 1 };
        let changed = ex as i64 != self.ex || ey as i64 != self.ey;
        Ok((term, changed))
    }
}

/// A GF(2) polynomial in the lattice generators: a set of distinct monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PolySpec {
    terms: Vec<MonomialTerm>,
}

impl PolySpec {
    /// Rejects repeated monomials; they would silently cancel.
    pub fn new(terms: Vec<MonomialTerm>) -> Result<Self> {
        let mut seen = terms.clone();
        seen.sort();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPolynomial(format!("repeated monomial {}", w[0])));
        }
        Ok(Self { terms })
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self { terms: vec![MonomialTerm::ONE] }
    }

    pub fn terms(&self) -> &[MonomialTerm] {
        &self.terms
    }

    pub fn has_reflection(&self) -> bool {
        self.terms.iter().any(MonomialTerm::has_reflection)
    }

    /// Parses terms such as `["x2y3", "x4"]` and reduces them on `lattice`.
    /// Terms that needed reduction are logged and reported.
    pub fn parse(lattice: &LatticeSpec, terms: &[impl AsRef<str>]) -> Result<(Self, Vec<String>)> {
        let mut out = Vec::with_capacity(terms.len());
        let mut warnings = Vec::new();
        for t in terms {
            let raw: RawTerm = t.as_ref().parse()?;
            let (term, changed) = raw.reduce(lattice)?;
            if changed {
                let msg = format!("term {:?} reduced to {}", t.as_ref(), term);
                log::warn!("{msg}");
                warnings.push(msg);
            }
            out.push(term);
        }
        Ok((Self::new(out)?, warnings))
    }

    fn check_terms(&self, lattice: &LatticeSpec) -> Result<()> {
        for t in &self.terms {
            if t.ex >= lattice.l || t.ey >= lattice.m {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent out of range in {t} for l={} m={}",
                    lattice.l, lattice.m
                )));
            }
            if t.has_reflection() && !lattice.allow_reflection {
                return Err(Error::InvalidPolynomial(format!(
                    "reflection factor in {t} on a translation lattice"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn term_perm(lattice: &LatticeSpec, t: &MonomialTerm, gens: &[Perm; 4]) -> Perm {
    let mut perm = perm_power(&gens[0], t.ex);
    if t.px {
        perm = perm_product(&perm, &gens[1]);
    }
    perm = perm_product(&perm, &perm_power(&gens[2], t.ey));
    if t.qy {
        perm = perm_product(&perm, &gens[3]);
    }
    debug_assert_eq!(perm.len(), lattice.cells());
    perm
}

/// Evaluates `poly` as the GF(2) sum of its monomial matrices.
pub fn eval_poly(lattice: &LatticeSpec, poly: &PolySpec) -> Result<BinMatrix> {
    lattice.validate()?;
    poly.check_terms(lattice)?;
    let n = lattice.cells();
    let gens = [lattice.perm_x(), lattice.perm_p(), lattice.perm_y(), lattice.perm_q()];
    let mut out = BinMatrix::zeros(n, n);
    for t in poly.terms() {
        for (r, c) in term_perm(lattice, t, &gens).into_iter().enumerate() {
            out.set(r, c, !out.get(r, c));
        }
    }
    Ok(out)
}

/// Maps every variable to its inverse.
pub fn antipode(lattice: &LatticeSpec, poly: &PolySpec) -> Result<PolySpec> {
    if poly.has_reflection() || lattice.allow_reflection {
        return Err(Error::ReflectionUnsupported("antipode"));
    }
    poly.check_terms(lattice)?;
    let terms = poly
        .terms()
        .iter()
        .map(|t| {
            let (ex, ey) = lattice.inverse((t.ex, t.ey));
            MonomialTerm::translation(ex, ey)
        })
        .collect();
    PolySpec::new(terms)
}

/// `u = f + z·antipode(g)` in the group algebra of (translations × {1, z}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackPolynomial {
    pub f: PolySpec,
    pub g: PolySpec,
}

/// Group-algebra element over (translations × Z₂), as a bit vector indexed
/// by `layer * lm + cell`.
fn algebra_element(lattice: &LatticeSpec, layer0: &PolySpec, layer1: &PolySpec) -> BinVector {
    let n = lattice.cells();
    let mut v = BinVector::zeros(2 * n);
    for t in layer0.terms() {
        v.flip(lattice.cell(t.ex, t.ey));
    }
    for t in layer1.terms() {
        v.flip(n + lattice.cell(t.ex, t.ey));
    }
    v
}

/// Multiplies a group-algebra element by the monomial `x^a y^b z^c`.
fn translate(lattice: &LatticeSpec, v: &BinVector, by: (usize, usize), z: bool) -> BinVector {
    let n = lattice.cells();
    let mut out = BinVector::zeros(2 * n);
    for i in v.ones_iter() {
        let (layer, cell) = (i / n, i % n);
        let moved = lattice.compose(lattice.coords(cell), by);
        let new_layer = layer ^ usize::from(z);
        out.flip(new_layer * n + lattice.cell(moved.0, moved.1));
    }
    out
}

/// Dimension of the quotient of the group algebra by the ideal `⟨u, ū⟩`,
/// computed as `2lm − rank` of the span of all translates of `u` and `ū`.
pub fn quotient_dim(lattice: &LatticeSpec, u: &StackPolynomial) -> Result<usize> {
    lattice.validate()?;
    if lattice.allow_reflection || u.f.has_reflection() || u.g.has_reflection() {
        return Err(Error::ReflectionUnsupported("quotient_dim"));
    }
    let n = lattice.cells();
    let f_bar = antipode(lattice, &u.f)?;
    let g_bar = antipode(lattice, &u.g)?;
    // u = f + z ḡ, ū = f̄ + z g
    let u_vec = algebra_element(lattice, &u.f, &g_bar);
    let u_bar = algebra_element(lattice, &f_bar, &u.g);
    let mut rows = Vec::with_capacity(4 * n);
    for cell in 0..n {
        let by = lattice.coords(cell);
        for z in [false, true] {
            rows.push(translate(lattice, &u_vec, by, z));
            rows.push(translate(lattice, &u_bar, by, z));
        }
    }
    let v = BinMatrix::from_rows(2 * n, &rows)?;
    Ok(2 * n - v.rank())
}
