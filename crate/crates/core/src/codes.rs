//! Base codes `(A, B)` and the stacked self-dual codes built from them.
//!
//! Given a base code with `h_X = (A | B)` and `h_Z = (Bᵀ | Aᵀ)`, the stacked
//! code uses the same check matrix for both Pauli types:
//!
//! ```text
//! H = ( A   Bᵀ  Aᵀ  B  )  = ( U | Uᵀ ),   U = I₂ ⊗ A + σx ⊗ Bᵀ
//!     ( Bᵀ  A   B   Aᵀ )
//! ```
//!
//! Qubit columns come in four blocks of `lm` cells, in the order above.
//! Block `b` holds sublattice `b / 2` of layer `b % 2`; inside a block the
//! cell index is `jx * m + jy`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{self, LatticeSpec, PolySpec, StackPolynomial};
use crate::error::{Commutator, Error, Result};
use crate::gf2::{BinMatrix, BinVector, IncrementalBasis, RowSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Bicycle,
    Bb,
    TwistedBb,
    Reflection,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Bicycle => "bicycle",
            Family::Bb => "bb",
            Family::TwistedBb => "twisted-bb",
            Family::Reflection => "reflection",
        }
    }

    pub fn is_translation(&self) -> bool {
        !matches!(self, Family::Reflection)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bicycle" => Ok(Family::Bicycle),
            "bb" => Ok(Family::Bb),
            "twisted-bb" => Ok(Family::TwistedBb),
            "reflection" => Ok(Family::Reflection),
            other => Err(Error::InvalidSpec {
                field: "family".into(),
                reason: format!("unknown family {other:?}"),
            }),
        }
    }
}

/// Declarative description of a base code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub family: Family,
    pub lattice: LatticeSpec,
    pub a: PolySpec,
    pub b: PolySpec,
    pub name: Option<String>,
}

impl CodeSpec {
    /// Checks that the family, lattice and polynomials agree with each other.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: String| Error::InvalidSpec { field: field.into(), reason };
        self.lattice.validate().map_err(|e| bad("lattice", e.to_string()))?;
        let reflective = self.a.has_reflection() || self.b.has_reflection();
        match self.family {
            Family::Bicycle if self.lattice.m != 1 => {
                return Err(bad("m", format!("bicycle codes need m = 1, got {}", self.lattice.m)))
            }
            Family::Bb if self.lattice.m == 1 => {
                return Err(bad("m", "m = 1 describes a bicycle code".into()))
            }
            Family::TwistedBb if self.lattice.twist == 0 => {
                return Err(bad("gamma", "twisted codes need a positive twist".into()))
            }
            Family::Reflection if !reflective => {
                return Err(bad("a_terms", "reflection codes need a p or q factor".into()))
            }
            _ => {}
        }
        if self.family != Family::TwistedBb && self.lattice.twist != 0 {
            return Err(bad("gamma", format!("family {} takes no twist", self.family)));
        }
        if (self.family == Family::Reflection) != self.lattice.allow_reflection {
            return Err(bad("family", "reflection lattice and family disagree".into()));
        }
        if reflective && self.family != Family::Reflection {
            return Err(bad("a_terms", "p/q factors only belong to reflection codes".into()));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            format!("{} l={} m={} A={} B={}", self.family, self.lattice.l, self.lattice.m, self.a, self.b)
        })
    }

    /// Builds `A` and `B` and checks the base-code conditions.
    pub fn base_code(&self) -> Result<BaseCode> {
        self.validate()?;
        let a = algebra::eval_poly(&self.lattice, &self.a)?;
        let b = algebra::eval_poly(&self.lattice, &self.b)?;
        validate_base(a, b)
    }

    /// Full construction: base code, stacking, logicals and parity.
    ///
    /// Reflection codes that fail a base-code commutator are still accepted
    /// when the stacked block is normal, `U Uᵀ = Uᵀ U`, which is all that
    /// `H Hᵀ = 0` needs.
    pub fn build(&self) -> Result<StackedCode> {
        match self.base_code() {
            Ok(base) => stack(&base),
            Err(Error::CommutatorViolation(_)) if self.family == Family::Reflection => {
                let a = algebra::eval_poly(&self.lattice, &self.a)?;
                let b = algebra::eval_poly(&self.lattice, &self.b)?;
                stack_matrices(&a, &b)
            }
            Err(e) => Err(e),
        }
    }

    /// `u = f + z·ḡ` with `f = A`, `g = B`, for translation families.
    pub fn stack_polynomial(&self) -> Result<StackPolynomial> {
        if !self.family.is_translation() {
            return Err(Error::ReflectionUnsupported("stack polynomial"));
        }
        Ok(StackPolynomial { f: self.a.clone(), g: self.b.clone() })
    }
}

/// A validated base code.
#[derive(Debug, Clone)]
pub struct BaseCode {
    pub a: BinMatrix,
    pub b: BinMatrix,
    pub h_x: BinMatrix,
    pub h_z: BinMatrix,
}

fn commutes(x: &BinMatrix, y: &BinMatrix) -> Result<bool> {
    Ok(x.matmul(y)? == y.matmul(x)?)
}

/// Accepts `(A, B)` iff `[A,B] = [A,Aᵀ] = [B,Bᵀ] = 0`.
pub fn validate_base(a: BinMatrix, b: BinMatrix) -> Result<BaseCode> {
    if a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, B is {}x{}; both must be square of equal size",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if !commutes(&a, &b)? {
        return Err(Error::CommutatorViolation(Commutator::AB));
    }
    let (at, bt) = (a.transpose(), b.transpose());
    if !commutes(&a, &at)? {
        return Err(Error::CommutatorViolation(Commutator::AAt));
    }
    if !commutes(&b, &bt)? {
        return Err(Error::CommutatorViolation(Commutator::BBt));
    }
    let h_x = BinMatrix::hstack(&[&a, &b])?;
    let h_z = BinMatrix::hstack(&[&bt, &at])?;
    if !h_x.matmul(&h_z.transpose())?.is_zero() {
        return Err(Error::Internal("h_X h_Z^T != 0 for a commuting base".into()));
    }
    Ok(BaseCode { a, b, h_x, h_z })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// A self-dual CSS code with `H_X = H_Z = H`.
#[derive(Debug, Clone)]
pub struct StackedCode {
    /// Physical qubits, `4·lm`.
    pub n: usize,
    /// Cells per block, `lm`.
    pub block: usize,
    pub h: BinMatrix,
    pub rank: usize,
    pub k: usize,
    /// Coset representatives of `ker(H) / rowspace(H)`.
    pub logicals: Vec<BinVector>,
    pub parity: Parity,
}

impl StackedCode {
    pub fn rowspace(&self) -> RowSpace {
        RowSpace::new(&self.h)
    }

    pub fn max_check_weight(&self) -> usize {
        (0..self.h.rows()).map(|r| self.h.row_weight(r)).max().unwrap_or(0)
    }

    /// Whether `v` is a nontrivial logical: in `ker(H)` but not a stabilizer.
    pub fn is_logical(&self, v: &BinVector) -> Result<bool> {
        Ok(self.h.mul_vec(v)?.is_zero() && !self.h.in_rowspace(v)?)
    }
}

/// Stacks a base code into the self-dual code `H = (U | Uᵀ)`.
pub fn stack(base: &BaseCode) -> Result<StackedCode> {
    stack_matrices(&base.a, &base.b).map_err(|e| match e {
        Error::CommutatorViolation(_) => Error::Internal("U U^T != U^T U for a valid base code".into()),
        e => e,
    })
}

/// Stacks `(A, B)` without the base-code checks; fails unless `U` is normal.
pub fn stack_matrices(a: &BinMatrix, b: &BinMatrix) -> Result<StackedCode> {
    if a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols() {
        return Err(Error::DimensionMismatch("A and B must be square of equal size".into()));
    }
    let sx = BinMatrix::from_dense(&[vec![0, 1], vec![1, 0]])?;
    let u = BinMatrix::identity(2).kron(a).add(&sx.kron(&b.transpose()))?;
    let ut = u.transpose();
    if u.matmul(&ut)? != ut.matmul(&u)? {
        return Err(Error::CommutatorViolation(Commutator::UUt));
    }
    let h = BinMatrix::hstack(&[&u, &ut])?;
    from_check_matrix(h, a.rows())
}

/// Wraps an arbitrary self-orthogonal check matrix.
pub fn from_check_matrix(h: BinMatrix, block: usize) -> Result<StackedCode> {
    if !h.matmul(&h.transpose())?.is_zero() {
        return Err(Error::Internal("H H^T != 0".into()));
    }
    let n = h.cols();
    let rank = h.rank();
    let k = n - 2 * rank;
    let logicals = logical_basis_of(&h, rank)?;
    if logicals.len() != k {
        return Err(Error::Internal(format!("found {} logicals, expected {k}", logicals.len())));
    }
    let parity = parity_of(&h);
    Ok(StackedCode { n, block, h, rank, k, logicals, parity })
}

fn logical_basis_of(h: &BinMatrix, rank: usize) -> Result<Vec<BinVector>> {
    let n = h.cols();
    let mut span = IncrementalBasis::new(n);
    for r in 0..h.rows() {
        span.insert(h.row_words(r));
    }
    debug_assert_eq!(span.len(), rank);
    let mut out = Vec::new();
    for v in h.nullspace_basis() {
        if span.insert(v.words()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// `k` representatives of distinct nontrivial logical classes.
pub fn logical_basis(code: &StackedCode) -> Vec<BinVector> {
    code.logicals.clone()
}

fn parity_of(h: &BinMatrix) -> Parity {
    if RowSpace::new(h).contains(&BinVector::ones(h.cols())) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Odd iff the all-ones vector is outside `rowspace(H)`. Weight parity is
/// the functional `v ↦ ⟨1, v⟩`, which vanishes on `ker(H)` exactly when
/// `1 ∈ rowspace(H)`.
pub fn classify_parity(code: &StackedCode) -> Parity {
    parity_of(&code.h)
}

/// A qubit site of the stacked lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub sublattice: usize,
    pub jx: usize,
    pub jy: usize,
    pub layer: usize,
}

impl Site {
    pub fn from_column(lattice: &LatticeSpec, col: usize) -> Site {
        let cells = lattice.cells();
        let (block, cell) = (col / cells, col % cells);
        let (jx, jy) = lattice.coords(cell);
        Site { sublattice: block / 2, jx, jy, layer: block % 2 }
    }

    pub fn column(&self, lattice: &LatticeSpec) -> usize {
        (2 * self.sublattice + self.layer) * lattice.cells() + lattice.cell(self.jx, self.jy)
    }
}

/// Support of the seed stabilizer (row 0 of `H`) as lattice sites.
pub fn seed_stabilizer_support(spec: &CodeSpec) -> Result<Vec<Site>> {
    if !spec.family.is_translation() {
        return Err(Error::ReflectionUnsupported("seed stabilizer picture"));
    }
    let code = spec.build()?;
    Ok(code.h.row(0).ones_iter().map(|c| Site::from_column(&spec.lattice, c)).collect())
}
