//! Dense bit-packed vectors and matrices over GF(2).
//!
//! Rows are stored as contiguous `u64` words, least significant bit first.
//! Bits past the logical length of a row are always zero, so word-level
//! operations (xor, popcount, equality) never need masking.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinVector {
    len: usize,
    words: Vec<u64>,
}

impl BinVector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self { len, words: vec![u64::MAX; words_for(len)] };
        v.clear_tail();
        v
    }

    /// Builds a vector with ones at the given positions. Repeated indices cancel.
    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Wraps raw words; bits beyond `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BinVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn xor_assign(&mut self, other: &BinVector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        xor_into(&mut self.words, &other.words);
    }

    pub fn xor(&self, other: &BinVector) -> BinVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Positions of set bits in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.ones_iter().collect()
    }

    /// Applies a column permutation: bit `perm[i]` of `self` lands at position `i`.
    pub fn permuted(&self, perm: &[usize]) -> BinVector {
        let mut out = BinVector::zeros(self.len);
        for (i, &src) in perm.iter().enumerate() {
            if self.get(src) {
                out.set(i, true);
            }
        }
        out
    }

    /// Renders as a string of `0`/`1` characters.
    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn parse_bit_string(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in 0/1 row"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

impl fmt::Debug for BinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinVector[{}]", self.to_bit_string())
    }
}

/// A dense matrix over GF(2) with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks the given vectors as rows. All must share `cols` bits.
    pub fn from_rows(cols: usize, rows: &[BinVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} bits, expected {cols}",
                    r.len()
                )));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Builds from a 0/1 table; rows must have equal length.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("ragged row {i}")));
            }
            for (j, &b) in r.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BinVector {
        BinVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<BinVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).support()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * s);
            xor_into(&mut tail[..s], &head[src * s..(src + 1) * s]);
        } else {
            let (head, tail) = self.data.split_at_mut(src * s);
            xor_into(&mut head[dst * s..(dst + 1) * s], &tail[..s]);
        }
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones_iter() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn matmul(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for r in 0..self.rows {
            let dst = &mut out.data[r * s..(r + 1) * s];
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut rest = w;
                while rest != 0 {
                    let k = wi * WORD + rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    xor_into(dst, other.row_words(k));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &BinVector) -> Result<BinVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = BinVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Entry-wise sum (xor) of two equally sized matrices.
    pub fn add(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        xor_into(&mut out.data, &other.data);
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Result<BinMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut result = BinMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &BinMatrix) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in self.row(i).ones_iter() {
                for k in 0..other.rows {
                    for l in other.row(k).ones_iter() {
                        out.set(i * other.rows + k, j * other.cols + l, true);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[a | b | ...]`.
    pub fn hstack(blocks: &[&BinMatrix]) -> Result<BinMatrix> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch("hstack blocks differ in row count".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = BinMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for r in 0..rows {
                for c in b.row(r).ones_iter() {
                    out.set(r, offset + c, true);
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&BinMatrix]) -> Result<BinMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::DimensionMismatch("vstack blocks differ in column count".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = BinMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for b in blocks {
            out.data[r0 * out.stride..(r0 + b.rows) * out.stride].copy_from_slice(&b.data);
            r0 += b.rows;
        }
        Ok(out)
    }

    /// Reduced row echelon form. Pivots are chosen as the first row (from the
    /// current pivot row down) holding a one in each column, scanning columns
    /// left to right.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(prow, r);
            for r2 in 0..m.rows {
                if r2 != prow && m.get(r2, c) {
                    m.xor_row_into(prow, r2);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Echelon { matrix: m, pivots }
    }

    /// Row echelon form with pivot columns taken in the order given by
    /// `order`, which must list each column at most once. Columns missing
    /// from `order` never receive a pivot.
    pub fn rref_in_order(&self, order: &[usize]) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for &c in order {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(prow, r);
            for r2 in 0..m.rows {
                if r2 != prow && m.get(r2, c) {
                    m.xor_row_into(prow, r2);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(r) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, r);
            for r2 in rank + 1..m.rows {
                if m.get(r2, c) {
                    m.xor_row_into(rank, r2);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of `{v : self · v = 0}`, one vector per free column of the RREF.
    pub fn nullspace_basis(&self) -> Vec<BinVector> {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BinVector::zeros(self.cols);
                v.set(free, true);
                for (i, &p) in ech.pivots.iter().enumerate() {
                    if ech.matrix.get(i, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Whether `v` lies in the row space of `self`.
    pub fn in_rowspace(&self, v: &BinVector) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(RowSpace::new(self).contains(v))
    }

    /// Restricts to the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    pub fn to_dense_string(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r).to_bit_string())?;
        }
        Ok(())
    }
}

/// Output of [`BinMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced matrix; rows past `pivots.len()` are zero.
    pub matrix: BinMatrix,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Precomputed reduced basis for repeated row-space membership queries.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(m: &BinMatrix) -> Self {
        let ech = m.rref();
        let basis = (0..ech.rank()).map(|r| ech.matrix.row_words(r).to_vec()).collect();
        Self { cols: m.cols(), basis, pivots: ech.pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `words` in place against the basis; the result is zero iff the
    /// input was in the row space.
    pub fn reduce_words(&self, words: &mut [u64]) {
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if (words[p / WORD] >> (p % WORD)) & 1 == 1 {
                xor_into(words, row);
            }
        }
    }

    pub fn contains_words(&self, words: &[u64]) -> bool {
        let mut w = words.to_vec();
        self.reduce_words(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, v: &BinVector) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        self.contains_words(v.words())
    }
}

/// Basis built one vector at a time. Each stored vector is reduced against
/// all earlier ones, and its pivot is its lowest set bit after reduction.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    words: usize,
    vectors: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl IncrementalBasis {
    pub fn new(bits: usize) -> Self {
        Self { words: words_for(bits), vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` in place against the basis.
    pub fn reduce(&self, v: &mut [u64]) {
        for (b, &p) in self.vectors.iter().zip(&self.pivots) {
            if (v[p / WORD] >> (p % WORD)) & 1 == 1 {
                xor_into(v, b);
            }
        }
    }

    /// Adds `v` if it is independent of the current span. Returns whether it was added.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.words);
        let mut r = v.to_vec();
        self.reduce(&mut r);
        match r.iter().position(|&w| w != 0) {
            Some(wi) => {
                let p = wi * WORD + r[wi].trailing_zeros() as usize;
                self.vectors.push(r);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut r = v.to_vec();
        self.reduce(&mut r);
        r.iter().all(|&w| w == 0)
    }
}
