//! Minimum distance of CSS codes.
//!
//! The Z-distance of a CSS pair is the least weight of a vector in
//! `ker(H_X)` outside `rowspace(H_Z)`. For the stacked codes both matrices
//! are `H`, so one computation covers X and Z.
//!
//! [`distance_exact`] is a Brouwer–Zimmermann enumeration: the kernel is put
//! in systematic form on a sequence of disjoint information sets, and all
//! combinations of `t` generator rows are visited for growing `t`. After
//! level `t` every unvisited codeword has at least `t + 1 - δ_j` ones on
//! the `j`-th information set, where `δ_j` is that set's rank deficiency,
//! which gives a lower bound that eventually meets the best logical found.
//!
//! [`distance_randomized`] samples random information sets and keeps the
//! lightest logical among the systematic rows and their pairwise sums.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::StackedCode;
use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, BinVector, RowSpace};
use crate::seed;

/// Default cap on codewords visited by the exact search.
pub const DEFAULT_EXACT_BUDGET: u64 = 2_000_000_000;

/// Iterations per independently seeded batch of the randomized search.
pub const BATCH: u64 = 32;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effort {
    /// Codewords visited by the exact enumeration.
    pub enumerated: u64,
    /// Random information sets drawn.
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub d_upper: usize,
    pub exact: bool,
    pub witness: BinVector,
    pub effort: Effort,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome {
    Found(DistanceResult),
    /// No logical of weight `<= w_max` exists.
    NotFoundBelow(usize),
}

/// Checks and stabilizers of one Pauli type: logicals live in
/// `ker(checks) \ rowspace(stabilizers)`.
#[derive(Debug, Clone)]
pub struct LogicalSpace {
    n: usize,
    kernel: BinMatrix,
    stabilizers: RowSpace,
    checks: BinMatrix,
}

impl LogicalSpace {
    pub fn new(checks: &BinMatrix, stabilizers: &BinMatrix) -> Result<Self> {
        if checks.cols() != stabilizers.cols() {
            return Err(Error::DimensionMismatch(format!(
                "checks have {} columns, stabilizers {}",
                checks.cols(),
                stabilizers.cols()
            )));
        }
        if !checks.matmul(&stabilizers.transpose())?.is_zero() {
            return Err(Error::InvalidArgument("stabilizers do not commute with checks".into()));
        }
        let n = checks.cols();
        let kernel = BinMatrix::from_rows(n, &checks.nullspace_basis())?;
        let stabilizers = RowSpace::new(stabilizers);
        if kernel.rows() == stabilizers.dim() {
            return Err(Error::InvalidArgument("code has no logical qubits".into()));
        }
        Ok(Self { n, kernel, stabilizers, checks: checks.clone() })
    }

    pub fn of_code(code: &StackedCode) -> Result<Self> {
        Self::new(&code.h, &code.h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.rows()
    }

    pub fn k(&self) -> usize {
        self.kernel.rows() - self.stabilizers.dim()
    }

    fn is_logical_words(&self, words: &[u64], scratch: &mut Vec<u64>) -> bool {
        scratch.clear();
        scratch.extend_from_slice(words);
        self.stabilizers.reduce_words(scratch);
        scratch.iter().any(|&w| w != 0)
    }

    /// Fails unless `w` is a nontrivial logical.
    pub fn verify_witness(&self, w: &BinVector) -> Result<()> {
        if w.len() != self.n || !self.checks.mul_vec(w)?.is_zero() {
            return Err(Error::Internal("witness is not in the check kernel".into()));
        }
        if self.stabilizers.contains(w) {
            return Err(Error::Internal("witness is a stabilizer".into()));
        }
        Ok(())
    }
}

fn weight(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Systematic generators on disjoint information sets, with each set's rank
/// deficiency.
fn information_sets(kernel: &BinMatrix) -> Vec<(BinMatrix, usize)> {
    let (n, dim) = (kernel.cols(), kernel.rows());
    let mut used = vec![false; n];
    let mut out = Vec::new();
    loop {
        let fresh: Vec<usize> = (0..n).filter(|&c| !used[c]).collect();
        if fresh.is_empty() {
            break;
        }
        let order: Vec<usize> = fresh.iter().copied().chain((0..n).filter(|&c| used[c])).collect();
        let ech = kernel.rref_in_order(&order);
        let fresh_pivots: Vec<usize> = ech.pivots.iter().copied().filter(|&c| !used[c]).collect();
        if fresh_pivots.is_empty() {
            break;
        }
        for &c in &fresh_pivots {
            used[c] = true;
        }
        out.push((ech.matrix, dim - fresh_pivots.len()));
    }
    out
}

struct Best {
    weight: usize,
    witness: Option<Vec<u64>>,
}

/// Visits all `t`-row combinations of `g`, returning the lightest logical
/// found with weight `<= bound`, first in enumeration order.
fn enumerate_level(space: &LogicalSpace, g: &BinMatrix, t: usize, bound: &AtomicUsize) -> Best {
    let rows = g.rows();
    let words = g.row_words(0).len();
    let branches: Vec<Best> = (0..rows)
        .into_par_iter()
        .map(|first| {
            let mut best = Best { weight: usize::MAX, witness: None };
            let mut scratch = Vec::with_capacity(words);
            let mut acc = vec![0u64; words * t];
            acc[..words].copy_from_slice(g.row_words(first));
            let mut idx = vec![0usize; t];
            idx[0] = first;
            let visit = |v: &[u64], best: &mut Best, scratch: &mut Vec<u64>| {
                let w = weight(v);
                if w < best.weight && w <= bound.load(Ordering::Relaxed) && space.is_logical_words(v, scratch) {
                    best.weight = w;
                    best.witness = Some(v.to_vec());
                    bound.fetch_min(w, Ordering::Relaxed);
                }
            };
            if t == 1 {
                visit(&acc[..words], &mut best, &mut scratch);
                return best;
            }
            // iterative DFS over idx[1..t], strictly increasing
            let mut depth = 1;
            idx[1] = first;
            loop {
                idx[depth] += 1;
                if idx[depth] + (t - 1 - depth) >= rows {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                    continue;
                }
                let (prev, cur) = acc.split_at_mut(depth * words);
                let cur = &mut cur[..words];
                let row = g.row_words(idx[depth]);
                for ((c, p), r) in cur.iter_mut().zip(&prev[(depth - 1) * words..]).zip(row) {
                    *c = p ^ r;
                }
                if depth + 1 == t {
                    visit(cur, &mut best, &mut scratch);
                } else {
                    depth += 1;
                    idx[depth] = idx[depth - 1];
                }
            }
            best
        })
        .collect();
    branches.into_iter().fold(Best { weight: usize::MAX, witness: None }, |a, b| {
        if b.weight < a.weight {
            b
        } else {
            a
        }
    })
}

/// Exact distance of a stacked code with the default budget.
pub fn distance_exact(code: &StackedCode, w_max: usize) -> Result<ExactOutcome> {
    distance_exact_with(&LogicalSpace::of_code(code)?, w_max, DEFAULT_EXACT_BUDGET)
}

/// Exact distance. Fails with [`Error::BudgetExhausted`] when the next
/// enumeration level would push the visited count past `budget`; the error
/// carries the bounds proven so far.
pub fn distance_exact_with(space: &LogicalSpace, w_max: usize, budget: u64) -> Result<ExactOutcome> {
    let sets = information_sets(&space.kernel);
    let dim = space.kernel_dim();
    let bound = AtomicUsize::new(usize::MAX);
    let mut best = Best { weight: usize::MAX, witness: None };
    let mut effort = Effort::default();
    let lower = |done: usize, t: usize| -> usize {
        sets.iter()
            .enumerate()
            .map(|(j, &(_, def))| {
                let level = if j < done { t + 1 } else { t };
                level.saturating_sub(def)
            })
            .sum()
    };
    let finish = |best: Best, effort: Effort| -> Result<ExactOutcome> {
        match best.witness {
            Some(words) if best.weight <= w_max => {
                let witness = BinVector::from_words(space.n, words);
                space.verify_witness(&witness)?;
                Ok(ExactOutcome::Found(DistanceResult { d_upper: best.weight, exact: true, witness, effort }))
            }
            _ => Ok(ExactOutcome::NotFoundBelow(w_max)),
        }
    };
    for t in 1..=dim {
        let active: Vec<usize> = (0..sets.len()).filter(|&j| sets[j].1 < t + 1).collect();
        let cost: u64 = active.iter().map(|_| binomial(dim, t)).fold(0u64, u64::saturating_add);
        if effort.enumerated.saturating_add(cost) > budget {
            log::warn!("exact distance budget exhausted at level {t}");
            return Err(Error::BudgetExhausted {
                lower: lower(0, t - 1),
                upper: (best.weight != usize::MAX).then_some(best.weight),
            });
        }
        for &j in &active {
            let found = enumerate_level(space, &sets[j].0, t, &bound);
            effort.enumerated += binomial(dim, t);
            if found.weight < best.weight {
                best = found;
            }
            // inactive sets contribute zero at this level either way
            let lb = lower(j + 1, t);
            log::debug!("level {t} set {j}: lower {lb}, best {}", best.weight);
            if lb >= best.weight || lb > w_max {
                return finish(best, effort);
            }
        }
    }
    finish(best, effort)
}

/// Randomized upper bound for a stacked code.
pub fn distance_randomized(code: &StackedCode, iters: u64, seed: u64) -> Result<DistanceResult> {
    distance_randomized_from(&LogicalSpace::of_code(code)?, iters, seed, None)
}

/// Randomized upper bound, optionally starting from a known logical.
///
/// Iterations are grouped in batches of [`BATCH`]; batch `b` draws from its
/// own stream, so the result only depends on `(seed, iters)` and grows no
/// worse as `iters` increases.
pub fn distance_randomized_from(
    space: &LogicalSpace,
    iters: u64,
    seed: u64,
    initial: Option<BinVector>,
) -> Result<DistanceResult> {
    if iters == 0 && initial.is_none() {
        return Err(Error::InvalidArgument("need at least one iteration".into()));
    }
    if let Some(w) = &initial {
        space.verify_witness(w)?;
    }
    let batches = iters.div_ceil(BATCH);
    let found: Vec<Best> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH.min(iters - b * BATCH);
            random_batch(space, seed, b, count)
        })
        .collect();
    let mut best = match initial {
        Some(w) => Best { weight: w.weight(), witness: Some(w.words().to_vec()) },
        None => Best { weight: usize::MAX, witness: None },
    };
    for f in found {
        if f.weight < best.weight {
            best = f;
        }
    }
    let words = best.witness.ok_or_else(|| Error::Internal("no logical found".into()))?;
    let witness = BinVector::from_words(space.n, words);
    space.verify_witness(&witness)?;
    Ok(DistanceResult {
        d_upper: best.weight,
        exact: false,
        witness,
        effort: Effort { enumerated: 0, iterations: iters },
    })
}

fn random_batch(space: &LogicalSpace, seed: u64, batch: u64, count: u64) -> Best {
    let mut rng = seed::rng(seed, "distance", batch);
    let mut order: Vec<usize> = (0..space.n).collect();
    let mut best = Best { weight: usize::MAX, witness: None };
    let mut scratch = Vec::new();
    let mut pair = Vec::new();
    for _ in 0..count {
        order.shuffle(&mut rng);
        let g = space.kernel.rref_in_order(&order).matrix;
        let mut consider = |v: &[u64], best: &mut Best| {
            let w = weight(v);
            if w < best.weight && space.is_logical_words(v, &mut scratch) {
                best.weight = w;
                best.witness = Some(v.to_vec());
            }
        };
        for i in 0..g.rows() {
            consider(g.row_words(i), &mut best);
        }
        for i in 0..g.rows() {
            for j in i + 1..g.rows() {
                pair.clear();
                pair.extend(g.row_words(i).iter().zip(g.row_words(j)).map(|(a, b)| a ^ b));
                consider(&pair, &mut best);
            }
        }
    }
    best
}
