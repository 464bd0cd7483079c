//! Search over base-code polynomials, ranked by `kd²/n`.
//!
//! Candidates are pairs of `t`-term polynomials on every lattice in the
//! requested ranges. Lattices take turns in the stream so a small budget is
//! spread over all sizes. Small lattices are enumerated exhaustively in
//! lexicographic order; large ones are sampled from a seeded stream.
//!
//! Candidates are identified up to moves that give the same code after
//! relabeling qubits:
//!
//! - translation families: `(A, B) → (gA, g⁻¹B)` for any translation `g`
//!   (a column shift of `H`), and the inversions `x → x⁻¹`, `y → y⁻¹` that
//!   are lattice automorphisms (only the joint one for twisted lattices);
//! - reflection family: conjugation of both polynomials by any group element.
//!
//! The representative is the lexicographically least image.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{LatticeSpec, MonomialTerm, PolySpec};
use crate::codes::{CodeSpec, Family, Parity};
use crate::distance::{self, ExactOutcome, LogicalSpace};
use crate::error::{Error, Result};
use crate::seed;

/// Lattices with at most this many raw candidates are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 18;

/// Consecutive duplicate draws after which a sampled lattice counts as spent.
const MAX_MISSES: u32 = 4096;

/// Candidates evaluated between frontier merges.
const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityFilter {
    #[default]
    Any,
    OddOnly,
    EvenOnly,
}

impl ParityFilter {
    pub fn accepts(&self, p: Parity) -> bool {
        match self {
            ParityFilter::Any => true,
            ParityFilter::OddOnly => p == Parity::Odd,
            ParityFilter::EvenOnly => p == Parity::Even,
        }
    }
}

/// Inclusive range; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    pub fn single(v: usize) -> Self {
        Self { lo: v, hi: v }
    }

    fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSpace {
    pub family: Family,
    pub l: Span,
    pub m: Span,
    /// Twist range, only used by the twisted family; clipped to `1..m`.
    pub gamma: Span,
    /// Terms per polynomial.
    pub terms: usize,
    pub parity: ParityFilter,
    /// Candidates drawn from the stream.
    pub budget: u64,
    pub seed: u64,
    pub reduce_symmetry: bool,
    /// Restricts the stream to exactly this spec.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinned: Option<CodeSpec>,
}

impl SearchSpace {
    pub fn new(family: Family, l: Span, m: Span) -> Self {
        Self {
            family,
            l,
            m,
            gamma: Span::new(1, usize::MAX),
            terms: 2,
            parity: ParityFilter::Any,
            budget: 1000,
            seed: 0,
            reduce_symmetry: true,
            pinned: None,
        }
    }

    pub fn pinned(spec: CodeSpec) -> Self {
        let mut s = Self::new(spec.family, Span::single(spec.lattice.l), Span::single(spec.lattice.m));
        s.gamma = Span::single(spec.lattice.twist);
        s.budget = 1;
        s.pinned = Some(spec);
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms == 0 {
            return Err(Error::InvalidArgument("need at least one term per polynomial".into()));
        }
        if self.l.lo == 0 || self.m.lo == 0 {
            return Err(Error::InvalidArgument("lattice sizes start at 1".into()));
        }
        Ok(())
    }

    /// Lattices in stream order.
    pub fn lattices(&self) -> Vec<LatticeSpec> {
        let mut out = Vec::new();
        for l in self.l.iter() {
            for m in self.m.iter() {
                match self.family {
                    Family::Bicycle if m == 1 => out.push(LatticeSpec::periodic(l, 1)),
                    Family::Bb if m > 1 => out.push(LatticeSpec::periodic(l, m)),
                    Family::TwistedBb => {
                        let hi = self.gamma.hi.min(m.saturating_sub(1));
                        for g in self.gamma.lo.max(1)..=hi {
                            out.push(LatticeSpec::twisted(l, m, g));
                        }
                    }
                    Family::Reflection => out.push(LatticeSpec::reflection(l, m)),
                    _ => {}
                }
            }
        }
        out
    }

    /// Number of `(A, B)` pairs before symmetry reduction and filtering.
    pub fn raw_count(&self) -> u64 {
        self.lattices().iter().map(|lat| raw_pairs(lat, self.terms)).fold(0, u64::saturating_add)
    }
}

fn monomials(lat: &LatticeSpec) -> Vec<MonomialTerm> {
    let flags: &[(bool, bool)] =
        if lat.allow_reflection { &[(false, false), (true, false), (false, true), (true, true)] } else { &[(false, false)] };
    let mut out = Vec::new();
    for ex in 0..lat.l {
        for ey in 0..lat.m {
            for &(px, qy) in flags {
                out.push(MonomialTerm { ex, ey, px, qy });
            }
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn raw_pairs(lat: &LatticeSpec, terms: usize) -> u64 {
    let c = binomial(monomials(lat).len() as u64, terms as u64);
    c.saturating_mul(c)
}

type Key = (Vec<MonomialTerm>, Vec<MonomialTerm>);

fn sorted(mut v: Vec<MonomialTerm>) -> Vec<MonomialTerm> {
    v.sort();
    v
}

/// Lexicographically least equivalent `(A, B)`.
fn canonical(lat: &LatticeSpec, family: Family, a: &[MonomialTerm], b: &[MonomialTerm]) -> Key {
    let mut best: Option<Key> = None;
    let mut offer = |k: Key| {
        if best.as_ref().is_none_or(|b| k < *b) {
            best = Some(k);
        }
    };
    if family == Family::Reflection {
        let (l, m) = (lat.l, lat.m);
        // conjugation by x^i p^s y^j q^r
        let conj = |t: &MonomialTerm, i: usize, s: bool, j: usize, r: bool| {
            let mut ex = if t.px { (t.ex + 2 * i) % l } else { t.ex };
            let mut ey = if t.qy { (t.ey + 2 * j) % m } else { t.ey };
            if s {
                ex = (l - ex) % l;
            }
            if r {
                ey = (m - ey) % m;
            }
            MonomialTerm { ex, ey, px: t.px, qy: t.qy }
        };
        for i in 0..l {
            for j in 0..m {
                for s in [false, true] {
                    for r in [false, true] {
                        offer((
                            sorted(a.iter().map(|t| conj(t, i, s, j, r)).collect()),
                            sorted(b.iter().map(|t| conj(t, i, s, j, r)).collect()),
                        ));
                    }
                }
            }
        }
        return best.unwrap();
    }
    let flips: &[(i64, i64)] = match family {
        Family::Bicycle => &[(1, 1), (-1, 1)],
        Family::TwistedBb => &[(1, 1), (-1, -1)],
        _ => &[(1, 1), (-1, 1), (1, -1), (-1, -1)],
    };
    for &(sx, sy) in flips {
        let flip = |t: &MonomialTerm| {
            let (ex, ey) = lat.reduce_translation(sx * t.ex as i64, sy * t.ey as i64);
            MonomialTerm::translation(ex, ey)
        };
        let fa: Vec<_> = a.iter().map(flip).collect();
        let fb: Vec<_> = b.iter().map(flip).collect();
        for c in 0..lat.cells() {
            let g = lat.coords(c);
            let gi = lat.inverse(g);
            let shift = |t: &MonomialTerm, by: (usize, usize)| {
                let (ex, ey) = lat.compose((t.ex, t.ey), by);
                MonomialTerm::translation(ex, ey)
            };
            offer((sorted(fa.iter().map(|t| shift(t, g)).collect()), sorted(fb.iter().map(|t| shift(t, gi)).collect())));
        }
    }
    best.unwrap()
}

/// Lexicographic successor of a `t`-subset of `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let t = idx.len();
    for i in (0..t).rev() {
        if idx[i] < n - t + i {
            idx[i] += 1;
            for j in i + 1..t {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

enum Mode {
    Exhaustive { a: Vec<usize>, b: Vec<usize>, done: bool },
    Sampled { rng: ChaCha8Rng, seen: HashSet<Key>, misses: u32 },
}

struct LatticeStream {
    lat: LatticeSpec,
    monos: Vec<MonomialTerm>,
    mode: Mode,
}

/// Deterministic stream of candidate specs.
pub struct CandidateStream {
    family: Family,
    terms: usize,
    reduce: bool,
    queue: VecDeque<LatticeStream>,
    pinned: Option<CodeSpec>,
    remaining: u64,
}

pub fn enumerate_candidates(space: &SearchSpace) -> Result<CandidateStream> {
    space.validate()?;
    let mut queue = VecDeque::new();
    if space.pinned.is_none() {
        for (i, lat) in space.lattices().into_iter().enumerate() {
            let monos = monomials(&lat);
            if monos.len() < space.terms {
                continue;
            }
            let mode = if raw_pairs(&lat, space.terms) <= EXHAUSTIVE_LIMIT {
                let start: Vec<usize> = (0..space.terms).collect();
                Mode::Exhaustive { a: start.clone(), b: start, done: false }
            } else {
                Mode::Sampled { rng: seed::rng(space.seed, "search-lattice", i as u64), seen: HashSet::new(), misses: 0 }
            };
            queue.push_back(LatticeStream { lat, monos, mode });
        }
    }
    Ok(CandidateStream {
        family: space.family,
        terms: space.terms,
        reduce: space.reduce_symmetry,
        queue,
        pinned: space.pinned.clone(),
        remaining: space.budget,
    })
}

impl CandidateStream {
    fn accept(&self, lat: &LatticeSpec, a: Vec<MonomialTerm>, b: Vec<MonomialTerm>) -> Option<CodeSpec> {
        let spec = CodeSpec {
            family: self.family,
            lattice: *lat,
            a: PolySpec::new(a).ok()?,
            b: PolySpec::new(b).ok()?,
            name: None,
        };
        spec.validate().ok()?;
        if self.family == Family::Reflection && !reflection_stackable(&spec) {
            return None;
        }
        Some(spec)
    }

    /// Next candidate from lattice stream `s`, or `None` once it is spent.
    fn pull(&self, s: &mut LatticeStream) -> Option<CodeSpec> {
        let n = s.monos.len();
        loop {
            let (a, b) = match &mut s.mode {
                Mode::Exhaustive { a, b, done } => {
                    if *done {
                        return None;
                    }
                    let pick: Key =
                        (a.iter().map(|&i| s.monos[i]).collect(), b.iter().map(|&i| s.monos[i]).collect());
                    if !next_combination(b, n) {
                        b.iter_mut().enumerate().for_each(|(i, x)| *x = i);
                        *done = !next_combination(a, n);
                    }
                    // combinations come out sorted, so `pick` is its own key
                    if self.reduce && canonical(&s.lat, self.family, &pick.0, &pick.1) != pick {
                        continue;
                    }
                    pick
                }
                Mode::Sampled { rng, seen, misses } => {
                    if *misses >= MAX_MISSES {
                        return None;
                    }
                    let draw = |rng: &mut ChaCha8Rng| -> Vec<MonomialTerm> {
                        sorted(sample(rng, n, self.terms).into_iter().map(|i| s.monos[i]).collect())
                    };
                    let (a, b) = (draw(rng), draw(rng));
                    let key = if self.reduce { canonical(&s.lat, self.family, &a, &b) } else { (a, b) };
                    if !seen.insert(key.clone()) {
                        *misses += 1;
                        continue;
                    }
                    *misses = 0;
                    key
                }
            };
            if let Some(spec) = self.accept(&s.lat, a, b) {
                return Some(spec);
            }
        }
    }
}

impl Iterator for CandidateStream {
    type Item = CodeSpec;

    fn next(&mut self) -> Option<CodeSpec> {
        if self.remaining == 0 {
            return None;
        }
        if let Some(spec) = self.pinned.take() {
            self.remaining = 0;
            return Some(spec);
        }
        while let Some(mut s) = self.queue.pop_front() {
            if let Some(spec) = self.pull(&mut s) {
                self.queue.push_back(s);
                self.remaining -= 1;
                return Some(spec);
            }
        }
        None
    }
}

fn reflection_stackable(spec: &CodeSpec) -> bool {
    spec.build().is_ok()
}

/// `kd²/n` as an exact fraction in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Merit {
    pub num: u64,
    pub den: u64,
}

impl Merit {
    pub fn new(n: usize, k: usize, d: usize) -> Self {
        let (num, den) = ((k * d * d) as u64, n.max(1) as u64);
        let g = gcd(num, den).max(1);
        Self { num: num / g, den: den / g }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// One decimal, as the tables print it.
    pub fn rounded(&self) -> String {
        format!("{:.1}", self.value())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ord for Merit {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Merit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub spec: CodeSpec,
    pub n: usize,
    pub k: usize,
    pub d_upper: usize,
    pub exact: bool,
    pub merit: Merit,
    pub parity: Parity,
}

impl SearchHit {
    /// `self` is at least as good in `n`, `k` and `d`.
    pub fn dominates(&self, other: &SearchHit) -> bool {
        self.n <= other.n && self.k >= other.k && self.d_upper >= other.d_upper
    }

    fn dominates_params(&self, n: usize, k: usize, d: usize) -> bool {
        self.n <= n && self.k >= k && self.d_upper >= d
    }
}

/// Descending merit, then smaller `n`.
pub fn rank_hits(hits: &mut [SearchHit]) {
    hits.sort_by(|a, b| b.merit.cmp(&a.merit).then(a.n.cmp(&b.n)).then(a.k.cmp(&b.k)));
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DistanceBudget {
    /// Randomized iterations per surviving candidate.
    pub iters: u64,
    /// Codes up to this length get an exact distance.
    pub exact_max_n: usize,
    /// Enumeration cap for the exact path before it falls back.
    pub exact_budget: u64,
    /// Iterations of the cheap pre-pass used for pruning.
    pub probe_iters: u64,
}

impl Default for DistanceBudget {
    fn default() -> Self {
        Self { iters: 200, exact_max_n: 40, exact_budget: 50_000_000, probe_iters: 8 }
    }
}

/// Resumable search state: stream position and current frontier.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    pub cursor: u64,
    pub frontier: Vec<SearchHit>,
}

impl SearchState {
    /// Adds `hit` unless an existing hit dominates it; drops hits it dominates.
    pub fn offer(&mut self, hit: SearchHit) -> bool {
        if self.frontier.iter().any(|h| h.dominates(&hit)) {
            return false;
        }
        self.frontier.retain(|h| !hit.dominates(h));
        self.frontier.push(hit);
        true
    }
}

fn evaluate(spec: CodeSpec, index: u64, space: &SearchSpace, budget: &DistanceBudget, snapshot: &[SearchHit]) -> Result<Option<SearchHit>> {
    let code = match spec.build() {
        Ok(c) => c,
        Err(Error::CommutatorViolation(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if code.k == 0 || !space.parity.accepts(code.parity) {
        return Ok(None);
    }
    let logical = LogicalSpace::of_code(&code)?;
    let seed = seed::child(space.seed, &format!("search-distance-{index}"));
    let probe = distance::distance_randomized_from(&logical, budget.probe_iters.max(1), seed, None)?;
    if snapshot.iter().any(|h| h.dominates_params(code.n, code.k, probe.d_upper)) {
        return Ok(None);
    }
    let mut result = distance::distance_randomized_from(&logical, budget.iters.max(budget.probe_iters), seed, None)?;
    if code.n <= budget.exact_max_n {
        match distance::distance_exact_with(&logical, result.d_upper, budget.exact_budget) {
            Ok(ExactOutcome::Found(r)) => result = r,
            Ok(ExactOutcome::NotFoundBelow(_)) => return Err(Error::Internal("exact search missed a known logical".into())),
            Err(Error::BudgetExhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let d = result.d_upper;
    Ok(Some(SearchHit {
        n: code.n,
        k: code.k,
        d_upper: d,
        exact: result.exact,
        merit: Merit::new(code.n, code.k, d),
        parity: code.parity,
        spec,
    }))
}

/// Runs the search from scratch and returns the ranked frontier.
pub fn search(space: &SearchSpace, budget: &DistanceBudget) -> Result<Vec<SearchHit>> {
    let mut state = SearchState::default();
    search_resume(space, budget, &mut state, |_| {}, |_| Ok(()))?;
    let mut hits = state.frontier;
    rank_hits(&mut hits);
    Ok(hits)
}

/// Continues from `state`. `on_hit` sees every hit admitted to the frontier;
/// `on_chunk` sees the state after each merged chunk (for checkpoints).
pub fn search_resume(
    space: &SearchSpace,
    budget: &DistanceBudget,
    state: &mut SearchState,
    mut on_hit: impl FnMut(&SearchHit),
    mut on_chunk: impl FnMut(&SearchState) -> Result<()>,
) -> Result<()> {
    let mut stream = enumerate_candidates(space)?;
    for _ in 0..state.cursor {
        if stream.next().is_none() {
            return Ok(());
        }
    }
    loop {
        let base = state.cursor;
        let chunk: Vec<CodeSpec> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(());
        }
        let snapshot = state.frontier.clone();
        let found: Vec<Result<Option<SearchHit>>> = chunk
            .into_par_iter()
            .enumerate()
            .map(|(i, spec)| evaluate(spec, base + i as u64, space, budget, &snapshot))
            .collect();
        state.cursor += found.len() as u64;
        for hit in found {
            if let Some(hit) = hit? {
                if state.offer(hit.clone()) {
                    on_hit(&hit);
                }
            }
        }
        on_chunk(state)?;
    }
}
