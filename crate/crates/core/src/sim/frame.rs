//! Bit-sliced Pauli-frame simulation.
//!
//! Each qubit carries an X and a Z frame bit per shot, packed 64 shots to a
//! word. Measurements record the X frame bit, which is the flip relative to
//! the noiseless reference; detectors are deterministic in that reference,
//! so a detector value is just the parity of its recorded flips.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::circuit::{NoisyCircuit, Op};
use crate::gf2::BinMatrix;
use crate::seed;

/// Shots per sampling batch; batch `i` always draws from stream `i`.
pub const BATCH_SHOTS: usize = 1024;

/// A Pauli `(x, z)` placed on one lane right after an op.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fault {
    pub lane: u32,
    pub qubit: u32,
    pub x: bool,
    pub z: bool,
}

pub(crate) enum Source<'a> {
    Random(&'a mut ChaCha8Rng),
    /// Faults indexed by op position.
    Inject(&'a [Vec<Fault>]),
}

struct Frames {
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl Frames {
    fn flip(&mut self, q: u32, lane: usize, x: bool, z: bool) {
        let i = q as usize * self.words + lane / 64;
        let bit = 1u64 << (lane % 64);
        if x {
            self.x[i] ^= bit;
        }
        if z {
            self.z[i] ^= bit;
        }
    }
}

/// Indices in `0..total` hit independently with probability `p`.
fn hits(rng: &mut ChaCha8Rng, p: f64, total: usize) -> Vec<usize> {
    if p <= 0.0 || total == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..total).collect();
    }
    let ln_q = (1.0 - p).ln();
    let mut out = Vec::new();
    let mut i = 0usize;
    loop {
        let u: f64 = rng.gen();
        let gap = ((1.0 - u).ln() / ln_q).floor();
        if gap >= (total - i) as f64 {
            return out;
        }
        i += gap as usize;
        out.push(i);
        i += 1;
        if i >= total {
            return out;
        }
    }
}

/// Pauli code 0..4 as (x, z): I, X, Y, Z.
fn pauli(code: u32) -> (bool, bool) {
    (code == 1 || code == 2, code == 2 || code == 3)
}

/// Runs the circuit on `64·words` lanes and returns the measurement flips,
/// `words` words per measurement record.
pub(crate) fn run(circuit: &NoisyCircuit, words: usize, mut source: Source<'_>) -> Vec<u64> {
    let nq = circuit.num_qubits();
    let mut f = Frames { words, x: vec![0; nq * words], z: vec![0; nq * words] };
    let mut meas = Vec::with_capacity(circuit.num_measurements * words);
    let lanes = 64 * words;
    for (idx, op) in circuit.ops.iter().enumerate() {
        match op {
            Op::Reset(qs) => {
                for &q in qs {
                    let s = q as usize * words;
                    f.x[s..s + words].fill(0);
                    f.z[s..s + words].fill(0);
                }
            }
            Op::H(qs) => {
                for &q in qs {
                    let s = q as usize * words;
                    for w in s..s + words {
                        std::mem::swap(&mut f.x[w], &mut f.z[w]);
                    }
                }
            }
            Op::Cx(pairs) => {
                for &(c, t) in pairs {
                    let (c, t) = (c as usize * words, t as usize * words);
                    for w in 0..words {
                        f.x[t + w] ^= f.x[c + w];
                        f.z[c + w] ^= f.z[t + w];
                    }
                }
            }
            Op::Measure(qs) => {
                for &q in qs {
                    let s = q as usize * words;
                    meas.extend_from_slice(&f.x[s..s + words]);
                }
            }
            Op::Depolarize1(qs, p) => {
                if let Source::Random(rng) = &mut source {
                    for h in hits(rng, *p, qs.len() * lanes) {
                        let (x, z) = pauli(rng.gen_range(1..4));
                        f.flip(qs[h / lanes], h % lanes, x, z);
                    }
                }
            }
            Op::Depolarize2(pairs, p) => {
                if let Source::Random(rng) = &mut source {
                    for h in hits(rng, *p, pairs.len() * lanes) {
                        let code: u32 = rng.gen_range(1..16);
                        let (a, b) = pairs[h / lanes];
                        let ((ax, az), (bx, bz)) = (pauli(code >> 2), pauli(code & 3));
                        f.flip(a, h % lanes, ax, az);
                        f.flip(b, h % lanes, bx, bz);
                    }
                }
            }
            Op::FlipReadout(qs, p) => {
                if let Source::Random(rng) = &mut source {
                    for h in hits(rng, *p, qs.len() * lanes) {
                        f.flip(qs[h / lanes], h % lanes, true, false);
                    }
                }
            }
        }
        if let Source::Inject(faults) = &source {
            for fault in &faults[idx] {
                f.flip(fault.qubit, fault.lane as usize, fault.x, fault.z);
            }
        }
    }
    meas
}

/// Parity words of each record group, `words` words per group.
pub(crate) fn parities(meas: &[u64], words: usize, groups: &[Vec<u32>]) -> Vec<u64> {
    let mut out = vec![0u64; groups.len() * words];
    for (g, recs) in groups.iter().enumerate() {
        let dst = &mut out[g * words..(g + 1) * words];
        for &m in recs {
            let src = &meas[m as usize * words..(m as usize + 1) * words];
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= s;
            }
        }
    }
    out
}

/// Detector and observable bits, one row per shot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Samples {
    pub detectors: BinMatrix,
    pub observables: BinMatrix,
}

impl Samples {
    pub fn shots(&self) -> usize {
        self.detectors.rows()
    }

    /// Stacks batches in order.
    pub fn concat(parts: Vec<Samples>, num_detectors: usize, num_observables: usize) -> Samples {
        let d: Vec<&BinMatrix> = parts.iter().map(|s| &s.detectors).collect();
        let o: Vec<&BinMatrix> = parts.iter().map(|s| &s.observables).collect();
        if parts.is_empty() {
            return Samples {
                detectors: BinMatrix::zeros(0, num_detectors),
                observables: BinMatrix::zeros(0, num_observables),
            };
        }
        Samples {
            detectors: BinMatrix::vstack(&d).expect("equal widths"),
            observables: BinMatrix::vstack(&o).expect("equal widths"),
        }
    }
}

/// Transposes bit-sliced group words into one row per shot.
pub(crate) fn to_rows(sliced: &[u64], words: usize, groups: usize, shots: usize) -> BinMatrix {
    let mut m = BinMatrix::zeros(shots, groups);
    for g in 0..groups {
        for w in 0..words {
            let mut bits = sliced[g * words + w];
            while bits != 0 {
                let shot = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if shot < shots {
                    m.set(shot, g, true);
                }
            }
        }
    }
    m
}

/// Samples batch `index` of `shots ≤ BATCH_SHOTS` shots.
pub fn sample_batch(circuit: &NoisyCircuit, seed: u64, index: u64, shots: usize) -> Samples {
    let words = shots.div_ceil(64).max(1);
    let mut rng = seed::rng(seed, "frames", index);
    let meas = run(circuit, words, Source::Random(&mut rng));
    let dets = parities(&meas, words, &circuit.detectors);
    let obs = parities(&meas, words, &circuit.observables);
    Samples {
        detectors: to_rows(&dets, words, circuit.detectors.len(), shots),
        observables: to_rows(&obs, words, circuit.observables.len(), shots),
    }
}

/// Batch sizes covering `shots`.
pub fn batch_sizes(shots: usize) -> impl Iterator<Item = (u64, usize)> {
    (0..shots.div_ceil(BATCH_SHOTS)).map(move |b| (b as u64, BATCH_SHOTS.min(shots - b * BATCH_SHOTS)))
}

/// Samples `shots` shots; the result depends only on `(circuit, shots, seed)`.
pub fn sample(circuit: &NoisyCircuit, shots: usize, seed: u64) -> Samples {
    let parts: Vec<Samples> =
        batch_sizes(shots).collect::<Vec<_>>().into_par_iter().map(|(b, s)| sample_batch(circuit, seed, b, s)).collect();
    Samples::concat(parts, circuit.detectors.len(), circuit.observables.len())
}
