//! Detector error models.
//!
//! Depolarizing channels are rewritten as independent Pauli mechanisms with
//! the same overall distribution: a one-qubit channel of strength `p` is three
//! independent X, Y, Z flips of probability `(1 - sqrt(1 - 4p/3)) / 2`, and a
//! two-qubit channel is fifteen independent flips of probability
//! `(1 - (1 - 16p/15)^(1/8)) / 2`. Every mechanism is pushed through the
//! circuit to find the detectors and observables it flips, and mechanisms
//! with identical signatures are merged.
//!
//! Text format, one mechanism per line after a short header:
//!
//! ```text
//! detectors 24
//! observables 8
//! error(0.0066666666666666671) D0 D5 L1
//! ```
//!
//! Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use super::circuit::{NoisyCircuit, Op};
use super::frame::{self, batch_sizes, Fault, Samples, Source};
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism {
    pub p: f64,
    pub detectors: Vec<u32>,
    pub observables: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    pub num_detectors: usize,
    pub num_observables: usize,
    pub mechanisms: Vec<Mechanism>,
}

/// Probability that exactly one of two independent events occurs.
pub fn compose(q1: f64, q2: f64) -> f64 {
    q1 * (1.0 - q2) + q2 * (1.0 - q1)
}

fn independent_1q(p: f64) -> Result<f64> {
    if p > 0.75 {
        return Err(Error::InvalidArgument(format!("depolarizing p = {p} exceeds 3/4")));
    }
    Ok((1.0 - (1.0 - 4.0 * p / 3.0).sqrt()) / 2.0)
}

fn independent_2q(p: f64) -> Result<f64> {
    if p > 15.0 / 16.0 {
        return Err(Error::InvalidArgument(format!("two-qubit depolarizing p = {p} exceeds 15/16")));
    }
    Ok((1.0 - (1.0 - 16.0 * p / 15.0).powf(0.125)) / 2.0)
}

const PAULIS: [(bool, bool); 3] = [(true, false), (true, true), (false, true)];

/// One elementary mechanism: `(op index, Pauli terms, probability)`.
pub(crate) type Elementary = (usize, Vec<(u32, bool, bool)>, f64);

pub(crate) fn elementary_mechanisms(circuit: &NoisyCircuit) -> Result<Vec<Elementary>> {
    let mut out = Vec::new();
    for (idx, op) in circuit.ops.iter().enumerate() {
        match op {
            Op::Depolarize1(qs, p) => {
                let q = independent_1q(*p)?;
                for &qb in qs {
                    for (x, z) in PAULIS {
                        out.push((idx, vec![(qb, x, z)], q));
                    }
                }
            }
            Op::Depolarize2(pairs, p) => {
                let q = independent_2q(*p)?;
                for &(a, b) in pairs {
                    for code in 1..16usize {
                        let mut terms = Vec::new();
                        if code >> 2 != 0 {
                            let (x, z) = PAULIS[(code >> 2) - 1];
                            terms.push((a, x, z));
                        }
                        if code & 3 != 0 {
                            let (x, z) = PAULIS[(code & 3) - 1];
                            terms.push((b, x, z));
                        }
                        out.push((idx, terms, q));
                    }
                }
            }
            Op::FlipReadout(qs, p) => {
                for &qb in qs {
                    out.push((idx, vec![(qb, true, false)], *p));
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

const LANES_WORDS: usize = 16;

pub fn derive_detector_model(circuit: &NoisyCircuit) -> Result<DetectorModel> {
    let elementary = elementary_mechanisms(circuit)?;
    let lanes = 64 * LANES_WORDS;
    let chunks: Vec<&[Elementary]> = elementary.chunks(lanes).collect();
    let signatures: Vec<Vec<(Vec<u32>, Vec<u32>)>> = chunks
        .par_iter()
        .map(|chunk| {
            let mut inject: Vec<Vec<Fault>> = vec![Vec::new(); circuit.ops.len()];
            for (lane, (idx, terms, _)) in chunk.iter().enumerate() {
                for &(qubit, x, z) in terms {
                    inject[*idx].push(Fault { lane: lane as u32, qubit, x, z });
                }
            }
            let meas = frame::run(circuit, LANES_WORDS, Source::Inject(&inject));
            let dets = frame::parities(&meas, LANES_WORDS, &circuit.detectors);
            let obs = frame::parities(&meas, LANES_WORDS, &circuit.observables);
            let rows_d = frame::to_rows(&dets, LANES_WORDS, circuit.detectors.len(), chunk.len());
            let rows_o = frame::to_rows(&obs, LANES_WORDS, circuit.observables.len(), chunk.len());
            (0..chunk.len())
                .map(|i| {
                    let d = rows_d.row_support(i).into_iter().map(|v| v as u32).collect();
                    let o = rows_o.row_support(i).into_iter().map(|v| v as u32).collect();
                    (d, o)
                })
                .collect()
        })
        .collect();
    let mut merged: BTreeMap<(Vec<u32>, Vec<u32>), f64> = BTreeMap::new();
    for ((_, _, p), sig) in elementary.iter().zip(signatures.into_iter().flatten()) {
        if sig.0.is_empty() && sig.1.is_empty() {
            continue;
        }
        let q = merged.entry(sig).or_insert(0.0);
        *q = compose(*q, *p);
    }
    let mechanisms: Vec<Mechanism> = merged
        .into_iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|((detectors, observables), p)| Mechanism { p, detectors, observables })
        .collect();
    if let Some(m) = mechanisms.iter().find(|m| m.p > 0.5) {
        return Err(Error::InvalidArgument(format!("mechanism probability {} exceeds 1/2", m.p)));
    }
    Ok(DetectorModel {
        num_detectors: circuit.detectors.len(),
        num_observables: circuit.observables.len(),
        mechanisms,
    })
}

impl DetectorModel {
    /// Detector-by-mechanism incidence matrix.
    pub fn detector_matrix(&self) -> BinMatrix {
        let mut m = BinMatrix::zeros(self.num_detectors, self.mechanisms.len());
        for (j, mech) in self.mechanisms.iter().enumerate() {
            for &d in &mech.detectors {
                m.set(d as usize, j, true);
            }
        }
        m
    }

    pub fn observable_matrix(&self) -> BinMatrix {
        let mut m = BinMatrix::zeros(self.num_observables, self.mechanisms.len());
        for (j, mech) in self.mechanisms.iter().enumerate() {
            for &o in &mech.observables {
                m.set(o as usize, j, true);
            }
        }
        m
    }

    /// Projects onto the detectors with `keep[d]`, renumbered in order, and
    /// merges mechanisms that become identical.
    pub fn restrict(&self, keep: &[bool]) -> DetectorModel {
        assert_eq!(keep.len(), self.num_detectors, "mask length");
        let mut new_id = vec![u32::MAX; self.num_detectors];
        let mut next = 0u32;
        for (d, &k) in keep.iter().enumerate() {
            if k {
                new_id[d] = next;
                next += 1;
            }
        }
        let mut merged: BTreeMap<(Vec<u32>, Vec<u32>), f64> = BTreeMap::new();
        for m in &self.mechanisms {
            let dets: Vec<u32> = m.detectors.iter().filter(|&&d| keep[d as usize]).map(|&d| new_id[d as usize]).collect();
            if dets.is_empty() && m.observables.is_empty() {
                continue;
            }
            let q = merged.entry((dets, m.observables.clone())).or_insert(0.0);
            *q = compose(*q, m.p);
        }
        DetectorModel {
            num_detectors: next as usize,
            num_observables: self.num_observables,
            mechanisms: merged
                .into_iter()
                .map(|((detectors, observables), p)| Mechanism { p, detectors, observables })
                .collect(),
        }
    }

    /// Exact probability that each detector fires.
    pub fn detector_marginals(&self) -> Vec<f64> {
        let mut bias = vec![1.0f64; self.num_detectors];
        for m in &self.mechanisms {
            for &d in &m.detectors {
                bias[d as usize] *= 1.0 - 2.0 * m.p;
            }
        }
        bias.into_iter().map(|b| (1.0 - b) / 2.0).collect()
    }

    /// Samples the mechanisms independently.
    pub fn sample(&self, shots: usize, seed: u64) -> Samples {
        let parts: Vec<Samples> = batch_sizes(shots)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(b, s)| {
                let mut rng = seed::rng(seed, "model", b);
                let mut dets = BinMatrix::zeros(s, self.num_detectors);
                let mut obs = BinMatrix::zeros(s, self.num_observables);
                for m in &self.mechanisms {
                    let ln_q = (1.0 - m.p).ln();
                    let mut shot = 0usize;
                    loop {
                        let u: f64 = rng.gen();
                        let gap = ((1.0 - u).ln() / ln_q).floor();
                        if gap >= (s - shot) as f64 {
                            break;
                        }
                        shot += gap as usize;
                        for &d in &m.detectors {
                            let v = dets.get(shot, d as usize);
                            dets.set(shot, d as usize, !v);
                        }
                        for &o in &m.observables {
                            let v = obs.get(shot, o as usize);
                            obs.set(shot, o as usize, !v);
                        }
                        shot += 1;
                        if shot >= s {
                            break;
                        }
                    }
                }
                Samples { detectors: dets, observables: obs }
            })
            .collect();
        Samples::concat(parts, self.num_detectors, self.num_observables)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "detectors {}", self.num_detectors).unwrap();
        writeln!(out, "observables {}", self.num_observables).unwrap();
        for m in &self.mechanisms {
            write!(out, "error({})", m.p).unwrap();
            for d in &m.detectors {
                write!(out, " D{d}").unwrap();
            }
            for o in &m.observables {
                write!(out, " L{o}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::Parse(format!("detector model line {}: {what}", line + 1));
        let mut num_detectors = None;
        let mut num_observables = None;
        let mut mechanisms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            if head == "detectors" || head == "observables" {
                let v: usize = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| bad(i, "expected a count"))?;
                if head == "detectors" {
                    num_detectors = Some(v);
                } else {
                    num_observables = Some(v);
                }
                continue;
            }
            let p = head
                .strip_prefix("error(")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| bad(i, "expected error(p)"))?;
            if !(p > 0.0 && p <= 0.5) {
                return Err(bad(i, "probability outside (0, 0.5]"));
            }
            let (nd, no) = match (num_detectors, num_observables) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(bad(i, "mechanism before header")),
            };
            let mut m = Mechanism { p, detectors: Vec::new(), observables: Vec::new() };
            for w in words {
                let (list, limit, rest) = match w.split_at(1) {
                    ("D", r) => (&mut m.detectors, nd, r),
                    ("L", r) => (&mut m.observables, no, r),
                    _ => return Err(bad(i, "expected Dn or Ln")),
                };
                let v: u32 = rest.parse().map_err(|_| bad(i, "bad index"))?;
                if v as usize >= limit {
                    return Err(bad(i, "index out of range"));
                }
                list.push(v);
            }
            m.detectors.sort_unstable();
            m.observables.sort_unstable();
            if m.detectors.windows(2).any(|w| w[0] == w[1]) || m.observables.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(i, "repeated index"));
            }
            if m.detectors.is_empty() && m.observables.is_empty() {
                return Err(bad(i, "mechanism flips nothing"));
            }
            mechanisms.push(m);
        }
        Ok(DetectorModel {
            num_detectors: num_detectors.ok_or_else(|| Error::Parse("missing detectors header".into()))?,
            num_observables: num_observables.ok_or_else(|| Error::Parse("missing observables header".into()))?,
            mechanisms,
        })
    }
}
