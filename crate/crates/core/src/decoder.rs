//! Belief propagation with ordered-statistics post-processing, and an exact
//! maximum-likelihood decoder for small detector models.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BinVector;
use crate::sim::DetectorModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BpVariant {
    ProductSum,
    MinSum { scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderConfig {
    pub bp_iters: usize,
    pub bp_variant: BpVariant,
    /// `None` disables OSD; `Some(0)` is OSD-0.
    pub osd_order: Option<usize>,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig { bp_iters: 100, bp_variant: BpVariant::MinSum { scale: 0.8 }, osd_order: Some(0) }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bp_iters == 0 {
            return Err(Error::InvalidArgument("bp_iters must be at least 1".into()));
        }
        if let BpVariant::MinSum { scale } = self.bp_variant {
            if !(scale > 0.0 && scale <= 1.0) {
                return Err(Error::InvalidArgument(format!("min-sum scale {scale} is outside (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub observables: BinVector,
    /// The chosen mechanisms reproduce the syndrome.
    pub valid: bool,
    pub bp_converged: bool,
    /// Indices of the chosen mechanisms, ascending.
    pub error: Vec<u32>,
}

/// Immutable decoder for one detector model; `decode` is safe to call from
/// many threads at once.
#[derive(Debug, Clone)]
pub struct Decoder {
    cfg: DecoderConfig,
    num_detectors: usize,
    num_observables: usize,
    det_words: usize,
    /// Log-likelihood ratio `ln((1-p)/p)` per mechanism.
    prior: Vec<f64>,
    /// Mechanism columns, `det_words` words each.
    columns: Vec<u64>,
    observables: Vec<Vec<u32>>,
    /// Edges of check `c` are `check_start[c]..check_start[c + 1]`.
    check_start: Vec<u32>,
    edge_var: Vec<u32>,
}

impl Decoder {
    pub fn new(model: &DetectorModel, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let nd = model.num_detectors;
        let det_words = nd.div_ceil(64).max(1);
        let nv = model.mechanisms.len();
        let mut columns = vec![0u64; nv * det_words];
        let mut check_vars = vec![Vec::new(); nd];
        for (v, m) in model.mechanisms.iter().enumerate() {
            for &d in &m.detectors {
                columns[v * det_words + d as usize / 64] |= 1 << (d % 64);
                check_vars[d as usize].push(v as u32);
            }
        }
        let mut check_start = vec![0u32];
        let mut edge_var = Vec::new();
        for vars in check_vars {
            edge_var.extend(vars);
            check_start.push(edge_var.len() as u32);
        }
        Ok(Decoder {
            cfg,
            num_detectors: nd,
            num_observables: model.num_observables,
            det_words,
            prior: model.mechanisms.iter().map(|m| ((1.0 - m.p) / m.p).ln()).collect(),
            columns,
            observables: model.mechanisms.iter().map(|m| m.observables.clone()).collect(),
            check_start,
            edge_var,
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    fn column(&self, v: usize) -> &[u64] {
        &self.columns[v * self.det_words..(v + 1) * self.det_words]
    }

    fn syndrome_of(&self, error: &[u32]) -> Vec<u64> {
        let mut s = vec![0u64; self.det_words];
        for &v in error {
            for (a, b) in s.iter_mut().zip(self.column(v as usize)) {
                *a ^= b;
            }
        }
        s
    }

    fn finish(&self, mut error: Vec<u32>, valid: bool, bp_converged: bool) -> Decoded {
        error.sort_unstable();
        let mut observables = BinVector::zeros(self.num_observables);
        for &v in &error {
            for &o in &self.observables[v as usize] {
                observables.flip(o as usize);
            }
        }
        Decoded { observables, valid, bp_converged, error }
    }

    pub fn decode(&self, detectors: &BinVector) -> Decoded {
        assert_eq!(detectors.len(), self.num_detectors, "detector vector length");
        let target = detectors.words().to_vec();
        let out = self.decode_words(&target);
        if cfg!(debug_assertions) && out.valid {
            assert_eq!(self.syndrome_of(&out.error), target, "decoder returned a non-matching solution");
        }
        out
    }

    /// BP posteriors for a syndrome and whether BP converged.
    pub fn posteriors(&self, detectors: &BinVector) -> (Vec<f64>, bool) {
        let (_, post, ok) = self.bp(detectors.words());
        (post, ok)
    }

    fn decode_words(&self, target: &[u64]) -> Decoded {
        if target.iter().all(|&w| w == 0) {
            return self.finish(Vec::new(), true, true);
        }
        let (hard, posterior, converged) = self.bp(target);
        if converged {
            return self.finish(hard, true, true);
        }
        match self.cfg.osd_order {
            None => self.finish(hard, false, false),
            Some(order) => match self.osd(target, &posterior, order) {
                Some(e) => self.finish(e, true, false),
                None => self.finish(hard, false, false),
            },
        }
    }

    /// Check-to-variable messages from the variable-to-check ones.
    fn check_update(&self, flipped: bool, inputs: &[f64], out: &mut [f64]) {
        let sign0 = if flipped { -1.0 } else { 1.0 };
        match self.cfg.bp_variant {
            BpVariant::MinSum { scale } => {
                let (mut min1, mut min2, mut argmin) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                let mut sign = sign0;
                for (i, &m) in inputs.iter().enumerate() {
                    if m < 0.0 {
                        sign = -sign;
                    }
                    let a = m.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        argmin = i;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for (i, (&m, o)) in inputs.iter().zip(out.iter_mut()).enumerate() {
                    let s = if m < 0.0 { -sign } else { sign };
                    let mag = if i == argmin { min2 } else { min1 };
                    *o = if mag.is_finite() { s * scale * mag } else { 0.0 };
                }
            }
            BpVariant::ProductSum => {
                // leave-one-out products of tanh(m/2), via a running prefix
                // and a suffix pass stored in `out`
                let mut acc = 1.0;
                for (i, &m) in inputs.iter().enumerate().rev() {
                    out[i] = acc;
                    acc *= (m / 2.0).tanh();
                }
                let mut prefix = sign0;
                for (&m, o) in inputs.iter().zip(out.iter_mut()) {
                    let t = (prefix * *o).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                    *o = 2.0 * t.atanh();
                    prefix *= (m / 2.0).tanh();
                }
            }
        }
    }

    /// Layered BP, one check at a time; returns the hard decision,
    /// posteriors and convergence.
    fn bp(&self, target: &[u64]) -> (Vec<u32>, Vec<f64>, bool) {
        let ne = self.edge_var.len();
        let mut c2v = vec![0.0f64; ne];
        let mut posterior = self.prior.clone();
        let mut hard = Vec::new();
        let (mut inputs, mut out) = (Vec::new(), Vec::new());
        for _ in 0..self.cfg.bp_iters {
            for c in 0..self.check_start.len() - 1 {
                let range = self.check_start[c] as usize..self.check_start[c + 1] as usize;
                let vars = &self.edge_var[range.clone()];
                let msgs = &mut c2v[range];
                inputs.clear();
                inputs.extend(vars.iter().zip(msgs.iter()).map(|(&v, &m)| posterior[v as usize] - m));
                out.resize(vars.len(), 0.0);
                self.check_update(target[c / 64] >> (c % 64) & 1 == 1, &inputs, &mut out);
                for (((&v, m), &i), &o) in vars.iter().zip(msgs.iter_mut()).zip(&inputs).zip(&out) {
                    *m = o;
                    posterior[v as usize] = i + o;
                }
            }
            hard.clear();
            hard.extend((0..posterior.len() as u32).filter(|&v| posterior[v as usize] < 0.0));
            if self.syndrome_of(&hard) == target {
                return (hard, posterior, true);
            }
        }
        (hard, posterior, false)
    }

    /// Ordered-statistics decoding on columns sorted by posterior, most
    /// likely to be flipped first.
    fn osd(&self, target: &[u64], posterior: &[f64], order: usize) -> Option<Vec<u32>> {
        let mut cols: Vec<u32> = (0..posterior.len() as u32).collect();
        cols.sort_by(|&a, &b| posterior[a as usize].total_cmp(&posterior[b as usize]).then(a.cmp(&b)));
        let mut elim = Elimination::new(self.num_detectors);
        let mut residual = Reduced { vec: target.to_vec(), combo: vec![0; elim.combo_words] };
        let mut solved = false;
        let mut spare: Vec<(u32, Vec<u64>)> = Vec::new();
        for &c in &cols {
            let reduced = elim.insert(self.column(c as usize), c);
            if let Some(combo) = reduced {
                if solved {
                    spare.push((c, combo));
                    if spare.len() >= order {
                        break;
                    }
                }
            } else if !solved {
                elim.reduce(&mut residual);
                if residual.vec.iter().all(|&w| w == 0) {
                    solved = true;
                    if order == 0 {
                        break;
                    }
                }
            }
        }
        if !solved {
            elim.reduce(&mut residual);
            if residual.vec.iter().any(|&w| w != 0) {
                return None;
            }
        }
        let base = elim.expand(&residual.combo);
        if order == 0 || spare.is_empty() {
            return Some(base);
        }
        let cost = |e: &[u32]| e.iter().map(|&v| self.prior[v as usize]).sum::<f64>();
        let flip = |mut e: Vec<u32>, c: u32, combo: &[u64]| {
            let mut delta = elim.expand(combo);
            delta.push(c);
            for v in delta {
                if let Some(i) = e.iter().position(|&x| x == v) {
                    e.swap_remove(i);
                } else {
                    e.push(v);
                }
            }
            e
        };
        let mut best_cost = cost(&base);
        let mut best = base.clone();
        for i in 0..spare.len() {
            let one = flip(base.clone(), spare[i].0, &spare[i].1);
            let c1 = cost(&one);
            if c1 < best_cost {
                best_cost = c1;
                best = one.clone();
            }
            for s in &spare[i + 1..] {
                let two = flip(one.clone(), s.0, &s.1);
                let c2 = cost(&two);
                if c2 < best_cost {
                    best_cost = c2;
                    best = two;
                }
            }
        }
        Some(best)
    }
}

struct Reduced {
    vec: Vec<u64>,
    /// Bits over `Elimination::selected`.
    combo: Vec<u64>,
}

/// Column basis with combination tracking. Each stored vector has a unique
/// lowest set bit and is the XOR of the selected columns in its combo.
struct Elimination {
    combo_words: usize,
    pivot_of: Vec<u32>,
    basis: Vec<Reduced>,
    selected: Vec<u32>,
}

impl Elimination {
    fn new(bits: usize) -> Self {
        Elimination { combo_words: bits.div_ceil(64).max(1), pivot_of: vec![u32::MAX; bits], basis: Vec::new(), selected: Vec::new() }
    }

    fn reduce(&self, r: &mut Reduced) {
        loop {
            let Some(bit) = lowest_bit(&r.vec) else { return };
            let b = self.pivot_of[bit];
            if b == u32::MAX {
                return;
            }
            let basis = &self.basis[b as usize];
            for (a, x) in r.vec.iter_mut().zip(&basis.vec) {
                *a ^= x;
            }
            for (a, x) in r.combo.iter_mut().zip(&basis.combo) {
                *a ^= x;
            }
        }
    }

    /// Adds column `c`; returns its combo if it was dependent.
    fn insert(&mut self, column: &[u64], c: u32) -> Option<Vec<u64>> {
        let mut r = Reduced { vec: column.to_vec(), combo: vec![0; self.combo_words] };
        self.reduce(&mut r);
        match lowest_bit(&r.vec) {
            None => Some(r.combo),
            Some(bit) => {
                let idx = self.selected.len();
                r.combo[idx / 64] ^= 1 << (idx % 64);
                self.selected.push(c);
                self.pivot_of[bit] = self.basis.len() as u32;
                self.basis.push(r);
                None
            }
        }
    }

    fn expand(&self, combo: &[u64]) -> Vec<u32> {
        let mut out = Vec::new();
        for (w, &word) in combo.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(self.selected[w * 64 + bits.trailing_zeros() as usize]);
                bits &= bits - 1;
            }
        }
        out
    }
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Largest coset enumeration the oracle accepts.
pub const ML_MAX_KERNEL_DIM: usize = 26;

/// Exact maximum-likelihood observable prediction, by summing probability
/// over every error consistent with the syndrome.
#[derive(Debug, Clone)]
pub struct MlOracle {
    num_detectors: usize,
    num_observables: usize,
    det_words: usize,
    /// `ln(p/(1-p))` per mechanism.
    weight: Vec<f64>,
    obs_mask: Vec<u64>,
    /// Reduced basis: `(vector, mechanism mask)` keyed by pivot bit.
    pivot_of: Vec<u32>,
    basis: Vec<(Vec<u64>, u64)>,
    kernel: Vec<u64>,
}

impl MlOracle {
    pub fn new(model: &DetectorModel) -> Result<Self> {
        let nv = model.mechanisms.len();
        if nv > 64 || model.num_observables > 64 {
            return Err(Error::TooLarge(format!(
                "{nv} mechanisms and {} observables; the oracle handles at most 64 of each",
                model.num_observables
            )));
        }
        let nd = model.num_detectors;
        let det_words = nd.div_ceil(64).max(1);
        let mut oracle = MlOracle {
            num_detectors: nd,
            num_observables: model.num_observables,
            det_words,
            weight: model.mechanisms.iter().map(|m| (m.p / (1.0 - m.p)).ln()).collect(),
            obs_mask: model.mechanisms.iter().map(|m| m.observables.iter().fold(0u64, |a, &o| a | 1 << o)).collect(),
            pivot_of: vec![u32::MAX; nd],
            basis: Vec::new(),
            kernel: Vec::new(),
        };
        for (j, m) in model.mechanisms.iter().enumerate() {
            let mut v = vec![0u64; det_words];
            for &d in &m.detectors {
                v[d as usize / 64] ^= 1 << (d % 64);
            }
            let (v, mask) = oracle.reduce(v, 1 << j);
            match lowest_bit(&v) {
                None => oracle.kernel.push(mask),
                Some(bit) => {
                    oracle.pivot_of[bit] = oracle.basis.len() as u32;
                    oracle.basis.push((v, mask));
                }
            }
        }
        if oracle.kernel.len() > ML_MAX_KERNEL_DIM {
            return Err(Error::TooLarge(format!(
                "kernel dimension {} exceeds {ML_MAX_KERNEL_DIM}",
                oracle.kernel.len()
            )));
        }
        Ok(oracle)
    }

    fn reduce(&self, mut v: Vec<u64>, mut mask: u64) -> (Vec<u64>, u64) {
        while let Some(bit) = lowest_bit(&v) {
            let b = self.pivot_of[bit];
            if b == u32::MAX {
                break;
            }
            let (bv, bm) = &self.basis[b as usize];
            for (a, x) in v.iter_mut().zip(bv) {
                *a ^= x;
            }
            mask ^= bm;
        }
        (v, mask)
    }

    fn observables_of(&self, e: u64) -> u64 {
        let mut o = 0;
        let mut bits = e;
        while bits != 0 {
            o ^= self.obs_mask[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        o
    }

    /// Most likely observable class; `None` if no error explains the syndrome.
    pub fn decode(&self, detectors: &BinVector) -> Option<BinVector> {
        assert_eq!(detectors.len(), self.num_detectors, "detector vector length");
        let mut s = detectors.words().to_vec();
        s.resize(self.det_words, 0);
        let (rest, e0) = self.reduce(s, 0);
        if lowest_bit(&rest).is_some() {
            return None;
        }
        let kernel_obs: Vec<u64> = self.kernel.iter().map(|&g| self.observables_of(g)).collect();
        let log_weight = |e: u64| {
            let mut w = 0.0;
            let mut bits = e;
            while bits != 0 {
                w += self.weight[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            w
        };
        let mut classes: HashMap<u64, f64> = HashMap::new();
        let (mut e, mut obs, mut lw) = (e0, self.observables_of(e0), log_weight(e0));
        *classes.entry(obs).or_default() += lw.exp();
        for i in 1u64..1 << self.kernel.len() {
            let j = i.trailing_zeros() as usize;
            let g = self.kernel[j];
            let (added, removed) = (g & !e, g & e);
            lw += log_weight(added) - log_weight(removed);
            e ^= g;
            obs ^= kernel_obs[j];
            *classes.entry(obs).or_default() += lw.exp();
        }
        let best = classes
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(o, _)| o)
            .unwrap_or(0);
        let mut out = BinVector::zeros(self.num_observables);
        for o in 0..self.num_observables {
            if best >> o & 1 == 1 {
                out.set(o, true);
            }
        }
        Some(out)
    }
}

pub fn ml_oracle(model: &DetectorModel, detectors: &BinVector) -> Result<BinVector> {
    let oracle = MlOracle::new(model)?;
    Ok(oracle.decode(detectors).unwrap_or_else(|| BinVector::zeros(model.num_observables)))
}

pub fn decode(model: &DetectorModel, cfg: DecoderConfig, detectors: &BinVector) -> Result<(BinVector, bool)> {
    let d = Decoder::new(model, cfg)?.decode(detectors);
    Ok((d.observables, d.valid))
}
