//! End-to-end memory experiments: sample, decode, count failures.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::StackedCode;
use crate::decoder::{Decoder, DecoderConfig};
use crate::error::Result;
use crate::gf2::BinVector;
use crate::sim::{self, Basis, DetectorModel, NoiseModel, NoisyCircuit, Samples, SimResult};

/// Which detectors the decoder sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeScope {
    /// Only detectors built from checks of the memory basis type; errors
    /// seen only by the other checks never flip the observables.
    #[default]
    MemoryBasis,
    /// Every detector.
    Full,
}

/// A built experiment, reusable across seeds and shot counts.
pub struct Experiment {
    pub circuit: NoisyCircuit,
    /// Model over all detectors.
    pub model: DetectorModel,
    pub scope: DecodeScope,
    /// Model the decoder was built from.
    pub decoding_model: DetectorModel,
    pub decoder: Decoder,
}

impl Experiment {
    pub fn new(code: &StackedCode, noise: NoiseModel, rounds: usize, basis: Basis, cfg: DecoderConfig) -> Result<Self> {
        Self::with_scope(code, noise, rounds, basis, cfg, DecodeScope::default())
    }

    pub fn with_scope(
        code: &StackedCode,
        noise: NoiseModel,
        rounds: usize,
        basis: Basis,
        cfg: DecoderConfig,
        scope: DecodeScope,
    ) -> Result<Self> {
        let circuit = sim::build_circuit_in(code, noise, rounds, basis)?;
        let model = sim::derive_detector_model(&circuit)?;
        let decoding_model = match scope {
            DecodeScope::MemoryBasis => model.restrict(&circuit.memory_type),
            DecodeScope::Full => model.clone(),
        };
        let decoder = Decoder::new(&decoding_model, cfg)?;
        Ok(Experiment { circuit, model, scope, decoding_model, decoder })
    }

    /// Detector bits of one shot as the decoder expects them.
    pub fn decoder_input(&self, samples: &Samples, shot: usize) -> BinVector {
        match self.scope {
            DecodeScope::Full => samples.detectors.row(shot),
            DecodeScope::MemoryBasis => {
                let bits: Vec<bool> = (0..self.circuit.memory_type.len())
                    .filter(|&d| self.circuit.memory_type[d])
                    .map(|d| samples.detectors.get(shot, d))
                    .collect();
                BinVector::from_bools(&bits)
            }
        }
    }

    /// Number of shots whose predicted observables differ from the sampled ones.
    pub fn count_failures(&self, samples: &Samples) -> u64 {
        (0..samples.shots())
            .into_par_iter()
            .filter(|&s| self.decoder.decode(&self.decoder_input(samples, s)).observables != samples.observables.row(s))
            .count() as u64
    }

    /// Failures per sampling batch, in batch order.
    pub fn batch_failures(&self, shots: usize, seed: u64) -> Vec<(usize, u64)> {
        sim::frame::batch_sizes(shots)
            .map(|(b, s)| {
                let samples = sim::sample_batch(&self.circuit, seed, b, s);
                (s, self.count_failures(&samples))
            })
            .collect()
    }

    pub fn run(&self, shots: usize, seed: u64) -> Result<SimResult> {
        let failures: u64 = self.batch_failures(shots, seed).iter().map(|b| b.1).sum();
        sim::summarize(shots as u64, failures, self.circuit.rounds)
    }
}

pub fn memory_experiment(
    code: &StackedCode,
    noise: NoiseModel,
    rounds: usize,
    shots: usize,
    seed: u64,
    cfg: DecoderConfig,
) -> Result<SimResult> {
    Experiment::new(code, noise, rounds, Basis::Z, cfg)?.run(shots, seed)
}
