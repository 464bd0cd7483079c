//! Memory experiments: circuits, frame sampling, detector models.

pub mod circuit;
pub mod dem;
pub mod frame;
pub mod packed;
pub mod result;

pub use circuit::{build_circuit, build_circuit_in, edge_coloring, Basis, NoiseKind, NoiseModel, NoisyCircuit, Op};
pub use dem::{compose, derive_detector_model, DetectorModel, Mechanism};
pub use frame::{sample, sample_batch, Samples, BATCH_SHOTS};
pub use packed::{read_samples, write_samples};
pub use result::{grey_line, pseudothreshold_crossings, summarize, SimResult};
