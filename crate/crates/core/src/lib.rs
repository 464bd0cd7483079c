pub mod algebra;
pub mod codes;
pub mod decoder;
pub mod distance;
pub mod error;
pub mod experiment;
pub mod gf2;
pub mod io;
pub mod search;
pub mod seed;
pub mod sim;
pub mod tables;

pub use error::{Error, Result};
pub use codes::{CodeSpec, Family, Parity, StackedCode};
pub use decoder::{Decoder, DecoderConfig};
pub use experiment::Experiment;
pub use gf2::{BinMatrix, BinVector};
pub use sim::{Basis, DetectorModel, NoiseKind, NoiseModel, Samples};
