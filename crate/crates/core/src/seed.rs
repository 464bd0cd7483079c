//! Labeled seed derivation.
//!
//! Every random stream in the crate comes from one user seed. A stream is
//! named by a label and an index, and its 32-byte ChaCha key is the SHA-256
//! of `(seed, label, index)`, so adding a new stream leaves the others alone.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub fn derive(seed: u64, label: &str, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.to_le_bytes());
    h.finalize().into()
}

pub fn rng(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(derive(seed, label, index))
}

/// A child seed, for handing to code that takes a plain `u64`.
pub fn child(seed: u64, label: &str) -> u64 {
    let d = derive(seed, label, 0);
    u64::from_le_bytes(d[..8].try_into().unwrap())
}
