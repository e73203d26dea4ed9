//! Deterministic derivation of per-trial RNG seeds.
//!
//! Sub-seeds come from a counter-mode hash of `master ‖ index`, so
//! parallel and serial trial orders see identical streams and distinct
//! indices never collide in practice.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// 32-byte sub-seed for trial `index` of run `master`.
pub fn seed_split(master: u64, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(index.to_le_bytes());
    hasher.finalize().into()
}

/// RNG for trial `index` of run `master`.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(seed_split(master, index))
}
