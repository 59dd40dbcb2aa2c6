//! Synthetic benchmark corpora with known propagation graphs.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, so a `(seed, parameters)` pair fully
//! determines a dataset on every platform.

mod binary;
mod real;

pub use binary::{gen_binary, ground_truth_binary, BinaryBenchmark, BinaryParams};
pub use real::{gen_real_valued, real_valued_truth, DelayTrace, RealValuedBenchmark, REAL_EDGES, REAL_MAX_DELAY, REAL_N, REAL_T};

pub use rand_chacha::ChaCha8Rng as BenchRng;
