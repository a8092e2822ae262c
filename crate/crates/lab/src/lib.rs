//! Sampling harnesses, instance fleets, adversarial search, and the CLI for
//! the weighted martingale inequality laboratory.
//!
//! The pure math lives in `bdg-core`; this crate adds everything that needs
//! randomness, parallelism, or IO. All randomness flows through a hand-rolled
//! xoshiro256++ PRNG with a documented stream-splitting rule, so every run is
//! reproducible given `(seed, worker count independent merges)` and frozen
//! fixtures stay stable.

pub mod chains;
pub mod cli;
pub mod estimate;
pub mod fleet;
pub mod instances;
pub mod report;
pub mod rng;
pub mod scan;
pub mod search;
