//! Exact desk-scale machinery for weighted martingale inequalities.
//!
//! The crate provides the pure, allocation-light layer of the verification
//! laboratory: finite-dimensional uniformly smooth normed spaces and the
//! gradient of `|x|^p`, dyadic filtration trees with exact conditional
//! expectations, the two explicit Bellman functions together with their
//! concavity gaps, closed-form constant conditions, instance-level
//! inequality checks, and the finite-dimensional extrapolation chain.
//!
//! Everything here is deterministic and side-effect free. Sampling
//! harnesses, random instance generation, and file/CLI plumbing live in the
//! companion `bdg-lab` crate.
//!
//! The crate is `no_std`-compatible (`alloc` required); float transcendentals
//! are routed through `libm` so results are bit-identical across platforms.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bellman;
pub mod conditions;
pub mod dyadic;
pub mod error;
pub mod extrapolate;
pub mod funspace;
pub mod math;
pub mod psi;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use space::{DualVector, SpaceDescriptor, SpaceKind};
