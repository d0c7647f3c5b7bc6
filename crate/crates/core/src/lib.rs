//! Markov-chain quantum sources.
//!
//! A two-state Markov chain decides, at every step, whether a source emits
//! its target state `|0⟩` or a deviating state `|φ⟩`. The `n`-emission
//! output is a *Markov state*: the mixture of all product strings weighted
//! by their chain probability. This crate builds those states, compares
//! them with i.i.d. and tensored approximations, evaluates fidelity and
//! trace-distance bounds, and simulates discrimination between two sources
//! that differ in their recovery rate `δ`.
//!
//! Modules, bottom up:
//!
//! - [`chain`]: classical chain probabilities, entropies, window sparsity.
//! - [`linalg`]: dense complex kernels.
//! - [`states`]: Markov, i.i.d., tensored and stationary density matrices.
//! - [`metrics`]: fidelity, trace distance, Helstrom success, bounds.
//! - [`verification`]: hypothesis discrimination and parameter sweeps.

pub mod chain;
pub mod error;
pub mod linalg;
pub mod metrics;
mod numeric;
pub mod states;
pub mod verification;

pub use error::{Error, Result};
pub use numeric::pairwise_sum;
