//! Anytime-valid sequential comparison of probability forecasters.
//!
//! Given two streams of probability forecasts `p_t`, `q_t` and the realized
//! outcomes `y_t`, this crate tracks the average score differential
//!
//! ```text
//! Δ_t = (1/t) Σ_i [S(p_i, r_i) − S(q_i, r_i)]
//! ```
//!
//! (where `r_i` is the unknown conditional mean of `y_i`) with time-uniform
//! confidence sequences, and measures evidence against the weak one-sided
//! nulls `Δ_t ≤ 0` / `Δ_t ≥ 0` with e-processes and anytime-valid p-processes.
//! Nothing is assumed about how the outcomes or the forecasts are generated
//! beyond the forecasts being made before the outcome is revealed.
//!
//! Module map:
//!
//! - [`scoring`]: proper scoring rules with linear equivalents, the Winkler
//!   skill score, categorical and k-step-ahead extensions.
//! - [`special`]: log-gamma and the regularized lower incomplete gamma function.
//! - [`boundaries`]: CGFs and sub-ψ uniform boundaries (stitched, normal
//!   mixture, gamma-exponential mixture).
//! - [`confseq`]: streaming sufficient statistics and the Hoeffding-style and
//!   empirical-Bernstein confidence sequences.
//! - [`eprocess`]: mixture and fixed-λ e-processes and their p-processes.
//! - [`forecasters`]: reference forecasters and synthetic reality simulators.
//! - [`cli`]: CSV ingestion, the comparison and simulation runners behind the
//!   `anytime-compare` binary.

pub mod boundaries;
pub mod cli;
pub mod confseq;
pub mod eprocess;
mod error;
pub mod forecasters;
pub mod scoring;
pub mod special;

pub use error::{Error, Result};
