//! E-processes for the weak one-sided nulls and their anytime-valid
//! p-processes.
//!
//! For direction [`Direction::PQ`] the null is `Δ_t ≤ 0` ("p is no better
//! than q"); large e-values favour `p`. [`Direction::QP`] swaps the roles by
//! negating `Σδ̂` while keeping the same `V̂_t`.

use serde::{Deserialize, Serialize};

use crate::boundaries::{Cgf, GammaExponentialMixture};
use crate::confseq::ComparisonState;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    PQ,
    QP,
}

impl Direction {
    fn signed(&self, s: f64) -> f64 {
        match self {
            Direction::PQ => s,
            Direction::QP => -s,
        }
    }
}

/// Mixture e-value `m(±Σδ̂, V̂_t)` of the gamma-exponential mixture.
pub fn e_mixture(state: &ComparisonState, mixture: &GammaExponentialMixture, direction: Direction) -> f64 {
    mixture.m(direction.signed(state.sum_dhat()), state.vhat())
}

/// `exp(λ·(±Σδ̂) − ψ_{E,c}(λ) V̂_t)` for a fixed `λ ∈ [0, 1/c)`.
pub fn e_fixed_lambda(state: &ComparisonState, lambda: f64, c: f64, direction: Direction) -> Result<f64> {
    let psi = Cgf::Exponential { c }.psi(lambda)?;
    let ln_e = lambda * direction.signed(state.sum_dhat()) - psi * state.vhat();
    Ok(ln_e.exp())
}

/// Current e-value and its running maximum for one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceState {
    e_current: f64,
    e_running_max: f64,
    direction: Direction,
}

impl EvidenceState {
    /// Starts at `E_0 = 1`.
    pub fn new(direction: Direction) -> Self {
        EvidenceState {
            e_current: 1.0,
            e_running_max: 1.0,
            direction,
        }
    }

    pub fn observe(&mut self, e: f64) -> Result<()> {
        if !(e > 0.0) {
            return Err(Error::NonPositiveEvidence(e));
        }
        self.e_current = e;
        self.e_running_max = self.e_running_max.max(e);
        Ok(())
    }

    pub fn e_current(&self) -> f64 {
        self.e_current
    }

    pub fn e_running_max(&self) -> f64 {
        self.e_running_max
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn p_value(&self) -> f64 {
        p_process(self)
    }
}

/// `min(1, 1/max_{i≤t} E_i)`.
pub fn p_process(ev: &EvidenceState) -> f64 {
    (1.0 / ev.e_running_max).min(1.0)
}

/// p-process value after an explicit e-value history.
pub fn p_from_history(history: &[f64]) -> Result<f64> {
    let mut ev = EvidenceState::new(Direction::PQ);
    for &e in history {
        ev.observe(e)?;
    }
    Ok(ev.p_value())
}
