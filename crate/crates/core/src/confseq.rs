//! Streaming state for score differentials and the confidence sequences
//! built from it.
//!
//! [`ComparisonState`] accumulates `Σδ̂`, `Δ̂_t` and the intrinsic time
//! `V̂_t = Σ(δ̂_i − γ_i)²`. [`cs_hoeffding`] and [`cs_eb`] turn a snapshot into
//! an interval for the average differential `Δ_t`.

use serde::{Deserialize, Serialize};

use crate::boundaries::{BoundaryKind, UniformBoundary};
use crate::{Error, Result};

/// Slack allowed when checking `|δ̂| ≤ bound`.
pub const BOUND_SLACK: f64 = 1e-12;

/// Choice of the predictable centering sequence `γ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centering {
    /// `γ_1 = 0`, `γ_i = Δ̂_{i−1}`.
    #[default]
    Mean,
    /// `γ_i = 0`.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonState {
    t: u64,
    sum_dhat: f64,
    vhat: f64,
    gamma_next: f64,
    bound: f64,
    centering: Centering,
}

impl ComparisonState {
    /// `bound` is the a-priori bound `|δ̂_i| ≤ bound` of the scoring rule.
    pub fn new(bound: f64, centering: Centering) -> Result<Self> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::domain("bound", bound, "must be positive and finite"));
        }
        Ok(ComparisonState {
            t: 0,
            sum_dhat: 0.0,
            vhat: 0.0,
            gamma_next: 0.0,
            bound,
            centering,
        })
    }

    pub fn update(&mut self, dhat: f64) -> Result<()> {
        let index = self.t + 1;
        if !dhat.is_finite() || dhat.abs() > self.bound + BOUND_SLACK {
            return Err(Error::BoundViolation {
                index,
                value: dhat,
                bound: self.bound,
            });
        }
        let dev = dhat - self.gamma_next;
        self.vhat += dev * dev;
        self.sum_dhat += dhat;
        self.t = index;
        self.gamma_next = match self.centering {
            Centering::Mean => self.delta_hat(),
            Centering::Zero => 0.0,
        };
        Ok(())
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn sum_dhat(&self) -> f64 {
        self.sum_dhat
    }

    /// `Δ̂_t`; zero before the first observation.
    pub fn delta_hat(&self) -> f64 {
        if self.t == 0 {
            0.0
        } else {
            self.sum_dhat / self.t as f64
        }
    }

    pub fn vhat(&self) -> f64 {
        self.vhat
    }

    pub fn gamma_next(&self) -> f64 {
        self.gamma_next
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ConfInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// Clips to `[−limit, limit]`; `Δ_t` always lies in `[−2·bound, 2·bound]`.
    pub fn clip(self, limit: f64) -> Self {
        ConfInterval {
            lower: self.lower.clamp(-limit, limit),
            upper: self.upper.clamp(-limit, limit),
        }
    }

    /// Running intersection with an earlier interval. An empty intersection
    /// collapses to the midpoint of the crossed endpoints so that
    /// `lower ≤ upper` still holds.
    pub fn intersect(self, other: &ConfInterval) -> Self {
        let lower = self.lower.max(other.lower);
        let upper = self.upper.min(other.upper);
        if lower <= upper {
            ConfInterval { lower, upper }
        } else {
            let mid = 0.5 * (lower + upper);
            ConfInterval {
                lower: mid,
                upper: mid,
            }
        }
    }
}

fn centered(state: &ComparisonState, radius: f64) -> ConfInterval {
    let d = state.delta_hat();
    ConfInterval {
        lower: d - radius,
        upper: d + radius,
    }
}

/// Hoeffding-style sequence `Δ̂_t ± u(t·b²)/t` for a sub-Gaussian boundary,
/// where `b` is the state's bound.
pub fn cs_hoeffding(state: &ComparisonState, boundary: &UniformBoundary) -> Result<ConfInterval> {
    if state.t() == 0 {
        return Err(Error::NoData);
    }
    if !boundary.is_sub_gaussian() {
        return Err(Error::Config(
            "the Hoeffding sequence needs a sub-Gaussian boundary (normal mixture or stitched)"
                .into(),
        ));
    }
    let t = state.t() as f64;
    let b = state.bound();
    let radius = match boundary.kind() {
        // The stitched constants are stated for unit scale.
        BoundaryKind::Stitched95 => b * boundary.value(t)? / t,
        _ => boundary.value(t * b * b)? / t,
    };
    Ok(centered(state, radius))
}

/// Empirical-Bernstein sequence `Δ̂_t ± u(V̂_t)/t` for a sub-exponential
/// boundary with scale `c = 2·bound`.
pub fn cs_eb(state: &ComparisonState, boundary: &UniformBoundary) -> Result<ConfInterval> {
    if state.t() == 0 {
        return Err(Error::NoData);
    }
    let t = state.t() as f64;
    let b = state.bound();
    let radius = match boundary.kind() {
        BoundaryKind::Stitched95 => b * boundary.value(state.vhat() / (b * b))? / t,
        BoundaryKind::GammaExponentialMixture { c, .. } => {
            if (c - 2.0 * b).abs() > 1e-12 * c.max(1.0) {
                return Err(Error::Config(format!(
                    "boundary scale c = {c} does not match 2 x bound = {}",
                    2.0 * b
                )));
            }
            boundary.value(state.vhat())? / t
        }
        BoundaryKind::NormalMixture { .. } => {
            return Err(Error::Config(
                "the empirical-Bernstein sequence needs a sub-exponential boundary".into(),
            ))
        }
    };
    Ok(centered(state, radius))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    PBetter,
    QBetter,
    Undecided,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::PBetter => "p_better",
            Decision::QBetter => "q_better",
            Decision::Undecided => "undecided",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p_better" => Ok(Decision::PBetter),
            "q_better" => Ok(Decision::QBetter),
            "undecided" => Ok(Decision::Undecided),
            other => Err(Error::Config(format!("unknown decision {other:?}"))),
        }
    }
}

pub fn decide(ci: &ConfInterval) -> Decision {
    if ci.lower > 0.0 {
        Decision::PBetter
    } else if ci.upper < 0.0 {
        Decision::QBetter
    } else {
        Decision::Undecided
    }
}
