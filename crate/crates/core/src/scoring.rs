//! Proper scoring rules with linear equivalents.
//!
//! All scores are positively oriented (larger is better). Every rule here is
//! affine in the outcome argument up to a forecast-independent term, so the
//! empirical differential `S(p, y) − S(q, y)` is conditionally unbiased for
//! `S(p, r) − S(q, r)` whenever `E[y | past] = r`. That property is what lets
//! the confidence sequences in [`crate::confseq`] track the unobservable
//! `Δ_t` using only realized outcomes.

use crate::{Error, Result};

/// Default truncation level for the logarithmic score.
pub const DEFAULT_LOG_EPS: f64 = 0.01;

/// Tolerance on `Σ p_k = 1` for categorical forecasts; inputs within it are
/// renormalized, inputs outside it are rejected.
pub const SIMPLEX_TOL: f64 = 1e-9;

const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoringRule {
    /// `−(p − y)²`.
    Brier,
    /// `(p y + (1 − p)(1 − y)) / √(p² + (1 − p)²)`.
    Spherical,
    /// `1` if the forecast puts at least half its mass on the realized outcome.
    ZeroOne,
    /// Logarithmic score with the forecast clamped into `[eps, 1 − eps]`.
    /// Bounded, but no longer proper near the edges.
    LogTruncated { eps: f64 },
    /// Winkler's skill score of `p` relative to the baseline `q`, with a Brier
    /// base. Requires `q ∈ (q0, 1 − q0)`.
    Winkler { q0: f64 },
}

impl ScoringRule {
    pub fn log_truncated(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.5) {
            return Err(Error::domain("eps", eps, "must lie in (0, 0.5)"));
        }
        Ok(ScoringRule::LogTruncated { eps })
    }

    pub fn winkler(q0: f64) -> Result<Self> {
        if !(q0 > 0.0 && q0 < 1.0) {
            return Err(Error::domain("q0", q0, "must lie in (0, 1)"));
        }
        Ok(ScoringRule::Winkler { q0 })
    }

    /// Half-width `c/2` such that every pointwise differential on binary
    /// outcomes satisfies `|δ̂| ≤ c/2`.
    pub fn diff_bound(&self) -> f64 {
        match *self {
            ScoringRule::Brier | ScoringRule::Spherical | ScoringRule::ZeroOne => 1.0,
            ScoringRule::LogTruncated { eps } => ((1.0 - eps) / eps).ln(),
            // Brier-based Winkler scores lie in [1 − 2/m, 1], m = q0 ∧ (1 − q0).
            ScoringRule::Winkler { q0 } => {
                let m = q0.min(1.0 - q0);
                (2.0 / m - 1.0).max(1.0)
            }
        }
    }

    /// Differential bound for categorical outcomes. Only the Brier score
    /// changes: `‖p − y‖²` ranges over `[0, 2]`.
    pub fn categorical_diff_bound(&self) -> f64 {
        match self {
            ScoringRule::Brier => 2.0,
            other => other.diff_bound(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScoringRule::Brier => "brier",
            ScoringRule::Spherical => "spherical",
            ScoringRule::ZeroOne => "zero-one",
            ScoringRule::LogTruncated { .. } => "log",
            ScoringRule::Winkler { .. } => "winkler",
        }
    }
}

/// One empirical differential `δ̂_i` together with the bound it obeys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseDifferential {
    pub value: f64,
    pub bound: f64,
}

fn check_prob(what: &'static str, p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::domain(what, p, "must lie in [0, 1]"))
    }
}

fn check_outcome(y: u8) -> Result<f64> {
    match y {
        0 => Ok(0.0),
        1 => Ok(1.0),
        _ => Err(Error::domain("y", f64::from(y), "must be 0 or 1")),
    }
}

/// Score with the outcome slot holding any value in `[0, 1]`. For the
/// linear-equivalent rules this is exactly the `S(p, r)` that defines `δ_i`.
fn score_at(rule: ScoringRule, p: f64, o: f64) -> f64 {
    match rule {
        ScoringRule::Brier => -(p - o) * (p - o),
        ScoringRule::Spherical => {
            (p * o + (1.0 - p) * (1.0 - o)) / (p * p + (1.0 - p) * (1.0 - p)).sqrt()
        }
        ScoringRule::ZeroOne => {
            if p >= 0.5 {
                o
            } else {
                1.0 - o
            }
        }
        ScoringRule::LogTruncated { eps } => {
            let pc = p.clamp(eps, 1.0 - eps);
            o * pc.ln() + (1.0 - o) * (1.0 - pc).ln()
        }
        ScoringRule::Winkler { .. } => unreachable!("Winkler scores are pairwise"),
    }
}

/// Score of a binary forecast `p` against the realized outcome `y`.
///
/// The Winkler score compares two forecasts and is rejected here; use
/// [`winkler_score`].
pub fn score(rule: ScoringRule, p: f64, y: u8) -> Result<f64> {
    if let ScoringRule::Winkler { .. } = rule {
        return Err(Error::Config(
            "the Winkler score is pairwise; use winkler_score".into(),
        ));
    }
    let p = check_prob("p", p)?;
    let o = check_outcome(y)?;
    Ok(score_at(rule, p, o))
}

/// `S(p, r)`: the score evaluated at the outcome's conditional mean `r`.
/// Only a simulator that knows `r` can call this meaningfully.
pub fn score_against_mean(rule: ScoringRule, p: f64, r: f64) -> Result<f64> {
    if let ScoringRule::Winkler { .. } = rule {
        return Err(Error::Config(
            "the Winkler score is pairwise; use winkler_against_mean".into(),
        ));
    }
    let p = check_prob("p", p)?;
    let r = check_prob("r", r)?;
    Ok(score_at(rule, p, r))
}

/// Empirical differential `δ̂ = S(p, y) − S(q, y)`. For [`ScoringRule::Winkler`]
/// the value is the Winkler score `w(p, q, y)`.
pub fn pointwise_diff(rule: ScoringRule, p: f64, q: f64, y: u8) -> Result<PointwiseDifferential> {
    let value = match rule {
        ScoringRule::Winkler { q0 } => winkler_score(ScoringRule::Brier, q0, p, q, y)?,
        _ => score(rule, p, y)? - score(rule, q, y)?,
    };
    Ok(PointwiseDifferential {
        value,
        bound: rule.diff_bound(),
    })
}

/// True differential `δ = S(p, r) − S(q, r)` (or `w(p, q, r)` for Winkler).
pub fn mean_diff(rule: ScoringRule, p: f64, q: f64, r: f64) -> Result<f64> {
    match rule {
        ScoringRule::Winkler { q0 } => winkler_against_mean(ScoringRule::Brier, q0, p, q, r),
        _ => Ok(score_against_mean(rule, p, r)? - score_against_mean(rule, q, r)?),
    }
}

fn winkler_checked(base: ScoringRule, q0: f64, p: f64, q: f64) -> Result<()> {
    if base != ScoringRule::Brier {
        return Err(Error::Config(format!(
            "Winkler scores are only supported with a Brier base, got {}",
            base.name()
        )));
    }
    if !(q0 > 0.0 && q0 < 1.0) {
        return Err(Error::domain("q0", q0, "must lie in (0, 1)"));
    }
    check_prob("p", p)?;
    let lo = q0.min(1.0 - q0);
    if !(q > lo && q < 1.0 - lo) {
        return Err(Error::domain("q", q, "must lie strictly inside (q0, 1 − q0)"));
    }
    Ok(())
}

fn winkler_at(p: f64, q: f64, o: f64) -> f64 {
    let s = |x, o| score_at(ScoringRule::Brier, x, o);
    let normalizer = if p >= q {
        s(p, 1.0) - s(q, 1.0)
    } else {
        s(p, 0.0) - s(q, 0.0)
    };
    // T(p, q) = 0 iff p = q for a strictly proper base; 0/0 := 0.
    if normalizer == 0.0 {
        return 0.0;
    }
    (s(p, o) - s(q, o)) / normalizer
}

/// Winkler's normalized differential `w(p, q, y) = (S(p,y) − S(q,y)) / T(p,q)`
/// with `T(p, q) = S(p, 1{p≥q}) − S(q, 1{p≥q})` and `0/0 := 0`.
pub fn winkler_score(base: ScoringRule, q0: f64, p: f64, q: f64, y: u8) -> Result<f64> {
    winkler_checked(base, q0, p, q)?;
    let o = check_outcome(y)?;
    Ok(winkler_at(p, q, o))
}

/// `w(p, q, r)` at the outcome's conditional mean.
pub fn winkler_against_mean(base: ScoringRule, q0: f64, p: f64, q: f64, r: f64) -> Result<f64> {
    winkler_checked(base, q0, p, q)?;
    let r = check_prob("r", r)?;
    Ok(winkler_at(p, q, r))
}

/// Validates a categorical forecast and returns it renormalized.
fn simplex(p: &[f64]) -> Result<Vec<f64>> {
    if p.is_empty() {
        return Err(Error::Simplex { sum: 0.0 });
    }
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| !(x >= 0.0)) || !((sum - 1.0).abs() <= SIMPLEX_TOL) {
        return Err(Error::Simplex { sum });
    }
    Ok(p.iter().map(|&x| x / sum).collect())
}

fn one_hot_index(y: &[u8]) -> Result<usize> {
    let mut hot = None;
    for (k, &v) in y.iter().enumerate() {
        match (v, hot) {
            (0, _) => {}
            (1, None) => hot = Some(k),
            _ => return Err(Error::NotOneHot),
        }
    }
    hot.ok_or(Error::NotOneHot)
}

/// Score of a categorical forecast `p` (on the simplex) against a one-hot
/// outcome `y`.
pub fn categorical_score(rule: ScoringRule, p: &[f64], y: &[u8]) -> Result<f64> {
    if p.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: y.len(),
        });
    }
    let p = simplex(p)?;
    let j = one_hot_index(y)?;
    Ok(match rule {
        ScoringRule::Brier => -p
            .iter()
            .zip(y)
            .map(|(&pk, &yk)| (pk - f64::from(yk)).powi(2))
            .sum::<f64>(),
        ScoringRule::Spherical => p[j] / p.iter().map(|x| x * x).sum::<f64>().sqrt(),
        ScoringRule::ZeroOne => {
            if p[j] >= 0.5 {
                1.0
            } else {
                0.0
            }
        }
        ScoringRule::LogTruncated { eps } => p[j].clamp(eps, 1.0 - eps).ln(),
        ScoringRule::Winkler { .. } => {
            return Err(Error::Config(
                "Winkler scores are defined for binary outcomes only".into(),
            ))
        }
    })
}

pub fn categorical_diff(
    rule: ScoringRule,
    p: &[f64],
    q: &[f64],
    y: &[u8],
) -> Result<PointwiseDifferential> {
    Ok(PointwiseDifferential {
        value: categorical_score(rule, p, y)? - categorical_score(rule, q, y)?,
        bound: rule.categorical_diff_bound(),
    })
}

/// Weights averaging the scores of 1- to K-step-ahead forecasts of one outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct KStepWeights(Vec<f64>);

impl KStepWeights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Weights("need at least one weight".into()));
        }
        if w.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::Weights("weights must be finite and nonnegative".into()));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Weights(format!("weights sum to {sum}, not 1")));
        }
        Ok(KStepWeights(w))
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Weights("need at least one weight".into()));
        }
        Self::new(vec![1.0 / k as f64; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `S_w(p⃗, y) = Σ_k w_k S(p^{(k)}, y)`.
pub fn kstep_score(rule: ScoringRule, weights: &KStepWeights, p_vec: &[f64], y: u8) -> Result<f64> {
    if p_vec.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            got: p_vec.len(),
        });
    }
    weights
        .as_slice()
        .iter()
        .zip(p_vec)
        .try_fold(0.0, |acc, (&w, &p)| Ok(acc + w * score(rule, p, y)?))
}

pub fn kstep_diff(
    rule: ScoringRule,
    weights: &KStepWeights,
    p_vec: &[f64],
    q_vec: &[f64],
    y: u8,
) -> Result<PointwiseDifferential> {
    Ok(PointwiseDifferential {
        value: kstep_score(rule, weights, p_vec, y)? - kstep_score(rule, weights, q_vec, y)?,
        bound: rule.diff_bound(),
    })
}
