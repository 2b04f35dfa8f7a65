//! Resolved run configuration and the statistical plan derived from it.

use crate::boundaries::{rho_for_vopt, BoundaryKind, Cgf, GammaExponentialMixture, UniformBoundary};
use crate::confseq::Centering;
use crate::scoring::{KStepWeights, ScoringRule};
use crate::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_V_OPT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsKind {
    /// Empirical Bernstein (sub-exponential, intrinsic time `V̂_t`).
    Eb,
    /// Hoeffding (sub-Gaussian, intrinsic time `t·b²`).
    Hoeffding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryChoice {
    GammaExponential,
    NormalMixture,
    Stitched,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Schema {
    /// `t,p,q,y`.
    Binary,
    /// `t,odds_p,odds_q,y[,odds_p_opp,odds_q_opp]`.
    Odds,
    /// `t,p1..pK,q1..qK,y`.
    KStep(KStepWeights),
    /// `t,p_1..p_K,q_1..q_K,y` with `y ∈ {1..K}`.
    Categorical { classes: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub rule: ScoringRule,
    pub schema: Schema,
    pub alpha: f64,
    pub cs: CsKind,
    pub boundary: BoundaryChoice,
    /// Optional scale `c`; must be at least twice the rule's bound.
    pub c: Option<f64>,
    pub rho: Option<f64>,
    pub v_opt: Option<f64>,
    pub centering: Centering,
    pub intersect: bool,
    /// Tune `ρ` at the final intrinsic time of a first pass.
    pub post_hoc: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rule: ScoringRule::Brier,
            schema: Schema::Binary,
            alpha: DEFAULT_ALPHA,
            cs: CsKind::Eb,
            boundary: BoundaryChoice::GammaExponential,
            c: None,
            rho: None,
            v_opt: None,
            centering: Centering::Mean,
            intersect: false,
            post_hoc: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if self.rho.is_some() && self.v_opt.is_some() {
            return bad("give at most one of --rho and --v-opt");
        }
        if self.post_hoc && (self.rho.is_some() || self.v_opt.is_some()) {
            return bad("--post-hoc picks rho itself; drop --rho/--v-opt");
        }
        for (name, v) in [("rho", self.rho), ("v_opt", self.v_opt), ("c", self.c)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} must be positive and finite")));
                }
            }
        }
        match (self.cs, self.boundary) {
            (CsKind::Hoeffding, BoundaryChoice::GammaExponential) => {
                return bad("the Hoeffding sequence needs the normal-mixture or stitched boundary")
            }
            (CsKind::Eb, BoundaryChoice::NormalMixture) => {
                return bad("the empirical-Bernstein sequence needs the gamma-exponential or stitched boundary")
            }
            _ => {}
        }
        if self.boundary == BoundaryChoice::Stitched && (self.alpha - 0.05).abs() > 1e-12 {
            return bad("the stitched boundary is only available at alpha = 0.05");
        }
        if let Some(c) = self.c {
            let need = 2.0 * self.rule_bound();
            if c < need {
                return Err(Error::Config(format!(
                    "c = {c} is below twice the score differential bound ({need})"
                )));
            }
        }
        if let ScoringRule::Winkler { .. } = self.rule {
            if self.schema != Schema::Binary && self.schema != Schema::Odds {
                return bad("Winkler scores need binary forecasts");
            }
        }
        if let Schema::Categorical { classes } = self.schema {
            if classes < 2 {
                return bad("--classes must be at least 2");
            }
        }
        Ok(())
    }

    /// Bound on `|δ̂|` implied by the scoring rule and input schema.
    pub fn rule_bound(&self) -> f64 {
        match self.schema {
            Schema::Categorical { .. } => self.rule.categorical_diff_bound(),
            _ => self.rule.diff_bound(),
        }
    }

    /// Bound used by the running state: `c/2` if `c` is given.
    pub fn bound(&self) -> f64 {
        self.c.map_or_else(|| self.rule_bound(), |c| 0.5 * c)
    }

    /// Builds the plan. `observed_v` is the final intrinsic time of a first
    /// pass and is only consulted in post-hoc mode.
    pub fn plan(&self, observed_v: Option<f64>) -> Result<Plan> {
        self.validate()?;
        let b = self.bound();
        let c = 2.0 * b;
        let half = self.alpha / 2.0;
        let v_target = if self.post_hoc {
            let v = observed_v.ok_or_else(|| {
                Error::Config("post-hoc tuning needs a first pass over the data".into())
            })?;
            // A zero-variance stream gives no information about scale.
            v.max(b * b)
        } else {
            self.v_opt.unwrap_or(DEFAULT_V_OPT)
        };

        let exp_rho = match self.rho {
            Some(r) => r,
            None => rho_for_vopt(v_target, Cgf::Exponential { c }, half)?,
        };
        let kind = match self.boundary {
            BoundaryChoice::Stitched => BoundaryKind::Stitched95,
            BoundaryChoice::GammaExponential => BoundaryKind::GammaExponentialMixture { rho: exp_rho, c },
            BoundaryChoice::NormalMixture => {
                let rho = match self.rho {
                    Some(r) => r,
                    None => rho_for_vopt(v_target, Cgf::Normal, half)?,
                };
                BoundaryKind::NormalMixture { rho }
            }
        };
        Ok(Plan {
            boundary: UniformBoundary::for_confidence_level(kind, self.alpha)?,
            mixture: GammaExponentialMixture::new(exp_rho, c)?,
            cs: self.cs,
            bound: b,
            centering: self.centering,
            intersect: self.intersect,
        })
    }
}

/// Everything a comparison run needs, with `ρ` resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plan {
    pub boundary: UniformBoundary,
    /// Mixture used for the e-processes, scale `c = 2·bound`.
    pub mixture: GammaExponentialMixture,
    pub cs: CsKind,
    pub bound: f64,
    pub centering: Centering,
    pub intersect: bool,
}
