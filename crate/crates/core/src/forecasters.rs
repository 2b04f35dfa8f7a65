//! Reference forecasters and the synthetic changepoint game.
//!
//! Forecasters are driven as `p = f.predict(); f.update(p, y)`, so every
//! forecast depends only on strictly earlier outcomes. The simulator draws
//! reality `r_t` and outcomes `y_t ~ Bern(r_t)` from ChaCha8 streams seeded
//! by `seed_from_u64(seed)`: stream 1 for the noise on `r_t`, stream 2 for
//! the outcomes. Both are bit-reproducible across platforms.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::scoring::{mean_diff, ScoringRule};
use crate::{Error, Result};

/// Bisection tolerance for the K29 root.
pub const K29_TOL: f64 = 1e-6;
/// Grid size of the sign-change scan on `[0, 1]`.
pub const K29_SCAN_POINTS: usize = 64;

const NOISE_SD: f64 = 0.1;
const NOISE_STREAM: u64 = 1;
const OUTCOME_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `(1 + pq)^d`.
    Poly { degree: u32 },
    /// `exp(−(p − q)² / (2σ²))`.
    Rbf { sigma: f64 },
}

impl Kernel {
    pub fn eval(&self, p: f64, q: f64) -> f64 {
        match *self {
            Kernel::Poly { degree } => (1.0 + p * q).powi(degree as i32),
            Kernel::Rbf { sigma } => {
                let d = p - q;
                (-d * d / (2.0 * sigma * sigma)).exp()
            }
        }
    }
}

pub fn laplace_predict(history: &[u8]) -> f64 {
    let k = history.iter().filter(|&&y| y == 1).count();
    (k as f64 + 0.5) / (history.len() as f64 + 1.0)
}

/// Root of `f` on `[0, 1]`: first sign change on the scan grid refined by
/// bisection; `1` if `f > 0` throughout, `0` if `f < 0` throughout.
fn k29_root(f: impl Fn(f64) -> f64) -> f64 {
    let n = K29_SCAN_POINTS - 1;
    let mut x_prev = 0.0;
    let mut f_prev = f(0.0);
    if f_prev == 0.0 {
        return 0.0;
    }
    for i in 1..=n {
        let x = i as f64 / n as f64;
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) != (f_prev > 0.0) {
            let (mut lo, mut hi, f_lo_pos) = (x_prev, x, f_prev > 0.0);
            while hi - lo > K29_TOL {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    return mid;
                }
                if (fm > 0.0) == f_lo_pos {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// K29 defensive forecast from the full `(forecast, outcome)` history.
pub fn k29_predict(history: &[(f64, u8)], kernel: Kernel) -> f64 {
    if history.is_empty() {
        return 0.5;
    }
    k29_root(|p| {
        history
            .iter()
            .map(|&(pi, yi)| kernel.eval(p, pi) * (f64::from(yi) - pi))
            .sum()
    })
}

/// `(k + c)/(n + 1)` for a team with `k` wins in `n` games this season.
pub fn seasonal_laplace_predict(wins: u32, games: u32, carryover: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&carryover) {
        return Err(Error::domain("carryover", carryover, "must lie in [0, 1]"));
    }
    if wins > games {
        return Err(Error::Config(format!("{wins} wins in {games} games")));
    }
    Ok((f64::from(wins) + carryover) / (f64::from(games) + 1.0))
}

/// Carryover into the next season: the final forecast reverted to 1/2 by
/// one third.
pub fn season_carryover(p_final: f64) -> f64 {
    (2.0 / 3.0) * p_final + 1.0 / 6.0
}

/// Initial carryover of a new league.
pub const INITIAL_CARRYOVER: f64 = 0.5;

/// Normalizes a pair of win probabilities to sum to one; `(0, 0)` maps to
/// `(0.5, 0.5)`.
pub fn rescale_pair(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if s == 0.0 {
        (0.5, 0.5)
    } else {
        (a / s, b / s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForecasterKind {
    Constant(f64),
    Laplace,
    K29(Kernel),
}

impl fmt::Display for ForecasterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForecasterKind::Constant(v) => write!(f, "always_{v}"),
            ForecasterKind::Laplace => f.write_str("laplace"),
            ForecasterKind::K29(Kernel::Poly { degree }) => write!(f, "k29_poly{degree}"),
            ForecasterKind::K29(Kernel::Rbf { sigma }) => write!(f, "k29_rbf{sigma}"),
        }
    }
}

impl FromStr for ForecasterKind {
    type Err = Error;

    /// Accepts `always_<x>`, `laplace`, `k29_poly<d>` and `k29_rbf<σ>`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Config(format!("unknown forecaster {s:?}"));
        if s == "laplace" {
            return Ok(ForecasterKind::Laplace);
        }
        if let Some(v) = s.strip_prefix("always_") {
            let v: f64 = v.parse().map_err(|_| unknown())?;
            if !(0.0..=1.0).contains(&v) {
                return Err(unknown());
            }
            return Ok(ForecasterKind::Constant(v));
        }
        if let Some(d) = s.strip_prefix("k29_poly") {
            let degree: u32 = d.parse().map_err(|_| unknown())?;
            if degree == 0 {
                return Err(unknown());
            }
            return Ok(ForecasterKind::K29(Kernel::Poly { degree }));
        }
        if let Some(sig) = s.strip_prefix("k29_rbf") {
            let sigma: f64 = sig.parse().map_err(|_| unknown())?;
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(unknown());
            }
            return Ok(ForecasterKind::K29(Kernel::Rbf { sigma }));
        }
        Err(unknown())
    }
}

/// Online forecaster. Polynomial-kernel K29 keeps the moment sums
/// `M_k = Σ p_i^k (y_i − p_i)`, so that
/// `f(p) = Σ_k C(d, k) p^k M_k` costs `O(d)` per evaluation.
#[derive(Debug, Clone)]
pub struct Forecaster {
    kind: ForecasterKind,
    n: u64,
    ones: u64,
    moments: Vec<f64>,
    binom: Vec<f64>,
    history: Vec<(f64, u8)>,
}

impl Forecaster {
    pub fn new(kind: ForecasterKind) -> Self {
        let (moments, binom) = match kind {
            ForecasterKind::K29(Kernel::Poly { degree }) => {
                let d = degree as usize;
                let mut binom = vec![1.0; d + 1];
                for k in 1..=d {
                    binom[k] = binom[k - 1] * (d + 1 - k) as f64 / k as f64;
                }
                (vec![0.0; d + 1], binom)
            }
            _ => (Vec::new(), Vec::new()),
        };
        Forecaster {
            kind,
            n: 0,
            ones: 0,
            moments,
            binom,
            history: Vec::new(),
        }
    }

    pub fn kind(&self) -> ForecasterKind {
        self.kind
    }

    pub fn predict(&self) -> f64 {
        match self.kind {
            ForecasterKind::Constant(v) => v,
            ForecasterKind::Laplace => (self.ones as f64 + 0.5) / (self.n as f64 + 1.0),
            ForecasterKind::K29(_) if self.n == 0 => 0.5,
            ForecasterKind::K29(Kernel::Poly { .. }) => k29_root(|p| {
                let mut acc = 0.0;
                let mut pk = 1.0;
                for (b, m) in self.binom.iter().zip(&self.moments) {
                    acc += b * pk * m;
                    pk *= p;
                }
                acc
            }),
            ForecasterKind::K29(kernel) => k29_predict(&self.history, kernel),
        }
    }

    /// Records the forecast actually issued and the realized outcome.
    pub fn update(&mut self, p: f64, y: u8) {
        self.n += 1;
        self.ones += u64::from(y == 1);
        match self.kind {
            ForecasterKind::K29(Kernel::Poly { .. }) => {
                let resid = f64::from(y) - p;
                let mut pk = 1.0;
                for m in &mut self.moments {
                    *m += pk * resid;
                    pk *= p;
                }
            }
            ForecasterKind::K29(Kernel::Rbf { .. }) => self.history.push((p, y)),
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealitySequence {
    pub r: Vec<f64>,
    pub seed: u64,
}

/// Changepoint parameter `θ_t` for 1-based `t`.
pub fn changepoint_theta(t: usize) -> f64 {
    match t {
        0..=100 => 0.5,
        101..=500 => 0.0,
        501..=5000 => 1.0,
        _ => 0.0,
    }
}

/// `r_t = 0.8θ_t + 0.2(1 − θ_t) + ε_t`, `ε_t ~ N(0, 0.1²)`, clamped to
/// `[0, 1]`. With `noise = false` the `ε_t` are omitted.
pub fn changepoint_reality(t_max: usize, seed: u64, noise: bool) -> Result<RealitySequence> {
    if t_max == 0 {
        return Err(Error::domain("T", 0.0, "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(NOISE_STREAM);
    let normal = Normal::new(0.0, NOISE_SD).expect("valid normal");
    let r = (1..=t_max)
        .map(|t| {
            let theta = changepoint_theta(t);
            let base = 0.8 * theta + 0.2 * (1.0 - theta);
            let eps = if noise { normal.sample(&mut rng) } else { 0.0 };
            (base + eps).clamp(0.0, 1.0)
        })
        .collect();
    Ok(RealitySequence { r, seed })
}

pub fn sample_outcomes(reality: &RealitySequence, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(OUTCOME_STREAM);
    reality
        .r
        .iter()
        .map(|&r| u8::from(rng.random::<f64>() < r))
        .collect()
}

/// One round of the game together with the oracle differential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameRound {
    pub t: u64,
    pub p: f64,
    pub q: f64,
    pub y: u8,
    pub r: f64,
    /// `S(p, r) − S(q, r)`.
    pub delta: f64,
    /// Running average of `delta` up to `t`.
    pub delta_true: f64,
}

/// Plays two forecasters against a fixed reality and outcome sequence.
pub fn play_game(
    p_kind: ForecasterKind,
    q_kind: ForecasterKind,
    reality: &RealitySequence,
    outcomes: &[u8],
    rule: ScoringRule,
) -> Result<Vec<GameRound>> {
    if outcomes.len() != reality.r.len() {
        return Err(Error::LengthMismatch {
            expected: reality.r.len(),
            got: outcomes.len(),
        });
    }
    let mut fp = Forecaster::new(p_kind);
    let mut fq = Forecaster::new(q_kind);
    let mut sum = 0.0;
    let mut rounds = Vec::with_capacity(outcomes.len());
    for (i, (&r, &y)) in reality.r.iter().zip(outcomes).enumerate() {
        let p = fp.predict();
        let q = fq.predict();
        let delta = mean_diff(rule, p, q, r)?;
        sum += delta;
        let t = i as u64 + 1;
        rounds.push(GameRound {
            t,
            p,
            q,
            y,
            r,
            delta,
            delta_true: sum / t as f64,
        });
        fp.update(p, y);
        fq.update(q, y);
    }
    Ok(rounds)
}
