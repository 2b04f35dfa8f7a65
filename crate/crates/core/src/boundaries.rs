//! Cumulant generating functions and sub-ψ uniform boundaries.
//!
//! A uniform boundary `u` with crossing probability `α` guarantees
//! `P(∃t: S_t ≥ u(V_t)) ≤ α` for every process `S_t` that is sub-ψ with
//! variance process `V_t`. Three boundaries are provided:
//!
//! - the closed-form 95% polynomially stitched boundary (LIL rate),
//! - the normal mixture (sub-Gaussian, closed form),
//! - the gamma-exponential mixture (sub-exponential, root of a closed-form
//!   mixture `m(s, v)`).
//!
//! The mixtures `m(s, v)` double as e-values; see [`crate::eprocess`].

use crate::special::{ln_gamma, ln_gamma_p, ln_lower_gamma_over_power};
use crate::{Error, Result};

/// Absolute tolerance on `s` for the gamma-exponential boundary root.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// The bracketing search gives up past this point.
const BRACKET_LIMIT: f64 = 1e9;

/// Crossing probability of each side of the printed stitched boundary.
pub const STITCHED95_ALPHA: f64 = 0.025;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cgf {
    /// `ψ_N(λ) = λ²/2`.
    Normal,
    /// `ψ_{E,c}(λ) = c⁻²(−log(1 − cλ) − cλ)`.
    Exponential { c: f64 },
    /// `ψ_{G,c}(λ) = λ² / (2(1 − cλ))`.
    Gamma { c: f64 },
}

impl Cgf {
    pub fn lambda_max(&self) -> f64 {
        match *self {
            Cgf::Normal => f64::INFINITY,
            Cgf::Exponential { c } | Cgf::Gamma { c } => 1.0 / c,
        }
    }

    pub fn psi(&self, lambda: f64) -> Result<f64> {
        if let Cgf::Exponential { c } | Cgf::Gamma { c } = *self {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::domain("c", c, "must be positive"));
            }
        }
        if !(lambda >= 0.0 && lambda < self.lambda_max()) {
            return Err(Error::domain("lambda", lambda, "must lie in [0, lambda_max)"));
        }
        Ok(match *self {
            Cgf::Normal => 0.5 * lambda * lambda,
            Cgf::Exponential { c } => {
                let x = c * lambda;
                // −log(1 − x) − x, cancellation-free for small x
                (-(-x).ln_1p() - x) / (c * c)
            }
            Cgf::Gamma { c } => lambda * lambda / (2.0 * (1.0 - c * lambda)),
        })
    }
}

pub fn psi(cgf: Cgf, lambda: f64) -> Result<f64> {
    cgf.psi(lambda)
}

/// Bracketed radius of the printed 95% stitched boundary,
/// `1.7√(v(loglog(2v) + 3.8)) + 3.4 loglog(2v) + 13` with `v = vhat ∨ 1`.
///
/// The printed confidence sequence assumes `|δ̂ − δ| ≤ 2` and uses
/// `Δ̂_t ± 2 · radius / t`; callers apply that scaling.
pub fn stitched95_radius(vhat: f64) -> f64 {
    let v = vhat.max(1.0);
    let ll = (2.0 * v).ln().ln();
    1.7 * (v * (ll + 3.8)).sqrt() + 3.4 * ll + 13.0
}

/// Normal-mixture supermartingale
/// `∫ exp(λs − λ²v/2) dN(λ; 0, 1/ρ) = √(ρ/(v+ρ)) exp(s²/(2(v+ρ)))`.
///
/// The Gaussian mixing distribution spans all of `ℝ`, so the value is even
/// in `s`.
pub fn mixture_m_normal(s: f64, v: f64, rho: f64) -> f64 {
    ln_mixture_m_normal(s, v, rho).exp()
}

pub fn ln_mixture_m_normal(s: f64, v: f64, rho: f64) -> f64 {
    0.5 * (rho / (v + rho)).ln() + s * s / (2.0 * (v + rho))
}

/// Closed-form root of `mixture_m_normal(·, v, ρ) = 1/α`:
/// `√((v+ρ) log((v+ρ)/(α²ρ)))`.
pub fn normal_mixture_bound(v: f64, rho: f64, alpha: f64) -> f64 {
    ((v + rho) * ((v + rho) / (alpha * alpha * rho)).ln()).sqrt()
}

/// Gamma-exponential conjugate mixture for the sub-exponential CGF
/// `ψ_{E,c}`, with the log-normalizer cached per `(ρ, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaExponentialMixture {
    rho: f64,
    c: f64,
    // ρ' = ρ/c² and log C(ρ') = ρ' log ρ' − log Γ(ρ') − log P(ρ', ρ')
    rho_s: f64,
    ln_norm: f64,
}

impl GammaExponentialMixture {
    pub fn new(rho: f64, c: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::domain("rho", rho, "must be positive"));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain("c", c, "must be positive"));
        }
        let rho_s = rho / (c * c);
        let ln_norm = rho_s * rho_s.ln() - ln_gamma(rho_s) - ln_gamma_p(rho_s, rho_s)?;
        Ok(GammaExponentialMixture {
            rho,
            c,
            rho_s,
            ln_norm,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `log m(s, v)`.
    ///
    /// With `a = (v+ρ)/c²` and `z = (cs+v+ρ)/c²`, for `z > 0`
    /// `m = C Γ(a) P(a, z) / z^a · exp((cs+v)/c²)`; for `z ≤ 0` the exact
    /// integral is replaced by its upper bound `C e^{−ρ/c²} / a ≤ 1`.
    pub fn ln_m(&self, s: f64, v: f64) -> f64 {
        debug_assert!(v >= 0.0, "intrinsic time must be nonnegative");
        let c = self.c;
        let a = v / (c * c) + self.rho_s;
        let z = s / c + a;
        if z <= 0.0 {
            return self.ln_norm - self.rho_s - a.ln();
        }
        let ln_ratio = ln_lower_gamma_over_power(a, z)
            .expect("a > 0 and z > 0 by construction");
        // (cs + v)/c² = z − ρ'
        self.ln_norm + ln_ratio + (z - self.rho_s)
    }

    pub fn m(&self, s: f64, v: f64) -> f64 {
        self.ln_m(s, v).exp()
    }

    /// `sup{s : m(s, v) < 1/α}` by bracketing and bisection. The returned
    /// value is the upper end of the final bracket, so `m(u, v) ≥ 1/α`
    /// always holds at the returned `u`.
    pub fn bound(&self, v: f64, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::domain("v", v, "must be nonnegative and finite"));
        }
        let target = -alpha.ln();
        let f = |s: f64| self.ln_m(s, v) - target;

        // m ≤ 1 < 1/α at z = 0, so the root lies above s = −(v+ρ)/c.
        let mut lo = -(v + self.rho) / self.c;
        let mut hi = 1.0f64;
        while f(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > BRACKET_LIMIT {
                return Err(Error::RootFinding(format!(
                    "m(s, {v}) stays below 1/α = {} up to s = {BRACKET_LIMIT}",
                    1.0 / alpha
                )));
            }
        }
        while hi - lo > BOUNDARY_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "must lie in (0, 1)"))
    }
}

pub fn gamma_exponential_m(s: f64, v: f64, rho: f64, c: f64) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(Error::domain("v", v, "must be nonnegative"));
    }
    Ok(GammaExponentialMixture::new(rho, c)?.m(s, v))
}

pub fn gamma_exponential_bound(v: f64, rho: f64, c: f64, alpha: f64) -> Result<f64> {
    GammaExponentialMixture::new(rho, c)?.bound(v, alpha)
}

/// The mixture precision `ρ` that makes the boundary tightest at intrinsic
/// time `v_opt`, found by golden-section search over `log ρ` on
/// `[10⁻⁶ v_opt, 10⁶ v_opt]`.
pub fn rho_for_vopt(v_opt: f64, cgf: Cgf, alpha: f64) -> Result<f64> {
    if !(v_opt > 0.0 && v_opt.is_finite()) {
        return Err(Error::domain("v_opt", v_opt, "must be positive"));
    }
    check_alpha(alpha)?;
    let width: Box<dyn Fn(f64) -> Result<f64>> = match cgf {
        Cgf::Normal => Box::new(move |rho| Ok(normal_mixture_bound(v_opt, rho, alpha))),
        Cgf::Exponential { c } => {
            Box::new(move |rho| GammaExponentialMixture::new(rho, c)?.bound(v_opt, alpha))
        }
        Cgf::Gamma { .. } => {
            return Err(Error::Config(
                "no conjugate-mixture boundary is implemented for the gamma CGF".into(),
            ))
        }
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut lo = (1e-6 * v_opt).ln();
    let mut hi = (1e6 * v_opt).ln();
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = width(x1.exp())?;
    let mut f2 = width(x2.exp())?;
    while hi - lo > 1e-6 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = width(x1.exp())?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = width(x2.exp())?;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind {
    /// Printed 95% polynomial stitching instance; fixed two-sided α = 0.05.
    Stitched95,
    NormalMixture { rho: f64 },
    GammaExponentialMixture { rho: f64, c: f64 },
}

/// A boundary together with its one-sided crossing probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformBoundary {
    kind: BoundaryKind,
    alpha: f64,
    mixture: Option<GammaExponentialMixture>,
}

impl UniformBoundary {
    /// `2 × stitched95_radius`, valid for `|δ̂ − δ| ≤ 2` at crossing
    /// probability 0.025.
    pub fn stitched95() -> Self {
        UniformBoundary {
            kind: BoundaryKind::Stitched95,
            alpha: STITCHED95_ALPHA,
            mixture: None,
        }
    }

    pub fn normal_mixture(rho: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::domain("rho", rho, "must be positive"));
        }
        Ok(UniformBoundary {
            kind: BoundaryKind::NormalMixture { rho },
            alpha,
            mixture: None,
        })
    }

    pub fn gamma_exponential(rho: f64, c: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let mixture = GammaExponentialMixture::new(rho, c)?;
        Ok(UniformBoundary {
            kind: BoundaryKind::GammaExponentialMixture { rho, c },
            alpha,
            mixture: Some(mixture),
        })
    }

    /// Builds the one-sided boundary for a two-sided `(1 − alpha)` confidence
    /// sequence, i.e. with crossing probability `alpha / 2`.
    pub fn for_confidence_level(kind: BoundaryKind, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        match kind {
            BoundaryKind::Stitched95 => {
                if (alpha - 2.0 * STITCHED95_ALPHA).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "the stitched boundary is only available at alpha = 0.05 (got {alpha})"
                    )));
                }
                Ok(Self::stitched95())
            }
            BoundaryKind::NormalMixture { rho } => Self::normal_mixture(rho, alpha / 2.0),
            BoundaryKind::GammaExponentialMixture { rho, c } => {
                Self::gamma_exponential(rho, c, alpha / 2.0)
            }
        }
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    /// One-sided crossing probability.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Valid for sub-Gaussian processes (Hoeffding-style sequences).
    pub fn is_sub_gaussian(&self) -> bool {
        matches!(self.kind, BoundaryKind::Stitched95 | BoundaryKind::NormalMixture { .. })
    }

    /// Valid for sub-exponential processes (empirical-Bernstein sequences).
    pub fn is_sub_exponential(&self) -> bool {
        matches!(
            self.kind,
            BoundaryKind::Stitched95 | BoundaryKind::GammaExponentialMixture { .. }
        )
    }

    /// `u(v)`.
    pub fn value(&self, v: f64) -> Result<f64> {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::domain("v", v, "must be nonnegative and finite"));
        }
        match self.kind {
            BoundaryKind::Stitched95 => Ok(2.0 * stitched95_radius(v)),
            BoundaryKind::NormalMixture { rho } => Ok(normal_mixture_bound(v, rho, self.alpha)),
            BoundaryKind::GammaExponentialMixture { .. } => self
                .mixture
                .expect("mixture is built with the boundary")
                .bound(v, self.alpha),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(Cgf::Normal, 0.0).unwrap(), 0.0);
        assert_eq!(psi(Cgf::Normal, 2.0).unwrap(), 2.0);
        let e = psi(Cgf::Exponential { c: 1.0 }, 0.5).unwrap();
        assert!((e - (-(0.5f64).ln() - 0.5)).abs() < 1e-15);
        assert!((e - 0.193_147_18).abs() < 1e-8);
        assert!((psi(Cgf::Gamma { c: 1.0 }, 0.5).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn psi_domain() {
        assert!(psi(Cgf::Exponential { c: 1.0 }, 1.0).is_err());
        assert!(psi(Cgf::Exponential { c: 2.0 }, 0.5).is_err());
        assert!(psi(Cgf::Gamma { c: 0.5 }, 2.5).is_err());
        assert!(psi(Cgf::Normal, -0.1).is_err());
        assert!(psi(Cgf::Exponential { c: 0.0 }, 0.1).is_err());
        assert_eq!(Cgf::Normal.lambda_max(), f64::INFINITY);
        assert_eq!(Cgf::Exponential { c: 4.0 }.lambda_max(), 0.25);
    }

    #[test]
    fn cgfs_convex_increasing() {
        for cgf in [Cgf::Normal, Cgf::Exponential { c: 1.0 }, Cgf::Gamma { c: 0.5 }] {
            let top = cgf.lambda_max().min(10.0);
            let n = 400;
            let vals: Vec<f64> = (0..n)
                .map(|i| cgf.psi(top * i as f64 / n as f64).unwrap())
                .collect();
            assert_eq!(vals[0], 0.0);
            for w in vals.windows(3) {
                assert!(w[1] >= w[0]);
                assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-12);
            }
        }
    }

    #[test]
    fn stitched_values() {
        assert!((stitched95_radius(1.0) - 14.9039).abs() < 1e-3);
        assert_eq!(stitched95_radius(0.5), stitched95_radius(1.0));
        assert_eq!(stitched95_radius(0.0), stitched95_radius(1.0));
        // Independent re-evaluation with a different association order.
        let v: f64 = 1e6;
        let ll = f64::ln(f64::ln(v) + std::f64::consts::LN_2);
        let want = 13.0 + 3.4 * ll + 1.7 * v.sqrt() * (3.8 + ll).sqrt();
        assert!(rel(stitched95_radius(v), want) < 1e-14);
    }

    #[test]
    fn normal_mixture_examples() {
        assert_eq!(mixture_m_normal(0.0, 0.0, 1.0), 1.0);
        assert!((normal_mixture_bound(1.0, 1.0, 0.05) - (2.0 * 800f64.ln()).sqrt()).abs() < 1e-14);
        assert!((normal_mixture_bound(1.0, 1.0, 0.05) - 3.656_394_87).abs() < 1e-8);
        assert!((mixture_m_normal(3.656, 1.0, 1.0) - 20.0).abs() < 0.05);
        let u = normal_mixture_bound(1.0, 1.0, 0.05);
        assert!((mixture_m_normal(u, 1.0, 1.0) - 20.0).abs() < 1e-10);
        assert!((normal_mixture_bound(0.0, 1.0, (-0.5f64).exp()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normal_mixture_bound_matches_bisection() {
        let (v, rho, alpha) = (1e3, 1.0, 0.05);
        let (mut lo, mut hi) = (0.0, 1e3);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if mixture_m_normal(mid, v, rho) < 1.0 / alpha {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((normal_mixture_bound(v, rho, alpha) - lo).abs() < 1e-6);
    }

    // 30-digit quadrature of the defining integral.
    const GAMMA_EXP_REFERENCE: &[((f64, f64, f64, f64), f64)] = &[
        ((5.0, 10.0, 1.0, 1.0), 0.984_183_007_921_397_66),
        ((2.0, 1.0, 1.0, 1.0), 1.804_060_501_443_753_6),
        ((-3.0, 10.0, 1.0, 1.0), 0.134_934_168_351_264_33),
        ((30.0, 100.0, 10.0, 1.0), 17.710_739_378_590_952),
        ((1.0, 5.0, 0.5, 2.0), 0.203_882_850_710_171_46),
    ];

    #[test]
    fn gamma_exponential_matches_reference() {
        for &((s, v, rho, c), want) in GAMMA_EXP_REFERENCE {
            let got = gamma_exponential_m(s, v, rho, c).unwrap();
            assert!(rel(got, want) < 1e-10, "m({s},{v};{rho},{c}) = {got}, want {want}");
        }
    }

    #[test]
    fn gamma_exponential_normalized() {
        for &(rho, c) in &[(1.0, 1.0), (3.0, 0.5), (0.1, 2.0), (10.0, 0.1)] {
            let m = gamma_exponential_m(0.0, 0.0, rho, c).unwrap();
            assert!((m - 1.0).abs() < 1e-12, "rho={rho} c={c}: {m}");
        }
    }

    #[test]
    fn gamma_exponential_negative_branch() {
        let mix = GammaExponentialMixture::new(1.0, 1.0).unwrap();
        let v = 10.0;
        assert!(mix.m(-(v + 1.0 + 1.0), v) <= 1.0);
        // The bound branch is continuous with the closed form at z → 0⁺.
        let at_zero = mix.ln_m(-(v + 1.0), v);
        let just_above = mix.ln_m(-(v + 1.0) + 1e-9, v);
        assert!((at_zero - just_above).abs() < 1e-6);
    }

    #[test]
    fn gamma_exponential_large_arguments_finite() {
        let mix = GammaExponentialMixture::new(1.0, 1.0).unwrap();
        for &(s, v) in &[(1e6, 0.0), (1e6, 1e6), (1e5, 1e3), (-1e6, 1e6)] {
            assert!(mix.ln_m(s, v).is_finite(), "s={s} v={v}");
        }
    }

    #[test]
    fn gamma_exponential_monotone_in_s() {
        let mix = GammaExponentialMixture::new(2.0, 1.0).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in -200..400 {
            let l = mix.ln_m(i as f64 * 0.1, 5.0);
            assert!(l >= prev - 1e-12);
            prev = l;
        }
    }

    #[test]
    fn gamma_exponential_bound_consistency() {
        for &(v, rho, c, alpha) in &[
            (1.0, 1.0, 1.0, 0.05),
            (10.0, 1.0, 2.0, 0.025),
            (0.0, 0.3, 1.0, 0.5),
            (500.0, 5.0, 0.1, 0.01),
            (3.0, 1.0, 1.0, 0.999),
        ] {
            let mix = GammaExponentialMixture::new(rho, c).unwrap();
            let u = mix.bound(v, alpha).unwrap();
            assert!((mix.m(u, v) * alpha - 1.0).abs() < 1e-6, "v={v} alpha={alpha}");
            assert!(mix.m(u, v) >= 1.0 / alpha);
            assert!(mix.m(u - 2.0 * BOUNDARY_TOL, v) < 1.0 / alpha);
        }
    }

    #[test]
    fn bounds_nondecreasing_in_v() {
        let ge = UniformBoundary::gamma_exponential(1.0, 1.0, 0.05).unwrap();
        let nm = UniformBoundary::normal_mixture(1.0, 0.05).unwrap();
        let st = UniformBoundary::stitched95();
        for b in [ge, nm, st] {
            let mut prev = 0.0;
            for i in 0..200 {
                let v = (i as f64 * 0.1).exp() - 1.0;
                let u = b.value(v).unwrap();
                assert!(u.is_finite());
                assert!(u >= prev - 2.0 * BOUNDARY_TOL, "{:?} at v={v}", b.kind());
                prev = u;
            }
        }
        let (a, b, c) = (
            gamma_exponential_bound(1.0, 1.0, 1.0, 0.05).unwrap(),
            gamma_exponential_bound(10.0, 1.0, 1.0, 0.05).unwrap(),
            gamma_exponential_bound(100.0, 1.0, 1.0, 0.05).unwrap(),
        );
        assert!(a <= b && b <= c);
    }

    #[test]
    fn rho_for_vopt_matches_lambert_optimum() {
        // The normal-mixture optimum is ρ* = v / (−W₋₁(−α²/e) − 1); Lambert
        // values from an independent high-precision evaluation.
        for &(alpha, w) in &[(0.025, -10.752_937_920_382_603), (0.05, -9.211_968_062_068_253)] {
            for &v in &[1.0, 10.0, 1e3] {
                let got = rho_for_vopt(v, Cgf::Normal, alpha).unwrap();
                let want = v / (-w - 1.0);
                assert!(rel(got, want) < 1e-5, "alpha={alpha} v={v}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn rho_for_vopt_normal_stationary() {
        let (v, alpha) = (10.0, 0.025);
        let rho = rho_for_vopt(v, Cgf::Normal, alpha).unwrap();
        let h = 1e-4 * rho;
        let d = (normal_mixture_bound(v, rho + h, alpha) - normal_mixture_bound(v, rho - h, alpha))
            / (2.0 * h);
        assert!(d.abs() < 1e-4, "derivative {d}");
        let r2 = rho_for_vopt(2.0 * v, Cgf::Normal, alpha).unwrap();
        assert!(rel(r2, 2.0 * rho) < 1e-5);
    }

    #[test]
    fn rho_for_vopt_exponential_is_a_minimizer() {
        let (v, alpha, c) = (10.0, 0.025, 2.0);
        let rho = rho_for_vopt(v, Cgf::Exponential { c }, alpha).unwrap();
        let u = |r| gamma_exponential_bound(v, r, c, alpha).unwrap();
        assert!(u(rho) <= u(2.0 * rho) + 1e-9);
        assert!(u(rho) <= u(0.5 * rho) + 1e-9);
        assert!(rho_for_vopt(v, Cgf::Gamma { c }, alpha).is_err());
    }

    #[test]
    fn asymptotic_rate() {
        let ge = UniformBoundary::gamma_exponential(1.0, 1.0, 0.025).unwrap();
        let nm = UniformBoundary::normal_mixture(1.0, 0.025).unwrap();
        for b in [ge, nm] {
            for k in 0..=8 {
                let v = 10f64.powf(2.0 + 0.5 * k as f64);
                let ratio = b.value(v).unwrap() / (v * v.ln()).sqrt();
                assert!((0.5..3.0).contains(&ratio), "{:?}: ratio {ratio} at v={v}", b.kind());
            }
        }
    }

    #[test]
    fn confidence_level_builder() {
        let b = UniformBoundary::for_confidence_level(BoundaryKind::NormalMixture { rho: 1.0 }, 0.1)
            .unwrap();
        assert_eq!(b.alpha(), 0.05);
        assert!(UniformBoundary::for_confidence_level(BoundaryKind::Stitched95, 0.1).is_err());
        let s = UniformBoundary::for_confidence_level(BoundaryKind::Stitched95, 0.05).unwrap();
        assert_eq!(s.alpha(), 0.025);
        assert!(s.is_sub_gaussian() && s.is_sub_exponential());
        assert!(UniformBoundary::normal_mixture(1.0, 1.0).is_err());
    }
}
