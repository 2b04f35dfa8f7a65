//! Independent numerical oracles and simulation helpers shared by the
//! integration tests.
#![allow(dead_code)]

use quadrature::double_exponential;

const QUAD_TOL: f64 = 1e-14;

/// `∫_a^b exp(g(x) − shift) dx` by tanh-sinh quadrature.
fn integrate_shifted(g: &dyn Fn(f64) -> f64, shift: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    double_exponential::integrate(|x| (g(x) - shift).exp(), a, b, QUAD_TOL).integral
}

/// `log ∫_0^1 exp((1 − x)k + (a − 1) log x − r x) dx`, splitting at the
/// interior maximum and factoring out its value so nothing overflows. For
/// `a ≤ 1` the substitution `w = x^a` removes the endpoint singularity.
fn ln_integral_unit(k: f64, a: f64, r: f64) -> f64 {
    let linear = move |x: f64| (1.0 - x) * k - r * x;
    if a <= 1.0 {
        let shift = k.max(-r);
        let g = move |w: f64| linear(w.powf(1.0 / a));
        return shift + integrate_shifted(&g, shift, 0.0, 1.0).ln() - a.ln();
    }
    let g = move |x: f64| linear(x) + (a - 1.0) * x.ln();
    let peak = ((a - 1.0) / (k + r)).clamp(0.0, 1.0);
    let peak = if (k + r) <= 0.0 { 1.0 } else { peak };
    let shift = g(peak);
    let total = integrate_shifted(&g, shift, 0.0, peak) + integrate_shifted(&g, shift, peak, 1.0);
    shift + total.ln()
}

/// `log m(s, v)` for the gamma-exponential mixture, from the defining
/// integral over `λ ∈ [0, 1/c)` with mixing density proportional to
/// `(1 − cλ)^{ρ/c² − 1} exp(−(ρ/c²)(1 − cλ))`. The normalizer is integrated
/// numerically as well.
///
/// In `x = 1 − cλ` the exponent `λs − ψ_{E,c}(λ)v` becomes
/// `(1 − x)(s/c + v/c²) + (v/c²) log x`.
pub fn ln_gamma_exp_m_quadrature(s: f64, v: f64, rho: f64, c: f64) -> f64 {
    let r = rho / (c * c);
    let k = s / c + v / (c * c);
    let a = v / (c * c) + r;
    ln_integral_unit(k, a, r) - ln_integral_unit(0.0, r, r)
}

/// Normal mixture `∫ exp(λs − λ²v/2) N(λ; 0, 1/ρ) dλ` by quadrature on
/// ±40 standard deviations around the integrand's peak.
pub fn normal_m_quadrature(s: f64, v: f64, rho: f64) -> f64 {
    let prec = v + rho;
    let center = s / prec;
    let sd = prec.powf(-0.5);
    let g = |l: f64| l * s - 0.5 * l * l * v - 0.5 * rho * l * l;
    let shift = g(center);
    let lo = center - 40.0 * sd;
    let hi = center + 40.0 * sd;
    let i = integrate_shifted(&g, shift, lo, center) + integrate_shifted(&g, shift, center, hi);
    (shift + i.ln() + 0.5 * (rho / (2.0 * std::f64::consts::PI)).ln()).exp()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

/// Mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
