//! Laplace transforms of quadratic variation, squared increments (hence
//! realized variance) and `|X_t|^p`.
//!
//! * `E[e^{-u [X,X]_T}] = exp(T psi_qv(-u))` with
//!   `psi_qv(-u) = -sigma^2 u + int (e^{-u x^2} - 1) F(dx)`.
//! * `E[e^{-u X_t^2}] = E[exp(t psi(i Z sqrt(2u)))]`, `Z ~ N(0, 1)`, valid for
//!   `Re u > 0` when `psi` extends analytically to the hourglass region with
//!   at most quadratic growth.
//! * `E[e^{-u |X_t|^p}] = E[exp(t psi(i S u^{1/p}))]` with `S` symmetric
//!   p-stable, for real `u >= 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{expm1, is_finite};
use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelSpec, Params, Side};
use crate::quadrature::{exp_sinh, hermite_cached, tanh_sinh, QuadratureSpec};
use crate::special::{gamma, i_function};

/// Controls for the transform evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    /// Quadrature for the jump integrals and the U-function.
    pub quad: QuadratureSpec,
    /// Initial Gauss-Hermite order.
    pub gh_start: usize,
    /// Largest Gauss-Hermite order tried before the fallback rule.
    pub gh_max: usize,
    /// Relative tolerance on successive Gauss-Hermite estimates.
    pub rel_tol: f64,
    /// Absolute tolerance on successive Gauss-Hermite estimates.
    pub abs_tol: f64,
}

impl Default for TransformSpec {
    fn default() -> Self {
        TransformSpec { quad: QuadratureSpec::default(), gh_start: 128, gh_max: 2048, rel_tol: 1e-10, abs_tol: 1e-14 }
    }
}

/// Monte Carlo estimate of a real expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn gate(model: &ModelSpec) -> Result<()> {
    if model.satisfies_growth_condition() {
        Ok(())
    } else {
        Err(Error::ConditionViolated(format!(
            "{} exponent grows faster than quadratically in the sector pi/4 < arg u < 3pi/4; \
             E[exp(t psi(i Z sqrt(2u)))] does not exist",
            model.kind().name()
        )))
    }
}

fn check_half_plane(u: Complex64) -> Result<()> {
    if !is_finite(u) || u.re <= 0.0 {
        return Err(Error::Domain(format!("transform argument must satisfy Re u > 0, got {u}")));
    }
    Ok(())
}

/// `psi_qv(w)` at `w = -u`, `Re u > 0`: the exponent of quadratic variation,
/// `E[e^{-u [X,X]_T}] = exp(T psi_qv(-u))`.
///
/// Uses the closed form where one exists (Black-Scholes, Kou, CGMY, the
/// Poisson example) and quadrature over the Levy density otherwise.
pub fn psi_qv(model: &ModelSpec, w: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) {
        return Ok(w);
    }
    match psi_qv_closed_form(model, w, spec)? {
        Some(v) => Ok(v),
        None => psi_qv_quadrature(model, w, spec),
    }
}

/// Closed-form `psi_qv(-u)` (via the `I` function for Kou and CGMY); `None` for models without
/// one (Merton, NIG).
pub fn psi_qv_closed_form(model: &ModelSpec, w: Complex64, spec: &QuadratureSpec) -> Result<Option<Complex64>> {
    let u = -w;
    if u == Complex64::new(0.0, 0.0) {
        return Ok(Some(w));
    }
    check_half_plane(u)?;
    let diffusion = -model.sigma_sq() * u;
    let out = match *model.params() {
        Params::BlackScholes { .. } => diffusion,
        Params::Kou { lambda_plus, lambda_minus, nu_plus, nu_minus, .. } => {
            diffusion
                + lambda_plus * (nu_plus * i_function(1.0, nu_plus, u, spec)? - 1.0)
                + lambda_minus * (nu_minus * i_function(1.0, nu_minus, u, spec)? - 1.0)
        }
        Params::Cgmy { c, g, m, y } => {
            let d = y * (1.0 - y);
            let i2m = i_function(2.0 - y, m, u, spec)?;
            let i2g = i_function(2.0 - y, g, u, spec)?;
            let i3m = i_function(3.0 - y, m, u, spec)?;
            let i3g = i_function(3.0 - y, g, u, spec)?;
            c * ((-2.0 * u / y - m * m / d) * i2m + (-2.0 * u / y - g * g / d) * i2g
                - 2.0 * u * m / d * i3m
                - 2.0 * u * g / d * i3g
                + (m.powf(y) + g.powf(y)) / d * gamma(2.0 - y)?)
        }
        Params::CompensatedPoisson => expm1(-u),
        Params::Merton { lambda, gamma, delta, .. } => {
            // E[e^{-u J^2}] for J ~ N(gamma, delta^2)
            let z = 2.0 * u * delta * delta;
            diffusion + lambda * expm1(-u * gamma * gamma / (1.0 + z) - 0.5 * ln_1p(z))
        }
        Params::Nig { .. } => return Ok(None),
    };
    Ok(Some(out))
}

fn ln_1p(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        z * (1.0 - z * (0.5 - z * (1.0 / 3.0 - 0.25 * z)))
    } else {
        (1.0 + z).ln()
    }
}

/// `-sigma^2 u + int (e^{-u x^2} - 1) F(dx)` by quadrature over the Levy
/// density, on each half-line separately.
///
/// The half-line is rotated to the ray `r = s e^{-i phi}` with
/// `phi = arg(u + c) / 2` (where `c = 1/(2 delta^2)` absorbs the Gaussian
/// decay of the Merton density and is zero otherwise), on which `e^{-u r^2}`
/// no longer oscillates.  The integrand `expm1(-u r^2) f(r)` is kept in one
/// piece, so small `|u|` does not cancel against the mass of the measure.
pub fn psi_qv_quadrature(model: &ModelSpec, w: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    let u = -w;
    if u == Complex64::new(0.0, 0.0) {
        return Ok(w);
    }
    check_half_plane(u)?;
    let mut total = -model.sigma_sq() * u;
    let tail_rate = match *model.params() {
        Params::BlackScholes { .. } => return Ok(total),
        Params::CompensatedPoisson => return Ok(total + expm1(-u)),
        Params::Merton { delta, .. } => 0.5 / (delta * delta),
        _ => 0.0,
    };
    let phi = 0.5 * (u + tail_rate).arg();
    let rot = Complex64::from_polar(1.0, -phi);
    let s0 = 1.0 / (u + tail_rate).norm().sqrt();
    for side in [Side::Positive, Side::Negative] {
        let integrand = |s: f64| -> Complex64 {
            if s == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let r = rot * s;
            let f = model.levy_density(side, r);
            let v = expm1(-u * r * r) * f * rot;
            if is_finite(v) {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let near = tanh_sinh(|x, _| integrand(x), 0.0, s0, spec)?;
        let far = exp_sinh(|x, _| integrand(x), s0, spec)?;
        total += near.value + far.value;
    }
    Ok(total)
}

/// `E[e^{-u [X,X]_T}]`.
pub fn laplace_qv(model: &ModelSpec, u: Complex64, t: f64, spec: &TransformSpec) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {t}")));
    }
    if u == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok((t * psi_qv(model, -u, &spec.quad)?).exp())
}

/// Transform value with the quadrature order that produced it.
#[derive(Debug, Clone, Copy)]
pub struct XsqEvaluation {
    pub value: Complex64,
    pub error: f64,
    pub nodes: usize,
}

/// `E[e^{-u X_t^2}]` with diagnostics; `rel_tol` replaces `spec.rel_tol`.
pub fn laplace_xsq_detailed(
    model: &ModelSpec,
    u: Complex64,
    t: f64,
    spec: &TransformSpec,
    rel_tol: f64,
) -> Result<XsqEvaluation> {
    gate(model)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {t}")));
    }
    if u == Complex64::new(0.0, 0.0) {
        return Ok(XsqEvaluation { value: Complex64::new(1.0, 0.0), error: 0.0, nodes: 0 });
    }
    check_half_plane(u)?;

    let m2 = t * (model.sigma_sq() + model.v_sq()) + t * t * model.b() * model.b();
    if u.norm() * m2 < 1e-9 {
        // first-order expansion, error of order (|u| E[X^2])^2 times the kurtosis
        return Ok(XsqEvaluation { value: 1.0 - u * m2, error: (u.norm() * m2).powi(2), nodes: 0 });
    }

    // Z = x / sqrt(a) with a = 1/2 + sigma^2 t u absorbs the diffusion part
    // exactly; the jump part and drift remain in g.
    let a = 0.5 + model.sigma_sq() * t * u;
    let scale = (2.0 * u).sqrt() / a.sqrt();
    let pre = 1.0 / (2.0 * PI * a).sqrt();
    let mu = model.mu();
    let g = |x: f64| -> Result<Complex64> {
        if model.kind() == ModelKind::BlackScholes && mu == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let w = Complex64::new(0.0, x) * scale;
        Ok((t * (mu * w + model.jump_exponent(w)?)).exp())
    };

    let gh = |n: usize| -> Result<Complex64> {
        let rule = hermite_cached(n)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
            if wt == 0.0 {
                continue;
            }
            acc += g(x)? * wt;
        }
        Ok(acc * pre)
    };

    let mut n = spec.gh_start.max(8);
    let mut prev = gh(n)?;
    while n < spec.gh_max {
        n *= 2;
        let next = gh(n)?;
        let diff = (next - prev).norm();
        let tol = spec.abs_tol.max(rel_tol * next.norm());
        if diff <= tol {
            return Ok(XsqEvaluation { value: next, error: diff, nodes: n });
        }
        prev = next;
    }

    // Very large |u| compresses the scale on which the jump exponent varies
    // far below the Hermite node spacing; fold onto the half-line instead,
    // where the double-exponential rule resolves both scales.
    let mut qspec = spec.quad;
    qspec.rel_tol = rel_tol.max(1e-15);
    qspec.abs_tol = spec.abs_tol;
    qspec.max_nodes = qspec.max_nodes.max(50_000);
    let folded = exp_sinh(
        |x, _| match (g(x), g(-x)) {
            (Ok(p), Ok(m)) => (p + m) * (-x * x).exp(),
            _ => Complex64::new(f64::NAN, 0.0),
        },
        0.0,
        &qspec,
    )
    .map_err(|e| {
        Error::convergence("laplace_xsq", format!("Gauss-Hermite up to {} nodes and fallback failed: {e}", spec.gh_max))
    })?;
    Ok(XsqEvaluation { value: folded.value * pre, error: folded.error * pre.norm(), nodes: n + folded.evals })
}

/// `E[e^{-u X_t^2}]` for `Re u > 0`.
pub fn laplace_xsq(model: &ModelSpec, u: Complex64, t: f64, spec: &TransformSpec) -> Result<Complex64> {
    laplace_xsq_detailed(model, u, t, spec, spec.rel_tol).map(|e| e.value)
}

/// `E[exp(-u sum_j (X_{t_j} - X_{t_{j-1}})^2)] = E[e^{-u X_{T/n}^2}]^n`, the
/// transform of the unnormalized sum `T RV_n(T)`.
pub fn laplace_rv(model: &ModelSpec, u: Complex64, t: f64, n: usize, spec: &TransformSpec) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("sampling count n must be at least 1".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {t}")));
    }
    let step = laplace_xsq_detailed(model, u, t / n as f64, spec, spec.rel_tol / n as f64)?;
    Ok(step.value.powi(n as i32))
}

/// Symmetric p-stable draw with `E[e^{i w S}] = e^{-|w|^p}` by the
/// Chambers-Mallows-Stuck method.
pub fn symmetric_stable<R: Rng + ?Sized>(rng: &mut R, p: f64) -> f64 {
    let v = PI * (rng.random::<f64>() - 0.5);
    let w: f64 = -(1.0 - rng.random::<f64>()).ln();
    if (p - 1.0).abs() < 1e-15 {
        return v.tan();
    }
    (p * v).sin() / v.cos().powf(1.0 / p) * ((((1.0 - p) * v).cos()) / w).powf((1.0 - p) / p)
}

/// Monte Carlo estimate of `E[e^{-u |X_t|^p}]` from the stable
/// randomization, for real `u >= 0` and `p` in `(0, 2]`.
///
/// Experimental: the identity is only established on the nonnegative real
/// axis and does not feed the contour pricer.
pub fn laplace_pvar(model: &ModelSpec, u: f64, p: f64, t: f64, n_draws: usize, seed: u64) -> Result<RealEstimate> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("laplace_pvar needs real u >= 0, got {u}")));
    }
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::Domain(format!("laplace_pvar needs p in (0, 2), got {p}")));
    }
    if !(t > 0.0) || n_draws == 0 {
        return Err(Error::Domain("laplace_pvar needs t > 0 and at least one draw".into()));
    }
    if u == 0.0 {
        return Ok(RealEstimate { value: 1.0, std_error: 0.0, samples: n_draws });
    }
    let scale = u.powf(1.0 / p);
    const BLOCK: usize = 1 << 14;
    let blocks = n_draws.div_ceil(BLOCK);
    let partial: Vec<Result<(f64, f64)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BLOCK.min(n_draws - b * BLOCK);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let s = symmetric_stable(&mut rng, p);
                let v = (t * model.psi(Complex64::new(0.0, s * scale))?).exp().re;
                s1 += v;
                s2 += v * v;
            }
            Ok((s1, s2))
        })
        .collect();
    let (mut s1, mut s2) = (0.0, 0.0);
    for r in partial {
        let (a, b) = r?;
        s1 += a;
        s2 += b;
    }
    let n = n_draws as f64;
    let mean = s1 / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    Ok(RealEstimate { value: mean, std_error: (var / n).sqrt(), samples: n_draws })
}
