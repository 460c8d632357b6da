//! Double-exponential (tanh-sinh, exp-sinh) quadrature for complex-valued
//! integrands on real intervals.
//!
//! The abscissa range is fixed at the coarsest level and every refinement
//! halves the step, reusing the previous sum.  The step-halving difference
//! serves as the error estimate.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::QuadratureSpec;
use crate::error::{Error, Result};

const H0: f64 = 0.5;
const MAX_LEVEL: u32 = 12;

/// Integral estimate with its error bound and the number of evaluations.
#[derive(Debug, Clone, Copy)]
pub struct DeEstimate {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
}

fn converged(diff: f64, sum: Complex64, spec: &QuadratureSpec) -> bool {
    diff <= spec.abs_tol.max(spec.rel_tol * sum.norm())
}

/// Walks outward from t = 0 in steps of `h` until the terms are negligible,
/// returning the last index kept on that side.
fn extent(mut term: impl FnMut(f64) -> Option<Complex64>, sign: f64, h: f64, scale: &mut f64) -> i64 {
    let mut k = 1i64;
    let mut small = 0;
    loop {
        let t = sign * k as f64 * h;
        match term(t) {
            None => return k - 1,
            Some(v) => {
                let a = v.norm();
                *scale = scale.max(a);
                if a <= 1e-18 * *scale || a < 1e-300 {
                    small += 1;
                    if small >= 2 {
                        return k;
                    }
                } else {
                    small = 0;
                }
            }
        }
        k += 1;
        if k > 400 {
            return k;
        }
    }
}

fn refine(
    mut term: impl FnMut(f64) -> Option<Complex64>,
    spec: &QuadratureSpec,
    routine: &'static str,
) -> Result<DeEstimate> {
    let mut scale = 0.0f64;
    let centre = term(0.0).unwrap_or_default();
    scale = scale.max(centre.norm());
    let kp = extent(&mut term, 1.0, H0, &mut scale);
    let km = extent(&mut term, -1.0, H0, &mut scale);
    let t_hi = kp as f64 * H0;
    let t_lo = -(km as f64) * H0;

    let mut raw = centre;
    let mut evals = 1 + (kp + km) as usize;
    for k in 1..=kp {
        raw += term(k as f64 * H0).unwrap_or_default();
    }
    for k in 1..=km {
        raw += term(-(k as f64) * H0).unwrap_or_default();
    }
    let mut h = H0;
    let mut est = raw * h;
    let mut last_diff = f64::INFINITY;

    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut add = Complex64::new(0.0, 0.0);
        let mut t = t_lo + h;
        while t < t_hi {
            add += term(t).unwrap_or_default();
            evals += 1;
            t += 2.0 * h;
        }
        raw += add;
        let next = raw * h;
        let diff = (next - est).norm();
        est = next;
        if !crate::complex::is_finite(est) {
            return Err(Error::convergence(routine, "non-finite integrand sum"));
        }
        // Double-exponential rules converge quadratically in the number of
        // levels: once the difference has dropped well below the previous
        // one, it overstates the remaining error.
        let err =
            if level >= 3 && diff < 0.1 * last_diff { diff * (diff / last_diff.max(1e-300)).min(1.0) } else { diff };
        if level >= 3 && converged(diff, est, spec) {
            return Ok(DeEstimate { value: est, error: err, evals });
        }
        if evals > spec.max_nodes {
            break;
        }
        last_diff = diff;
    }
    if converged(
        last_diff.min(f64::MAX),
        est,
        &QuadratureSpec { rel_tol: spec.rel_tol * 10.0, abs_tol: spec.abs_tol * 10.0, ..*spec },
    ) {
        return Ok(DeEstimate { value: est, error: last_diff, evals });
    }
    Err(Error::convergence(
        routine,
        format!("estimate {est} with step difference {last_diff:.3e} after {evals} evaluations"),
    ))
}

/// Tanh-sinh rule on the finite interval `[a, b]`.
///
/// The integrand receives `(x, d)` where `d` is the distance from `x` to the
/// nearer endpoint, computed without cancellation, so endpoint singularities
/// can be evaluated as `d^p` rather than `(x - a)^p`.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<DeEstimate>
where
    F: FnMut(f64, f64) -> Complex64,
{
    if a == b {
        return Ok(DeEstimate { value: Complex64::new(0.0, 0.0), error: 0.0, evals: 0 });
    }
    let len = b - a;
    let half = 0.5 * len;
    refine(
        |t| {
            let g = FRAC_PI_2 * t.sinh();
            let e = (-2.0 * g.abs()).exp();
            let dist = len * e / (1.0 + e);
            if dist <= 0.0 || !dist.is_finite() {
                return None;
            }
            let x = if t >= 0.0 { b - dist } else { a + dist };
            let ch = g.cosh();
            let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
            if w == 0.0 {
                return None;
            }
            Some(f(x, dist) * w)
        },
        spec,
        "tanh_sinh",
    )
}

/// Exp-sinh rule on `[a, inf)`; the integrand receives `(x, x - a)`.
pub fn exp_sinh<F>(mut f: F, a: f64, spec: &QuadratureSpec) -> Result<DeEstimate>
where
    F: FnMut(f64, f64) -> Complex64,
{
    refine(
        |t| {
            let s = FRAC_PI_2 * t.sinh();
            if s > 700.0 {
                return None;
            }
            let d = s.exp();
            if d == 0.0 {
                return None;
            }
            let w = FRAC_PI_2 * t.cosh() * d;
            let v = f(a + d, d);
            if !crate::complex::is_finite(v) {
                return None;
            }
            Some(v * w)
        },
        spec,
        "exp_sinh",
    )
}
