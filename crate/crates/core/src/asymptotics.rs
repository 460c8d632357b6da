//! Small-maturity limits of variance option prices and the convexity
//! correction.
//!
//! As `T -> 0` with `n` fixed, `RV_n(T)` converges in law to
//! `Y_n ~ Gamma(n/2, scale 2 sigma^2 / n)` (jumps survive only through the
//! strike `k V^0`, `V^0 = sigma^2 + v^2`), while `(1/T)[X,X]_T -> sigma^2`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::pricer::{price_option_qv, ContourSpec, Method, OptionSide, PriceResult};
use crate::quadrature::{jacobi, laguerre_normalized};
use crate::special::{ln_gamma, regularized_gamma_p};

/// Law of `Y_n`: gamma with shape `n/2` and scale `2 sigma^2 / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLimitLaw {
    pub n: usize,
    pub sigma_sq: f64,
}

impl GammaLimitLaw {
    pub fn new(n: usize, sigma_sq: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("gamma limit law needs n >= 1".into()));
        }
        if !(sigma_sq >= 0.0 && sigma_sq.is_finite()) {
            return Err(Error::Domain(format!("sigma^2 must be nonnegative, got {sigma_sq}")));
        }
        Ok(GammaLimitLaw { n, sigma_sq })
    }

    pub fn shape(&self) -> f64 {
        0.5 * self.n as f64
    }

    pub fn scale(&self) -> f64 {
        2.0 * self.sigma_sq / self.n as f64
    }

    pub fn mean(&self) -> f64 {
        self.sigma_sq
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if self.sigma_sq == 0.0 {
            return if x >= 0.0 { 1.0 } else { 0.0 };
        }
        regularized_gamma_p(self.shape(), x.max(0.0) / self.scale())
    }
}

const GLE_START: usize = 16;
const GLE_MAX: usize = 1024;
const GLE_REL_TOL: f64 = 1e-12;
const GLE_ABS_TOL: f64 = 1e-15;

/// `E[g(Y)]` for `Y ~ Gamma(a, 1)` on `[b, inf)` (or all of it when
/// `b = 0`) at a given order.
fn upper_piece(g: &dyn Fn(f64) -> f64, a: f64, b: f64, order: usize) -> Result<f64> {
    if b == 0.0 {
        let rule = laguerre_normalized(order, a - 1.0)?;
        return Ok(rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * g(x)).sum());
    }
    // y = x - b: x^{a-1} e^{-x} / Gamma(a) = e^{-y} exp((a-1) ln(b+y) - b - ln Gamma(a))
    let rule = laguerre_normalized(order, 0.0)?;
    let base = -b - ln_gamma(a);
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&y, &w)| {
            let x = b + y;
            w * g(x) * ((a - 1.0) * x.ln() + base).exp()
        })
        .sum())
}

/// `E[g(Y); lo < Y < hi]` for `Y ~ Gamma(a, 1)` with Gauss-Jacobi in
/// `x = lo + (hi - lo)(1 + t)/2`, carrying the `x^{a-1}` singularity in the
/// weight when `lo = 0`.
fn middle_piece(g: &dyn Fn(f64) -> f64, a: f64, lo: f64, hi: f64, order: usize) -> Result<f64> {
    let half = 0.5 * (hi - lo);
    if lo == 0.0 {
        let rule = jacobi(order, 0.0, a - 1.0)?;
        let ln_c = (a - 1.0) * half.ln() + half.ln() - ln_gamma(a);
        Ok(rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| {
                let x = half * (1.0 + t);
                w * g(x) * (ln_c - x).exp()
            })
            .sum())
    } else {
        let rule = jacobi(order, 0.0, 0.0)?;
        let ln_c = half.ln() - ln_gamma(a);
        Ok(rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| {
                let x = lo + half * (1.0 + t);
                w * g(x) * (ln_c + (a - 1.0) * x.ln() - x).exp()
            })
            .sum())
    }
}

/// `E[g(Y_n)]` by generalized Gauss-Laguerre quadrature with the gamma
/// weight, doubling the order until successive values agree.
///
/// `kinks` lists points where `g` is not smooth (strikes); the range is split
/// there, with Gauss-Jacobi below the last kink and shifted Gauss-Laguerre
/// above it.  A degenerate law (`sigma^2 = 0`) returns `g(0)`.
pub fn gamma_limit_expectation(g: &dyn Fn(f64) -> f64, law: &GammaLimitLaw, kinks: &[f64]) -> Result<f64> {
    if law.sigma_sq == 0.0 {
        return Ok(g(0.0));
    }
    let a = law.shape();
    let theta = law.scale();
    let h = |y: f64| g(theta * y);
    let mut cuts: Vec<f64> = kinks.iter().map(|&k| k / theta).filter(|&k| k > 0.0 && k.is_finite()).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite kinks"));
    cuts.dedup();
    let eval = |order: usize| -> Result<f64> {
        let mut total = 0.0;
        let mut lo = 0.0;
        for &c in &cuts {
            total += middle_piece(&h, a, lo, c, order)?;
            lo = c;
        }
        total += upper_piece(&h, a, lo, order)?;
        Ok(total)
    };
    let mut order = GLE_START;
    let mut prev = eval(order)?;
    while order < GLE_MAX {
        order *= 2;
        let next = eval(order)?;
        if (next - prev).abs() <= GLE_ABS_TOL.max(GLE_REL_TOL * next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::convergence(
        "gamma_limit_expectation",
        format!("no agreement between orders {} and {GLE_MAX}", GLE_MAX / 2),
    ))
}

/// `lim_{T->0} E[g((1/T)[X,X]_T)] = g(sigma^2)`.
pub fn qv_limit(g: &dyn Fn(f64) -> f64, sigma_sq: f64) -> f64 {
    g(sigma_sq)
}

fn check_qr_args(k: f64, n: usize, r: f64) -> Result<()> {
    if !(k > 0.0) || n == 0 || !(r >= 0.0) {
        return Err(Error::Domain(format!("Q/R need k > 0, n >= 1, r >= 0 (got k={k}, n={n}, r={r})")));
    }
    Ok(())
}

/// `Q_{k,n}(r) = (2/n) / Gamma(n/2) * ((n/2) k (1+r) / e^{k(1+r)})^{n/2}`,
/// evaluated in log space.
pub fn q_fn(k: f64, n: usize, r: f64) -> Result<f64> {
    check_qr_args(k, n, r)?;
    if r.is_infinite() {
        return Ok(0.0);
    }
    let a = 0.5 * n as f64;
    let z = k * (1.0 + r);
    Ok(((2.0 / n as f64).ln() - ln_gamma(a) + a * ((a * z).ln() - z)).exp())
}

/// `R_{k,n}(r) = gamma(n/2, k(1+r) n/2) / Gamma(n/2)`.
pub fn r_fn(k: f64, n: usize, r: f64) -> Result<f64> {
    check_qr_args(k, n, r)?;
    let a = 0.5 * n as f64;
    Ok(regularized_gamma_p(a, k * (1.0 + r) * a))
}

fn check_strike(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("relative strike must be positive, got {k}")));
    }
    Ok(())
}

/// `[sigma^2 (k-1) + v^2 k]^+`.
pub fn limit_put_qv(model: &ModelSpec, k: f64) -> Result<f64> {
    check_strike(k)?;
    Ok((model.sigma_sq() * (k - 1.0) + model.v_sq() * k).max(0.0))
}

/// `v^2 + [sigma^2 (1-k) - v^2 k]^+`.
pub fn limit_call_qv(model: &ModelSpec, k: f64) -> Result<f64> {
    check_strike(k)?;
    Ok(model.v_sq() + (model.sigma_sq() * (1.0 - k) - model.v_sq() * k).max(0.0))
}

/// `sigma^2 Q_{k,n}(r) + (sigma^2 (k-1) + v^2 k) R_{k,n}(r)`, `r = v^2/sigma^2`,
/// which is `E[(k V^0 - Y_n)^+]`.  For `sigma^2 = 0` the limit law is a point
/// mass at 0 and the value is `k v^2`.
pub fn limit_put_rv(model: &ModelSpec, k: f64, n: usize) -> Result<f64> {
    check_strike(k)?;
    let (s2, v2) = (model.sigma_sq(), model.v_sq());
    if s2 == 0.0 {
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        return Ok(k * v2);
    }
    let r = v2 / s2;
    Ok(s2 * q_fn(k, n, r)? + (s2 * (k - 1.0) + v2 * k) * r_fn(k, n, r)?)
}

/// Call limit through parity: `limit_put_rv + (1 - k)(sigma^2 + v^2)`.
pub fn limit_call_rv(model: &ModelSpec, k: f64, n: usize) -> Result<f64> {
    let put = limit_put_rv(model, k, n)?;
    let (s2, v2) = (model.sigma_sq(), model.v_sq());
    if s2 == 0.0 {
        return Ok(v2);
    }
    let r = v2 / s2;
    // sigma^2 Q + (sigma^2 (k-1) + v^2 k)(R - 1) + v^2, summed without the parity cancellation
    let direct = s2 * q_fn(k, n, r)? + (s2 * (k - 1.0) + v2 * k) * (r_fn(k, n, r)? - 1.0) + v2;
    debug_assert!((direct - (put + (1.0 - k) * (s2 + v2))).abs() <= 1e-12 * (s2 + v2));
    Ok(direct.max(0.0))
}

/// `Delta_n` for puts and calls (they coincide):
/// `sigma^2 Q + a (R - 1)` if `a = sigma^2 (k-1) + v^2 k >= 0`, else
/// `sigma^2 Q + a R`.  Zero when `sigma^2 = 0`.
pub fn gap_formula(sigma_sq: f64, v_sq: f64, k: f64, n: usize) -> Result<f64> {
    check_strike(k)?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if sigma_sq == 0.0 {
        return Ok(0.0);
    }
    let r = v_sq / sigma_sq;
    let a = sigma_sq * (k - 1.0) + v_sq * k;
    let q = q_fn(k, n, r)?;
    let rr = r_fn(k, n, r)?;
    Ok(if a >= 0.0 { sigma_sq * q + a * (rr - 1.0) } else { sigma_sq * q + a * rr })
}

type GapKey = (u64, u64, u64, usize);

/// Concurrent memo of discretization gaps keyed by `(sigma^2, v^2, k, n)`.
#[derive(Debug, Default)]
pub struct GapCache {
    map: RwLock<HashMap<GapKey, f64>>,
}

impl GapCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, model: &ModelSpec, k: f64, n: usize) -> Result<f64> {
        let key = (model.sigma_sq().to_bits(), model.v_sq().to_bits(), k.to_bits(), n);
        if let Some(&v) = self.map.read().expect("gap cache poisoned").get(&key) {
            return Ok(v);
        }
        let v = gap_formula(model.sigma_sq(), model.v_sq(), k, n)?;
        self.map.write().expect("gap cache poisoned").insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("gap cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn global_cache() -> &'static GapCache {
    static CACHE: OnceLock<GapCache> = OnceLock::new();
    CACHE.get_or_init(GapCache::new)
}

/// Discretization gap `Delta_n`, identical for puts and calls.
pub fn discretization_gap(model: &ModelSpec, k: f64, n: usize, _side: OptionSide) -> Result<f64> {
    global_cache().get_or_compute(model, k, n)
}

/// QV price plus the discretization gap.
pub fn corrected_price(
    model: &ModelSpec,
    t: f64,
    n: usize,
    k: f64,
    side: OptionSide,
    contour: &ContourSpec,
) -> Result<PriceResult> {
    if n == 0 {
        return Err(Error::Domain("sampling count n must be at least 1".into()));
    }
    let gap = discretization_gap(model, k, n, side)?;
    let mut r = price_option_qv(model, t, k, side, contour)?;
    r.method = Method::ConvexityCorrected;
    r.price += gap;
    r.diagnostics.raw_price += gap;
    r.diagnostics.extra.insert("gap".into(), gap);
    r.diagnostics.extra.insert("n".into(), n as f64);
    Ok(r)
}
