//! Put and call prices on quadratic variation and realized variance by
//! Laplace inversion of the put payoff.
//!
//! For a nonnegative `A` with transform `L` and any `R > 0`,
//! `E[(c - A)^+] = (1/pi) int_0^inf Re(e^{c(R+iv)} L(R+iv) / (R+iv)^2) dv`.
//! The integral is evaluated in `y = c v` on Gauss-Legendre panels of width
//! `pi`, and the oscillating sequence of partial sums is accelerated with
//! Wynn's epsilon algorithm.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelSpec, Side};
use crate::quadrature::legendre_cached;
use crate::special::{regularized_gamma_p, regularized_gamma_q};
use crate::transforms::{laplace_qv, laplace_rv, TransformSpec};

/// Put or call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionSide {
    Put,
    Call,
}

impl OptionSide {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "put" => Some(OptionSide::Put),
            "call" => Some(OptionSide::Call),
            _ => None,
        }
    }
}

/// How a price was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactRv,
    QvProxy,
    ConvexityCorrected,
    ClosedFormBs,
    Mc,
}

/// Contour and quadrature controls for the inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Damping abscissa `R`; `None` selects `R = 1/c`.
    pub damping: Option<f64>,
    /// Hard cap on the `v` range.
    pub v_max: f64,
    /// Stop once successive accelerated estimates differ by less than this
    /// (relative to the strike scale `c`).
    pub panel_tol: f64,
    pub max_panels: usize,
    pub min_panels: usize,
    /// Relative tolerance of the per-panel Gauss-Legendre check.
    pub quad_tol: f64,
    pub transform: TransformSpec,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            damping: None,
            v_max: f64::INFINITY,
            panel_tol: 1e-10,
            max_panels: 4000,
            min_panels: 8,
            quad_tol: 1e-9,
            transform: TransformSpec::default(),
        }
    }
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.damping {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!("damping R must be positive, got {r}")));
            }
        }
        if !(self.v_max > 0.0) {
            return Err(Error::InvalidParameter(format!("v_max must be positive, got {}", self.v_max)));
        }
        if !(self.panel_tol > 0.0) || self.max_panels == 0 {
            return Err(Error::InvalidParameter("panel_tol and max_panels must be positive".into()));
        }
        self.transform.quad.validate()
    }
}

/// Diagnostics attached to a price.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Transform evaluations used by the inversion.
    pub nodes: usize,
    pub panels: usize,
    /// Largest `v` reached on the contour.
    pub v_max: f64,
    /// Crude bound on the neglected tail of the contour integral.
    pub truncation_bound: f64,
    pub damping: f64,
    pub strike: f64,
    pub swap_rate: f64,
    /// Price before clamping at zero.
    pub raw_price: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub extra: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

/// A price in annualized variance units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceResult {
    pub price: f64,
    pub method: Method,
    pub side: OptionSide,
    pub est_error: f64,
    pub diagnostics: Diagnostics,
}

impl PriceResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Result of one contour inversion.
#[derive(Debug, Clone)]
pub struct Inversion {
    /// `E[(c - A)^+]`.
    pub value: f64,
    pub est_error: f64,
    pub nodes: usize,
    pub panels: usize,
    pub v_max: f64,
    pub truncation_bound: f64,
    pub damping: f64,
    pub warnings: Vec<String>,
}

/// Wynn's epsilon algorithm on the sequence `s`; returns the last two
/// even-column estimates of highest order.
fn wynn(s: &[f64]) -> (f64, f64) {
    let n = s.len();
    if n < 3 {
        let last = *s.last().unwrap_or(&0.0);
        let prev = if n >= 2 { s[n - 2] } else { last };
        return (last, prev);
    }
    // e[k] holds column k of the epsilon table for the current diagonal
    let mut prev_col: Vec<f64> = vec![0.0; n + 1];
    let mut col: Vec<f64> = s.to_vec();
    let mut best = (s[n - 1], s[n - 2]);
    let mut k = 1;
    while col.len() > 1 {
        let mut next = Vec::with_capacity(col.len() - 1);
        for j in 0..col.len() - 1 {
            let d = col[j + 1] - col[j];
            let base = if k == 1 { 0.0 } else { prev_col[j + 1] };
            if d.abs() < 1e-300 {
                // stagnation: the sequence has converged at this order
                next.push(f64::INFINITY);
            } else {
                next.push(base + 1.0 / d);
            }
        }
        prev_col = col;
        col = next;
        if k % 2 == 0 && col.len() >= 2 {
            let m = col.len();
            if col[m - 1].is_finite() && col[m - 2].is_finite() {
                best = (col[m - 1], col[m - 2]);
            } else {
                break;
            }
        }
        k += 1;
    }
    best
}

const MAX_DEPTH: u32 = 5;

/// `E[(c - A)^+]` for a nonnegative `A` with Laplace transform `laplace`.
pub fn invert_put<F>(mut laplace: F, c: f64, contour: &ContourSpec) -> Result<Inversion>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    contour.validate()?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("strike scale c must be positive, got {c}")));
    }
    let damping = contour.damping.unwrap_or(1.0 / c);
    let s = damping * c;
    let rule = legendre_cached(16)?;
    let mut nodes = 0usize;

    // integrand in y: Re(e^{s+iy} / (s+iy)^2 L((s+iy)/c)), scaled by c/pi at the end
    let mut eval = |y: f64, nodes: &mut usize| -> Result<(f64, f64)> {
        *nodes += 1;
        let z = Complex64::new(s, y);
        let l = laplace(z / c)?;
        if !crate::complex::is_finite(l) {
            return Err(Error::convergence("invert_put", format!("transform not finite at u = {}", z / c)));
        }
        Ok(((z.exp() / (z * z) * l).re, l.norm()))
    };
    let gl = |a: f64, b: f64, eval: &mut dyn FnMut(f64) -> Result<(f64, f64)>| -> Result<(f64, f64)> {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        let mut acc = 0.0;
        let mut lmax: f64 = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (f, l) = eval(m + h * x)?;
            acc += w * f;
            lmax = lmax.max(l);
        }
        Ok((acc * h, lmax))
    };

    let scale = c / std::f64::consts::PI;
    let tol_abs = contour.panel_tol * c;
    let y_cap = contour.v_max * c;
    let mut partial: Vec<f64> = Vec::new();
    let mut contributions: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let mut quad_err = 0.0;
    let mut last_l: f64 = 1.0;
    let mut y = 0.0;
    let mut panels = 0;
    let mut warnings = Vec::new();
    let mut prev_acc = f64::NAN;
    let mut acc_diff = f64::INFINITY;
    let mut converged = false;

    while panels < contour.max_panels {
        let a = y;
        let b = (y + std::f64::consts::PI).min(y_cap);
        if b <= a {
            break;
        }
        // adaptive bisection of the panel
        let mut stack = vec![(a, b, 0u32)];
        let mut panel_sum = 0.0;
        while let Some((lo, hi, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let mut f = |t: f64| eval(t, &mut nodes);
            let (whole, l0) = gl(lo, hi, &mut f)?;
            let (left, l1) = gl(lo, mid, &mut f)?;
            let (right, l2) = gl(mid, hi, &mut f)?;
            last_l = l0.max(l1).max(l2);
            let halves = left + right;
            let diff = (whole - halves).abs();
            let floor = 1e-2 * contour.panel_tol * std::f64::consts::PI;
            if diff <= (contour.quad_tol * halves.abs()).max(floor) || depth >= MAX_DEPTH {
                if depth >= MAX_DEPTH {
                    quad_err += diff * scale;
                }
                panel_sum += halves;
            } else {
                stack.push((mid, hi, depth + 1));
                stack.push((lo, mid, depth + 1));
            }
        }
        sum += panel_sum;
        contributions.push(panel_sum * scale);
        partial.push(sum * scale);
        panels += 1;
        y = b;
        if partial.len() > 60 {
            partial.remove(0);
        }
        if panels >= contour.min_panels {
            let (acc, acc_prev) = wynn(&partial);
            let d = (acc - acc_prev).abs().max(if prev_acc.is_nan() { f64::INFINITY } else { (acc - prev_acc).abs() });
            prev_acc = acc;
            acc_diff = d;
            if d <= tol_abs.max(contour.panel_tol * acc.abs()) {
                converged = true;
                break;
            }
        }
        if y >= y_cap {
            break;
        }
    }

    let (value, _) = if partial.len() >= 3 { wynn(&partial) } else { (sum * scale, 0.0) };
    let tail = scale * s.exp() * last_l / y.max(1e-300);
    if !converged {
        warnings.push(format!(
            "truncation: contour stopped at v = {:.3e} after {panels} panels; accelerated estimates differ by {acc_diff:.3e}",
            y / c
        ));
    }
    let mut est_error = if acc_diff.is_finite() { acc_diff } else { tail } + quad_err;
    // Epsilon acceleration stagnates on a tail without sign changes (an atom
    // of A at c gives terms ~ 1/k^2); the remainder is then about k times
    // the last panel.
    const WINDOW: usize = 8;
    if contributions.len() >= WINDOW {
        let last = &contributions[contributions.len() - WINDOW..];
        let same_sign = last.iter().all(|&x| x > 0.0) || last.iter().all(|&x| x < 0.0);
        if same_sign {
            let remainder = panels as f64 * last[WINDOW - 1].abs();
            if remainder > est_error {
                est_error = remainder + quad_err;
                if remainder > tol_abs.max(contour.panel_tol * value.abs()) {
                    warnings.push(format!(
                        "slowly convergent tail without oscillation; remainder estimate {remainder:.3e}"
                    ));
                }
            }
        }
    }
    Ok(Inversion { value, est_error, nodes, panels, v_max: y / c, truncation_bound: tail, damping, warnings })
}

/// `V_T = E[[X,X]_T] / T = sigma^2 + v^2`.
pub fn swap_rate_qv(model: &ModelSpec) -> f64 {
    model.sigma_sq() + model.v_sq()
}

/// `V^n_T = E[RV_n(T)] = sigma^2 + v^2 + b^2 T / n`.
pub fn swap_rate_rv(model: &ModelSpec, t: f64, n: usize) -> f64 {
    swap_rate_qv(model) + model.b() * model.b() * t / n as f64
}

fn check_pricing_inputs(model: &ModelSpec, t: f64, k: f64) -> Result<()> {
    if !model.satisfies_growth_condition() {
        return Err(Error::ConditionViolated(format!(
            "{} is outside the class handled by the transform pricer",
            model.kind().name()
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("maturity must be positive, got {t}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("relative strike must be positive, got {k}")));
    }
    Ok(())
}

/// Total jump intensity for finite-activity models.
fn jump_intensity(model: &ModelSpec) -> Option<f64> {
    if model.v_sq() == 0.0 {
        return Some(0.0);
    }
    if !model.finite_activity() {
        return None;
    }
    Some(model.side_mass(Side::Positive)? + model.side_mass(Side::Negative)?)
}

fn finish(
    side: OptionSide,
    method: Method,
    put_e: f64,
    t: f64,
    strike: f64,
    swap: f64,
    inv: Option<Inversion>,
) -> PriceResult {
    let put = put_e / t;
    let raw = match side {
        OptionSide::Put => put,
        OptionSide::Call => swap - strike + put,
    };
    let mut diagnostics = Diagnostics { strike, swap_rate: swap, raw_price: raw, ..Default::default() };
    let mut est_error = 0.0;
    if let Some(inv) = inv {
        diagnostics.nodes = inv.nodes;
        diagnostics.panels = inv.panels;
        diagnostics.v_max = inv.v_max;
        diagnostics.truncation_bound = inv.truncation_bound / t;
        diagnostics.damping = inv.damping;
        diagnostics.warnings = inv.warnings;
        est_error = inv.est_error / t;
    }
    let price = raw.max(0.0);
    if raw < 0.0 {
        est_error = est_error.max(-raw);
    }
    PriceResult { price, method, side, est_error, diagnostics }
}

/// Put or call on `(1/T) [X,X]_T` with strike `k V_T`.
///
/// For finite-activity models the law of `[X,X]_T` has an atom of mass
/// `e^{-lambda T}` at `sigma^2 T` (no jumps); the atom is priced exactly and
/// only the remaining part is inverted.  In Black-Scholes the whole law is
/// that atom.
pub fn price_option_qv(
    model: &ModelSpec,
    t: f64,
    k: f64,
    side: OptionSide,
    contour: &ContourSpec,
) -> Result<PriceResult> {
    check_pricing_inputs(model, t, k)?;
    let swap = swap_rate_qv(model);
    let strike = k * swap;
    let c = strike * t;
    let s2t = model.sigma_sq() * t;
    let p0 = jump_intensity(model).map(|lam| (-lam * t).exp()).unwrap_or(0.0);
    let atom = p0 * (c - s2t).max(0.0);
    if p0 == 1.0 {
        let mut r = finish(side, Method::QvProxy, atom, t, strike, swap, None);
        r.diagnostics.extra.insert("atom_mass".into(), 1.0);
        return Ok(r);
    }
    let tspec = contour.transform;
    let inv = invert_put(
        |u| {
            let l = laplace_qv(model, u, t, &tspec)?;
            Ok(if p0 > 0.0 { l - p0 * (-u * s2t).exp() } else { l })
        },
        c,
        contour,
    )?;
    let put_e = atom + inv.value;
    let mut r = finish(side, Method::QvProxy, put_e, t, strike, swap, Some(inv));
    if p0 > 0.0 {
        r.diagnostics.extra.insert("atom_mass".into(), p0);
    }
    Ok(r)
}

/// Put or call on `RV_n(T)` with strike `k V^n_T`.
pub fn price_option_rv(
    model: &ModelSpec,
    t: f64,
    n: usize,
    k: f64,
    side: OptionSide,
    contour: &ContourSpec,
) -> Result<PriceResult> {
    check_pricing_inputs(model, t, k)?;
    if n == 0 {
        return Err(Error::Domain("sampling count n must be at least 1".into()));
    }
    let swap = swap_rate_rv(model, t, n);
    let strike = k * swap;
    let c = strike * t;
    let tspec = contour.transform;
    let inv = invert_put(|u| laplace_rv(model, u, t, n, &tspec), c, contour)?;
    let mut r = finish(side, Method::ExactRv, inv.value, t, strike, swap, Some(inv));
    r.diagnostics.extra.insert("n".into(), n as f64);
    Ok(r)
}

/// Black-Scholes realized-variance option from the noncentral chi-square
/// law `RV_n(T) = (sigma^2/n) chi^2_n(lambda)`, `lambda = b^2 T / sigma^2`,
/// as a Poisson mixture of central chi-square laws.  Calls are summed
/// directly rather than through parity.
pub fn bs_closed_form_rv(sigma: f64, b: f64, t: f64, n: usize, k: f64, side: OptionSide) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("closed form needs sigma > 0, got {sigma}")));
    }
    if !(t > 0.0) || n == 0 || !(k > 0.0) {
        return Err(Error::Domain("closed form needs T > 0, n >= 1, k > 0".into()));
    }
    let s2 = sigma * sigma;
    let nf = n as f64;
    let lambda = b * b * t / s2;
    let swap = s2 + b * b * t / nf;
    let strike = k * swap;
    let theta = s2 / nf;
    // chi^2_nu = 2 Gamma(nu/2); the threshold in gamma units
    let x = strike / (2.0 * theta);
    let half = 0.5 * lambda;
    let mut weight = (-half).exp();
    let mut cumulative = 0.0;
    let mut total = 0.0;
    let mut i = 0usize;
    loop {
        let shape = 0.5 * nf + i as f64;
        let nu = 2.0 * shape;
        let term = match side {
            OptionSide::Put => {
                strike * regularized_gamma_p(shape, x) - theta * nu * regularized_gamma_p(shape + 1.0, x)
            }
            OptionSide::Call => {
                theta * nu * regularized_gamma_q(shape + 1.0, x) - strike * regularized_gamma_q(shape, x)
            }
        };
        total += weight * term;
        cumulative += weight;
        if 1.0 - cumulative < 1e-14 || weight == 0.0 && i as f64 > half {
            break;
        }
        i += 1;
        weight *= half / i as f64;
        if i > 100_000 {
            break;
        }
    }
    Ok(total.max(0.0))
}

/// [`bs_closed_form_rv`] wrapped as a [`PriceResult`] for a Black-Scholes model.
pub fn price_bs_closed_form(model: &ModelSpec, t: f64, n: usize, k: f64, side: OptionSide) -> Result<PriceResult> {
    if model.kind() != crate::models::ModelKind::BlackScholes {
        return Err(Error::InvalidParameter(format!(
            "closed-form pricing is only available for BlackScholes, not {}",
            model.kind().name()
        )));
    }
    let sigma = model.sigma_sq().sqrt();
    let price = bs_closed_form_rv(sigma, model.b(), t, n, k, side)?;
    let swap = swap_rate_rv(model, t, n);
    let mut r = PriceResult {
        price,
        method: Method::ClosedFormBs,
        side,
        est_error: 1e-14 * swap,
        diagnostics: Diagnostics { strike: k * swap, swap_rate: swap, raw_price: price, ..Default::default() },
    };
    r.diagnostics.extra.insert("n".into(), n as f64);
    Ok(r)
}
