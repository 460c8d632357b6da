//! Exponential Levy models: Levy exponents with their analytic extension,
//! triplet quantities and Levy densities.
//!
//! Every exponent has the form `psi(u) = mu u + sigma^2 u^2 / 2 + psi_J(u)`
//! where `psi_J` is the jump part as written below and `mu` is the linear
//! coefficient fixed by the drift mode.
//!
//! | model  | `psi_J(u)` | Levy density `f(x)` |
//! |--------|------------|---------------------|
//! | Merton | `lambda (exp(gamma u + delta^2 u^2 / 2) - 1)` | `lambda N(x; gamma, delta^2)` |
//! | Kou    | `lambda_+ u / (nu_+ - u) - lambda_- u / (nu_- + u)` | `lambda_+ nu_+ e^{-nu_+ x}` (x > 0), `lambda_- nu_- e^{nu_- x}` (x < 0) |
//! | NIG    | `delta (sqrt(alpha^2 - beta^2) - sqrt(alpha^2 - (beta + u)^2))` | `delta alpha / pi e^{beta x} K_1(alpha |x|) / |x|` |
//! | CGMY   | `C Gamma(-Y) ((M - u)^Y - M^Y + (G + u)^Y - G^Y)` | `C e^{-M x} x^{-1-Y}` (x > 0), `C e^{-G |x|} |x|^{-1-Y}` (x < 0) |
//!
//! Branch cuts (principal branch throughout): Kou has poles at `nu_+` and
//! `-nu_-`; NIG cuts run along the real axis beyond `alpha - beta` and below
//! `-alpha - beta`; CGMY cuts along `[M, inf)` and `(-inf, -G]`.
//!
//! The compensated Poisson process `psi(u) = e^u - 1 - (e - 1) u` is included
//! as a counterexample: its exponent grows exponentially inside the sector
//! `pi/4 < arg u < 3pi/4`, so the randomized transform identity fails for it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::special::{bessel_k1, gamma};

/// Model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    BlackScholes,
    Merton,
    Kou,
    #[serde(rename = "NIG")]
    Nig,
    #[serde(rename = "CGMY")]
    Cgmy,
    CompensatedPoisson,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::BlackScholes => "BlackScholes",
            ModelKind::Merton => "Merton",
            ModelKind::Kou => "Kou",
            ModelKind::Nig => "NIG",
            ModelKind::Cgmy => "CGMY",
            ModelKind::CompensatedPoisson => "CompensatedPoisson",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "blackscholes" | "black_scholes" | "black-scholes" | "bs" => Some(ModelKind::BlackScholes),
            "merton" => Some(ModelKind::Merton),
            "kou" => Some(ModelKind::Kou),
            "nig" => Some(ModelKind::Nig),
            "cgmy" => Some(ModelKind::Cgmy),
            "compensatedpoisson" | "poisson" => Some(ModelKind::CompensatedPoisson),
            _ => None,
        }
    }
}

/// Model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    BlackScholes { sigma: f64 },
    Merton { sigma: f64, lambda: f64, gamma: f64, delta: f64 },
    Kou { sigma: f64, lambda_plus: f64, lambda_minus: f64, nu_plus: f64, nu_minus: f64 },
    Nig { alpha: f64, beta: f64, delta: f64 },
    Cgmy { c: f64, g: f64, m: f64, y: f64 },
    CompensatedPoisson,
}

/// How the linear coefficient `mu` of the exponent is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriftMode {
    /// `mu` such that `psi(1) = 0`.
    Martingale,
    /// Explicit `mu`.
    Explicit(f64),
}

/// A validated Levy model with its derived triplet quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    params: Params,
    drift_mode: DriftMode,
    mu: f64,
    sigma_sq: f64,
    v_sq: f64,
    b: f64,
    // C Gamma(-Y) for CGMY, cached
    cgmy_scale: f64,
}

/// Sign of the jump for one half of the Levy measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
    }
}

fn nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be nonnegative and finite, got {x}")))
    }
}

impl ModelSpec {
    /// Validates the parameters and resolves the drift.
    pub fn new(params: Params, drift_mode: DriftMode) -> Result<Self> {
        let mut cgmy_scale = 0.0;
        match params {
            Params::BlackScholes { sigma } => nonneg("sigma", sigma)?,
            Params::Merton { sigma, lambda, gamma, delta } => {
                nonneg("sigma", sigma)?;
                positive("lambda", lambda)?;
                positive("delta", delta)?;
                if !gamma.is_finite() {
                    return Err(Error::InvalidParameter(format!("gamma must be finite, got {gamma}")));
                }
            }
            Params::Kou { sigma, lambda_plus, lambda_minus, nu_plus, nu_minus } => {
                nonneg("sigma", sigma)?;
                positive("lambda_plus", lambda_plus)?;
                positive("lambda_minus", lambda_minus)?;
                positive("nu_minus", nu_minus)?;
                if !(nu_plus > 1.0 && nu_plus.is_finite()) {
                    return Err(Error::InvalidParameter(format!("nu_plus must exceed 1, got {nu_plus}")));
                }
            }
            Params::Nig { alpha, beta, delta } => {
                positive("alpha", alpha)?;
                positive("delta", delta)?;
                if !(beta.abs() < alpha) {
                    return Err(Error::InvalidParameter(format!("beta {beta} outside (-alpha, alpha)")));
                }
                if !(alpha - beta > 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha - beta = {} must exceed 1 for exp(X) to be integrable",
                        alpha - beta
                    )));
                }
            }
            Params::Cgmy { c, g, m, y } => {
                positive("C", c)?;
                positive("G", g)?;
                positive("M", m)?;
                if !(m > 1.0) {
                    return Err(Error::InvalidParameter(format!("M must exceed 1, got {m}")));
                }
                if !(y < 2.0) || !y.is_finite() {
                    return Err(Error::InvalidParameter(format!("Y must be below 2, got {y}")));
                }
                if y == 0.0 || y == 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "Y = {y} is not supported: the closed-form exponent has a removable singularity there"
                    )));
                }
                cgmy_scale = c * gamma(-y)?;
            }
            Params::CompensatedPoisson => {}
        }
        let mut spec = ModelSpec { params, drift_mode, mu: 0.0, sigma_sq: 0.0, v_sq: 0.0, b: 0.0, cgmy_scale };
        spec.sigma_sq = match params {
            Params::BlackScholes { sigma } | Params::Merton { sigma, .. } | Params::Kou { sigma, .. } => sigma * sigma,
            _ => 0.0,
        };
        spec.mu = match drift_mode {
            DriftMode::Explicit(mu) => {
                if !mu.is_finite() {
                    return Err(Error::InvalidParameter(format!("explicit drift {mu} not finite")));
                }
                mu
            }
            DriftMode::Martingale => {
                let j = spec.jump_exponent(Complex64::new(1.0, 0.0))?;
                -0.5 * spec.sigma_sq - j.re
            }
        };
        spec.v_sq = spec.jump_variance_closed_form();
        spec.b = spec.mu + spec.jump_mean();
        Ok(spec)
    }

    pub fn black_scholes(sigma: f64) -> Result<Self> {
        Self::new(Params::BlackScholes { sigma }, DriftMode::Martingale)
    }

    pub fn merton(sigma: f64, lambda: f64, gamma: f64, delta: f64) -> Result<Self> {
        Self::new(Params::Merton { sigma, lambda, gamma, delta }, DriftMode::Martingale)
    }

    pub fn kou(sigma: f64, lambda_plus: f64, lambda_minus: f64, nu_plus: f64, nu_minus: f64) -> Result<Self> {
        Self::new(Params::Kou { sigma, lambda_plus, lambda_minus, nu_plus, nu_minus }, DriftMode::Martingale)
    }

    pub fn nig(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        Self::new(Params::Nig { alpha, beta, delta }, DriftMode::Martingale)
    }

    pub fn cgmy(c: f64, g: f64, m: f64, y: f64) -> Result<Self> {
        Self::new(Params::Cgmy { c, g, m, y }, DriftMode::Martingale)
    }

    /// Unit-intensity compensated Poisson process (counterexample model).
    pub fn compensated_poisson() -> Self {
        Self::new(Params::CompensatedPoisson, DriftMode::Martingale).expect("fixed parameters")
    }

    /// Same model with a different drift mode.
    pub fn with_drift(&self, drift_mode: DriftMode) -> Result<Self> {
        Self::new(self.params, drift_mode)
    }

    pub fn kind(&self) -> ModelKind {
        match self.params {
            Params::BlackScholes { .. } => ModelKind::BlackScholes,
            Params::Merton { .. } => ModelKind::Merton,
            Params::Kou { .. } => ModelKind::Kou,
            Params::Nig { .. } => ModelKind::Nig,
            Params::Cgmy { .. } => ModelKind::Cgmy,
            Params::CompensatedPoisson => ModelKind::CompensatedPoisson,
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn drift_mode(&self) -> DriftMode {
        self.drift_mode
    }

    /// Linear coefficient `mu` of the exponent.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Diffusion variance `sigma^2`.
    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    /// Second moment of the Levy measure, `v^2 = int x^2 F(dx)`.
    pub fn v_sq(&self) -> f64 {
        self.v_sq
    }

    /// Triplet drift `b = E[X_1] = psi'(0)`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// True for models whose Levy measure is finite.
    pub fn finite_activity(&self) -> bool {
        match self.params {
            Params::Merton { .. } | Params::Kou { .. } | Params::CompensatedPoisson => true,
            Params::Cgmy { y, .. } => y < 0.0,
            _ => false,
        }
    }

    /// True if the exponent satisfies the analyticity and growth condition
    /// needed off the real axis (all catalog models but the Poisson example).
    pub fn satisfies_growth_condition(&self) -> bool {
        self.kind() != ModelKind::CompensatedPoisson
    }

    fn jump_mean(&self) -> f64 {
        // psi_J'(0)
        match self.params {
            Params::BlackScholes { .. } => 0.0,
            Params::Merton { lambda, gamma, .. } => lambda * gamma,
            Params::Kou { lambda_plus, lambda_minus, nu_plus, nu_minus, .. } => {
                lambda_plus / nu_plus - lambda_minus / nu_minus
            }
            Params::Nig { alpha, beta, delta } => delta * beta / (alpha * alpha - beta * beta).sqrt(),
            Params::Cgmy { g, m, y, .. } => self.cgmy_scale * y * (g.powf(y - 1.0) - m.powf(y - 1.0)),
            Params::CompensatedPoisson => 1.0,
        }
    }

    fn jump_variance_closed_form(&self) -> f64 {
        match self.params {
            Params::BlackScholes { .. } => 0.0,
            Params::Merton { lambda, gamma, delta, .. } => lambda * (gamma * gamma + delta * delta),
            Params::Kou { lambda_plus, lambda_minus, nu_plus, nu_minus, .. } => {
                2.0 * lambda_plus / (nu_plus * nu_plus) + 2.0 * lambda_minus / (nu_minus * nu_minus)
            }
            Params::Nig { alpha, beta, delta } => delta * alpha * alpha * (alpha * alpha - beta * beta).powf(-1.5),
            Params::Cgmy { c, g, m, y } => c * gamma(2.0 - y).expect("2 - Y > 0") * (m.powf(y - 2.0) + g.powf(y - 2.0)),
            Params::CompensatedPoisson => 1.0,
        }
    }

    /// Jump part `psi_J(u)` of the exponent (no drift, no diffusion).
    pub fn jump_exponent(&self, u: Complex64) -> Result<Complex64> {
        if u.im < 0.0 {
            return self.jump_exponent(u.conj()).map(|z| z.conj());
        }
        let out = match self.params {
            Params::BlackScholes { .. } => Complex64::new(0.0, 0.0),
            Params::Merton { lambda, gamma, delta, .. } => {
                lambda * crate::complex::expm1(gamma * u + 0.5 * delta * delta * u * u)
            }
            Params::Kou { lambda_plus, lambda_minus, nu_plus, nu_minus, .. } => {
                let dp = nu_plus - u;
                let dm = nu_minus + u;
                if dp.norm() < 1e-12 * nu_plus || dm.norm() < 1e-12 * nu_minus {
                    return Err(Error::Domain(format!("Kou exponent has a pole at {u}")));
                }
                lambda_plus * u / dp - lambda_minus * u / dm
            }
            Params::Nig { alpha, beta, delta } => {
                let w = alpha * alpha - (beta + u) * (beta + u);
                if w.im == 0.0 && w.re < 0.0 {
                    return Err(Error::Domain(format!("NIG exponent on its branch cut at {u}")));
                }
                delta * ((alpha * alpha - beta * beta).sqrt() - w.sqrt())
            }
            Params::Cgmy { g, m, y, .. } => {
                let a = m - u;
                let b = g + u;
                if (a.im == 0.0 && a.re <= 0.0) || (b.im == 0.0 && b.re <= 0.0) {
                    return Err(Error::Domain(format!("CGMY exponent on its branch cut at {u}")));
                }
                self.cgmy_scale * (a.powf(y) - m.powf(y) + b.powf(y) - g.powf(y))
            }
            Params::CompensatedPoisson => crate::complex::expm1(u),
        };
        if !crate::complex::is_finite(out) {
            return Err(Error::Domain(format!("{} exponent overflows at {u}", self.kind().name())));
        }
        Ok(out)
    }

    /// Levy exponent `psi(u)` with `E[e^{u X_t}] = e^{t psi(u)}`.
    pub fn psi(&self, u: Complex64) -> Result<Complex64> {
        Ok(self.mu * u + 0.5 * self.sigma_sq * u * u + self.jump_exponent(u)?)
    }

    /// Levy density at `x = r` (positive side) or `x = -r` (negative side),
    /// analytically continued to complex `r` with `Re r > 0`.
    ///
    /// Returns zero for models without a density (Black-Scholes and the
    /// Poisson example, whose jump measure is a point mass).
    pub fn levy_density(&self, side: Side, r: Complex64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        match self.params {
            Params::BlackScholes { .. } | Params::CompensatedPoisson => zero,
            Params::Merton { lambda, gamma, delta, .. } => {
                let x = if side == Side::Positive { r } else { -r };
                let z = (x - gamma) / delta;
                lambda / (delta * (2.0 * PI).sqrt()) * (-0.5 * z * z).exp()
            }
            Params::Kou { lambda_plus, lambda_minus, nu_plus, nu_minus, .. } => match side {
                Side::Positive => lambda_plus * nu_plus * (-nu_plus * r).exp(),
                Side::Negative => lambda_minus * nu_minus * (-nu_minus * r).exp(),
            },
            Params::Nig { alpha, beta, delta } => {
                let sb = if side == Side::Positive { beta } else { -beta };
                delta * alpha / PI * (sb * r).exp() * bessel_k1(alpha * r) / r
            }
            Params::Cgmy { c, g, m, y } => {
                let rate = if side == Side::Positive { m } else { g };
                c * (-rate * r - (1.0 + y) * r.ln()).exp()
            }
        }
    }

    /// Total mass of one side of the Levy measure for finite-activity models.
    pub fn side_mass(&self, side: Side) -> Option<f64> {
        match self.params {
            Params::Merton { lambda, gamma, delta, .. } => {
                // P(N(gamma, delta^2) > 0) and its complement
                let p = 0.5 * erfc_real(-gamma / (delta * std::f64::consts::SQRT_2));
                Some(lambda * if side == Side::Positive { p } else { 1.0 - p })
            }
            Params::Kou { lambda_plus, lambda_minus, .. } => {
                Some(if side == Side::Positive { lambda_plus } else { lambda_minus })
            }
            Params::Cgmy { c, g, m, y } if y < 0.0 => {
                let rate = if side == Side::Positive { m } else { g };
                Some(c * gamma(-y).ok()? * rate.powf(y))
            }
            _ => None,
        }
    }

    /// JSON description `{"kind": .., "params": {..}, "drift": ..}`.
    pub fn to_json(&self) -> Value {
        let params = match self.params {
            Params::BlackScholes { sigma } => json!({ "sigma": sigma }),
            Params::Merton { sigma, lambda, gamma, delta } => {
                json!({ "sigma": sigma, "lambda": lambda, "gamma": gamma, "delta": delta })
            }
            Params::Kou { sigma, lambda_plus, lambda_minus, nu_plus, nu_minus } => json!({
                "sigma": sigma, "lambda_plus": lambda_plus, "lambda_minus": lambda_minus,
                "nu_plus": nu_plus, "nu_minus": nu_minus
            }),
            Params::Nig { alpha, beta, delta } => json!({ "alpha": alpha, "beta": beta, "delta": delta }),
            Params::Cgmy { c, g, m, y } => json!({ "C": c, "G": g, "M": m, "Y": y }),
            Params::CompensatedPoisson => json!({}),
        };
        let drift = match self.drift_mode {
            DriftMode::Martingale => json!("martingale"),
            DriftMode::Explicit(mu) => json!({ "explicit": mu }),
        };
        json!({ "kind": self.kind().name(), "params": params, "drift": drift })
    }

    /// Parses the JSON description produced by [`ModelSpec::to_json`].
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameter(msg);
        let kind_str = value
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("model config needs a string field \"kind\"".into()))?;
        let kind = ModelKind::parse(kind_str).ok_or_else(|| bad(format!("unknown model kind {kind_str:?}")))?;
        let empty = json!({});
        let p = value.get("params").unwrap_or(&empty);
        if !p.is_object() {
            return Err(bad("\"params\" must be an object".into()));
        }
        let get = |key: &str| -> Result<f64> {
            p.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| bad(format!("{} model needs numeric parameter {key:?}", kind.name())))
        };
        let params = match kind {
            ModelKind::BlackScholes => Params::BlackScholes { sigma: get("sigma")? },
            ModelKind::Merton => Params::Merton {
                sigma: get("sigma")?,
                lambda: get("lambda")?,
                gamma: get("gamma")?,
                delta: get("delta")?,
            },
            ModelKind::Kou => Params::Kou {
                sigma: get("sigma")?,
                lambda_plus: get("lambda_plus")?,
                lambda_minus: get("lambda_minus")?,
                nu_plus: get("nu_plus")?,
                nu_minus: get("nu_minus")?,
            },
            ModelKind::Nig => Params::Nig { alpha: get("alpha")?, beta: get("beta")?, delta: get("delta")? },
            ModelKind::Cgmy => Params::Cgmy { c: get("C")?, g: get("G")?, m: get("M")?, y: get("Y")? },
            ModelKind::CompensatedPoisson => Params::CompensatedPoisson,
        };
        let drift = match value.get("drift") {
            None => DriftMode::Martingale,
            Some(Value::String(s)) if s.eq_ignore_ascii_case("martingale") => DriftMode::Martingale,
            Some(Value::Object(o)) => match o.get("explicit").and_then(Value::as_f64) {
                Some(mu) => DriftMode::Explicit(mu),
                None => return Err(bad("drift object must be {\"explicit\": <number>}".into())),
            },
            Some(other) => return Err(bad(format!("unrecognized drift {other}"))),
        };
        ModelSpec::new(params, drift)
    }

    /// Parses a JSON string.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("model JSON: {e}")))?;
        Self::from_json(&v)
    }
}

fn erfc_real(x: f64) -> f64 {
    // erfc via the regularized upper incomplete gamma Q(1/2, x^2)
    if x >= 0.0 {
        crate::special::regularized_gamma_q(0.5, x * x)
    } else {
        2.0 - crate::special::regularized_gamma_q(0.5, x * x)
    }
}

/// Levy exponent `psi(u)` of `model`.
pub fn levy_exponent(model: &ModelSpec, u: Complex64) -> Result<Complex64> {
    model.psi(u)
}

/// Linear coefficient `mu` making `exp(X)` a martingale (`psi(1) = 0`).
pub fn martingale_drift(model: &ModelSpec) -> Result<f64> {
    let j = model.jump_exponent(Complex64::new(1.0, 0.0))?;
    Ok(-0.5 * model.sigma_sq() - j.re)
}

/// `v^2 = int x^2 F(dx)`.
pub fn jump_variance(model: &ModelSpec) -> f64 {
    model.v_sq()
}

/// Triplet drift `b = psi'(0)`.
pub fn triplet_drift(model: &ModelSpec) -> f64 {
    model.b()
}

/// Result of sampling `Re psi(r e^{i theta}) / r^2` over the sector.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    /// `(theta, r, ratio)` for every grid point.
    pub samples: Vec<(f64, f64, f64)>,
    /// Maximum ratio over the directions at the largest radius.
    pub max_ratio_at_largest_radius: f64,
    /// Same maximum with the linear term `mu u` removed.  A linear term
    /// contributes `mu cos(theta) / r` and cannot change the limsup, but at
    /// moderate radii it can dominate a decaying jump part.
    pub max_ratio_without_drift: f64,
    pub satisfied: bool,
}

/// Threshold on the sampled growth ratio above which a model is flagged.
pub const GROWTH_RATIO_TOL: f64 = 1e-6;

/// Default sampling grid: nine directions strictly inside `(pi/4, 3pi/4)`
/// and radii `10^1 .. 10^4`.
pub fn default_condition_grid() -> (Vec<f64>, Vec<f64>) {
    let thetas = (1..10).map(|j| PI / 4.0 + j as f64 * PI / 20.0).collect();
    let radii = vec![1e1, 1e2, 1e3, 1e4];
    (thetas, radii)
}

/// Samples the growth ratio of the exponent over the sector; overflow counts
/// as an infinite ratio.
pub fn check_condition_psi(model: &ModelSpec, thetas: &[f64], radii: &[f64]) -> ConditionReport {
    let mut samples = Vec::with_capacity(thetas.len() * radii.len());
    let r_max = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut max_at_top = f64::NEG_INFINITY;
    let mut max_no_drift = f64::NEG_INFINITY;
    for &r in radii {
        for &theta in thetas {
            let u = Complex64::from_polar(r, theta);
            let (ratio, no_drift) = match model.psi(u) {
                Ok(p) if p.re.is_finite() => (p.re / (r * r), (p - model.mu() * u).re / (r * r)),
                _ => (f64::INFINITY, f64::INFINITY),
            };
            if r == r_max {
                max_at_top = max_at_top.max(ratio);
                max_no_drift = max_no_drift.max(no_drift);
            }
            samples.push((theta, r, ratio));
        }
    }
    ConditionReport {
        samples,
        max_ratio_at_largest_radius: max_at_top,
        max_ratio_without_drift: max_no_drift,
        satisfied: max_no_drift <= GROWTH_RATIO_TOL,
    }
}

/// Reference parameter sets used by the tests, the CLI and the benchmarks.
pub mod presets {
    use super::ModelSpec;

    pub fn black_scholes() -> ModelSpec {
        ModelSpec::black_scholes(0.3).expect("valid")
    }

    /// CGMY calibration `C=0.3251, G=3.7103, M=18.4460, Y=0.6029`.
    pub fn cgmy() -> ModelSpec {
        ModelSpec::cgmy(0.3251, 3.7103, 18.4460, 0.6029).expect("valid")
    }

    /// Kou calibration with `lambda_+ = 0.5955, nu_+ = 16.6667,
    /// lambda_- = 3.3745, nu_- = 10` and the given diffusion volatility.
    pub fn kou(sigma: f64) -> ModelSpec {
        ModelSpec::kou(sigma, 0.5955, 3.3745, 16.6667, 10.0).expect("valid")
    }

    /// NIG with a daily-scale jump variance comparable to the CGMY set.
    pub fn nig() -> ModelSpec {
        ModelSpec::nig(6.1882, -3.8941, 0.1622).expect("valid")
    }

    /// Merton jump diffusion with frequent small negative jumps.
    pub fn merton() -> ModelSpec {
        ModelSpec::merton(0.2, 3.0, -0.05, 0.1).expect("valid")
    }

    /// All five catalog models.
    pub fn catalog() -> Vec<ModelSpec> {
        vec![black_scholes(), merton(), kou(0.3), nig(), cgmy()]
    }
}
