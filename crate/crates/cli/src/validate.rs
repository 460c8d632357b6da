use serde_json::{json, Value};
use varpricer::transforms::{psi_qv_closed_form, psi_qv_quadrature};
use varpricer::{
    bs_closed_form_rv, discretization_gap, laplace_rv, laplace_xsq, limit_call_qv, limit_call_rv, limit_put_qv,
    limit_put_rv, mc_laplace, mc_price, price_option_qv, price_option_rv, q_fn, r_fn, swap_rate_rv, Complex64,
    ContourSpec, Error, LaplaceTarget, ModelSpec, OptionSide, Params, QuadratureSpec, Scheme, SimPlan, TransformSpec,
    Underlying,
};

use crate::config::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Transforms,
    Prices,
    Limits,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "transforms" => Ok(Suite::Transforms),
            "prices" => Ok(Suite::Prices),
            "limits" => Ok(Suite::Limits),
            "all" => Ok(Suite::All),
            other => Err(CliError::Config(format!("unknown suite {other:?}"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Transforms => "transforms",
            Suite::Prices => "prices",
            Suite::Limits => "limits",
            Suite::All => "all",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// Outcome of one check: `measured <= tolerance` passes.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, measured: f64, tolerance: f64) -> Self {
        Check { name: name.into(), measured, tolerance, detail: None }
    }

    /// Failure from an error raised while measuring.
    fn errored(name: &str, e: impl ToString) -> Self {
        Check { name: name.into(), measured: f64::NAN, tolerance: 0.0, detail: Some(e.to_string()) }
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "passed": self.passed(),
            "measured": finite_or_null(self.measured),
            "tolerance": self.tolerance,
        });
        if let Some(d) = &self.detail {
            v["detail"] = json!(d);
        }
        v
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Runs `f`, turning an error into a failed check.
fn measure(name: &str, tolerance: f64, f: impl FnOnce() -> varpricer::Result<f64>) -> Check {
    match f() {
        Ok(m) => Check::new(name, m, tolerance),
        Err(e) => Check::errored(name, e),
    }
}

const DAY: f64 = 1.0 / 252.0;

fn grid() -> Vec<Complex64> {
    [(0.3, 0.2), (1.0, 1.0), (2.0, -5.0), (10.0, 40.0), (25.0, -3.0), (200.0, 150.0), (1e3, -2e3)]
        .iter()
        .map(|&(a, b)| Complex64::new(a, b))
        .collect()
}

fn transforms(model: &ModelSpec, paths: usize, seed: u64, out: &mut Vec<Check>) {
    let ts = TransformSpec::default();
    let (t, n) = (5.0 * DAY, 5);
    out.push(measure("conjugate_symmetry", 1e-10, || {
        let mut worst: f64 = 0.0;
        for u in grid() {
            let a = laplace_rv(model, u, t, n, &ts)?;
            let b = laplace_rv(model, u.conj(), t, n, &ts)?;
            worst = worst.max((a.conj() - b).norm());
        }
        Ok(worst)
    }));
    out.push(measure("modulus_at_most_one", 1e-12, || {
        let mut worst = f64::NEG_INFINITY;
        for u in grid() {
            worst = worst.max(laplace_rv(model, u, t, n, &ts)?.norm() - 1.0);
        }
        Ok(worst.max(0.0))
    }));
    let qs = QuadratureSpec::default();
    if let Ok(Some(_)) = psi_qv_closed_form(model, Complex64::new(-1.0, 0.0), &qs) {
        out.push(measure("psi_qv_dual_path", 1e-8, || {
            let mut worst: f64 = 0.0;
            for u in grid() {
                let closed = psi_qv_closed_form(model, -u, &qs)?.unwrap_or_default();
                let quad = psi_qv_quadrature(model, -u, &qs)?;
                worst = worst.max((closed - quad).norm() / closed.norm().max(1e-300));
            }
            Ok(worst)
        }));
    }
    if let Params::BlackScholes { sigma } = *model.params() {
        out.push(measure("xsq_gaussian_closed_form", 1e-8, || {
            let mut worst: f64 = 0.0;
            for u in grid() {
                let got = laplace_xsq(model, u, t, &ts)?;
                let (m, s2) = (model.b() * t, sigma * sigma * t);
                let d = 1.0 + 2.0 * u * s2;
                let want = (-u * m * m / d).exp() / d.sqrt();
                worst = worst.max((got - want).norm() / want.norm());
            }
            Ok(worst)
        }));
    }
    out.push(measure("xsq_vs_monte_carlo_se", 3.0, || {
        let u = Complex64::new(0.5, 2.0);
        let want = laplace_xsq(model, u, DAY, &ts)?;
        let est = mc_laplace(&SimPlan::new(model.clone(), DAY, 1, paths, seed), u, LaplaceTarget::Xsq)?;
        Ok(se_units(est.value.re - want.re, est.se_re).max(se_units(est.value.im - want.im, est.se_im)))
    }));
}

/// Deviation in standard errors; exact agreement with zero spread is 0.
fn se_units(dev: f64, se: f64) -> f64 {
    if dev == 0.0 {
        0.0
    } else {
        dev.abs() / se
    }
}

fn prices(model: &ModelSpec, paths: usize, seed: u64, out: &mut Vec<Check>) {
    let cs = ContourSpec::default();
    let (days, n) = (10.0, 10);
    let t = days * DAY;
    let swap = swap_rate_rv(model, t, n);
    out.push(measure("put_call_parity", 1e-9, || {
        let mut worst: f64 = 0.0;
        for k in [0.9, 1.1] {
            let p = price_option_rv(model, t, n, k, OptionSide::Put, &cs)?.diagnostics.raw_price;
            let c = price_option_rv(model, t, n, k, OptionSide::Call, &cs)?.diagnostics.raw_price;
            worst = worst.max((p - c - (k - 1.0) * swap).abs() / swap);
        }
        Ok(worst)
    }));
    out.push(measure("damping_invariance", 1e-7, || {
        let r0 = 1.0 / (swap * t);
        let at = |r: f64| price_option_rv(model, t, n, 1.0, OptionSide::Call, &ContourSpec { damping: Some(r), ..cs });
        let (a, b) = (at(0.5 * r0)?.price, at(2.0 * r0)?.price);
        Ok((a - b).abs() / a.abs().max(1e-300))
    }));
    if let Params::BlackScholes { sigma } = *model.params() {
        out.push(measure("closed_form_vs_exact", 1e-5, || {
            let exact = price_option_rv(model, t, n, 1.0, OptionSide::Call, &cs)?.price;
            let closed = bs_closed_form_rv(sigma, model.b(), t, n, 1.0, OptionSide::Call)?;
            Ok((exact - closed).abs() / closed)
        }));
    }
    let mut plan = SimPlan::new(model.clone(), t, n, paths, seed);
    if matches!(model.params(), Params::Nig { .. }) {
        // QV needs the jump record of the truncated scheme
        plan = plan.with_scheme(Scheme::SmallJumpTruncation { epsilon: 1e-4 });
    }
    out.push(measure("rv_vs_monte_carlo_se", 3.0, || {
        let exact = price_option_rv(model, t, n, 1.0, OptionSide::Call, &cs)?.price;
        let mc = mc_price(&plan, 1.0, OptionSide::Call, Underlying::Rv)?;
        Ok(se_units(mc.price - exact, mc.est_error))
    }));
    out.push(measure("qv_vs_monte_carlo_se", 3.0, || {
        let exact = price_option_qv(model, t, 1.0, OptionSide::Call, &cs)?.price;
        let mc = mc_price(&plan, 1.0, OptionSide::Call, Underlying::Qv)?;
        Ok(se_units(mc.price - exact, mc.est_error))
    }));
}

fn limits(model: &ModelSpec, out: &mut Vec<Check>) {
    let (s2, v2) = (model.sigma_sq(), model.v_sq());
    out.push(measure("limit_parity", 1e-12, || {
        let mut worst: f64 = 0.0;
        for k in [0.5, 1.0, 1.5] {
            let scale = s2 + v2;
            let rv = limit_call_rv(model, k, 3)? - limit_put_rv(model, k, 3)? - (1.0 - k) * scale;
            let qv = limit_call_qv(model, k)? - limit_put_qv(model, k)? - (1.0 - k) * scale;
            worst = worst.max(rv.abs().max(qv.abs()) / scale);
        }
        Ok(worst)
    }));
    out.push(measure("gap_nonincreasing_in_n", 0.0, || {
        let mut worst: f64 = 0.0;
        let mut prev = discretization_gap(model, 1.0, 1, OptionSide::Call)?;
        for n in [2, 4, 8, 16, 32, 64, 128] {
            let g = discretization_gap(model, 1.0, n, OptionSide::Call)?;
            worst = worst.max(g - prev);
            prev = g;
        }
        Ok(worst)
    }));
    out.push(measure("q_r_monotone_in_r", 0.0, || {
        // count of violations over an r grid at the money, n = 1 and 5
        let mut bad = 0;
        for n in [1, 5] {
            let mut prev = (f64::INFINITY, f64::NEG_INFINITY);
            for r in [0.0, 0.1, 0.3, 0.7, 1.5] {
                let cur = (q_fn(1.0, n, r)?, r_fn(1.0, n, r)?);
                if !(cur.0 < prev.0 && cur.1 > prev.1) {
                    bad += 1;
                }
                prev = cur;
            }
        }
        Ok(bad as f64)
    }));
    let cs = ContourSpec::default();
    let t = 0.1 * DAY;
    out.push(measure("small_time_rv_limit", 0.05, || {
        let p = price_option_rv(model, t, 1, 1.0, OptionSide::Call, &cs)?.price;
        let lim = limit_call_rv(model, 1.0, 1)?;
        Ok((p - lim).abs() / lim)
    }));
    out.push(measure("small_time_qv_limit", 0.05, || {
        let p = price_option_qv(model, t, 1.0, OptionSide::Call, &cs)?.price;
        Ok(if v2 == 0.0 { p } else { (p - v2).abs() / v2 })
    }));
}

/// Runs the requested suites.  A model outside the class handled by the
/// transform pricer gets only the gate check, which passes when the model
/// is rejected.
pub fn run(model: &ModelSpec, suite: Suite, paths: usize, seed: u64) -> CliResult<Value> {
    if paths == 0 {
        return Err(CliError::Config("--paths must be at least 1".into()));
    }
    let mut checks = Vec::new();
    if !model.satisfies_growth_condition() {
        let rejected = matches!(
            price_option_rv(model, 1.0, 1, 1.0, OptionSide::Call, &ContourSpec::default()),
            Err(Error::ConditionViolated(_))
        );
        checks.push(Check::new("growth_condition_gate", if rejected { 0.0 } else { 1.0 }, 0.0));
    } else {
        if suite.includes(Suite::Transforms) {
            transforms(model, paths, seed, &mut checks);
        }
        if suite.includes(Suite::Prices) {
            prices(model, paths, seed, &mut checks);
        }
        if suite.includes(Suite::Limits) {
            limits(model, &mut checks);
        }
    }
    let passed = checks.iter().all(Check::passed);
    Ok(json!({
        "model": model.to_json(),
        "suite": suite.name(),
        "paths": paths,
        "seed": seed,
        "passed": passed,
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    }))
}
