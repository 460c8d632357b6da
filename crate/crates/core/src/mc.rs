//! Monte Carlo simulation of log-price increments, used as an independent
//! oracle for transform values and option prices.
//!
//! Every path draws from its own ChaCha8 stream (`seed`, stream = path
//! index), so results do not depend on how paths are scheduled.  Paths are
//! processed in fixed blocks whose statistics are merged in block order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelSpec, Params, Side};
use crate::pricer::{swap_rate_qv, swap_rate_rv, Diagnostics, Method, OptionSide, PriceResult};
use crate::quadrature::{exp_sinh, tanh_sinh, QuadratureSpec};

/// Small-jump threshold used for CGMY unless a plan says otherwise.
pub const DEFAULT_EPSILON: f64 = 1e-4;
const BLOCK: usize = 1 << 14;

/// Simulation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Exact increments (BS, Merton, Kou, NIG).
    Exact,
    /// Jumps with `|x| > epsilon` by thinning, smaller jumps replaced by a
    /// Gaussian of matched variance (CGMY, NIG).
    SmallJumpTruncation { epsilon: f64 },
}

/// What is being simulated.
#[derive(Debug, Clone, PartialEq)]
pub struct SimPlan {
    pub model: ModelSpec,
    pub t: f64,
    pub n: usize,
    pub paths: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

impl SimPlan {
    /// Plan with the default scheme for the model (truncation for CGMY).
    pub fn new(model: ModelSpec, t: f64, n: usize, paths: usize, seed: u64) -> Self {
        let scheme = match model.kind() {
            ModelKind::Cgmy => Scheme::SmallJumpTruncation { epsilon: DEFAULT_EPSILON },
            _ => Scheme::Exact,
        };
        SimPlan { model, t, n, paths, seed, scheme }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 || self.n == 0 {
            return Err(Error::InvalidParameter("paths and n must be at least 1".into()));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Domain(format!("maturity must be positive, got {}", self.t)));
        }
        if let Scheme::SmallJumpTruncation { epsilon } = self.scheme {
            if !(epsilon > 0.0 && epsilon.is_finite()) {
                return Err(Error::InvalidParameter(format!("truncation epsilon must be positive, got {epsilon}")));
            }
        }
        Ok(())
    }
}

/// Simulated increments, row-major `paths x n`, with the per-path sum of
/// squared jumps when the scheme records jumps (jumps above `epsilon` under
/// truncation).
#[derive(Debug, Clone, PartialEq)]
pub struct Increments {
    pub paths: usize,
    pub n: usize,
    pub data: Vec<f64>,
    pub jump_sq: Option<Vec<f64>>,
}

impl Increments {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Thinning sampler for one side of a Levy measure restricted to `x > eps`:
/// proposals from `K x^{-1-y} dx`, accepted with `ratio(x) / bound`.
#[derive(Debug, Clone)]
struct Thinning {
    eps: f64,
    y: f64,
    /// Proposal count per step.
    poisson: Option<Poisson<f64>>,
    accept: Acceptance,
    bound: f64,
}

#[derive(Debug, Clone, Copy)]
enum Acceptance {
    /// `e^{-rate x}` (CGMY).
    Exponential { rate: f64 },
    /// `alpha x K1(alpha x) e^{s beta x}` (NIG).
    Nig { alpha: f64, signed_beta: f64 },
}

impl Acceptance {
    fn ratio(&self, x: f64) -> f64 {
        match *self {
            Acceptance::Exponential { rate } => (-rate * x).exp(),
            Acceptance::Nig { alpha, signed_beta } => {
                let z = alpha * x;
                z * crate::special::bessel_k1(Complex64::new(z, 0.0)).re * (signed_beta * x).exp()
            }
        }
    }
}

impl Thinning {
    fn new(eps: f64, y: f64, scale: f64, accept: Acceptance, dt: f64) -> Result<Self> {
        let bound = match accept {
            Acceptance::Exponential { rate } => (-rate * eps).exp(),
            Acceptance::Nig { .. } => {
                // sup of a smooth unimodal ratio over a fine log grid, with margin
                let hi: f64 = 60.0;
                let steps = 4000;
                let mut best: f64 = 0.0;
                for j in 0..=steps {
                    let x = eps * (hi / eps).powf(j as f64 / steps as f64);
                    best = best.max(accept.ratio(x));
                }
                best * 1.02
            }
        };
        let rate = scale * bound * eps.powf(-y) / y * dt;
        let poisson = if rate > 0.0 {
            Some(Poisson::new(rate).map_err(|e| Error::InvalidParameter(format!("proposal rate {rate}: {e}")))?)
        } else {
            None
        };
        Ok(Thinning { eps, y, poisson, accept, bound })
    }

    /// Adds accepted jumps over one step; returns their sum and sum of squares.
    fn step<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        let Some(p) = &self.poisson else { return (0.0, 0.0) };
        let count = p.sample(rng) as usize;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..count {
            let u: f64 = 1.0 - rng.random::<f64>();
            let x = self.eps * u.powf(-1.0 / self.y);
            let v: f64 = rng.random();
            if v * self.bound < self.accept.ratio(x) {
                s += x;
                s2 += x * x;
            }
        }
        (s, s2)
    }
}

/// Per-model increment generator over a step `dt`.
#[derive(Debug, Clone)]
enum Sampler {
    Diffusion {
        drift: f64,
        sd: f64,
    },
    Merton {
        drift: f64,
        sd: f64,
        count: Option<Poisson<f64>>,
        gamma: f64,
        delta: f64,
    },
    Kou {
        drift: f64,
        sd: f64,
        up: Option<Poisson<f64>>,
        down: Option<Poisson<f64>>,
        nu_plus: f64,
        nu_minus: f64,
    },
    Nig {
        drift: f64,
        beta: f64,
        ig_mean: f64,
        ig_shape: f64,
    },
    Truncated {
        /// `(b - m_eps) dt`: triplet drift less the compensator of large jumps.
        drift: f64,
        sd: f64,
        pos: Box<Thinning>,
        neg: Box<Thinning>,
        /// `sigma^2 + s_eps^2`: the continuous part of `[X,X]` per unit time.
        qv_rate: f64,
    },
}

fn poisson(rate: f64) -> Result<Option<Poisson<f64>>> {
    if rate <= 0.0 {
        return Ok(None);
    }
    Poisson::new(rate).map(Some).map_err(|e| Error::InvalidParameter(format!("Poisson rate {rate}: {e}")))
}

/// `int_{|x| < eps} x^2 F(dx)` and `int_{|x| > eps} x F(dx)` by quadrature
/// over the Levy density.
fn truncation_moments(model: &ModelSpec, eps: f64) -> Result<(f64, f64)> {
    let spec = QuadratureSpec::new(20_000, 1e-12, 1e-300)?;
    let mut small = 0.0;
    let mut large = 0.0;
    for (side, sign) in [(Side::Positive, 1.0), (Side::Negative, -1.0)] {
        let f = |x: f64| model.levy_density(side, Complex64::new(x, 0.0)).re;
        small +=
            tanh_sinh(|x, _| Complex64::new(if x > 0.0 { x * x * f(x) } else { 0.0 }, 0.0), 0.0, eps, &spec)?.value.re;
        large += sign * exp_sinh(|x, _| Complex64::new(x * f(x), 0.0), eps, &spec)?.value.re;
    }
    Ok((small, large))
}

impl Sampler {
    fn build(plan: &SimPlan) -> Result<Self> {
        let model = &plan.model;
        let dt = plan.t / plan.n as f64;
        let mu_dt = model.mu() * dt;
        let sd = (model.sigma_sq() * dt).sqrt();
        match (plan.scheme, *model.params()) {
            (_, Params::CompensatedPoisson) => {
                Err(Error::UnsupportedScheme("the compensated Poisson counterexample is not simulated".into()))
            }
            (Scheme::Exact, Params::BlackScholes { .. }) => Ok(Sampler::Diffusion { drift: mu_dt, sd }),
            (Scheme::Exact, Params::Merton { lambda, gamma, delta, .. }) => {
                Ok(Sampler::Merton { drift: mu_dt, sd, count: poisson(lambda * dt)?, gamma, delta })
            }
            (Scheme::Exact, Params::Kou { lambda_plus, lambda_minus, nu_plus, nu_minus, .. }) => Ok(Sampler::Kou {
                drift: mu_dt,
                sd,
                up: poisson(lambda_plus * dt)?,
                down: poisson(lambda_minus * dt)?,
                nu_plus,
                nu_minus,
            }),
            (Scheme::Exact, Params::Nig { alpha, beta, delta }) => {
                let gamma = (alpha * alpha - beta * beta).sqrt();
                Ok(Sampler::Nig { drift: mu_dt, beta, ig_mean: delta * dt / gamma, ig_shape: (delta * dt).powi(2) })
            }
            (Scheme::Exact, Params::Cgmy { .. }) => {
                Err(Error::UnsupportedScheme("CGMY has no exact sampler here; use small_jump_truncation".into()))
            }
            (Scheme::SmallJumpTruncation { epsilon }, params) => {
                let (pos, neg) = match params {
                    Params::Cgmy { c, g, m, y } => (
                        Thinning::new(epsilon, y, c, Acceptance::Exponential { rate: m }, dt)?,
                        Thinning::new(epsilon, y, c, Acceptance::Exponential { rate: g }, dt)?,
                    ),
                    Params::Nig { alpha, beta, delta } => {
                        let scale = delta / std::f64::consts::PI;
                        (
                            Thinning::new(epsilon, 1.0, scale, Acceptance::Nig { alpha, signed_beta: beta }, dt)?,
                            Thinning::new(epsilon, 1.0, scale, Acceptance::Nig { alpha, signed_beta: -beta }, dt)?,
                        )
                    }
                    _ => {
                        return Err(Error::UnsupportedScheme(format!(
                            "small_jump_truncation is for infinite-activity models, not {}",
                            model.kind().name()
                        )))
                    }
                };
                let (small_var, large_mean) = truncation_moments(model, epsilon)?;
                Ok(Sampler::Truncated {
                    drift: (model.b() - large_mean) * dt,
                    sd: ((model.sigma_sq() + small_var) * dt).sqrt(),
                    pos: Box::new(pos),
                    neg: Box::new(neg),
                    qv_rate: model.sigma_sq() + small_var,
                })
            }
        }
    }

    fn records_jumps(&self) -> bool {
        !matches!(self, Sampler::Nig { .. })
    }

    /// Rate of the part of `[X,X]` not carried by recorded jumps.
    fn continuous_qv_rate(&self, model: &ModelSpec) -> f64 {
        match self {
            Sampler::Truncated { qv_rate, .. } => *qv_rate,
            _ => model.sigma_sq(),
        }
    }

    /// One increment and the sum of its squared recorded jumps.
    fn step<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        let z: f64 = StandardNormal.sample(rng);
        match self {
            Sampler::Diffusion { drift, sd } => (drift + sd * z, 0.0),
            Sampler::Merton { drift, sd, count, gamma, delta } => {
                let mut x = drift + sd * z;
                let mut qv = 0.0;
                if let Some(p) = count {
                    let k = p.sample(rng) as usize;
                    for _ in 0..k {
                        let e: f64 = StandardNormal.sample(rng);
                        let j = gamma + delta * e;
                        x += j;
                        qv += j * j;
                    }
                }
                (x, qv)
            }
            Sampler::Kou { drift, sd, up, down, nu_plus, nu_minus } => {
                let mut x = drift + sd * z;
                let mut qv = 0.0;
                for (dist, rate, sign) in [(up, nu_plus, 1.0), (down, nu_minus, -1.0)] {
                    if let Some(p) = dist {
                        let k = p.sample(rng) as usize;
                        for _ in 0..k {
                            let e: f64 = Exp1.sample(rng);
                            let j = sign * e / rate;
                            x += j;
                            qv += j * j;
                        }
                    }
                }
                (x, qv)
            }
            Sampler::Nig { drift, beta, ig_mean, ig_shape } => {
                let v = inverse_gaussian(rng, *ig_mean, *ig_shape);
                let w: f64 = StandardNormal.sample(rng);
                (drift + beta * v + v.sqrt() * w, f64::NAN)
            }
            Sampler::Truncated { drift, sd, pos, neg, .. } => {
                let (sp, qp) = pos.step(rng);
                let (sn, qn) = neg.step(rng);
                (drift + sd * z + sp - sn, qp + qn)
            }
        }
    }
}

/// Inverse Gaussian draw (Michael, Schucany and Haas), written without the
/// cancellation that appears when `mean / shape` is large.
fn inverse_gaussian<R: Rng>(rng: &mut R, mean: f64, shape: f64) -> f64 {
    let n: f64 = StandardNormal.sample(rng);
    let phi = mean * n * n / shape;
    let x = mean / (1.0 + 0.5 * phi + (phi + 0.25 * phi * phi).sqrt());
    let u: f64 = rng.random();
    if u * (mean + x) <= mean {
        x
    } else {
        mean * mean / x
    }
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

/// Simulates one path into `out`; returns the sum of squared recorded jumps
/// (NaN when the scheme has no jump record).
fn simulate_path(sampler: &Sampler, seed: u64, path: usize, out: &mut [f64]) -> f64 {
    let mut rng = path_rng(seed, path);
    let mut qv = 0.0;
    for slot in out.iter_mut() {
        let (x, q) = sampler.step(&mut rng);
        *slot = x;
        qv += q;
    }
    qv
}

/// Increments matrix for the plan.
pub fn simulate_increments(plan: &SimPlan) -> Result<Increments> {
    plan.validate()?;
    let sampler = Sampler::build(plan)?;
    let n = plan.n;
    let mut data = vec![0.0; plan.paths * n];
    let mut qv = vec![0.0; plan.paths];
    data.par_chunks_mut(n)
        .zip(qv.par_iter_mut())
        .enumerate()
        .for_each(|(i, (row, q))| *q = simulate_path(&sampler, plan.seed, i, row));
    let jump_sq = sampler.records_jumps().then_some(qv);
    Ok(Increments { paths: plan.paths, n, data, jump_sq })
}

/// Streaming mean and variance.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.count == 0.0 {
            return;
        }
        let total = self.count + o.count;
        let d = o.mean - self.mean;
        self.mean += d * o.count / total;
        self.m2 += o.m2 + d * d * self.count * o.count / total;
        self.count = total;
    }

    fn std_error(&self) -> f64 {
        if self.count < 2.0 {
            return 0.0;
        }
        (self.m2 / (self.count - 1.0) / self.count).sqrt()
    }
}

/// Runs all paths, evaluating `stats` (dimension `d`) on each, and returns
/// the merged moments per dimension.
fn run<F>(plan: &SimPlan, sampler: &Sampler, d: usize, stats: F) -> Vec<Moments>
where
    F: Fn(&[f64], f64, &mut [f64]) + Sync,
{
    let blocks = plan.paths.div_ceil(BLOCK);
    let partial: Vec<Vec<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![Moments::default(); d];
            let mut row = vec![0.0; plan.n];
            let mut out = vec![0.0; d];
            for path in b * BLOCK..((b + 1) * BLOCK).min(plan.paths) {
                let qv = simulate_path(sampler, plan.seed, path, &mut row);
                stats(&row, qv, &mut out);
                for (m, &x) in acc.iter_mut().zip(&out) {
                    m.push(x);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Moments::default(); d];
    for block in &partial {
        for (t, m) in total.iter_mut().zip(block) {
            t.merge(m);
        }
    }
    total
}

/// Underlying of a simulated option.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Underlying {
    Rv,
    Qv,
}

/// Sample-mean price of a put or call on `RV_n(T)` or `(1/T)[X,X]_T`, with
/// the strike `k` times the matching swap rate.
pub fn mc_price(plan: &SimPlan, k: f64, side: OptionSide, underlying: Underlying) -> Result<PriceResult> {
    plan.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("relative strike must be positive, got {k}")));
    }
    let sampler = Sampler::build(plan)?;
    if underlying == Underlying::Qv && !sampler.records_jumps() {
        return Err(Error::UnsupportedScheme(
            "the exact NIG scheme has no jump record; price QV with small_jump_truncation".into(),
        ));
    }
    let t = plan.t;
    let qv_rate = sampler.continuous_qv_rate(&plan.model);
    let swap = match underlying {
        Underlying::Rv => swap_rate_rv(&plan.model, t, plan.n),
        Underlying::Qv => swap_rate_qv(&plan.model),
    };
    let strike = k * swap;
    let payoff = move |x: f64| match side {
        OptionSide::Put => (strike - x).max(0.0),
        OptionSide::Call => (x - strike).max(0.0),
    };
    let m = run(plan, &sampler, 2, |row, qv, out| {
        let rv = row.iter().map(|x| x * x).sum::<f64>() / t;
        let value = match underlying {
            Underlying::Rv => rv,
            Underlying::Qv => qv_rate + qv / t,
        };
        out[0] = payoff(value);
        out[1] = value;
    });
    let mut diagnostics = Diagnostics { strike, swap_rate: swap, raw_price: m[0].mean, ..Default::default() };
    diagnostics.extra.insert("paths".into(), plan.paths as f64);
    diagnostics.extra.insert("n".into(), plan.n as f64);
    diagnostics.extra.insert("underlying_mean".into(), m[1].mean);
    diagnostics.extra.insert("underlying_mean_se".into(), m[1].std_error());
    if let Scheme::SmallJumpTruncation { epsilon } = plan.scheme {
        diagnostics.extra.insert("epsilon".into(), epsilon);
    }
    Ok(PriceResult { price: m[0].mean, method: Method::Mc, side, est_error: m[0].std_error(), diagnostics })
}

/// What `mc_laplace` averages `e^{-u S}` over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplaceTarget {
    /// `S = X_T^2`.
    Xsq,
    /// `S = sum_j (Delta X_j)^2 = T RV_n(T)`.
    Rv,
    /// `S = [X,X]_T`.
    Qv,
    /// `S = sum_j |Delta X_j|^p`.
    Pvar(f64),
}

/// Complex sample mean with a standard error per component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub se_re: f64,
    pub se_im: f64,
    pub paths: usize,
}

/// Monte Carlo estimate of `E[e^{-u S}]`.
pub fn mc_laplace(plan: &SimPlan, u: Complex64, target: LaplaceTarget) -> Result<ComplexEstimate> {
    plan.validate()?;
    if u == Complex64::new(0.0, 0.0) {
        return Ok(ComplexEstimate { value: Complex64::new(1.0, 0.0), se_re: 0.0, se_im: 0.0, paths: plan.paths });
    }
    if let LaplaceTarget::Pvar(p) = target {
        if !(p > 0.0 && p <= 2.0) {
            return Err(Error::Domain(format!("p must lie in (0, 2], got {p}")));
        }
    }
    let sampler = Sampler::build(plan)?;
    if target == LaplaceTarget::Qv && !sampler.records_jumps() {
        return Err(Error::UnsupportedScheme(
            "the exact NIG scheme has no jump record; use small_jump_truncation for QV".into(),
        ));
    }
    let qv_cont = sampler.continuous_qv_rate(&plan.model) * plan.t;
    let m = run(plan, &sampler, 2, |row, qv, out| {
        let s = match target {
            LaplaceTarget::Xsq => row.iter().sum::<f64>().powi(2),
            LaplaceTarget::Rv => row.iter().map(|x| x * x).sum(),
            LaplaceTarget::Qv => qv_cont + qv,
            LaplaceTarget::Pvar(p) => row.iter().map(|x| x.abs().powf(p)).sum(),
        };
        let e = (-u * s).exp();
        out[0] = e.re;
        out[1] = e.im;
    });
    Ok(ComplexEstimate {
        value: Complex64::new(m[0].mean, m[1].mean),
        se_re: m[0].std_error(),
        se_im: m[1].std_error(),
        paths: plan.paths,
    })
}
