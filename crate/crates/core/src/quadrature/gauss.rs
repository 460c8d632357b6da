//! Gaussian quadrature rules from the three-term recurrence (Golub-Welsch).
//!
//! The Jacobi matrix is diagonalized with implicit-shift QL iterations; only
//! the first component of each eigenvector is tracked, which gives the
//! weights as `mu0 * v0^2`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Nodes and weights of a Gaussian rule, sorted by node.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn golub_welsch(mut diag: Vec<f64>, offdiag: &[f64], mu0: f64) -> Result<GaussRule> {
    let n = diag.len();
    assert_eq!(offdiag.len() + 1, n.max(1));
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                return Err(Error::convergence("golub_welsch", format!("eigenvalue {l} of {n}")));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(z).map(|(x, v)| (x, mu0 * v * v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(GaussRule { nodes, weights })
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn legendre(n: usize) -> Result<GaussRule> {
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    golub_welsch(vec![0.0; n], &off, 2.0)
}

/// Gauss-Hermite rule for the weight `exp(-x^2)` on the real line.
pub fn hermite(n: usize) -> Result<GaussRule> {
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(vec![0.0; n], &off, std::f64::consts::PI.sqrt())
}

/// Generalized Gauss-Laguerre rule for `x^alpha exp(-x)` on `[0, inf)`,
/// normalized so that the weights sum to one (a Gamma(alpha+1) expectation).
pub fn laguerre_normalized(n: usize, alpha: f64) -> Result<GaussRule> {
    if alpha <= -1.0 {
        return Err(Error::Domain(format!("laguerre alpha {alpha} <= -1")));
    }
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            (k * (k + alpha)).sqrt()
        })
        .collect();
    golub_welsch(diag, &off, 1.0)
}

/// Gauss-Jacobi rule for `(1-x)^a (1+x)^b` on `[-1, 1]`.
pub fn jacobi(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::Domain(format!("jacobi exponents ({a}, {b}) must exceed -1")));
    }
    let ab = a + b;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            let k = k as f64;
            let den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
            if den.abs() < 1e-300 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / den
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + ab;
            let num = 4.0 * k * (k + a) * (k + b) * (k + ab);
            let den = s * s * (s + 1.0) * (s - 1.0);
            if den.abs() < 1e-300 {
                // k = 1 with a + b = -1
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
            } else {
                (num / den).sqrt()
            }
        })
        .collect();
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(ab + 2.0);
    golub_welsch(diag, &off, ln_mu0.exp())
}

type Cache = Mutex<HashMap<usize, Arc<GaussRule>>>;

fn cached(cache: &'static OnceLock<Cache>, n: usize, make: fn(usize) -> Result<GaussRule>) -> Result<Arc<GaussRule>> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = map.lock().expect("rule cache poisoned").get(&n) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(make(n)?);
    map.lock().expect("rule cache poisoned").insert(n, rule.clone());
    Ok(rule)
}

/// Shared Gauss-Hermite rule of order `n`.
pub fn hermite_cached(n: usize) -> Result<Arc<GaussRule>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, hermite)
}

/// Shared Gauss-Legendre rule of order `n`.
pub fn legendre_cached(n: usize) -> Result<Arc<GaussRule>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, legendre)
}
