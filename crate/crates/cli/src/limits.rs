use varpricer::{
    discretization_gap, limit_call_qv, limit_call_rv, limit_put_qv, limit_put_rv, q_fn, r_fn, ModelSpec, OptionSide,
};

use crate::config::CliResult;
use crate::csv::num;

pub const HEADER: &str = "# varpricer-limits v1";
pub const COLUMNS: &str = "k,n,r,limit_put_qv,limit_call_qv,limit_put_rv,limit_call_rv,q,r_fn,gap";

/// One row per `(k, n)` pair, `k` outer.  `r = v^2 / sigma^2`; with no
/// diffusion `r` is infinite, `Q = 0` and `R = 1`.
pub fn table(model: &ModelSpec, ks: &[f64], ns: &[usize]) -> CliResult<String> {
    let (s2, v2) = (model.sigma_sq(), model.v_sq());
    let r = if s2 == 0.0 { f64::INFINITY } else { v2 / s2 };
    let mut out = format!("{HEADER}\n{COLUMNS}\n");
    for &k in ks {
        for &n in ns {
            let (q, rf) = if s2 == 0.0 { (0.0, 1.0) } else { (q_fn(k, n, r)?, r_fn(k, n, r)?) };
            let cells = [
                num(k),
                n.to_string(),
                num(r),
                num(limit_put_qv(model, k)?),
                num(limit_call_qv(model, k)?),
                num(limit_put_rv(model, k, n)?),
                num(limit_call_rv(model, k, n)?),
                num(q),
                num(rf),
                num(discretization_gap(model, k, n, OptionSide::Call)?),
            ];
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    Ok(out)
}
