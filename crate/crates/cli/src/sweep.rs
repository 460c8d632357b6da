use rayon::prelude::*;
use varpricer::{
    corrected_price, limit_call_qv, limit_call_rv, limit_put_qv, limit_put_rv, mc_price, price_option_qv,
    price_option_rv, ContourSpec, ModelSpec, OptionSide, SimPlan, Underlying,
};

use crate::config::{sampling_dates, CliError, CliResult};
use crate::csv::{field, opt_field};

pub const HEADER: &str = "# varpricer-sweep v1";
pub const COLUMNS: &str =
    "maturity_days,n,k,price_exact_rv,price_qv,price_corrected,limit_rv,limit_qv,mc_price,mc_se,error";

/// Which columns a sweep fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSet {
    pub exact: bool,
    pub qv: bool,
    pub corrected: bool,
    pub limits: bool,
}

impl MethodSet {
    pub fn parse(arg: &str) -> CliResult<Self> {
        let mut set = MethodSet { exact: false, qv: false, corrected: false, limits: false };
        for item in arg.split(',').map(str::trim) {
            match item {
                "all" => set = MethodSet { exact: true, qv: true, corrected: true, limits: true },
                "exact" => set.exact = true,
                "qv" => set.qv = true,
                "corrected" => set.corrected = true,
                "limits" => set.limits = true,
                other => return Err(CliError::Config(format!("unknown sweep method {other:?}"))),
            }
        }
        Ok(set)
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub k: f64,
    pub side: OptionSide,
    pub days: Vec<u32>,
    pub sampling: String,
    pub methods: MethodSet,
    pub mc_paths: Option<usize>,
    pub seed: u64,
    pub year_days: f64,
    pub contour: ContourSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub maturity_days: u32,
    pub n: usize,
    pub k: f64,
    pub price_exact_rv: Option<f64>,
    pub price_qv: Option<f64>,
    pub price_corrected: Option<f64>,
    pub limit_rv: Option<f64>,
    pub limit_qv: Option<f64>,
    pub mc_price: Option<f64>,
    pub mc_se: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        [
            self.maturity_days.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            opt_field(self.price_exact_rv),
            opt_field(self.price_qv),
            opt_field(self.price_corrected),
            opt_field(self.limit_rv),
            opt_field(self.limit_qv),
            opt_field(self.mc_price),
            opt_field(self.mc_se),
            field(self.error.as_deref().unwrap_or("")),
        ]
        .join(",")
    }
}

fn row(model: &ModelSpec, opts: &SweepOptions, days: u32) -> CliResult<SweepRow> {
    let n = sampling_dates(&opts.sampling, days as f64)?;
    let t = days as f64 / opts.year_days;
    let (k, side, cs) = (opts.k, opts.side, &opts.contour);
    let mut errors = Vec::new();
    let mut keep = |r: varpricer::Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(e.to_string());
            Some(f64::NAN)
        }
    };
    let m = opts.methods;
    let price_exact_rv = m.exact.then(|| keep(price_option_rv(model, t, n, k, side, cs).map(|p| p.price))).flatten();
    let price_qv = m.qv.then(|| keep(price_option_qv(model, t, k, side, cs).map(|p| p.price))).flatten();
    let price_corrected =
        m.corrected.then(|| keep(corrected_price(model, t, n, k, side, cs).map(|p| p.price))).flatten();
    let (limit_rv, limit_qv) = if m.limits {
        let (rv, qv) = match side {
            OptionSide::Put => (limit_put_rv(model, k, n), limit_put_qv(model, k)),
            OptionSide::Call => (limit_call_rv(model, k, n), limit_call_qv(model, k)),
        };
        (keep(rv), keep(qv))
    } else {
        (None, None)
    };
    let (mc_price_v, mc_se) = match opts.mc_paths {
        Some(paths) => {
            let plan = SimPlan::new(model.clone(), t, n, paths, opts.seed.wrapping_add(days as u64));
            match mc_price(&plan, k, side, Underlying::Rv) {
                Ok(p) => (Some(p.price), Some(p.est_error)),
                Err(e) => {
                    errors.push(e.to_string());
                    (Some(f64::NAN), Some(f64::NAN))
                }
            }
        }
        None => (None, None),
    };
    Ok(SweepRow {
        maturity_days: days,
        n,
        k,
        price_exact_rv,
        price_qv,
        price_corrected,
        limit_rv,
        limit_qv,
        mc_price: mc_price_v,
        mc_se,
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    })
}

/// Prices every maturity in parallel; rows come back in the order of `opts.days`.
pub fn run(model: &ModelSpec, opts: &SweepOptions) -> CliResult<Vec<SweepRow>> {
    opts.days.par_iter().map(|&d| row(model, opts, d)).collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{HEADER}\n{COLUMNS}\n");
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}
