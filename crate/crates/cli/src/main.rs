//! `varpricer` command-line interface.
//!
//! Exit codes: 0 success, 1 failed validation, 2 configuration error,
//! 3 numerical non-convergence.

mod config;
mod csv;
mod limits;
mod sweep;
mod validate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use varpricer::pricer::price_bs_closed_form;
use varpricer::{corrected_price, mc_price, price_option_qv, price_option_rv, OptionSide, Scheme, SimPlan, Underlying};

use config::{contour_overrides, day_list, load_model, number_list, sampling_dates, CliError, CliResult};

#[derive(Parser, Debug)]
#[command(
    name = "varpricer",
    version,
    about = "Options on realized variance and quadratic variation under Levy models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Price one option and print the result as a JSON line.
    Price {
        /// Model as inline JSON, a JSON file, or a preset (bs, merton, kou, nig, cgmy).
        #[arg(long)]
        model: String,
        #[arg(long, default_value = "call")]
        side: String,
        /// Strike relative to the swap rate.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Maturity in trading days.
        #[arg(long = "T")]
        t: f64,
        /// Sampling dates: `daily` or a positive integer.
        #[arg(long, default_value = "daily")]
        n: String,
        /// exact | qv | corrected | closed-bs | mc
        #[arg(long, default_value = "exact")]
        method: String,
        /// Contour overrides, e.g. `panel_tol=1e-8,damping=50`.
        #[arg(long)]
        contour: Option<String>,
        /// Monte Carlo paths (method mc).
        #[arg(long, default_value_t = 200_000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Underlying for method mc: rv | qv.
        #[arg(long, default_value = "rv")]
        underlying: String,
        /// Small-jump threshold; forces the truncation scheme for method mc.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 252.0)]
        year_days: f64,
        #[arg(long, default_value = "json")]
        out: String,
    },
    /// Price a range of maturities and print CSV rows.
    Sweep {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value = "call")]
        side: String,
        /// `1..50` or a list such as `1,5,10`.
        #[arg(long, default_value = "1..50")]
        days: String,
        /// `daily` or a fixed number of sampling dates.
        #[arg(long, default_value = "daily")]
        sampling: String,
        /// `all` or a subset of exact,qv,corrected,limits.
        #[arg(long, default_value = "all")]
        methods: String,
        /// `off` or a number of Monte Carlo paths per row.
        #[arg(long, default_value = "off")]
        mc: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        contour: Option<String>,
        #[arg(long, default_value_t = 252.0)]
        year_days: f64,
        #[arg(long, default_value = "csv")]
        out: String,
    },
    /// Small-time limits, Q/R values and discretization gaps as CSV.
    Limits {
        #[arg(long)]
        model: String,
        #[arg(long, default_value = "0.8,0.9,1,1.1,1.2")]
        k_grid: String,
        #[arg(long, default_value = "1,2,5,10,21,50")]
        n_grid: String,
        #[arg(long, default_value = "csv")]
        out: String,
    },
    /// Run property and cross-method checks; exit 1 on any failure.
    Validate {
        #[arg(long)]
        model: String,
        /// transforms | prices | limits | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200_000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn expect_format(out: &str, want: &str) -> CliResult<()> {
    if out.eq_ignore_ascii_case(want) {
        Ok(())
    } else {
        Err(CliError::Config(format!("--out {out:?} is not supported here; use {want}")))
    }
}

fn side(s: &str) -> CliResult<OptionSide> {
    OptionSide::parse(s).ok_or_else(|| CliError::Config(format!("--side must be put or call, got {s:?}")))
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

fn run(cli: Cli) -> CliResult<String> {
    config::init_threads()?;
    match cli.command {
        Command::Price {
            model,
            side: s,
            k,
            t,
            n,
            method,
            contour,
            paths,
            seed,
            underlying,
            epsilon,
            year_days,
            out,
        } => {
            expect_format(&out, "json")?;
            let model = load_model(&model)?;
            let side = side(&s)?;
            let days = positive("--T", t)?;
            let t = days / positive("--year-days", year_days)?;
            let n = sampling_dates(&n, days)?;
            let cs = contour_overrides(contour.as_deref())?;
            let result = match method.as_str() {
                "exact" => price_option_rv(&model, t, n, k, side, &cs)?,
                "qv" => price_option_qv(&model, t, k, side, &cs)?,
                "corrected" => corrected_price(&model, t, n, k, side, &cs)?,
                "closed-bs" => price_bs_closed_form(&model, t, n, k, side)?,
                "mc" => {
                    let underlying = match underlying.as_str() {
                        "rv" => Underlying::Rv,
                        "qv" => Underlying::Qv,
                        other => return Err(CliError::Config(format!("--underlying must be rv or qv, got {other:?}"))),
                    };
                    let mut plan = SimPlan::new(model, t, n, paths, seed);
                    if let Some(epsilon) = epsilon {
                        plan = plan.with_scheme(Scheme::SmallJumpTruncation { epsilon });
                    }
                    mc_price(&plan, k, side, underlying)?
                }
                other => return Err(CliError::Config(format!("unknown method {other:?}"))),
            };
            let unconverged = result
                .diagnostics
                .warnings
                .iter()
                .any(|w| w.starts_with("truncation:") || w.starts_with("slowly convergent"));
            if unconverged {
                return Err(CliError::Numerical(format!("inversion did not converge: {}", result.to_json())));
            }
            Ok(format!("{}\n", result.to_json()))
        }
        Command::Sweep { model, k, side: s, days, sampling, methods, mc, seed, contour, year_days, out } => {
            expect_format(&out, "csv")?;
            let model = load_model(&model)?;
            let mc_paths = match mc.as_str() {
                "off" => None,
                p => Some(
                    p.parse::<usize>()
                        .ok()
                        .filter(|&p| p >= 1)
                        .ok_or_else(|| CliError::Config(format!("--mc must be off or a path count, got {p:?}")))?,
                ),
            };
            let opts = sweep::SweepOptions {
                k: positive("--k", k)?,
                side: side(&s)?,
                days: day_list(&days)?,
                sampling,
                methods: sweep::MethodSet::parse(&methods)?,
                mc_paths,
                seed,
                year_days: positive("--year-days", year_days)?,
                contour: contour_overrides(contour.as_deref())?,
            };
            let rows = sweep::run(&model, &opts)?;
            Ok(sweep::to_csv(&rows))
        }
        Command::Limits { model, k_grid, n_grid, out } => {
            expect_format(&out, "csv")?;
            let model = load_model(&model)?;
            let ks: Vec<f64> = number_list(&k_grid, "--k-grid")?;
            let ns: Vec<usize> = number_list(&n_grid, "--n-grid")?;
            limits::table(&model, &ks, &ns)
        }
        Command::Validate { model, suite, paths, seed } => {
            let model = load_model(&model)?;
            let report = validate::run(&model, validate::Suite::parse(&suite)?, paths, seed)?;
            let line = format!("{report}\n");
            if report["passed"].as_bool() == Some(true) {
                Ok(line)
            } else {
                print!("{line}");
                Err(CliError::Failed("validation failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("varpricer: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
