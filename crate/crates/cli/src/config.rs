use std::fmt;
use std::path::Path;

use varpricer::models::presets;
use varpricer::{ContourSpec, ModelSpec};

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, model files or parameters.
    Config(String),
    /// A quadrature, series or inversion did not converge.
    Numerical(String),
    /// A validation check failed.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<varpricer::Error> for CliError {
    fn from(e: varpricer::Error) -> Self {
        match e {
            varpricer::Error::Convergence { .. } | varpricer::Error::Pole(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Model from inline JSON, a JSON file, or a preset name
/// (`bs`, `merton`, `kou`, `nig`, `cgmy`).
pub fn load_model(arg: &str) -> CliResult<ModelSpec> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return Ok(ModelSpec::from_json_str(trimmed)?);
    }
    let path = Path::new(trimmed);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("reading {trimmed}: {e}")))?;
        return Ok(ModelSpec::from_json_str(&text)?);
    }
    match trimmed.to_ascii_lowercase().as_str() {
        "bs" | "black_scholes" | "blackscholes" => Ok(presets::black_scholes()),
        "merton" => Ok(presets::merton()),
        "kou" => Ok(presets::kou(0.3)),
        "nig" => Ok(presets::nig()),
        "cgmy" => Ok(presets::cgmy()),
        _ => Err(CliError::Config(format!("{trimmed:?} is neither model JSON, a readable file nor a preset name"))),
    }
}

/// Applies `key=value` overrides (comma separated) to the default contour.
pub fn contour_overrides(arg: Option<&str>) -> CliResult<ContourSpec> {
    let mut spec = ContourSpec::default();
    let Some(arg) = arg else { return Ok(spec) };
    for item in arg.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("contour override {item:?} is not key=value")))?;
        let num = || value.parse::<f64>().map_err(|_| CliError::Config(format!("{key}: {value:?} is not a number")));
        let int =
            || value.parse::<usize>().map_err(|_| CliError::Config(format!("{key}: {value:?} is not an integer")));
        match key.trim() {
            "damping" => spec.damping = Some(num()?),
            "v_max" => spec.v_max = num()?,
            "panel_tol" => spec.panel_tol = num()?,
            "quad_tol" => spec.quad_tol = num()?,
            "max_panels" => spec.max_panels = int()?,
            "min_panels" => spec.min_panels = int()?,
            other => return Err(CliError::Config(format!("unknown contour key {other:?}"))),
        }
    }
    spec.validate()?;
    Ok(spec)
}

/// Number of sampling dates: `daily` (one per day) or an explicit count.
pub fn sampling_dates(arg: &str, days: f64) -> CliResult<usize> {
    if arg.eq_ignore_ascii_case("daily") {
        let n = days.round();
        if n < 1.0 {
            return Err(CliError::Config(format!("daily sampling needs at least one day, got T = {days}")));
        }
        return Ok(n as usize);
    }
    match arg.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(CliError::Config(format!("--n must be 'daily' or a positive integer, got {arg:?}"))),
    }
}

/// `a..b` (inclusive) or a comma-separated list of whole days.
pub fn day_list(arg: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Config(format!("--days must look like 1..50 or 1,5,10; got {arg:?}"));
    let days: Vec<u32> = if let Some((a, b)) = arg.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        arg.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?
    };
    if days.is_empty() || days.contains(&0) {
        return Err(CliError::Config("day range must be nonempty and start at 1 or later".into()));
    }
    Ok(days)
}

/// Comma-separated list of positive numbers.
pub fn number_list<T: std::str::FromStr>(arg: &str, flag: &str) -> CliResult<Vec<T>> {
    let v = arg
        .split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| CliError::Config(format!("{flag}: cannot parse {s:?}"))))
        .collect::<CliResult<Vec<T>>>()?;
    if v.is_empty() {
        return Err(CliError::Config(format!("{flag} is empty")));
    }
    Ok(v)
}

/// Caps the global rayon pool at `VARPRICER_THREADS` when set.
pub fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("VARPRICER_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Config(format!("VARPRICER_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}
