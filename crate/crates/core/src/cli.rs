//! The `entwit` command-line front end.
//!
//! Exit codes: 0 success, 2 bad arguments or malformed input, 3 state
//! validation failure, 4 selftest failure.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cren::{
    bound_from_reports, cren_lower_bound, cren_lower_bound_with, pure_sum_identity, ClipMode,
};
use crate::generators::{pairs, pauli_dot, ObservableTriad};
use crate::qstate::{min_pt_eigenvalue, negativity, pure_negativity, DensityMatrix, Dims};
use crate::states::{self, StateSpec};
use crate::witness::{
    detect_entanglement, estimate_nonlinear_shots, format_sig, nonlinear_normalized,
    optimize_settings, reports_from_csv, reports_to_csv, subspace_report, Detection,
    OptimizerConfig, WitnessKind, WitnessSettings,
};
use crate::{tolerance, Error, C64};

#[derive(Debug, Parser)]
#[command(
    name = "entwit",
    version,
    about = "Nonlinear entanglement witnesses and CREN lower bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the subspace witness sweep on one state.
    Detect(DetectArgs),
    /// Compute the CREN lower bound with per-subspace data.
    Bound(BoundArgs),
    /// Sweep one state parameter, optionally bisecting detection thresholds.
    Scan(ScanArgs),
    /// Run the built-in oracle checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// JSON file holding either a state spec ({"family": ...}) or a state
    /// document ({"dims": [m, n], "re": ..., "im": ...}).
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// isotropic | max_entangled | bennett_mix | rho_a_mix | random_pure |
    /// random_density | schmidt_pure
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Comma-separated Schmidt coefficients.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Also estimate the strongest witness from this many simulated shots
    /// per measured operator.
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Use X = min(0, d) instead of max(0, d).
    #[arg(long)]
    pub literal_min: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the per-subspace CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long = "scan-param")]
    pub scan_param: String,
    /// lo:hi
    #[arg(long, value_parser = parse_range)]
    pub range: (f64, f64),
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long)]
    pub bisect: bool,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long)]
    pub literal_min: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long)]
    pub literal_min: bool,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s}"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound {lo}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound {hi}"))?;
    Ok((lo, hi))
}

#[derive(Debug)]
pub enum CliError {
    BadArgs(String),
    InvalidState(Error),
    SelftestFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadArgs(_) => 2,
            CliError::InvalidState(_) => 3,
            CliError::SelftestFailed(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::BadArgs(msg) => write!(f, "error: {msg}"),
            CliError::InvalidState(e) => write!(f, "invalid state: {e}"),
            CliError::SelftestFailed(out) => write!(f, "{out}selftest failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Malformed(msg) => CliError::BadArgs(msg),
            other => CliError::InvalidState(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command prints.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: Cli) -> CliResult<CommandOutput> {
    match cli.command {
        Command::Detect(args) => cmd_detect(&args),
        Command::Bound(args) => cmd_bound(&args),
        Command::Scan(args) => cmd_scan(&args),
        Command::Selftest(args) => cmd_selftest(&args),
    }
}

fn write_file(path: &PathBuf, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::BadArgs(format!("{}: {e}", path.display())))
}

fn required<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::BadArgs(format!("family {family} requires --{flag}")))
}

/// Resolves the state flags into a spec.
pub fn spec_from_args(args: &StateArgs) -> CliResult<StateSpec> {
    if let Some(path) = &args.state {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::BadArgs(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::BadArgs(format!("{}: {e}", path.display())))?;
        if value.get("family").is_some() {
            return Ok(StateSpec::from_json(&text)?);
        }
        return Ok(StateSpec::JsonFile { path: path.clone() });
    }
    let family = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::BadArgs("either --state or --family is required".into()))?;
    let spec = match family {
        "isotropic" => StateSpec::Isotropic {
            d: required(args.d, "d", family)?,
            x: required(args.x, "x", family)?,
        },
        "max_entangled" => StateSpec::MaxEntangled {
            d: required(args.d, "d", family)?,
        },
        "bennett_mix" => StateSpec::BennettMix {
            p: required(args.p, "p", family)?,
        },
        "rho_a_mix" => StateSpec::RhoAMix {
            a: required(args.a, "a", family)?,
            p: args.p.unwrap_or(0.0),
        },
        "random_pure" => StateSpec::RandomPure {
            m: required(args.m.or(args.d), "m", family)?,
            n: required(args.n.or(args.d), "n", family)?,
            seed: args.seed,
        },
        "random_density" => {
            let m = required(args.m.or(args.d), "m", family)?;
            let n = required(args.n.or(args.d), "n", family)?;
            StateSpec::RandomDensity {
                m,
                n,
                rank: args.rank.unwrap_or(m * n),
                seed: args.seed,
            }
        }
        "schmidt_pure" => {
            let raw = args
                .mu
                .as_deref()
                .ok_or_else(|| CliError::BadArgs("family schmidt_pure requires --mu".into()))?;
            let mu = raw
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| CliError::BadArgs(format!("bad --mu list {raw}")))?;
            StateSpec::SchmidtPure {
                d: required(args.d, "d", family)?,
                mu,
            }
        }
        other => return Err(CliError::BadArgs(format!("unknown family {other}"))),
    };
    Ok(spec)
}

fn pair_json(r: &crate::witness::SubspaceReport) -> Value {
    json!({
        "alpha": [r.alpha.j(), r.alpha.k()],
        "beta": [r.beta.j(), r.beta.k()],
    })
}

pub fn cmd_detect(args: &DetectArgs) -> CliResult<CommandOutput> {
    let spec = spec_from_args(&args.state)?;
    let rho = spec.build()?;
    let det = detect_entanglement(&rho);
    let strongest = det.strongest().copied();
    let mut out = json!({
        "entangled": det.entangled,
        "best_subspace": strongest.as_ref().map(pair_json),
        "nonlinear_max": strongest.map_or(1.0, |r| r.nonlinear_max),
        "bell_max": det.strongest_bell().map_or(0.0, |r| r.bell_max),
        "bell_detects": det.bell_detects(),
        "negativity": negativity(&rho),
    });

    if let (Some(shots), Some(best)) = (args.shots, strongest) {
        let cfg = OptimizerConfig {
            restarts: args.restarts,
            seed: args.state.seed,
            ..OptimizerConfig::default()
        };
        let (settings, optimum) =
            optimize_settings(&rho, &best.alpha, &best.beta, WitnessKind::Nonlinear, &cfg)?;
        let est = estimate_nonlinear_shots(&rho, &settings, shots, args.state.seed)?;
        out["shots"] = json!({
            "shots_per_operator": shots,
            "optimized_value": optimum,
            "estimated_value": est.value,
            "weight": {"mean": est.weight.mean, "stderr": est.weight.stderr},
            "correlation": {"mean": est.correlation.mean, "stderr": est.correlation.stderr},
            "local": {"mean": est.local.mean, "stderr": est.local.stderr},
            "zz": {"mean": est.zz.mean, "stderr": est.zz.stderr},
        });
    }

    if let Some(path) = &args.csv {
        write_file(path, &reports_to_csv(&det.reports))?;
    }
    let text = serde_json::to_string_pretty(&out).expect("json value serializes") + "\n";
    if let Some(path) = &args.json {
        write_file(path, &text)?;
    }
    Ok(CommandOutput {
        stdout: text,
        stderr: String::new(),
    })
}

pub fn cmd_bound(args: &BoundArgs) -> CliResult<CommandOutput> {
    let spec = spec_from_args(&args.state)?;
    let rho = spec.build()?;
    let clip = if args.literal_min {
        ClipMode::LiteralMin
    } else {
        ClipMode::Max
    };
    let report = cren_lower_bound_with(&rho, clip);
    let mut out = serde_json::to_value(&report).expect("report serializes");
    if let Some(psi) = spec.pure() {
        let pn = pure_negativity(&psi?);
        out["pure_negativity"] = json!(pn);
        out["bound_minus_pure_negativity"] = json!(report.bound - pn);
    }
    if let Some(path) = &args.csv {
        write_file(path, &reports_to_csv(&report.reports))?;
    }
    let text = serde_json::to_string_pretty(&out).expect("json value serializes") + "\n";
    if let Some(path) = &args.json {
        write_file(path, &text)?;
    }
    Ok(CommandOutput {
        stdout: text,
        stderr: String::new(),
    })
}

/// A one-parameter sweep over a state family.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spec: StateSpec,
    pub param_name: String,
    pub range: (f64, f64),
    pub points: usize,
    pub bisect: bool,
    pub bisect_tol: f64,
    pub clip: ClipMode,
}

impl SweepConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let bad = |reason: &'static str| Error::Malformed(format!("sweep config: {reason}"));
        if !self.range.0.is_finite() || !self.range.1.is_finite() || self.range.0 >= self.range.1 {
            return Err(bad("range needs lo < hi"));
        }
        if self.points < 2 {
            return Err(bad("need at least 2 points"));
        }
        if self.bisect_tol.is_nan() || self.bisect_tol <= 0.0 {
            return Err(bad("bisection tolerance must be positive"));
        }
        self.spec.clone().set_param(&self.param_name, self.range.0)
    }

    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.range;
        let step = (hi - lo) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    hi
                } else {
                    lo + step * i as f64
                }
            })
            .collect()
    }

    fn state_at(&self, value: f64) -> crate::Result<DensityMatrix> {
        let mut spec = self.spec.clone();
        spec.set_param(&self.param_name, value)?;
        spec.build()
    }
}

/// One row of the sweep. `nonlinear_d = max nonlinear_max - 1`,
/// `bell_d = max bell_max - 2`; positive means the test fires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub param: f64,
    pub nonlinear_d: f64,
    pub bell_d: f64,
    pub bound: f64,
    pub negativity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Threshold {
    /// Smallest violating parameter, located inside `[lo, hi]`.
    Found { value: f64, lo: f64, hi: f64 },
    /// No grid point violates.
    #[serde(rename = "no threshold in range")]
    NoneInRange,
    /// Already violated at the start of the range.
    ViolatedAtStart,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub param: String,
    pub points: Vec<ScanPoint>,
    pub nonlinear_threshold: Option<Threshold>,
    pub bell_threshold: Option<Threshold>,
}

fn scan_point(cfg: &SweepConfig, value: f64) -> crate::Result<ScanPoint> {
    let rho = cfg.state_at(value)?;
    let det = detect_entanglement(&rho);
    Ok(ScanPoint {
        param: value,
        nonlinear_d: det.nonlinear_margin(),
        bell_d: det.bell_margin(),
        bound: bound_from_reports(&det.reports, rho.dims(), cfg.clip),
        negativity: negativity(&rho),
    })
}

fn thread_cap() -> Option<usize> {
    std::env::var("ENTWIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn bisect_threshold<F>(
    grid: &[f64],
    violated: &[bool],
    tol: f64,
    check: F,
) -> crate::Result<Threshold>
where
    F: Fn(f64) -> crate::Result<bool>,
{
    let Some(first) = violated.iter().position(|&v| v) else {
        return Ok(Threshold::NoneInRange);
    };
    if first == 0 {
        return Ok(Threshold::ViolatedAtStart);
    }
    let (mut lo, mut hi) = (grid[first - 1], grid[first]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if check(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold::Found {
        value: 0.5 * (lo + hi),
        lo,
        hi,
    })
}

/// Evaluates the sweep grid (in parallel, capped by `ENTWIT_THREADS`) and
/// optionally bisects both detection thresholds.
pub fn run_scan(cfg: &SweepConfig) -> crate::Result<ScanResult> {
    cfg.validate()?;
    let grid = cfg.grid();
    let eval = || -> crate::Result<Vec<ScanPoint>> {
        grid.par_iter().map(|&v| scan_point(cfg, v)).collect()
    };
    let points = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Malformed(format!("thread pool: {e}")))?
            .install(eval)?,
        None => eval()?,
    };

    let (nonlinear_threshold, bell_threshold) = if cfg.bisect {
        let nl: Vec<bool> = points
            .iter()
            .map(|p| p.nonlinear_d > tolerance::DETECT)
            .collect();
        let bell: Vec<bool> = points
            .iter()
            .map(|p| p.bell_d > tolerance::DETECT)
            .collect();
        let margins =
            |v: f64| -> crate::Result<Detection> { Ok(detect_entanglement(&cfg.state_at(v)?)) };
        let nt = bisect_threshold(&grid, &nl, cfg.bisect_tol, |v| {
            Ok(margins(v)?.nonlinear_margin() > tolerance::DETECT)
        })?;
        let bt = bisect_threshold(&grid, &bell, cfg.bisect_tol, |v| {
            Ok(margins(v)?.bell_margin() > tolerance::DETECT)
        })?;
        (Some(nt), Some(bt))
    } else {
        (None, None)
    };

    Ok(ScanResult {
        param: cfg.param_name.clone(),
        points,
        nonlinear_threshold,
        bell_threshold,
    })
}

pub const SCAN_CSV_HEADER: &str = "param,nonlinear_d,bell_d,bound,negativity";

/// Sweep CSV with 12 significant digits.
pub fn scan_to_csv(points: &[ScanPoint]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for p in points {
        let row = [p.param, p.nonlinear_d, p.bell_d, p.bound, p.negativity]
            .map(|v| format_sig(v, 12))
            .join(",");
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn cmd_scan(args: &ScanArgs) -> CliResult<CommandOutput> {
    let mut spec = spec_from_args_for_scan(args)?;
    spec.set_param(&args.scan_param, args.range.0)?;
    let cfg = SweepConfig {
        spec,
        param_name: args.scan_param.clone(),
        range: args.range,
        points: args.points,
        bisect: args.bisect,
        bisect_tol: args.tol,
        clip: if args.literal_min {
            ClipMode::LiteralMin
        } else {
            ClipMode::Max
        },
    };
    let result = run_scan(&cfg)?;
    let csv = scan_to_csv(&result.points);
    let summary = json!({
        "param": result.param,
        "points": result.points.len(),
        "nonlinear_threshold": result.nonlinear_threshold,
        "bell_threshold": result.bell_threshold,
    });
    let summary = serde_json::to_string_pretty(&summary).expect("json value serializes") + "\n";
    if let Some(path) = &args.json {
        write_file(path, &summary)?;
    }
    Ok(match &args.csv {
        Some(path) => {
            write_file(path, &csv)?;
            CommandOutput {
                stdout: summary,
                stderr: String::new(),
            }
        }
        None => CommandOutput {
            stdout: csv,
            stderr: summary,
        },
    })
}

/// The swept parameter may be omitted from the flags; it is filled with the
/// range start.
fn spec_from_args_for_scan(args: &ScanArgs) -> CliResult<StateSpec> {
    let mut state = args.state.clone();
    let lo = Some(args.range.0);
    match args.scan_param.as_str() {
        "x" => state.x = state.x.or(lo),
        "p" => state.p = state.p.or(lo),
        "a" => state.a = state.a.or(lo),
        other => return Err(CliError::BadArgs(format!("cannot sweep parameter {other}"))),
    }
    spec_from_args(&state)
}

/// Result line of one selftest check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Known, documented divergence; does not fail the run.
    Info,
}

fn check(name: &'static str, ok: bool, detail: String) -> CheckLine {
    CheckLine {
        name,
        status: if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail,
    }
}

/// Nonlinear witness of a 4x4 two-qubit state built from explicit Kronecker
/// products of `a_i·σ` and `b_i·σ`.
pub fn two_qubit_witness_explicit(
    rho_ab: &crate::CMatrix,
    ta: &ObservableTriad,
    tb: &ObservableTriad,
) -> f64 {
    let id = nalgebra::Matrix2::<C64>::identity();
    let mean = |op: nalgebra::Matrix4<C64>| -> f64 {
        let mut acc = C64::from(0.0);
        for r in 0..4 {
            for c in 0..4 {
                acc += rho_ab[(r, c)] * op[(c, r)];
            }
        }
        acc.re
    };
    let a: [_; 3] = std::array::from_fn(|i| pauli_dot(&ta.axis(i)));
    let b: [_; 3] = std::array::from_fn(|i| pauli_dot(&tb.axis(i)));
    let u = mean(a[0].kronecker(&b[0]) + a[1].kronecker(&b[1]));
    let v = mean(a[2].kronecker(&id) + id.kronecker(&b[2]));
    let w = mean(a[2].kronecker(&b[2]));
    (u * u + v * v).sqrt() - w
}

/// Runs the oracle suite. Deterministic for a given seed.
pub fn run_selftest(seed: u64, restarts: usize, literal_min: bool) -> Vec<CheckLine> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let dims3 = Dims::square(3).expect("3x3");

    // Full-space embedded witness vs the explicit two-qubit evaluation.
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rank = rng.random_range(1..=9);
        let rho = states::random_density(dims3, rank, rng.random()).expect("valid rank");
        let pa = pairs(3).expect("3");
        let alpha = pa[rng.random_range(0..pa.len())];
        let beta = pa[rng.random_range(0..pa.len())];
        let ta = ObservableTriad::from_angles(std::array::from_fn(|_| rng.random_range(-3.0..3.0)));
        let tb = ObservableTriad::from_angles(std::array::from_fn(|_| rng.random_range(-3.0..3.0)));
        let s = WitnessSettings::new(alpha, beta, ta, tb).expect("right-handed");
        let full = nonlinear_normalized(&rho, &s).expect("full-rank subspace");
        let proj = crate::witness::project_state(&rho, &alpha, &beta).expect("pairs match");
        let explicit =
            two_qubit_witness_explicit(proj.rho_ab.expect("nonempty").matrix(), &ta, &tb);
        worst = worst.max((full - explicit).abs());
    }
    lines.push(check(
        "reduction_identity",
        worst < 1e-9,
        format!("max |embedded - two-qubit| = {worst:.2e} over 100 instances"),
    ));

    let mut worst = 0.0f64;
    let mut worst_bound = 0.0f64;
    for i in 0..50 {
        let d = if i % 2 == 0 { 3 } else { 4 };
        let mu = states::random_schmidt_spectrum(d, rng.random());
        let psi = states::pure_from_schmidt(&mu, d).expect("valid spectrum");
        let (lhs, rhs) = pure_sum_identity(&psi).expect("schmidt form");
        worst = worst.max((lhs - rhs).abs());
        let bound = cren_lower_bound(&DensityMatrix::from_pure(&psi)).bound;
        worst_bound = worst_bound.max((bound - pure_negativity(&psi)).abs());
    }
    lines.push(check(
        "pure_trace_norm_identity",
        worst < 1e-9,
        format!("max |lhs - rhs| = {worst:.2e} over 50 spectra"),
    ));
    lines.push(check(
        "pure_state_exactness",
        worst_bound < 1e-8,
        format!("max |bound - negativity| = {worst_bound:.2e} over 50 spectra"),
    ));

    let cfg = OptimizerConfig {
        restarts,
        seed,
        ..OptimizerConfig::default()
    };
    let mut worst_nl = 0.0f64;
    let mut worst_bell = 0.0f64;
    for _ in 0..4 {
        let rho = states::random_density(dims3, 9, rng.random()).expect("valid rank");
        for r in crate::witness::subspace_reports(&rho).iter().take(3) {
            let (_, nl) = optimize_settings(&rho, &r.alpha, &r.beta, WitnessKind::Nonlinear, &cfg)
                .expect("nonempty");
            let (_, bell) = optimize_settings(&rho, &r.alpha, &r.beta, WitnessKind::Bell, &cfg)
                .expect("nonempty");
            worst_nl = worst_nl.max((nl - r.nonlinear_max).abs());
            worst_bell = worst_bell.max((bell - r.bell_max).abs());
        }
    }
    lines.push(check(
        "closed_form_vs_optimizer",
        worst_nl < 1e-4 && worst_bell < 1e-4,
        format!("nonlinear {worst_nl:.2e}, bell {worst_bell:.2e}"),
    ));

    let singlet = DensityMatrix::from_pure(&states::singlet());
    let r =
        subspace_report(&singlet, &pairs(2).expect("2")[0], &pairs(2).expect("2")[0]).expect("2x2");
    lines.push(check(
        "singlet_maxima",
        (r.nonlinear_max - 3.0).abs() < 1e-12 && (r.bell_max - 2.0 * 2f64.sqrt()).abs() < 1e-12,
        format!("nonlinear {:.12}, bell {:.12}", r.nonlinear_max, r.bell_max),
    ));

    let pplus = DensityMatrix::from_pure(&states::max_entangled(3).expect("3"));
    if literal_min {
        let b = cren_lower_bound_with(&pplus, ClipMode::LiteralMin).bound;
        lines.push(CheckLine {
            name: "max_entangled_bound",
            status: CheckStatus::Info,
            detail: format!(
                "literal min{{0,d}} gives {} != exact CREN 1 (expected divergence)",
                format_sig(b, 12)
            ),
        });
    } else {
        let b = cren_lower_bound(&pplus).bound;
        lines.push(check(
            "max_entangled_bound",
            (b - 1.0).abs() < 1e-9,
            format!("bound {} (exact CREN 1)", format_sig(b, 12)),
        ));
    }

    let mut worst = 0.0f64;
    for x in [0.3, 0.5, 0.75, 1.0] {
        let b = cren_lower_bound(&states::isotropic(3, x).expect("in range")).bound;
        worst = worst.max((b - (4.0 * x - 1.0) / 3.0).abs());
    }
    lines.push(check(
        "isotropic_bound_formula",
        worst < 1e-8,
        format!("max |bound - (4x-1)/3| = {worst:.2e}"),
    ));

    let boundary = min_pt_eigenvalue(&states::isotropic(3, 0.25).expect("in range"));
    lines.push(check(
        "isotropic_ppt_boundary",
        boundary.abs() < 1e-10,
        format!("lambda_min at x = 1/4: {boundary:.2e}"),
    ));

    lines
}

pub fn cmd_selftest(args: &SelftestArgs) -> CliResult<CommandOutput> {
    let lines = run_selftest(args.seed, args.restarts, args.literal_min);
    let mut out = String::new();
    for l in &lines {
        let tag = match l.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Info => "INFO",
        };
        let _ = writeln!(out, "{tag} {}: {}", l.name, l.detail);
    }
    if lines.iter().any(|l| l.status == CheckStatus::Fail) {
        return Err(CliError::SelftestFailed(out));
    }
    Ok(CommandOutput {
        stdout: out,
        stderr: String::new(),
    })
}

/// Rebuilds the bound from a per-subspace CSV written by `bound --csv`.
pub fn bound_from_csv(text: &str, dims: Dims, clip: ClipMode) -> crate::Result<f64> {
    Ok(bound_from_reports(
        &reports_from_csv(text, dims)?,
        dims,
        clip,
    ))
}
