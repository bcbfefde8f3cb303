//! Command-line front end.
//!
//! Every subcommand writes one artifact, to `--out` or stdout, and a JSON
//! manifest echoing the resolved configuration next to it. Exit codes: `2`
//! for configuration errors, `3` for numerical failures.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cmv::VerblunskySeq;
use crate::coin::{canonical_coin, parse_coin_json, realize_a, realize_b, QuantumCoin, WalkKind};
use crate::error::Error;
use crate::limits::{
    localizes_i, localizes_ii, mass_m, nu_i, nu_ii, theorem1_mass, theorem3_mass, LimitParamsI, LimitParamsII,
    Parity,
};
use crate::opuc::{opuc_basis, BasisKind};
use crate::spectral::{measure, MeasureConfig, SpectralMeasure, WeightMethod};
use crate::walk::{
    correspondence_residual, diagonal_profile, distribution, initial_state, time_avg_return, CoinState, Convention,
    EdgeRule, Fold, Placement, SeqPattern, Walk,
};

type C = Complex64;

/// Convention reported when no other one has been selected by a fit.
pub const FROZEN_CONVENTION: Convention = Convention {
    phase: crate::coin::PhaseVariant::Direct,
    placement: Placement::LambdaLeft,
    fold: Fold::Symmetric,
    pattern: SeqPattern::Constant,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numeric(#[from] Error),
    #[error("check failed: {0}")]
    Check(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Check(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "cgmv", version, about = "CMV matrices, spectral measures and quarter-plane quantum walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evolve a walk and write the position distribution as `t,x,y,P`.
    Simulate(SimulateArgs),
    /// Spectral measure of a Verblunsky sequence.
    Spectrum(SpectrumArgs),
    /// Closed-form limit masses on `[0, K]²`.
    LimitMeasure(LimitArgs),
    /// Localization predicates over a raster of the unit disk.
    Localization(LocalizationArgs),
    /// Walk versus CMV residual table.
    Verify(VerifyArgs),
    /// Simulation, spectrum and closed forms on one parameter.
    Compare(CompareArgs),
    /// Execute a `key=value` config file.
    Run(RunArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TypeArg {
    #[value(name = "I", alias = "i", alias = "1")]
    I,
    #[value(name = "II", alias = "ii", alias = "2")]
    II,
}

impl TypeArg {
    fn kind(self) -> WalkKind {
        match self {
            TypeArg::I => WalkKind::TypeI,
            TypeArg::II => WalkKind::TypeII,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeArg {
    Reflecting,
    Staggered,
    Sticky,
}

impl From<EdgeArg> for EdgeRule {
    fn from(e: EdgeArg) -> Self {
        match e {
            EdgeArg::Reflecting => EdgeRule::Reflecting,
            EdgeArg::Staggered => EdgeRule::Staggered,
            EdgeArg::Sticky => EdgeRule::Sticky,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Boundary,
    Radial,
}

#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct OutputArgs {
    /// Artifact path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct CoinArgs {
    /// Coin JSON file.
    #[arg(long)]
    pub coin: Option<PathBuf>,
    /// Canonical coin `C(α)`, as `RE,IM`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<C>,
    /// Coin realizing a Type I parameter `a`, as `RE,IM`.
    #[arg(long = "a", value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<C>,
    /// Coin and origin phases realizing a Type II parameter `b`, as `RE,IM`.
    #[arg(long = "b", value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Option<C>,
    /// Type II origin phases `γ1,γ2`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub gamma: Option<[f64; 2]>,
    /// Wall rule; `reflecting` for Type I and `staggered` for Type II by default.
    #[arg(long, value_enum)]
    pub edge: Option<EdgeArg>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SimulateArgs {
    #[arg(long = "type", value_enum)]
    pub walk_type: TypeArg,
    #[command(flatten)]
    pub coin: CoinArgs,
    #[arg(long)]
    pub steps: usize,
    /// Type I: `α,β,μ,ζ` as 4 reals or 8 `re,im` values. Type II: `δ1,δ2`.
    #[arg(long, allow_hyphen_values = true)]
    pub coin_state: Option<String>,
    /// Write rows for every step instead of the last one.
    #[arg(long)]
    pub every: bool,
    /// Rows with `P` at or below this are dropped.
    #[arg(long, default_value_t = 0.0)]
    pub min_prob: f64,
    /// Also write whitespace-separated `x y P` blocks for gnuplot.
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpectrumArgs {
    /// `zero`, `null-odd:RE,IM`, `null-even:RE,IM`, `const:RE,IM` or
    /// `explicit:RE,IM;RE,IM;…`.
    #[arg(long, allow_hyphen_values = true)]
    pub seq: String,
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Boundary)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Atoms below this mass are dropped.
    #[arg(long, default_value_t = 1e-6)]
    pub atom_threshold: f64,
    /// Write the first N basis polynomials as CSV instead of the measure.
    #[arg(long)]
    pub dump_polys: Option<usize>,
    /// Also write whitespace-separated `θ w` columns for gnuplot.
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LimitArgs {
    #[arg(long = "type", value_enum)]
    pub walk_type: TypeArg,
    #[arg(long = "a", value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<C>,
    #[arg(long = "b", value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Option<C>,
    #[arg(long, allow_hyphen_values = true)]
    pub coin_state: Option<String>,
    /// Type I phase `θ`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 4)]
    pub range: usize,
    /// Also write whitespace-separated `x y mass` blocks for gnuplot.
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LocalizationArgs {
    #[arg(long = "type", value_enum)]
    pub walk_type: TypeArg,
    /// Points per side of the raster over `[-1, 1]²`.
    #[arg(long, default_value_t = 41)]
    pub raster: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub coin_state: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Fold the walk onto the diagonal sector and compare with the CMV matrix.
    #[arg(long)]
    pub correspondence: bool,
    #[arg(long = "type", value_enum, default_value_t = TypeArg::I)]
    pub walk_type: TypeArg,
    #[command(flatten)]
    pub coin: CoinArgs,
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CompareArgs {
    #[arg(long = "type", value_enum)]
    pub walk_type: TypeArg,
    #[arg(long = "a", value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<C>,
    #[arg(long = "b", value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Option<C>,
    #[arg(long, allow_hyphen_values = true)]
    pub coin_state: Option<String>,
    #[arg(long, value_enum)]
    pub edge: Option<EdgeArg>,
    #[arg(long, default_value_t = 256)]
    pub steps: usize,
    /// Tail-averaged return above this counts as localized.
    #[arg(long, default_value_t = 0.05)]
    pub return_threshold: f64,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RunArgs {
    pub config: PathBuf,
}

/// Parsed `key=value` config file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
}

const RUNNABLE: [&str; 6] = ["simulate", "spectrum", "limit-measure", "localization", "verify", "compare"];

impl RunConfig {
    /// Blank lines and `#` comments are skipped. Repeated keys are an error.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if map.insert(k.clone(), v).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        let command = map.remove("command").ok_or_else(|| CliError::Config("missing key `command`".into()))?;
        if !RUNNABLE.contains(&command.as_str()) {
            return Err(CliError::Config(format!("unknown command `{command}`")));
        }
        let seed = match map.remove("seed") {
            Some(s) => s.parse().map_err(|_| CliError::Config(format!("seed `{s}` is not an integer")))?,
            None => 0,
        };
        let output = map.remove("output").map(PathBuf::from);
        let format = map.remove("format");
        if let Some(f) = &format {
            if f != "json" && f != "csv" {
                return Err(CliError::Config(format!("format `{f}` is not json or csv")));
            }
        }
        Ok(Self { command, parameters: map, seed, output, format })
    }

    /// Equivalent command line. Keys that no flag of the command accepts are
    /// rejected when it is parsed.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec!["cgmv".to_string(), self.command.clone()];
        for (k, v) in &self.parameters {
            match v.as_str() {
                "true" => args.push(format!("--{k}")),
                "false" => {}
                _ => {
                    args.push(format!("--{k}"));
                    args.push(v.clone());
                }
            }
        }
        if let Some(o) = &self.output {
            args.push("--out".into());
            args.push(o.display().to_string());
        }
        if let Some(f) = &self.format {
            args.push("--format".into());
            args.push(f.clone());
        }
        args
    }
}

/// What a subcommand produced, before it is written out.
struct Outcome {
    body: String,
    format: FormatArg,
    columns: Vec<String>,
    conventions: Value,
    plot: Option<(PathBuf, String)>,
    /// Printed to stderr after the artifact is written.
    notes: Vec<String>,
    /// Reported after the artifacts are written.
    failure: Option<CliError>,
}

impl Outcome {
    fn new(body: String, format: FormatArg, columns: &[&str]) -> Self {
        Self {
            body,
            format,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            conventions: json!({}),
            plot: None,
            notes: Vec::new(),
            failure: None,
        }
    }
}

/// Parses arguments and executes the command. Returns the process exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command, None) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Reads `CGMV_THREADS` to size the worker pool, then runs [`main_from`] on
/// the process arguments.
pub fn main_from_env() -> i32 {
    if let Ok(n) = std::env::var("CGMV_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: config error: CGMV_THREADS=`{n}` is not a positive integer");
                return 2;
            }
        }
    }
    main_from(std::env::args_os())
}

pub fn execute(command: &Command, run: Option<&RunConfig>) -> CliResult<()> {
    let (outcome, output) = match command {
        Command::Simulate(a) => (simulate(a)?, &a.output),
        Command::Spectrum(a) => (spectrum(a)?, &a.output),
        Command::LimitMeasure(a) => (limit_measure(a)?, &a.output),
        Command::Localization(a) => (localization(a)?, &a.output),
        Command::Verify(a) => (verify(a)?, &a.output),
        Command::Compare(a) => (compare(a)?, &a.output),
        Command::Run(a) => return run_file(&a.config),
    };
    write_outcome(command, run, output, outcome)
}

pub fn run_file(path: &Path) -> CliResult<()> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let config = RunConfig::parse(&text)?;
    let cli = Cli::try_parse_from(config.to_args()).map_err(|e| CliError::Config(first_line(&e.to_string())))?;
    execute(&cli.command, Some(&config))
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string()
}

fn write_outcome(command: &Command, run: Option<&RunConfig>, output: &OutputArgs, o: Outcome) -> CliResult<()> {
    match &output.out {
        Some(p) => fs::write(p, &o.body)?,
        None => print!("{}", o.body),
    }
    let mut artifacts = Vec::new();
    if let Some(p) = &output.out {
        artifacts.push(p.display().to_string());
    }
    if let Some((p, text)) = &o.plot {
        fs::write(p, text)?;
        artifacts.push(p.display().to_string());
    }
    let manifest_path = output.manifest.clone().or_else(|| output.out.as_ref().map(|p| sibling(p, "manifest.json")));
    if let Some(mp) = manifest_path {
        let m = manifest(command, run, &o, &artifacts);
        fs::write(mp, to_json_pretty(&m))?;
    }
    for n in &o.notes {
        eprintln!("{n}");
    }
    match o.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn sibling(p: &Path, ext: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn to_json_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

/// Conventions shared by every command.
pub fn base_conventions() -> Value {
    json!({
        "cmv": "alpha_{-1} = -1, rho_{-1} = 0; row 2k carries rho_{2k-1} conj(alpha_{2k}) at column 2k-1",
        "coin_json": "row-major [re, im] pairs, directions R, L, U, D",
        "schur_period2_root": "minimum-modulus fixed point",
        "correspondence": FROZEN_CONVENTION.label(),
        "float_format": "shortest round-trip decimal",
    })
}

pub fn tolerances() -> Value {
    json!({
        "unitarity": 1e-12,
        "paper_class": 1e-10,
        "quadrature": 1e-11,
        "radial_limit": 1e-10,
        "atom_threshold": 1e-6,
        "predicate_zero": 1e-12,
        "correspondence_fit": 1e-6,
    })
}

/// Manifest JSON. Only the `timestamp` field varies between identical runs.
fn manifest(command: &Command, run: Option<&RunConfig>, o: &Outcome, artifacts: &[String]) -> Value {
    let mut conventions = base_conventions();
    if let (Value::Object(base), Value::Object(extra)) = (&mut conventions, &o.conventions) {
        for (k, v) in extra {
            base.insert(k.clone(), v.clone());
        }
    }
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": command,
        "run_config": run,
        "format": o.format,
        "columns": o.columns,
        "artifacts": artifacts,
        "conventions": conventions,
        "tolerances": tolerances(),
        "timestamp": timestamp,
    })
}

/// Drops the `timestamp` field so that two manifests can be compared.
pub fn strip_timestamp(manifest: &str) -> CliResult<String> {
    let mut v: Value = serde_json::from_str(manifest).map_err(|e| CliError::Config(format!("manifest: {e}")))?;
    if let Value::Object(m) = &mut v {
        m.remove("timestamp");
    }
    Ok(to_json_pretty(&v))
}

pub fn parse_complex(s: &str) -> std::result::Result<C, String> {
    let v = parse_reals(s)?;
    match v[..] {
        [re] => Ok(C::new(re, 0.0)),
        [re, im] => Ok(C::new(re, im)),
        _ => Err(format!("`{s}` is not RE or RE,IM")),
    }
}

pub fn parse_pair(s: &str) -> std::result::Result<[f64; 2], String> {
    match parse_reals(s)?[..] {
        [x, y] => Ok([x, y]),
        _ => Err(format!("`{s}` is not a pair X,Y")),
    }
}

fn parse_reals(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

/// Parses `zero`, `null-odd:RE,IM`, `null-even:RE,IM`, `const:RE,IM` and
/// `explicit:RE,IM;RE,IM;…`.
pub fn parse_seq(s: &str) -> CliResult<VerblunskySeq> {
    let bad = |m: String| CliError::Config(format!("--seq `{s}`: {m}"));
    if s == "zero" {
        return Ok(VerblunskySeq::zero());
    }
    let (tag, rest) = s.split_once(':').ok_or_else(|| bad("expected TAG:VALUE".into()))?;
    let seq = match tag {
        "null-odd" => VerblunskySeq::NullOdd(parse_complex(rest).map_err(bad)?),
        "null-even" => VerblunskySeq::NullEven(parse_complex(rest).map_err(bad)?),
        "const" => VerblunskySeq::Constant(parse_complex(rest).map_err(bad)?),
        "explicit" => VerblunskySeq::Explicit(rest.split(';').map(parse_complex).collect::<Result<_, _>>().map_err(bad)?),
        _ => return Err(bad(format!("unknown tag `{tag}`"))),
    };
    seq.validate()?;
    Ok(seq)
}

/// Inverse of [`parse_seq`] for the closed rules.
pub fn seq_label(seq: &VerblunskySeq) -> String {
    let c = |z: &C| format!("{:?},{:?}", z.re, z.im);
    match seq {
        VerblunskySeq::NullOdd(a) => format!("null-odd:{}", c(a)),
        VerblunskySeq::NullEven(b) => format!("null-even:{}", c(b)),
        VerblunskySeq::Constant(a) => format!("const:{}", c(a)),
        VerblunskySeq::Explicit(v) => format!("explicit:{}", v.iter().map(c).collect::<Vec<_>>().join(";")),
    }
}

pub fn parse_coin_state(kind: WalkKind, s: Option<&str>) -> CliResult<CoinState> {
    let bad = |m: &str| CliError::Config(format!("--coin-state: {m}"));
    let v = match s {
        Some(s) => parse_reals(s).map_err(|e| bad(&e))?,
        None => {
            return Ok(match kind {
                WalkKind::TypeI => CoinState::TypeI([C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]),
                WalkKind::TypeII => CoinState::TypeII([0.0, 0.0]),
            })
        }
    };
    match (kind, v.len()) {
        (WalkKind::TypeI, 4) => Ok(CoinState::TypeI([0, 1, 2, 3].map(|i| C::new(v[i], 0.0)))),
        (WalkKind::TypeI, 8) => Ok(CoinState::TypeI([0, 1, 2, 3].map(|i| C::new(v[2 * i], v[2 * i + 1])))),
        (WalkKind::TypeII, 2) => Ok(CoinState::TypeII([v[0], v[1]])),
        (WalkKind::TypeI, _) => Err(bad("Type I takes 4 reals or 8 re,im values")),
        (WalkKind::TypeII, _) => Err(bad("Type II takes two phases")),
    }
}

fn type_i_state(cs: &CoinState) -> [C; 4] {
    match cs {
        CoinState::TypeI(v) => *v,
        CoinState::TypeII(_) => unreachable!("parsed for Type I"),
    }
}

/// Builds the walk selected by exactly one of `--coin`, `--alpha`, `--a`, `--b`.
pub fn resolve_walk(kind: WalkKind, c: &CoinArgs) -> CliResult<Walk> {
    let given = [c.coin.is_some(), c.alpha.is_some(), c.a.is_some(), c.b.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(CliError::Config("give exactly one of --coin, --alpha, --a, --b".into()));
    }
    let (coin, gamma): (QuantumCoin, [f64; 2]) = if let Some(p) = &c.coin {
        let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
        let coin = parse_coin_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
        (coin, [0.0, 0.0])
    } else if let Some(alpha) = c.alpha {
        (canonical_coin(alpha)?, [0.0, 0.0])
    } else if let Some(a) = c.a {
        (realize_a(a)?, [0.0, 0.0])
    } else {
        realize_b(c.b.expect("one source is set"))?
    };
    let gamma = c.gamma.unwrap_or(gamma);
    let edge = c.edge.map(EdgeRule::from).unwrap_or(EdgeRule::default_for(kind));
    if kind == WalkKind::TypeI && edge == EdgeRule::Staggered {
        return Err(CliError::Config("the staggered wall rule needs a Type II walk".into()));
    }
    Ok(Walk::new(kind, coin, gamma).with_edge(edge))
}

fn edge_label(e: EdgeRule) -> &'static str {
    match e {
        EdgeRule::Reflecting => "reflecting",
        EdgeRule::Staggered => "staggered",
        EdgeRule::Sticky => "sticky",
    }
}

fn walk_conventions(walk: &Walk) -> Value {
    json!({
        "edge_rule": edge_label(walk.edge),
        "gamma": walk.gamma,
        "type_ii_origin": "L -> e^{i gamma1}(1,0,R), D -> e^{i gamma2}(0,1,U), no coin",
    })
}

fn simulate(a: &SimulateArgs) -> CliResult<Outcome> {
    let kind = a.walk_type.kind();
    let walk = resolve_walk(kind, &a.coin)?;
    let cs = parse_coin_state(kind, a.coin_state.as_deref())?;
    let mut s = initial_state(kind, &cs, a.steps + 4)?;
    let mut body = String::from("t,x,y,P\n");
    let emit = |t: usize, s: &crate::walk::WalkState, body: &mut String| {
        for ((x, y), p) in distribution(s).iter() {
            if p > a.min_prob {
                let _ = writeln!(body, "{t},{x},{y},{p:?}");
            }
        }
    };
    if a.every {
        emit(0, &s, &mut body);
    }
    for t in 1..=a.steps {
        s = walk.step(&s)?;
        if a.every {
            emit(t, &s, &mut body);
        }
    }
    if !a.every {
        emit(a.steps, &s, &mut body);
    }
    let mut o = Outcome::new(body, FormatArg::Csv, &["t", "x", "y", "P"]);
    o.conventions = walk_conventions(&walk);
    if let Some(p) = &a.emit_plot_data {
        let d = distribution(&s);
        let mut text = String::from("# x y P\n");
        for x in 0..=a.steps {
            for y in 0..=a.steps - x {
                let _ = writeln!(text, "{x} {y} {:?}", d.get(x, y));
            }
            text.push('\n');
        }
        o.plot = Some((p.clone(), text));
    }
    Ok(o)
}

/// Spectral measure JSON: `{"weight": [[θ, w]…], "atoms": [[θ0, m0]…], "total": x}`.
pub fn measure_json(mu: &SpectralMeasure) -> Value {
    json!({
        "weight": mu.weight.iter().map(|&(t, w)| [t, w]).collect::<Vec<_>>(),
        "atoms": mu.atoms.iter().map(|a| [a.theta, a.mass]).collect::<Vec<_>>(),
        "total": mu.total,
    })
}

/// Checks the measure JSON layout.
pub fn validate_measure_json(v: &Value) -> std::result::Result<(), String> {
    let obj = v.as_object().ok_or("top level is not an object")?;
    let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    if keys != ["atoms", "total", "weight"] {
        return Err(format!("keys {keys:?}"));
    }
    for key in ["weight", "atoms"] {
        let arr = obj[key].as_array().ok_or(format!("`{key}` is not an array"))?;
        for p in arr {
            match p.as_array().map(|a| a.as_slice()) {
                Some([x, y]) if x.is_f64() && y.is_f64() => {}
                _ => return Err(format!("`{key}` entry {p} is not a number pair")),
            }
        }
    }
    obj["total"].as_f64().ok_or("`total` is not a number")?;
    Ok(())
}

/// Checks a CSV artifact's header and row widths.
pub fn validate_csv(text: &str, columns: &[&str]) -> std::result::Result<usize, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty CSV")?;
    if header.split(',').collect::<Vec<_>>() != columns {
        return Err(format!("header `{header}`"));
    }
    let mut rows = 0;
    for (i, l) in lines.enumerate() {
        if l.split(',').count() != columns.len() {
            return Err(format!("row {} has the wrong width", i + 2));
        }
        rows += 1;
    }
    Ok(rows)
}

fn spectrum(a: &SpectrumArgs) -> CliResult<Outcome> {
    let seq = parse_seq(&a.seq)?;
    if let Some(n) = a.dump_polys {
        let mut body = String::from("kind,j,exp,re,im\n");
        for (kind, label) in [(BasisKind::FirstKind, "first"), (BasisKind::SecondKind, "second")] {
            let basis = opuc_basis(&seq, n, kind)?;
            for (j, p) in basis.polys().iter().enumerate() {
                for (e, c) in p.terms() {
                    let _ = writeln!(body, "{label},{j},{e},{:?},{:?}", c.re, c.im);
                }
            }
        }
        return Ok(Outcome::new(body, FormatArg::Csv, &["kind", "j", "exp", "re", "im"]));
    }
    if a.grid < 8 {
        return Err(CliError::Config(format!("--grid {} is below 8", a.grid)));
    }
    let cfg = MeasureConfig {
        grid: a.grid,
        atom_threshold: a.atom_threshold,
        method: match a.method {
            MethodArg::Boundary => WeightMethod::Boundary,
            MethodArg::Radial => WeightMethod::Radial,
        },
        ..MeasureConfig::default()
    };
    let mu = measure(&seq, &cfg)?;
    let (body, columns) = match a.format {
        FormatArg::Json => (to_json_pretty(&measure_json(&mu)), vec!["weight", "atoms", "total"]),
        FormatArg::Csv => {
            let mut s = String::from("kind,theta,value\n");
            for &(t, w) in &mu.weight {
                let _ = writeln!(s, "weight,{t:?},{w:?}");
            }
            for at in &mu.atoms {
                let _ = writeln!(s, "atom,{:?},{:?}", at.theta, at.mass);
            }
            let _ = writeln!(s, "total,,{:?}", mu.total);
            (s, vec!["kind", "theta", "value"])
        }
    };
    let mut o = Outcome::new(body, a.format, &columns);
    o.conventions = json!({
        "weight_method": format!("{:?}", a.method).to_lowercase(),
        "sequence": seq_label(&seq),
    });
    if mu.unconverged > 0 {
        o.notes.push(format!("warning: {} radial limits missed the tolerance", mu.unconverged));
    }
    if let Some(p) = &a.emit_plot_data {
        let mut text = String::from("# theta w\n");
        for &(t, w) in &mu.weight {
            let _ = writeln!(text, "{t:?} {w:?}");
        }
        o.plot = Some((p.clone(), text));
    }
    Ok(o)
}

fn limit_measure(a: &LimitArgs) -> CliResult<Outcome> {
    let kind = a.walk_type.kind();
    let k = a.range;
    let mut rows: Vec<(usize, usize, Option<Parity>, f64)> = Vec::new();
    let columns: &[&str] = match kind {
        WalkKind::TypeI => {
            let av = a.a.ok_or_else(|| CliError::Config("Type I needs --a".into()))?;
            let cs = type_i_state(&parse_coin_state(kind, a.coin_state.as_deref())?);
            let p = LimitParamsI::new(av, a.theta, cs)?;
            for x in 0..=k {
                for y in 0..=k {
                    rows.push((x, y, None, theorem1_mass(&p, x, y)?));
                }
            }
            &["x", "y", "mass"]
        }
        WalkKind::TypeII => {
            let bv = a.b.ok_or_else(|| CliError::Config("Type II needs --b".into()))?;
            let p = LimitParamsII::new(bv)?;
            for parity in [Parity::Even, Parity::Odd] {
                for x in 0..=k {
                    for y in 0..=k {
                        rows.push((x, y, Some(parity), theorem3_mass(&p, x, y, parity)?));
                    }
                }
            }
            &["x", "y", "parity", "mass"]
        }
    };
    let mut body = columns.join(",") + "\n";
    for &(x, y, parity, m) in &rows {
        match parity {
            None => writeln!(body, "{x},{y},{m:?}"),
            Some(p) => writeln!(body, "{x},{y},{},{m:?}", if p == Parity::Even { "even" } else { "odd" }),
        }
        .expect("writing to a String");
    }
    let mut o = Outcome::new(body, FormatArg::Csv, columns);
    o.conventions = json!({
        "mass_m": "(1 + sgn(|b|^2 + Re b)) (|b|^2 + Re b) / |1 + b|^2",
        "type_ii_off_origin": "applied at every site other than the origin",
    });
    if let Some(p) = &a.emit_plot_data {
        let mut text = String::from("# x y mass\n");
        for x in 0..=k {
            for &(_, y, _, m) in rows.iter().filter(|r| r.0 == x && r.2 != Some(Parity::Odd)) {
                let _ = writeln!(text, "{x} {y} {m:?}");
            }
            text.push('\n');
        }
        o.plot = Some((p.clone(), text));
    }
    Ok(o)
}

/// Cell centres of an `n × n` raster over `[-1, 1]²` that lie in the open disk.
pub fn disk_raster(n: usize) -> Vec<C> {
    let h = 2.0 / n as f64;
    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = C::new(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h);
            if z.norm() < 1.0 {
                v.push(z);
            }
        }
    }
    v
}

fn localization(a: &LocalizationArgs) -> CliResult<Outcome> {
    if a.raster == 0 {
        return Err(CliError::Config("--raster must be positive".into()));
    }
    let kind = a.walk_type.kind();
    let pts = disk_raster(a.raster);
    let mut notes = Vec::new();
    let (body, columns): (String, &[&str]) = match kind {
        WalkKind::TypeI => {
            let cs = type_i_state(&parse_coin_state(kind, a.coin_state.as_deref())?);
            let mut s = String::from("x,y,localizes\n");
            for z in &pts {
                let l = localizes_i(cs, *z, a.theta)?;
                let _ = writeln!(s, "{:?},{:?},{l}", z.re, z.im);
            }
            (s, &["x", "y", "localizes"])
        }
        WalkKind::TypeII => {
            let mut s = String::from("x,y,paper_region,mass_criterion\n");
            let mut disagree = 0;
            for z in &pts {
                let l = localizes_ii(*z)?;
                let _ = writeln!(s, "{:?},{:?},{},{}", z.re, z.im, l.paper_region, l.mass_criterion);
                if !l.agree() {
                    disagree += 1;
                    notes.push(format!("disagree {:?} {:?} paper_region={} mass_criterion={}", z.re, z.im, l.paper_region, l.mass_criterion));
                }
            }
            notes.push(format!("{disagree} of {} raster points disagree", pts.len()));
            (s, &["x", "y", "paper_region", "mass_criterion"])
        }
    };
    let mut o = Outcome::new(body, FormatArg::Csv, columns);
    o.notes = notes;
    Ok(o)
}

fn verify(a: &VerifyArgs) -> CliResult<Outcome> {
    if !a.correspondence {
        return Err(CliError::Config("nothing to verify; pass --correspondence".into()));
    }
    let kind = a.walk_type.kind();
    let mut coin = a.coin.clone();
    if [coin.coin.is_some(), coin.alpha.is_some(), coin.a.is_some(), coin.b.is_some()].iter().all(|g| !g) {
        coin.alpha = Some(C::new(0.0, 0.0));
    }
    let walk = resolve_walk(kind, &coin)?;
    let r = correspondence_residual(&walk, a.dim)?;
    let mut table = String::new();
    let _ = writeln!(table, "parameter\t{:?},{:?}", r.parameter.re, r.parameter.im);
    let _ = writeln!(table, "paper_class\t{}", r.paper_class);
    for (c, res) in &r.residuals {
        let _ = writeln!(table, "{}\t{res:.3e}", c.label());
    }
    let _ = writeln!(table, "best\t{}\t{:.3e}", r.best.label(), r.residual);
    let _ = writeln!(table, "return\t{:.3e}", r.return_residual);
    let (body, format) = if a.output.out.is_some() {
        print!("{table}");
        let v = json!({
            "parameter": r.parameter,
            "paper_class": r.paper_class,
            "residuals": r.residuals.iter().map(|(c, x)| json!({"convention": c.label(), "residual": x})).collect::<Vec<_>>(),
            "best": r.best.label(),
            "residual": r.residual,
            "return_residual": r.return_residual,
        });
        (to_json_pretty(&v), FormatArg::Json)
    } else {
        (table, FormatArg::Csv)
    };
    let mut o = Outcome::new(body, format, &["convention", "residual"]);
    o.conventions = walk_conventions(&walk);
    if let Value::Object(m) = &mut o.conventions {
        m.insert("correspondence".into(), json!(r.best.label()));
    }
    if !(r.residual < a.tol) {
        o.failure = Some(CliError::Check(format!(
            "correspondence residual {:.3e} is not below {:.1e} under any convention (best {})",
            r.residual,
            a.tol,
            r.best.label()
        )));
    }
    Ok(o)
}

/// Runs simulation, spectrum and closed forms on one parameter.
pub fn compare_report(a: &CompareArgs) -> CliResult<Value> {
    let kind = a.walk_type.kind();
    if a.steps < 16 {
        return Err(CliError::Config(format!("--steps {} is below 16", a.steps)));
    }
    let coin_args = CoinArgs { a: a.a, b: a.b, edge: a.edge, ..CoinArgs::default() };
    let (p, seq) = match kind {
        WalkKind::TypeI => {
            let p = a.a.ok_or_else(|| CliError::Config("Type I needs --a".into()))?;
            (p, VerblunskySeq::NullOdd(p))
        }
        WalkKind::TypeII => {
            let p = a.b.ok_or_else(|| CliError::Config("Type II needs --b".into()))?;
            (p, VerblunskySeq::NullEven(p))
        }
    };
    let walk = resolve_walk(kind, &coin_args)?;
    let cs = parse_coin_state(kind, a.coin_state.as_deref())?;
    let stats = time_avg_return(&walk, &cs, a.steps)?;
    let profile = diagonal_profile(&walk, &cs, a.steps - a.steps / 4, a.steps, a.k_max)?;
    let mu = measure(&seq, &MeasureConfig { grid: a.grid, ..MeasureConfig::default() })?;
    let nu = match kind {
        WalkKind::TypeI => nu_i(p)?,
        WalkKind::TypeII => nu_ii(p)?,
    };
    let predicted: Vec<f64> = (0..=a.k_max).map(|k| if k == 0 { 1.0 } else { nu.powi(2 * k as i32) }).collect();
    let rel: Vec<Option<f64>> =
        predicted.iter().zip(&profile.ratios).map(|(p, s)| (*p > 0.0).then(|| ((s - p) / p).abs())).collect();
    let sim_localizes = stats.tail > a.return_threshold;
    let spectral_localizes = !mu.atoms.is_empty();
    let predicates = match kind {
        WalkKind::TypeI => {
            let l = localizes_i(type_i_state(&cs), p, walk.coin.derived().theta)?;
            json!({"localizes_i": l})
        }
        WalkKind::TypeII => {
            let l = localizes_ii(p)?;
            json!({
                "paper_region": l.paper_region,
                "mass_criterion": l.mass_criterion,
                "agree": l.agree(),
                "mass_m": mass_m(p)?,
            })
        }
    };
    let predicate = match kind {
        WalkKind::TypeI => predicates["localizes_i"].as_bool(),
        WalkKind::TypeII => predicates["mass_criterion"].as_bool(),
    }
    .expect("predicate is a bool");
    Ok(json!({
        "type": a.walk_type,
        "parameter": p,
        "sequence": seq_label(&seq),
        "edge_rule": edge_label(walk.edge),
        "spectrum": {
            "atoms": mu.atoms.iter().map(|x| [x.theta, x.mass]).collect::<Vec<_>>(),
            "atom_total": mu.atom_mass(),
            "total": mu.total,
        },
        "simulation": {
            "steps": a.steps,
            "tail_average": stats.tail,
            "cesaro_average": stats.cesaro,
            "threshold": a.return_threshold,
        },
        "decay": {
            "nu": nu,
            "predicted": predicted,
            "simulated": profile.ratios,
            "relative_error": rel,
        },
        "predicates": predicates,
        "verdicts": {
            "spectrum": spectral_localizes,
            "simulation": sim_localizes,
            "predicate": predicate,
            "unanimous": spectral_localizes == sim_localizes && sim_localizes == predicate,
        },
    }))
}

fn compare(a: &CompareArgs) -> CliResult<Outcome> {
    let report = compare_report(a)?;
    let mut notes = Vec::new();
    if report["predicates"]["agree"] == json!(false) {
        notes.push(format!(
            "predicates disagree; simulation says localizes={}",
            report["verdicts"]["simulation"]
        ));
    }
    if report["verdicts"]["unanimous"] == json!(false) {
        notes.push(format!("verdicts differ: {}", report["verdicts"]));
    }
    let mut o = Outcome::new(to_json_pretty(&report), FormatArg::Json, &[]);
    o.notes = notes;
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        let c = RunConfig::parse("command=simulate\ntype=I\nalpha=0,0\nsteps=2\nbogus=1\n").unwrap();
        assert!(Cli::try_parse_from(c.to_args()).is_err());
        assert!(matches!(RunConfig::parse("command=nope"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("type=I"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("command=simulate\ncommand=simulate"), Err(CliError::Config(_))));
    }

    #[test]
    fn config_round_trips_to_args() {
        let c = RunConfig::parse("# c\ncommand=verify\ncorrespondence=true\nalpha=0.5,0\nseed=7\noutput=r.json\n").unwrap();
        assert_eq!(c.seed, 7);
        let cli = Cli::try_parse_from(c.to_args()).unwrap();
        match cli.command {
            Command::Verify(v) => {
                assert!(v.correspondence);
                assert_eq!(v.coin.alpha, Some(C::new(0.5, 0.0)));
                assert_eq!(v.output.out, Some(PathBuf::from("r.json")));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn seq_parsing() {
        assert_eq!(parse_seq("null-odd:0.5,0").unwrap(), VerblunskySeq::NullOdd(C::new(0.5, 0.0)));
        assert_eq!(parse_seq("null-even:-0.5").unwrap(), VerblunskySeq::NullEven(C::new(-0.5, 0.0)));
        assert_eq!(parse_seq("zero").unwrap(), VerblunskySeq::zero());
        assert!(matches!(parse_seq("explicit:0.1,0;0.2,0.1"), Ok(VerblunskySeq::Explicit(v)) if v.len() == 2));
        assert!(parse_seq("const:2,0").is_err());
        assert!(parse_seq("odd:0.1").is_err());
        for s in ["null-odd:0.3,-0.2", "const:0.1,0.4"] {
            let q = parse_seq(s).unwrap();
            assert_eq!(parse_seq(&seq_label(&q)).unwrap(), q);
        }
    }

    #[test]
    fn coin_state_parsing() {
        assert!(matches!(parse_coin_state(WalkKind::TypeI, Some("0,1,0,0")), Ok(CoinState::TypeI(v)) if v[1] == C::new(1.0, 0.0)));
        assert!(matches!(parse_coin_state(WalkKind::TypeII, Some("0.1,0.2")), Ok(CoinState::TypeII([_, _]))));
        assert!(parse_coin_state(WalkKind::TypeII, Some("1,0,0,0")).is_err());
    }

    #[test]
    fn raster_stays_inside() {
        let r = disk_raster(20);
        assert!(r.iter().all(|z| z.norm() < 1.0));
        assert!(r.len() > 250 && r.len() < 400);
    }

    #[test]
    fn measure_schema() {
        let mu = measure(&VerblunskySeq::NullEven(C::new(0.5, 0.0)), &MeasureConfig { grid: 64, ..Default::default() })
            .unwrap();
        let v = measure_json(&mu);
        validate_measure_json(&v).unwrap();
        assert!(validate_measure_json(&json!({"weight": [], "atoms": [[1.0]], "total": 1.0})).is_err());
        assert!(validate_measure_json(&json!({"weight": [], "atoms": [], "total": 1.0, "x": 0})).is_err());
    }

    #[test]
    fn timestamp_is_the_only_moving_part() {
        let a = r#"{"version":"1","timestamp":1}"#;
        let b = r#"{"version":"1","timestamp":2}"#;
        assert_eq!(strip_timestamp(a).unwrap(), strip_timestamp(b).unwrap());
    }
}
