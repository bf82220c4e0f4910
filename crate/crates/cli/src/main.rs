mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Dual-unitary gates, glider spectra, permutation circuits and recurrence times.
#[derive(Parser, Debug)]
#[command(name = "duc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel grids (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything that determines a report. Echoed into every output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub threads: Option<usize>,
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    /// Unitarity, dual-unitarity and perfectness of a gate or map.
    Verify(VerifyArgs),
    /// Build a gate from a construction descriptor, or list the builtins.
    Construct(ConstructArgs),
    /// Equivalence classes of DU permutation maps of size N.
    Enumerate(EnumerateArgs),
    /// Glider counts from the light-cone transfer matrices.
    Gliders(GliderArgs),
    /// Infinite-temperature two-point functions on a brickwork chain.
    Correlate(CorrelateArgs),
    /// Sampled orbit lengths of the classical permutation circuit.
    Orbits(OrbitArgs),
    /// Recurrence times of the classical permutation circuit.
    Recurrence(RecurrenceArgs),
    /// Exact orders of the linear brickwork matrix over F_p.
    Ffield(FfieldArgs),
    /// Re-run the configuration recorded in an earlier report.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Construct(_) => "construct",
            Command::Enumerate(_) => "enumerate",
            Command::Gliders(_) => "gliders",
            Command::Correlate(_) => "correlate",
            Command::Orbits(_) => "orbits",
            Command::Recurrence(_) => "recurrence",
            Command::Ffield(_) => "ffield",
            Command::Replay(_) => "replay",
        }
    }
}

/// Exactly one gate source.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// A named builtin (`duc construct --list`).
    #[arg(long)]
    pub builtin: Option<String>,
    /// A permutation map as a CD table, one-based, rows `/`-separated.
    #[arg(long)]
    pub map: Option<String>,
    /// A construction descriptor as JSON, or `@path` to a JSON file.
    #[arg(long)]
    pub descriptor: Option<String>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ConstructArgs {
    /// Construction descriptor as JSON, or `@path`.
    #[arg(long, required_unless_present = "list")]
    pub descriptor: Option<String>,
    /// List the builtin maps instead.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Include one representative per class.
    #[arg(long)]
    pub representatives: bool,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GliderArgs {
    #[command(flatten)]
    pub source: Source,
    /// Range parameter: `2`, `1..4` or `1,3`.
    #[arg(long, default_value = "1..3")]
    pub alpha: String,
    /// Largest transfer-matrix dimension.
    #[arg(long, default_value_t = duc_core::ergodicity::DEFAULT_CAP)]
    pub cap: usize,
    /// Extract and verify the glider operators.
    #[arg(long)]
    pub extract: bool,
    /// Exact test of a trivial spectrum {1, 0, …} (permutation gates).
    #[arg(long)]
    pub exact_spectrum: bool,
    /// Seed for the random states used in glider verification.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tau_u: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tau_lambda: f64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Chain length.
    #[arg(long, default_value_t = 8)]
    pub l: usize,
    /// Largest time in layers (even); every even t from 2 up is reported.
    #[arg(long, default_value_t = 4)]
    pub t: usize,
    /// Cap on N^L.
    #[arg(long, default_value_t = duc_core::ergodicity::correlator::DEFAULT_CHAIN_CAP as u64)]
    pub cap: u64,
    /// Threshold for calling a correlator zero.
    #[arg(long, default_value_t = 1e-10)]
    pub zero: f64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub source: Source,
    /// Even volumes: `8`, `4..14` (every even L) or `4,8,12`.
    #[arg(long)]
    pub l: String,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 10)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = duc_core::ca::DEFAULT_STEP_BUDGET)]
    pub step_budget: u64,
    /// Read orbit lengths from an exhaustive cycle table when N^L is at most this.
    #[arg(long, default_value_t = duc_core::ca::DEFAULT_STATE_CAP)]
    pub state_cap: u64,
    /// Include every sampled orbit length.
    #[arg(long)]
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    /// Matrix order for the linear map, exhaustive below the state cap, sampling above.
    Auto,
    Exhaustive,
    Matrix,
    Sampled,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub source: Source,
    /// Even volumes: `8`, `2..14` (every even L) or `4,8,12`.
    #[arg(long)]
    pub l: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, default_value_t = duc_core::ca::DEFAULT_STATE_CAP)]
    pub state_cap: u64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = duc_core::ca::DEFAULT_STEP_BUDGET)]
    pub step_budget: u64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct FfieldArgs {
    #[command(subcommand)]
    pub op: FfieldOp,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct OrderBudget {
    /// Floquet steps per basis-vector orbit in the direct route.
    #[arg(long, default_value_t = 2_000_000)]
    pub direct_budget: u64,
    /// Pollard-rho iterations when factoring the multiple.
    #[arg(long, default_value_t = 1 << 22)]
    pub factor_budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corollary {
    /// T(2p^m) = a·p^μ with μ in {m−2, m−1, m}.
    #[value(name = "2pm")]
    #[serde(rename = "2pm")]
    TwoPm,
    /// T | p(p^{2s} − 1), exponential bound.
    Div,
    /// Quadratic bound for half-volumes (p^k − 1)/(p − 1).
    Repunit,
    /// T(2ab) against lcm(T(2a), T(2b)) for coprime a, b.
    Coprime,
    /// T ≥ L/4.
    LowerBound,
    /// dim ker(C² − I) = 2 and V² = −4 + nilpotent at L = 2p^m.
    Kernel,
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum FfieldOp {
    /// Order T(L) of V over F_p.
    Order {
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// Even volumes: `2..48` (every even L) or a list.
        #[arg(long = "L", alias = "l", default_value = "2..48")]
        l: String,
        #[command(flatten)]
        budget: OrderBudget,
    },
    /// Block decomposition of V over F_{p^n}.
    Blocks {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long = "L", alias = "l")]
        l: usize,
        #[command(flatten)]
        budget: OrderBudget,
    },
    /// Check one of the number-theoretic statements about T.
    Verify {
        #[arg(long, value_enum)]
        corollary: Corollary,
        /// Primes, comma-separated (only `lower-bound` uses more than one).
        #[arg(long, default_value = "3")]
        p: String,
        /// `2pm`, `kernel`: largest m.
        #[arg(long, default_value_t = 3)]
        m_max: u32,
        /// `div`, `lower-bound`: even volumes.
        #[arg(long = "L", alias = "l", default_value = "2..48")]
        l: String,
        /// `repunit`: largest k in (p^k − 1)/(p − 1).
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        /// `coprime`: the two half-volumes.
        #[arg(long, default_value_t = 2)]
        a: u64,
        #[arg(long, default_value_t = 5)]
        b: u64,
        #[command(flatten)]
        budget: OrderBudget,
    },
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A report (or a bare run configuration) written by an earlier run.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<duc_core::Error> for CliError {
    fn from(e: duc_core::Error) -> Self {
        use duc_core::Error as E;
        match e {
            E::UnknownBuiltin(_) | E::Parse(_) | E::Malformed(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn load_replay(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let cfg = v.get("run_config").cloned().unwrap_or(v);
    serde_json::from_value(cfg).map_err(|e| CliError::Usage(format!("not a run configuration: {e}")))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig { command: cli.command, format: cli.format, threads: cli.threads };
    if let Command::Replay(r) = &cfg.command {
        cfg = load_replay(&r.config)?;
        if matches!(cfg.command, Command::Replay(_)) {
            return Err(CliError::Usage("nested replay".into()));
        }
    }
    if let Some(t) = cfg.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Compute(e.to_string()))?;
    }
    let out = commands::run(&cfg.command)?;
    let text = match cfg.format {
        Format::Json => report::to_json(&cfg, &out),
        Format::Csv => match &out.table {
            Some(t) => report::to_csv(&cfg, &out, t),
            None => return Err(CliError::Usage(format!("`{}` has no CSV form", cfg.command.name()))),
        },
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Compute(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| CliError::Compute(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("duc: usage error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(m)) => {
            eprintln!("duc: {m}");
            ExitCode::from(1)
        }
    }
}
