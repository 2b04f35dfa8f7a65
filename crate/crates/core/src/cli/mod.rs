//! Command-line surface: `compare` runs a confidence sequence and both
//! e-processes over a forecast CSV, `simulate` plays two reference
//! forecasters on the synthetic changepoint game.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod compare;
pub mod config;
pub mod odds;
pub mod records;
pub mod simulate;

pub use compare::{run_compare, Comparator, RunError, Summary};
pub use config::{BoundaryChoice, CsKind, Plan, RunConfig, Schema};
pub use odds::{american_odds_to_prob, odds_pair_prob};
pub use records::{fmt_sig9, read_records, read_rows, write_rows, write_rows_json, DataError, ForecastRecord, Forecasts, OutputRow};
pub use simulate::{run_simulate, SimConfig, SimOutput, SEED_ENV};

use crate::confseq::Centering;
use crate::forecasters::ForecasterKind;
use crate::scoring::{KStepWeights, ScoringRule, DEFAULT_LOG_EPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(e) => CliError::Usage(e.to_string()),
            RunError::Data(e) => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "anytime-compare", version, about = "Anytime-valid comparison of probability forecasters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two forecasters on a CSV stream.
    ///
    /// Input schemas (columns are matched by name, extras are ignored):
    ///   binary       t,p,q,y               y in {0,1}
    ///   --odds       t,odds_p,odds_q,y     American odds; with optional
    ///                odds_p_opp,odds_q_opp each forecaster's probability is
    ///                rescaled against its opponent-side odds
    ///   --kstep-*    t,p1..pK,q1..qK,y     column k is the k-step-ahead forecast
    ///   --classes K  t,p_1..p_K,q_1..q_K,y y in {1..K}
    ///
    /// Output columns: t,delta_hat,vhat,lcb,ucb,width,e_pq,e_qp,p_pq,p_qp,decision
    #[command(verbatim_doc_comment)]
    Compare(CompareArgs),
    /// Simulate two reference forecasters on the changepoint game.
    ///
    /// Forecasters: always_<x>, laplace, k29_poly<d>, k29_rbf<sigma>.
    /// The results file carries an extra delta_true column.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoreArg {
    Brier,
    Spherical,
    ZeroOne,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CsArg {
    Eb,
    Hoeffding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    GammaExponential,
    NormalMixture,
    Stitched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaModeArg {
    Mean,
    Zero,
}

#[derive(Debug, Clone, Args)]
pub struct StatArgs {
    #[arg(long, value_enum, default_value = "brier")]
    pub score: ScoreArg,
    /// Truncation level of the log score.
    #[arg(long, default_value_t = DEFAULT_LOG_EPS)]
    pub log_eps: f64,
    /// Use Winkler's score of p against the baseline q (Brier base); q must
    /// lie strictly inside (q0, 1 - q0).
    #[arg(long)]
    pub winkler_q0: Option<f64>,
    /// Two-sided error level.
    #[arg(long, default_value_t = config::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "eb")]
    pub cs: CsArg,
    /// Defaults to gamma-exponential for eb and normal-mixture for hoeffding.
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    /// Sub-exponential scale; at least twice the score differential bound.
    #[arg(long)]
    pub c: Option<f64>,
    /// Mixture precision.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Intrinsic time at which the boundary is tightest (default 10).
    #[arg(long)]
    pub v_opt: Option<f64>,
    #[arg(long, value_enum, default_value = "mean")]
    pub gamma_mode: GammaModeArg,
    /// Report the running intersection of the intervals.
    #[arg(long)]
    pub intersect: bool,
    /// Tune the mixture at the final intrinsic time of the stream.
    #[arg(long)]
    pub post_hoc: bool,
    /// Emit one JSON object per line instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Input CSV, or `-` for stdin.
    #[arg(required_unless_present = "pairs", conflicts_with = "pairs")]
    pub input: Option<PathBuf>,
    /// Output path (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// CSV with columns input,output; each pair runs on its own thread.
    /// Relative paths resolve against the pairs file's directory.
    #[arg(long, conflicts_with = "output")]
    pub pairs: Option<PathBuf>,
    /// Input holds American odds.
    #[arg(long)]
    pub odds: bool,
    /// Comma-separated k-step weights (sum to 1).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["kstep", "classes", "odds"])]
    pub kstep_weights: Option<Vec<f64>>,
    /// Number of k-step columns with uniform weights.
    #[arg(long, conflicts_with_all = ["classes", "odds"])]
    pub kstep: Option<usize>,
    /// Number of outcome classes for categorical input.
    #[arg(long, conflicts_with = "odds")]
    pub classes: Option<usize>,
    #[command(flatten)]
    pub stats: StatArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Forecaster p.
    #[arg(long)]
    pub p: String,
    /// Forecaster q.
    #[arg(long)]
    pub q: String,
    /// Number of rounds.
    #[arg(long = "horizon", short = 'T', default_value_t = 10_000)]
    pub horizon: usize,
    /// Overridden by the ANYTIME_COMPARE_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop the Gaussian noise on reality.
    #[arg(long)]
    pub no_noise: bool,
    /// Path for the raw stream t,p,q,y,r.
    #[arg(long)]
    pub data_out: Option<PathBuf>,
    /// Results path (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub stats: StatArgs,
}

impl StatArgs {
    pub fn to_config(&self, schema: Schema) -> Result<RunConfig, CliError> {
        let usage = |e: crate::Error| CliError::Usage(e.to_string());
        let rule = match (self.score, self.winkler_q0) {
            (ScoreArg::Brier, Some(q0)) => ScoringRule::winkler(q0).map_err(usage)?,
            (_, Some(_)) => {
                return Err(CliError::Usage("--winkler-q0 needs --score brier".into()))
            }
            (ScoreArg::Brier, None) => ScoringRule::Brier,
            (ScoreArg::Spherical, None) => ScoringRule::Spherical,
            (ScoreArg::ZeroOne, None) => ScoringRule::ZeroOne,
            (ScoreArg::Log, None) => ScoringRule::log_truncated(self.log_eps).map_err(usage)?,
        };
        let cs = match self.cs {
            CsArg::Eb => CsKind::Eb,
            CsArg::Hoeffding => CsKind::Hoeffding,
        };
        let boundary = match (self.boundary, cs) {
            (Some(BoundaryArg::GammaExponential), _) | (None, CsKind::Eb) => BoundaryChoice::GammaExponential,
            (Some(BoundaryArg::NormalMixture), _) | (None, CsKind::Hoeffding) => BoundaryChoice::NormalMixture,
            (Some(BoundaryArg::Stitched), _) => BoundaryChoice::Stitched,
        };
        let cfg = RunConfig {
            rule,
            schema,
            alpha: self.alpha,
            cs,
            boundary,
            c: self.c,
            rho: self.rho,
            v_opt: self.v_opt,
            centering: match self.gamma_mode {
                GammaModeArg::Mean => Centering::Mean,
                GammaModeArg::Zero => Centering::Zero,
            },
            intersect: self.intersect,
            post_hoc: self.post_hoc,
        };
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }
}

impl CompareArgs {
    fn schema(&self) -> Result<Schema, CliError> {
        let usage = |e: crate::Error| CliError::Usage(e.to_string());
        Ok(if let Some(w) = &self.kstep_weights {
            Schema::KStep(KStepWeights::new(w.clone()).map_err(usage)?)
        } else if let Some(k) = self.kstep {
            Schema::KStep(KStepWeights::uniform(k).map_err(usage)?)
        } else if let Some(k) = self.classes {
            Schema::Categorical { classes: k }
        } else if self.odds {
            Schema::Odds
        } else {
            Schema::Binary
        })
    }
}

fn open_input(path: &Path) -> Result<Box<dyn Read>, CliError> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin().lock()));
    }
    let f = File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(Box::new(BufReader::new(f)))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| match path {
        Some(p) => CliError::Data(format!("{}: {e}", p.display())),
        None => CliError::Data(e.to_string()),
    }
}

fn emit(
    out: Box<dyn Write>,
    rows: &[OutputRow],
    extra: Option<(&str, &[f64])>,
    json: bool,
    path: Option<&Path>,
) -> Result<(), CliError> {
    if json {
        write_rows_json(out, rows, extra).map_err(io_err(path))
    } else {
        write_rows(out, rows, extra).map_err(io_err(path))
    }
}

/// Runs one input file to one output; returns the summary.
fn compare_one(
    config: &RunConfig,
    input: &Path,
    output: Option<&Path>,
    json: bool,
) -> Result<Summary, CliError> {
    let records = read_records(open_input(input)?, &config.schema)
        .map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
    let (rows, summary) = run_compare(config, &records)?;
    emit(open_output(output)?, &rows, None, json, output)?;
    Ok(summary)
}

fn read_pairs(path: &Path) -> Result<Vec<(PathBuf, PathBuf)>, CliError> {
    let data = |m: String| CliError::Data(format!("{}: {m}", path.display()));
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(open_input(path)?);
    let headers = rdr.headers().map_err(|e| data(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| data(format!("missing column {name:?}")))
    };
    let (ic, oc) = (col("input")?, col("output")?);
    let mut pairs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| data(e.to_string()))?;
        let get = |i: usize| rec.get(i).map(|s| base.join(s)).ok_or_else(|| data("short row".into()));
        pairs.push((get(ic)?, get(oc)?));
    }
    Ok(pairs)
}

fn run_compare_cmd(args: &CompareArgs, log: &mut dyn Write) -> Result<(), CliError> {
    let config = args.stats.to_config(args.schema()?)?;
    if let Some(pairs_path) = &args.pairs {
        let pairs = read_pairs(pairs_path)?;
        let results: Vec<Result<Summary, CliError>> = std::thread::scope(|s| {
            let handles: Vec<_> = pairs
                .iter()
                .map(|(i, o)| {
                    let config = &config;
                    s.spawn(move || compare_one(config, i, Some(o), args.stats.json))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| Err(CliError::Data("worker panicked".into()))))
                .collect()
        });
        let mut first_err = None;
        for ((input, _), res) in pairs.iter().zip(results) {
            match res {
                Ok(summary) => {
                    let _ = writeln!(log, "{}: {summary}", input.display());
                }
                Err(e) => {
                    let _ = writeln!(log, "{}: {e}", input.display());
                    first_err.get_or_insert(e);
                }
            }
        }
        return first_err.map_or(Ok(()), Err);
    }
    let input = args.input.as_deref().expect("clap enforces input or pairs");
    let summary = compare_one(&config, input, args.output.as_deref(), args.stats.json)?;
    let _ = writeln!(log, "{summary}");
    Ok(())
}

fn run_simulate_cmd(args: &SimulateArgs, log: &mut dyn Write) -> Result<(), CliError> {
    let usage = |e: crate::Error| CliError::Usage(e.to_string());
    let config = args.stats.to_config(Schema::Binary)?;
    let p: ForecasterKind = args.p.parse().map_err(usage)?;
    let q: ForecasterKind = args.q.parse().map_err(usage)?;
    if args.horizon == 0 {
        return Err(CliError::Usage("--horizon must be at least 1".into()));
    }
    let sim = SimConfig {
        p,
        q,
        horizon: args.horizon,
        seed: simulate::effective_seed(args.seed).map_err(usage)?,
        noise: !args.no_noise,
    };
    let out = run_simulate(&config, &sim).map_err(|e| CliError::Data(e.to_string()))?;
    if let Some(path) = &args.data_out {
        simulate::write_data(open_output(Some(path))?, &out.rounds).map_err(io_err(Some(path)))?;
    }
    let truth = out.delta_true();
    emit(
        open_output(args.output.as_deref())?,
        &out.rows,
        Some(("delta_true", &truth)),
        args.stats.json,
        args.output.as_deref(),
    )?;
    let _ = writeln!(log, "{}", out.summary);
    Ok(())
}

/// Parses `args` and runs; returns the process exit code. Summaries and
/// errors go to `log`.
pub fn run<I, T>(args: I, log: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compare(a) => run_compare_cmd(a, log),
        Command::Simulate(a) => run_simulate_cmd(a, log),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            e.exit_code()
        }
    }
}
