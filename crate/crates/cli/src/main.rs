//! Command-line driver: build complexes, replay topology operations, measure
//! observables, run experiments, and export.
//!
//! Exit codes: 0 success, 1 runtime or measurement error, 2 configuration
//! error.

use clap::{Args, Parser, Subcommand};
use qspace::error::Error;
use qspace::experiment::ExperimentConfig;
use qspace::io::{apply_ops, apply_replay, ReplayDoc};
use qspace::lattice::{EdgeId, LatticeComplex, RootSystemKind, VertexId};
use qspace::observables::{curvature_with_policy, entropy, ResolutionPolicy};
use qspace::words::Letter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qspace", version, about = "Discrete-space simulation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a lattice ball (or an isolated path) and write it as JSON.
    Build(BuildArgs),
    /// Apply a replay of topology operations and write the result.
    Mutate(MutateArgs),
    /// Measure an observable of a stored complex.
    Measure(MeasureArgs),
    /// Run a hubble or spectral experiment from a JSON config.
    Experiment(ExperimentArgs),
    /// Export a stored complex for downstream tools.
    Export(ExportArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Root system: a3, b3, c3, square, cubic — or "path" for an isolated
    /// path of `extent` edges.
    #[arg(long)]
    system: String,
    /// Graph radius around the origin (path length for --system path).
    #[arg(long)]
    extent: u32,
    /// Seed stored with the complex; defaults to $QSPACE_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MutateArgs {
    /// Replay document: {version, build, seed, ops:[...]}.
    #[arg(long)]
    replay: PathBuf,
    /// Apply the replay's ops to this complex instead of its build source.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MeasureArgs {
    /// Complex JSON produced by build or mutate.
    #[arg(long)]
    input: PathBuf,
    /// Write the result JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    observable: Observable,
}

#[derive(Subcommand)]
enum Observable {
    /// Holonomy of the commutator loop (x, y) applied to z at a base vertex.
    Curvature {
        #[arg(long)]
        base: u32,
        /// Generator names as in the word alphabet: x1, x2, ...
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        /// Constituent resolution at a merged base.
        #[arg(long, value_enum, default_value_t = PolicyArg::LoopAbsorbedZSurvivor)]
        policy: PolicyArg,
    },
    /// Entropy of a prospective contraction set.
    Entropy {
        /// Comma-separated edge ids, e.g. --edges 3,17.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<u32>,
    },
    /// Light distance (live-edge hop count) between two vertices.
    Distance {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum PolicyArg {
    LoopAbsorbedZSurvivor,
    LoopSurvivorZAbsorbed,
}

impl From<PolicyArg> for ResolutionPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::LoopAbsorbedZSurvivor => ResolutionPolicy::LoopAbsorbedZSurvivor,
            PolicyArg::LoopSurvivorZAbsorbed => ResolutionPolicy::LoopSurvivorZAbsorbed,
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Per-sample CSV output path.
    #[arg(long)]
    csv: PathBuf,
    /// Summary JSON output path.
    #[arg(long)]
    summary: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    input: PathBuf,
    /// Output format; currently "dot".
    #[arg(long, default_value = "dot")]
    format: String,
    #[arg(long)]
    out: PathBuf,
}

/// 2 for configuration problems, 1 for runtime/measurement failures.
fn exit_class(err: &CliError) -> u8 {
    match err {
        CliError::Config(_) => 2,
        CliError::Core(e) => match e {
            Error::ReducibleSystem(_)
            | Error::UnsupportedSystem(_)
            | Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::InvalidDocument(_)
            | Error::Json(_) => 2,
            _ => 1,
        },
        CliError::Io(_) => 1,
    }
}

enum CliError {
    Config(String),
    Core(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_class(&err))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Build(args) => build(args),
        Command::Mutate(args) => mutate(args),
        Command::Measure(args) => measure(args),
        Command::Experiment(args) => experiment(args),
        Command::Export(args) => export(args),
    }
}

fn default_seed() -> u64 {
    std::env::var("QSPACE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

fn load_complex(path: &Path) -> CliResult<LatticeComplex> {
    let text = std::fs::read_to_string(path)?;
    Ok(LatticeComplex::from_json_str(&text)?)
}

fn build(args: BuildArgs) -> CliResult<()> {
    let mut complex = if args.system.eq_ignore_ascii_case("path") {
        qspace::build_path(args.extent)
    } else {
        let kind = RootSystemKind::from_name(&args.system)?;
        qspace::build_lattice(kind, args.extent)
    };
    complex.set_rng_seed(args.seed.unwrap_or_else(default_seed));
    std::fs::write(&args.out, complex.to_json_string())?;
    Ok(())
}

fn mutate(args: MutateArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.replay)?;
    let doc: ReplayDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", args.replay.display())))?;
    let complex = match &args.input {
        Some(path) => {
            let mut complex = load_complex(path)?;
            apply_ops(&mut complex, &doc.ops, doc.seed)?;
            complex
        }
        None => apply_replay(&doc)?,
    };
    std::fs::write(&args.out, complex.to_json_string())?;
    Ok(())
}

fn parse_generator(complex: &LatticeComplex, name: &str) -> CliResult<u8> {
    let letter: Letter = name
        .parse()
        .map_err(|e: Error| CliError::Config(e.to_string()))?;
    match letter {
        Letter::Spatial { generator, sign: qspace::words::Sign::Pos, level: 0 } => {
            complex.system().generator(generator as usize)?;
            Ok(generator)
        }
        _ => Err(CliError::Config(format!(
            "{name:?} is not a plain generator name (expected x1, x2, ...)"
        ))),
    }
}

fn emit(out: &Option<PathBuf>, value: serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&value).expect("json");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn measure(args: MeasureArgs) -> CliResult<()> {
    let complex = load_complex(&args.input)?;
    let value = match args.observable {
        Observable::Curvature { base, x, y, z, policy } => {
            let (x, y, z) = (
                parse_generator(&complex, &x)?,
                parse_generator(&complex, &y)?,
                parse_generator(&complex, &z)?,
            );
            let r = curvature_with_policy(&complex, VertexId(base), x, y, z, policy.into())?;
            serde_json::json!({
                "c": r.endpoint_first_then_z.0,
                "d": r.z_first_then_endpoint.0,
                "path": r.connecting_path.to_string(),
                "length": r.connecting_path.len(),
            })
        }
        Observable::Entropy { edges } => {
            let ids: Vec<EdgeId> = edges.into_iter().map(EdgeId).collect();
            let r = entropy(&complex, &ids)?;
            serde_json::json!({
                "S": r.s,
                "witnesses": r.witnesses.iter().map(|v| v.0).collect::<Vec<_>>(),
            })
        }
        Observable::Distance { from, to } => {
            let d = qspace::dynamics::light_distance(&complex, VertexId(from), VertexId(to))?;
            serde_json::json!({ "d": d })
        }
    };
    emit(&args.out, value)
}

fn experiment(args: ExperimentArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.config)?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let output = qspace::experiment::run(&config)?;
    std::fs::write(&args.csv, output.csv)?;
    std::fs::write(&args.summary, output.summary_json)?;
    Ok(())
}

fn export(args: ExportArgs) -> CliResult<()> {
    let complex = load_complex(&args.input)?;
    match args.format.as_str() {
        "dot" => {
            std::fs::write(&args.out, complex.to_dot())?;
            Ok(())
        }
        other => Err(CliError::Config(format!("unsupported export format {other:?}"))),
    }
}
