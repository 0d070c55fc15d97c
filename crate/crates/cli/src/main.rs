use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leadalloc_core::ingest::{self, COL_PUBLIC_COVERAGE, COL_UNTESTED};
use leadalloc_core::{
    allocate, build_report, correlate_factors, fixtures, score_city, AliasTable, AllocationParams,
    AllocationStrategy, CityRegistry, Error, Estimator, IngestOptions, PriorityRanking, ScoreOptions,
    ValidationReport, WeightVariant,
};

mod render;

const ALIAS_ENV: &str = "LEADALLOC_ALIAS_FILE";

/// Neighborhood lead-testing priority scores, kit allocation and recommendation audits.
#[derive(Debug, Parser)]
#[command(name = "leadalloc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correlate risk-factor columns with prevalence.
    Correlate(CorrelateArgs),
    /// Compute Priority Scores and rank neighborhoods.
    Score(ScoreArgs),
    /// Apportion a kit budget over a saved ranking.
    Allocate(AllocateArgs),
    /// Score recorded model recommendations against target neighborhoods.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
struct DatasetArgs {
    /// City dataset CSV.
    #[arg(long)]
    input: PathBuf,
    /// City id (chicago, nyc, dc).
    #[arg(long)]
    city: String,
    /// Treat rows with missing metrics as errors instead of skipping them.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Comma-separated column names; defaults to every non-prevalence column.
    #[arg(long, value_delimiter = ',')]
    factors: Vec<String>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Pearson)]
    estimator: EstimatorArg,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Pearson,
    Spearman,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long, default_value_t = leadalloc_core::scoring::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value = "text")]
    variant: WeightVariant,
    /// Use this coverage/prevalence correlation instead of computing it.
    #[arg(long, allow_negative_numbers = true)]
    r_override: Option<f64>,
    /// Rescale the three weights to sum to one.
    #[arg(long)]
    normalize_weights: bool,
    /// Write the ranking as JSON for `allocate`.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct AllocateArgs {
    /// Ranking JSON written by `score --output`.
    #[arg(long)]
    ranking: PathBuf,
    #[arg(long)]
    kits: u64,
    #[arg(long, default_value = "proportional")]
    strategy: AllocationStrategy,
    /// Ranks sharing the budget under top_k_equal.
    #[arg(long, default_value_t = leadalloc_core::allocation::DEFAULT_TOP_K)]
    k: usize,
    /// Kits guaranteed to every ranked neighborhood.
    #[arg(long, default_value_t = 0)]
    floor: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Recorded model runs (JSON).
    #[arg(long)]
    runs: PathBuf,
    /// Target neighborhoods per city (JSON).
    #[arg(long)]
    targets: PathBuf,
    #[arg(long, default_value_t = leadalloc_core::evaluation::DEFAULT_K)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

enum Failure {
    /// Bad input or arguments: exit 2.
    Usage(String),
    /// Anything else: exit 1.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Correlate(args) => correlate(args),
        Command::Score(args) => score(args),
        Command::Allocate(args) => allocate_cmd(args),
        Command::Evaluate(args) => evaluate(args),
    };
    match result {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn aliases() -> Result<AliasTable, Failure> {
    match std::env::var_os(ALIAS_ENV) {
        Some(path) if !path.is_empty() => Ok(AliasTable::from_path(Path::new(&path))?),
        _ => Ok(fixtures::default_aliases()),
    }
}

fn warn_report(report: &ValidationReport) {
    for issue in report.warnings() {
        eprintln!("{issue}");
    }
}

fn load_dataset(args: &DatasetArgs) -> Result<leadalloc_core::CityDataset, Failure> {
    let registry = CityRegistry::default();
    let city = registry.get(&args.city).map_err(|_| {
        let known: Vec<&str> = registry.ids().collect();
        Failure::Usage(format!("unknown city {:?} (known: {})", args.city, known.join(", ")))
    })?;
    let options = IngestOptions { strict: args.strict, aliases: aliases()? };
    let parsed = ingest::parse_city_dataset(&args.input, city, &options)?;
    warn_report(&parsed.report);
    Ok(parsed.value)
}

fn correlate(args: CorrelateArgs) -> Result<String, Failure> {
    let dataset = load_dataset(&args.dataset)?;
    let factors: Vec<String> = if args.factors.is_empty() {
        [COL_UNTESTED, COL_PUBLIC_COVERAGE]
            .into_iter()
            .chain(dataset.factor_names())
            .map(str::to_string)
            .collect()
    } else {
        args.factors.iter().map(|f| f.trim().to_string()).collect()
    };
    let names: Vec<&str> = factors.iter().map(String::as_str).collect();
    let estimator = match args.estimator {
        EstimatorArg::Pearson => Estimator::Pearson,
        EstimatorArg::Spearman => Estimator::Spearman,
    };
    let results = correlate_factors(&dataset, &names, estimator)?;
    if args.json {
        let doc = serde_json::json!({
            "city": dataset.city().id,
            "estimator": estimator,
            "results": results,
        });
        return serde_json::to_string_pretty(&doc).map(|s| s + "\n").map_err(internal);
    }
    Ok(render::correlation_table(&dataset.city().id, &results))
}

fn score(args: ScoreArgs) -> Result<String, Failure> {
    let dataset = load_dataset(&args.dataset)?;
    let options = ScoreOptions {
        alpha: args.alpha,
        variant: args.variant,
        r_override: args.r_override,
        normalize_weights: args.normalize_weights,
    };
    let ranking = score_city(&dataset, &options)?;
    for warning in ranking.warnings() {
        eprintln!("warning: {warning}");
    }
    let json = serde_json::to_string_pretty(&ranking).map_err(internal)? + "\n";
    if let Some(path) = &args.output {
        std::fs::write(path, &json).map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
    }
    if args.json {
        return Ok(json);
    }
    Ok(render::ranking_table(&ranking))
}

fn allocate_cmd(args: AllocateArgs) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&args.ranking)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.ranking.display())))?;
    let ranking: PriorityRanking = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("invalid ranking file {}: {e}", args.ranking.display())))?;
    let params = AllocationParams { k: args.k, floor: args.floor };
    let plan = allocate(&ranking, args.kits, args.strategy, params)?;
    for warning in plan.warnings() {
        eprintln!("warning: {warning}");
    }
    if args.json {
        return serde_json::to_string_pretty(&plan).map(|s| s + "\n").map_err(internal);
    }
    Ok(render::allocation_table(&plan))
}

fn evaluate(args: EvaluateArgs) -> Result<String, Failure> {
    let aliases = aliases()?;
    let runs = ingest::parse_model_runs(&args.runs, &aliases)?;
    warn_report(&runs.report);
    let targets = ingest::parse_targets(&args.targets, &aliases)?;
    warn_report(&targets.report);
    let report = build_report(&runs.value, &targets.value, args.k)?;
    match args.format {
        Format::Json => serde_json::to_string_pretty(&report).map(|s| s + "\n").map_err(internal),
        Format::Table => Ok(render::accuracy_table(&report, &runs.value)),
    }
}
