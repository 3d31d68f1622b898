//! Batch front door: `analyze`, `simulate`, and `sweep` subcommands over
//! the CSV dataset schema.

mod analyze;
mod dataset;
mod fmt;
mod pipeline;
mod report;
mod simulate;
mod sweep_cmd;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use confident_crowd::filter::ExtractionMethod;
use confident_crowd::model::Aggregator;
use confident_crowd::sim::{SimConfig, WeightMixture};
use confident_crowd::weights::Condition;

const SEED_ENV_VAR: &str = "CONFIDENT_CROWD_SEED";

#[derive(Parser)]
#[command(name = "confident-crowd", version, about = "Bias-corrected collective estimation: \
model crowds as log-normal populations, recover per-subject social weights from two-trial data, \
and aggregate only the socially-resistant subjects.")]
struct Cli {
    /// RNG seed (simulate only; falls back to $CONFIDENT_CROWD_SEED, then entropy)
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a dataset: aggregates, weights, sweep, report and plot data
    Analyze(AnalyzeArgs),
    /// Generate a synthetic two-trial dataset
    Simulate(SimulateArgs),
    /// Emit the omega sweep curve for one question
    Sweep(SweepArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Estimates CSV (group_id,subject_id,question_id,condition,trial,estimate)
    #[arg(long)]
    data: PathBuf,
    /// Questions CSV (question_id,text,truth)
    #[arg(long)]
    questions: PathBuf,
    /// Downgrade row-level validation failures to warnings
    #[arg(long)]
    skip_invalid: bool,
}

#[derive(Args)]
struct GridArgs {
    /// Largest omega threshold
    #[arg(long, default_value_t = 2.0)]
    omega_max: f64,
    /// Smallest omega threshold
    #[arg(long, default_value_t = 0.02)]
    omega_min: f64,
    /// Number of log-spaced thresholds
    #[arg(long, default_value_t = 41)]
    omega_steps: usize,
    /// Minimum selected subjects for a feasible estimate
    #[arg(long, default_value_t = 5)]
    min_n: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AggregatorArg {
    Geomean,
    Median,
}

impl From<AggregatorArg> for Aggregator {
    fn from(a: AggregatorArg) -> Self {
        match a {
            AggregatorArg::Geomean => Aggregator::GeometricMean,
            AggregatorArg::Median => Aggregator::Median,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Smallest,
    Trend,
}

impl From<MethodArg> for ExtractionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Smallest => ExtractionMethod::SmallestFeasibleOmega,
            MethodArg::Trend => ExtractionMethod::TrendIntercept,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConditionArg {
    Control,
    Mean,
    Full,
}

impl From<ConditionArg> for Condition {
    fn from(c: ConditionArg) -> Self {
        match c {
            ConditionArg::Control => Condition::Control,
            ConditionArg::Mean => Condition::AggregatedMean,
            ConditionArg::Full => Condition::FullInformation,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Subgroup aggregator for the headline confident estimate
    #[arg(long, value_enum, default_value = "geomean")]
    aggregator: AggregatorArg,
    /// Extraction rule for the headline confident estimate
    #[arg(long, value_enum, default_value = "smallest")]
    method: MethodArg,
    /// Include a per-group breakdown in the report
    #[arg(long)]
    per_group: bool,
    /// Output directory for report.json and plot CSVs
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of groups
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=9999))]
    groups: u32,
    /// Subjects per group
    #[arg(long, default_value_t = SimConfig::DEFAULT_GROUP_SIZE as u32,
          value_parser = clap::value_parser!(u32).range(2..=99))]
    group_size: u32,
    /// True answer of the simulated question
    #[arg(long, default_value_t = 1000.0)]
    truth: f64,
    /// Log-domain diversity of private estimates
    #[arg(long, default_value_t = 0.8)]
    sigma_p: f64,
    /// Knowledge-confidence coupling (log-bias per unit of clamped weight)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    bias_slope: f64,
    /// Probability of an exact-zero social weight
    #[arg(long, default_value_t = 0.15)]
    p_zero: f64,
    /// Probability of an exact-one social weight
    #[arg(long, default_value_t = 0.10)]
    p_one: f64,
    /// Probability of an out-of-range weight in [-0.3, 0) or (1, 1.3]
    #[arg(long, default_value_t = 0.05)]
    p_out: f64,
    /// Beta shape of the interior weight distribution
    #[arg(long, default_value_t = 2.625)]
    interior_shape: f64,
    /// Social condition of every group
    #[arg(long, value_enum, default_value = "mean")]
    condition: ConditionArg,
    /// Question id used in the emitted files
    #[arg(long, default_value = "q1")]
    question_id: String,
    /// Question text used in the emitted files
    #[arg(long, default_value = "Synthetic estimation question")]
    question_text: String,
    /// Output directory for data.csv, questions.csv, weights_true.csv
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Question to sweep (defaults to the only question, if unique)
    #[arg(long)]
    question: Option<String>,
    /// Output directory for the sweep CSV
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    if let Some(seed) = flag {
        return seed;
    }
    if let Ok(raw) = std::env::var(SEED_ENV_VAR) {
        match raw.parse() {
            Ok(seed) => return seed,
            Err(_) => eprintln!("warning: ignoring unparseable {SEED_ENV_VAR}=`{raw}`"),
        }
    }
    let seed = rand::thread_rng().gen();
    eprintln!("note: no seed given; drew {seed} from entropy");
    seed
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => {
            let dataset =
                dataset::load_dataset(&args.data.data, &args.data.questions, args.data.skip_invalid)?;
            analyze::run_analyze(
                &dataset,
                &analyze::AnalyzeOptions {
                    omega_max: args.grid.omega_max,
                    omega_min: args.grid.omega_min,
                    omega_steps: args.grid.omega_steps,
                    min_n: args.grid.min_n,
                    aggregator: args.aggregator.into(),
                    method: args.method.into(),
                    per_group: args.per_group,
                    out_dir: args.out_dir,
                },
            )
        }
        Command::Simulate(args) => {
            let config = SimConfig {
                truth: args.truth,
                sigma_p: args.sigma_p,
                bias_slope: args.bias_slope,
                mixture: WeightMixture {
                    p_zero: args.p_zero,
                    p_one: args.p_one,
                    p_out: args.p_out,
                    interior_shape: args.interior_shape,
                },
                n_groups: args.groups as usize,
                group_size: args.group_size as usize,
                condition: args.condition.into(),
                seed: resolve_seed(cli.seed),
            };
            simulate::run_simulate(&simulate::SimulateOptions {
                config,
                question_id: args.question_id,
                question_text: args.question_text,
                out_dir: args.out_dir,
            })
            .map(|_| ())
        }
        Command::Sweep(args) => {
            let dataset =
                dataset::load_dataset(&args.data.data, &args.data.questions, args.data.skip_invalid)?;
            sweep_cmd::run_sweep(
                &dataset,
                &sweep_cmd::SweepOptions {
                    question: args.question,
                    omega_max: args.grid.omega_max,
                    omega_min: args.grid.omega_min,
                    omega_steps: args.grid.omega_steps,
                    min_n: args.grid.min_n,
                    out_dir: args.out_dir,
                },
            )
            .map(|_| ())
        }
    }
}
