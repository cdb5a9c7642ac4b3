use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use floodfreq::simulation::{default_models, DEFAULT_RETURN_PERIODS, DEFAULT_RUNS};
use floodfreq::{build_scenario, run_experiment, ExperimentConfig, ModelKind};
use floodfreq_cli::quantile::{ComponentParams, ModelParams};
use floodfreq_cli::{output, quantile, table1};
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

/// Flood-frequency model benchmark: TMPS mixture vs. AMS/GEV vs.
/// POT/Poisson-Pareto under L-moment estimation.
#[derive(Parser)]
#[command(name = "floodfreq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one benchmark cell and write the tidy result table.
    Run(RunArgs),
    /// Reproduce the reference comparison table (selected cells, T=100).
    Table1(Table1Args),
    /// Evaluate return levels of an explicitly parameterized model.
    Quantile(QuantileArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario id (1..=5).
    #[arg(long, required_unless_present = "config_file", conflicts_with = "config_file")]
    scenario: Option<u8>,
    /// Number of flood types with extreme parameter values (0..=5).
    #[arg(long, required_unless_present = "config_file", conflicts_with = "config_file")]
    n_extreme: Option<u8>,
    /// Record length in years.
    #[arg(long, required_unless_present = "config_file", conflicts_with = "config_file")]
    years: Option<u32>,
    /// Monte Carlo runs per cell. Overrides the config file when both are given.
    #[arg(long)]
    runs: Option<u32>,
    /// Master seed; every per-run stream derives from it. Precedence:
    /// this flag, then the config file, then FLOODFREQ_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated models (TMPS, AMS, POT). Defaults to TMPS,AMS,POT
    /// for scenario 1 and TMPS,AMS otherwise.
    #[arg(long, value_delimiter = ',', conflicts_with = "config_file")]
    models: Option<Vec<String>>,
    /// Comma-separated return periods in years.
    #[arg(long, value_delimiter = ',', conflicts_with = "config_file")]
    return_periods: Option<Vec<f64>>,
    /// Full experiment configuration as JSON (the object embedded in every
    /// results file); replaces the scenario flags.
    #[arg(long)]
    config_file: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Execute runs on a single thread (output is identical either way).
    #[arg(long)]
    serial: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, env = "FLOODFREQ_SEED", default_value_t = 42)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuantileArgs {
    /// Model family to evaluate (tmps, ams, pot).
    #[arg(long)]
    model: Option<String>,
    /// JSON file holding the parameterization (alternative to flags).
    #[arg(long, conflicts_with = "model")]
    params_file: Option<PathBuf>,
    /// GPD/GEV shape.
    #[arg(long)]
    shape: Option<f64>,
    /// GPD/GEV scale.
    #[arg(long)]
    scale: Option<f64>,
    /// GEV location (AMS model).
    #[arg(long)]
    location: Option<f64>,
    /// GPD threshold (POT model).
    #[arg(long)]
    threshold: Option<f64>,
    /// Mean annual number of exceedances (POT model).
    #[arg(long)]
    rate: Option<f64>,
    /// TMPS component as "shape,scale,threshold,p0"; repeatable.
    #[arg(long)]
    component: Vec<String>,
    /// Comma-separated return periods in years.
    #[arg(long, value_delimiter = ',')]
    return_periods: Option<Vec<f64>>,
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var("FLOODFREQ_SEED") {
        Ok(text) => {
            let seed = text
                .parse::<u64>()
                .with_context(|| format!("FLOODFREQ_SEED '{text}' is not a valid seed"))?;
            Ok(Some(seed))
        }
        Err(_) => Ok(None),
    }
}

fn run_command(args: &RunArgs) -> Result<()> {
    let mut config = match &args.config_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .context("parsing --config-file")?
        }
        None => {
            let scenario_id = args.scenario.expect("required by clap");
            let scenario = build_scenario(scenario_id, args.n_extreme.expect("required by clap"))
                .map_err(|e| anyhow::anyhow!("{e}"))
                .context("invalid --scenario/--n-extreme combination")?;
            let models = match &args.models {
                Some(names) => names
                    .iter()
                    .map(|s| ModelKind::from_str(s))
                    .collect::<floodfreq::Result<Vec<_>>>()
                    .map_err(|e| anyhow::anyhow!("{e}"))?,
                None => default_models(scenario_id),
            };
            ExperimentConfig {
                scenario,
                years: args.years.expect("required by clap"),
                return_periods: args
                    .return_periods
                    .clone()
                    .unwrap_or_else(|| DEFAULT_RETURN_PERIODS.to_vec()),
                runs: DEFAULT_RUNS,
                master_seed: env_seed()?.unwrap_or(42),
                models,
            }
        }
    };
    if let Some(runs) = args.runs {
        config.runs = runs;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    config
        .validate()
        .map_err(|e| anyhow::anyhow!("{e}"))
        .context("configuration rejected")?;

    let rows = run_experiment(&config, !args.serial).map_err(|e| anyhow::anyhow!("{e}"))?;
    let text = match args.format {
        Format::Csv => output::to_csv(&config, &rows),
        Format::Json => output::to_json(&config, &rows),
    };
    emit(&args.out, &text)
}

fn table1_command(args: &Table1Args) -> Result<()> {
    let text = table1::run(args.seed, None)?;
    emit(&args.out, &text)
}

fn quantile_command(args: &QuantileArgs) -> Result<()> {
    let params = match (&args.params_file, &args.model) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).context("parsing --params-file")?
        }
        (None, Some(model)) => params_from_flags(model, args)?,
        (None, None) => bail!("supply either --model with parameter flags or --params-file"),
    };
    let ts = args
        .return_periods
        .clone()
        .unwrap_or_else(|| DEFAULT_RETURN_PERIODS.to_vec());
    let levels = quantile::evaluate(&params, &ts)?;
    print!("{}", quantile::render(&levels));
    Ok(())
}

fn params_from_flags(model: &str, args: &QuantileArgs) -> Result<ModelParams> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| anyhow::anyhow!("--{name} is required for model {model}"))
    };
    match model.to_ascii_uppercase().as_str() {
        "AMS" => Ok(ModelParams::Ams {
            shape: need(args.shape, "shape")?,
            scale: need(args.scale, "scale")?,
            location: need(args.location, "location")?,
        }),
        "POT" => Ok(ModelParams::Pot {
            shape: need(args.shape, "shape")?,
            scale: need(args.scale, "scale")?,
            threshold: need(args.threshold, "threshold")?,
            rate: need(args.rate, "rate")?,
        }),
        "TMPS" => {
            if args.component.is_empty() {
                bail!("model tmps needs at least one --component \"shape,scale,threshold,p0\"");
            }
            let components = args
                .component
                .iter()
                .map(|spec| {
                    let parts: Vec<f64> = spec
                        .split(',')
                        .map(|p| p.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .with_context(|| format!("parsing --component '{spec}'"))?;
                    anyhow::ensure!(
                        parts.len() == 4,
                        "--component needs exactly 4 numbers, got '{spec}'"
                    );
                    Ok(ComponentParams {
                        shape: parts[0],
                        scale: parts[1],
                        threshold: parts[2],
                        p0: parts[3],
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ModelParams::Tmps { components })
        }
        other => bail!("unknown model '{other}' (expected tmps, ams or pot)"),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Table1(args) => table1_command(args),
        Command::Quantile(args) => quantile_command(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
