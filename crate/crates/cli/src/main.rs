use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinmarket_cli::config::{parse_config, parse_sweep, RunArgs};
use spinmarket_cli::plot::{cmd_plot, FigureKind, PlotRequest};
use spinmarket_cli::record::CONFIG_SNAPSHOT_FILE;
use spinmarket_cli::reproduce::{reproduce_many, Recipe, ReproduceOptions};
use spinmarket_cli::simulate::cmd_simulate_batch;
use spinmarket_cli::{analyze, CliError, Result};

/// Three-state spin market simulator.
#[derive(Parser)]
#[command(name = "spinmarket", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the model and write series, statistics and a run record.
    Simulate(RunArgs),
    /// Compute histograms, autocorrelation and moments from a magnetization series.
    Analyze {
        /// A run directory (holding magnetization.csv) or a `t,value` file.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Render an SVG figure from run and analysis directories.
    Plot {
        #[arg(long, value_enum)]
        figure: FigureKind,
        /// Directory with artifacts; repeat to overlay or stack several runs.
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        /// Histogram lags to include (all when omitted).
        #[arg(long)]
        tau: Vec<usize>,
        /// Multiply histogram k by 10^k.
        #[arg(long)]
        shift: bool,
        /// Plot histograms against raw rather than standardized returns.
        #[arg(long)]
        raw: bool,
        /// Output file; defaults to `<first input>/<figure>.svg`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a figure recipe end to end.
    Reproduce {
        #[arg(value_enum)]
        recipe: Vec<Recipe>,
        /// Run every recipe.
        #[arg(long, conflicts_with = "recipe")]
        all: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        thermalization: Option<u64>,
        /// Run k of a recipe uses seed + k.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let cfgs = parse_sweep(&args)?;
            for rec in cmd_simulate_batch(&cfgs)? {
                eprintln!(
                    "seed {} ({:?}), {:.2} s, {} files",
                    rec.seed,
                    rec.seed_source,
                    rec.duration_secs,
                    rec.checksums.len()
                );
            }
            for cfg in &cfgs {
                println!("{}", cfg.output_dir.display());
            }
        }
        Command::Analyze { input, mut args } => {
            if args.config.is_none() && input.join(CONFIG_SNAPSHOT_FILE).is_file() {
                args.config = Some(input.join(CONFIG_SNAPSHOT_FILE));
            }
            if args.out.is_none() {
                args.out = Some(default_out(&input));
            }
            let cfg = parse_config(&args)?;
            for path in analyze::cmd_analyze(&input, &cfg)? {
                println!("{}", path.display());
            }
        }
        Command::Plot { figure, input, tau, shift, raw, out } => {
            let output = out.unwrap_or_else(|| {
                let name = format!("{figure:?}").to_lowercase();
                input[0].join(format!("{name}.svg"))
            });
            let path = cmd_plot(&PlotRequest { kind: figure, inputs: input, taus: tau, shift, raw, output })?;
            println!("{}", path.display());
        }
        Command::Reproduce { recipe, all, out, steps, thermalization, seed } => {
            let recipes = if all || recipe.is_empty() { Recipe::ALL.to_vec() } else { recipe };
            let defaults = ReproduceOptions::default();
            let opts = ReproduceOptions {
                out,
                steps: steps.unwrap_or(defaults.steps),
                thermalization: thermalization.unwrap_or(defaults.thermalization),
                base_seed: seed.unwrap_or(defaults.base_seed),
            };
            if opts.steps < 4 {
                return Err(CliError::Config(format!("--steps: must be >= 4 (got {})", opts.steps)));
            }
            for report in reproduce_many(&recipes, &opts)? {
                println!("{}", report.figure.display());
            }
        }
    }
    Ok(())
}

fn default_out(input: &Path) -> PathBuf {
    if input.is_dir() {
        input.to_path_buf()
    } else {
        input.parent().map(Path::to_path_buf).unwrap_or_default()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
