use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use eprsim::models::EightPartition;
use eprsim_cli::sweep::{sweep, DegreeRange, SweepOptions};
use eprsim_cli::verify::{self, DerivationOptions, VerifyOutcome};
use eprsim_cli::{run_experiment, write_outputs, CliError, CliResult, ExperimentConfig, ModelKind};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "eprsim", version, about = "EPR correlation experiments under local hidden-variable models")]
struct Cli {
    /// Master seed, overriding the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trials per scenario, overriding the config file.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Print the result as JSON instead of text.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Print the result as CSV instead of text.
    #[arg(long, global = true)]
    csv: bool,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Directory for the report files, overriding the config.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Tabulate correlations and inequality margins over an angle grid.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum Verify {
    /// Sweep |−cos θab + cos θac| ≤ 1 − cos θab cos θac over [0, π]².
    AppendixD {
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Additional uniformly random angle pairs.
        #[arg(long, default_value_t = 100_000)]
        random: u64,
    },
    /// Replay Bell's derivation on sampled outcome records.
    Derivation {
        #[arg(long, value_enum)]
        model: ModelKind,
        /// Number of records.
        #[arg(short = 'n', default_value_t = 100_000)]
        n: u64,
        /// Restrict the eight-partition model to one cell (1-8).
        #[arg(long)]
        cell: Option<u32>,
        #[arg(long, default_value_t = 60.0)]
        theta_ab: f64,
        #[arg(long, default_value_t = 120.0)]
        theta_ac: f64,
    },
    /// Run the full invariant suite.
    Invariants,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// START:STOP:STEP in degrees.
    #[arg(long)]
    theta_ab_range: DegreeRange,
    #[arg(long)]
    theta_ac_range: DegreeRange,
    #[arg(long)]
    out: PathBuf,
    /// Eight comma-separated cell measures for the eight-partition model.
    #[arg(long)]
    measures: Option<String>,
}

fn parse_measures(text: &str) -> CliResult<EightPartition> {
    let values: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--measures: {e}")))?;
    let array: [f64; 8] = values
        .try_into()
        .map_err(|v: Vec<f64>| CliError::Usage(format!("--measures needs 8 values, got {}", v.len())))?;
    EightPartition::new(array).map_err(|e| CliError::Usage(format!("--measures: {e}")))
}

fn print_outcome(cli: &Cli, outcome: &VerifyOutcome) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&outcome.json).expect("json value"));
    } else {
        print!("{}", outcome.text);
    }
}

fn verdict(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn execute(cli: &Cli) -> CliResult<ExitCode> {
    let shards = usize::from(cli.workers);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Run { config, out_dir } => {
            let mut cfg = ExperimentConfig::load(config)?;
            if let Some(s) = cli.seed {
                cfg.master_seed = s;
            }
            if let Some(t) = cli.trials {
                if t == 0 {
                    return Err(CliError::Config("trials must be at least 1".into()));
                }
                cfg.trials = t;
            }
            let report = run_experiment(&cfg, shards)?;
            let dir = out_dir.clone().unwrap_or_else(|| cfg.output_dir.clone());
            let written = write_outputs(&report, &dir, &cfg.formats)?;
            if cli.json {
                print!("{}", report.to_json());
            } else if cli.csv {
                print!("{}", report.to_csv());
            } else {
                print!("{}", report.summary());
                for path in written {
                    println!("wrote {}", path.display());
                }
            }
            Ok(verdict(report.passed()))
        }
        Command::Verify { what } => {
            let outcome = match what {
                Verify::AppendixD { grid, random } => verify::appendix_d(*grid, *random, seed)?,
                Verify::Derivation {
                    model,
                    n,
                    cell,
                    theta_ab,
                    theta_ac,
                } => verify::derivation(&DerivationOptions {
                    model: *model,
                    trials: cli.trials.unwrap_or(*n),
                    cell: *cell,
                    theta_ab_deg: *theta_ab,
                    theta_ac_deg: *theta_ac,
                    master_seed: seed,
                })?,
                Verify::Invariants => verify::invariants(seed),
            };
            print_outcome(cli, &outcome);
            Ok(verdict(outcome.passed))
        }
        Command::Sweep(args) => {
            let partition = args.measures.as_deref().map(parse_measures).transpose()?;
            let table = sweep(&SweepOptions {
                model: args.model,
                theta_ab: args.theta_ab_range,
                theta_ac: args.theta_ac_range,
                partition,
                trials: cli.trials.unwrap_or(10_000),
                master_seed: seed,
                shards,
            })?;
            eprsim_cli::output::write_atomic(&args.out, table.as_bytes())?;
            if cli.csv {
                print!("{table}");
            } else {
                println!("wrote {} rows to {}", table.lines().count() - 1, args.out.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    // a second initialization can only fail if a pool already exists
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(usize::from(cli.workers))
        .build_global();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
