use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hetnet_cli::{parse_config, run_sweep_to_file, run_validation, Axis, CliError, CliResult, ParsedConfig, SweepSpec};
use hetnet_core::montecarlo::run_experiment_with;
use hetnet_core::{Execution, Scheme};

#[derive(Parser, Debug)]
#[command(
    name = "hetnet",
    version,
    about = "Multi-tier cellular network association experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep alpha or the mean candidate-set size and write CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the built-in model checks; prints one JSON object per check.
    Validate,
    /// Run one experiment and print its summary as JSON.
    Single {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(clap::Args, Debug)]
struct Overrides {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
    scheme: SchemeArg,
    /// Run trials on one thread.
    #[arg(long)]
    serial: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Conventional,
    Proposed,
    Both,
}

impl Overrides {
    fn schemes(&self) -> &'static [Scheme] {
        match self.scheme {
            SchemeArg::Conventional => &[Scheme::MaxPower],
            SchemeArg::Proposed => &[Scheme::InterferenceMin],
            SchemeArg::Both => &Scheme::ALL,
        }
    }

    fn execution(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::Parallel
        }
    }

    fn apply(&self, parsed: &mut ParsedConfig) -> CliResult<()> {
        if let Some(trials) = self.trials {
            parsed.experiment.trials = trials;
        }
        if let Some(seed) = self.seed {
            parsed.experiment.seed = seed;
        }
        parsed
            .experiment
            .validate()
            .map_err(|e| CliError::Validation(e.to_string()))
    }
}

fn load(path: &Path, overrides: &Overrides) -> CliResult<ParsedConfig> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut parsed = parse_config(&text)?;
    overrides.apply(&mut parsed)?;
    Ok(parsed)
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Sweep { config, out, overrides } => {
            let parsed = load(&config, &overrides)?;
            let (axis, values) = match parsed.sweep {
                Some(s) => (s.axis, s.values),
                None => (Axis::Alpha, vec![parsed.experiment.config.alpha()]),
            };
            let sweep = SweepSpec::new(axis, values, parsed.experiment, out)?;
            run_sweep_to_file(&sweep, overrides.schemes(), overrides.execution())?;
            Ok(true)
        }
        Command::Validate => {
            let report = run_validation();
            for check in &report.checks {
                println!("{}", check.to_json_line());
            }
            Ok(report.all_passed())
        }
        Command::Single { config, overrides } => {
            let parsed = load(&config, &overrides)?;
            for &scheme in overrides.schemes() {
                let summary = run_experiment_with(&parsed.experiment.with_scheme(scheme), overrides.execution())?;
                println!("{}", serde_json::to_string(&summary).expect("summaries serialize"));
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let reason = first
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error[usage]: {reason}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{}", e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
