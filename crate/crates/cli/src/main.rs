use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use risnoma_cli::{preset, run_to_file, CliError, Experiment, Result, NAMES};

#[derive(Parser)]
#[command(name = "risnoma", version, about = "Secrecy simulations for RIS-aided NOMA downlinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV.
    Run(RunArgs),
    /// List the built-in presets.
    ListPresets,
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// `key=value`, applied after the config; may be repeated.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn load(path: &PathBuf) -> Result<Experiment> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Experiment::parse(&text)
}

fn run(args: RunArgs) -> Result<()> {
    let mut exp = match (&args.config, &args.preset) {
        (Some(path), _) => load(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => unreachable!("clap requires one of --config and --preset"),
    };
    for item in &args.overrides {
        let (key, value) = item.split_once('=').ok_or_else(|| CliError::config(item.as_str(), "expected key=value"))?;
        exp.set(key.trim(), value.trim())?;
    }
    if let Some(seed) = args.seed {
        exp.seed = seed;
    }
    if let Some(trials) = args.trials {
        exp.trials = trials;
    }
    if let Some(out) = args.out {
        exp.output = out;
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config("threads", e.to_string()))?;
    }
    let rows = run_to_file(&exp)?;
    log::info!("wrote {} rows to {}", rows.len(), exp.output.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let result = match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::ListPresets => {
            NAMES.iter().for_each(|n| println!("{n}"));
            Ok(())
        }
        Command::Validate { config } => load(&config).and_then(|e| e.validate()).map(|()| println!("ok")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
