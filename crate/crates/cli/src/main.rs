use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ftql_cli::canned::EXAMPLE_NAMES;
use ftql_cli::figure::reproduce_figure;
use ftql_cli::replay::replay_example;
use ftql_cli::run::{output_dir, run_experiment, DEFAULT_BINS};
use ftql_cli::{load_experiment, CliError};

/// Follow-the-quantized-leader learning in finite games.
#[derive(Debug, Parser)]
#[command(name = "ftql", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every trajectory of an experiment and write its artifacts.
    Run {
        /// Experiment config (TOML, or JSON with a .json extension).
        config: PathBuf,
        /// Override a config value, e.g. `--set quantizer.error=4`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output directory (default: the config's output.dir, else runs/<hash>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Heat-map bins per axis (2x2 games only).
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        /// Worker threads; 1 runs serially. Defaults to all cores.
        #[arg(long, env = "FTQL_WORKERS")]
        workers: Option<usize>,
    },
    /// Replay one of the bundled deterministic examples, or all of them.
    ReplayExample {
        #[arg(value_parser = example_name)]
        name: String,
    },
    /// Rerun the three-grid bandit experiment and write its heat maps.
    ReproduceFigure {
        #[arg(long, default_value = "figure")]
        out_dir: PathBuf,
        /// Scales the trajectory count, horizon and dwell; must lie in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        #[arg(long, env = "FTQL_WORKERS")]
        workers: Option<usize>,
    },
    /// Check a config without running it.
    ValidateConfig {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn example_name(s: &str) -> Result<String, String> {
    if s == "all" || EXAMPLE_NAMES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of {}, or all", EXAMPLE_NAMES.join(", ")))
    }
}

fn warn(warning: Option<String>) {
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Run { config, set, out, bins, workers } => {
            let experiment = load_experiment(&config, &set)?;
            warn(experiment.schedule.validity_warning());
            let (summary, files) = run_experiment(&experiment, workers, bins)?;
            let dir = output_dir(&experiment, out);
            files.write_to(&dir)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            eprintln!("wrote {} files to {}", files.names().count(), dir.display());
            Ok(true)
        }
        Command::ReplayExample { name } => {
            let names: Vec<&str> = if name == "all" { EXAMPLE_NAMES.to_vec() } else { vec![name.as_str()] };
            let mut all_pass = true;
            for n in names {
                let report = replay_example(n)?;
                println!("{report}");
                all_pass &= report.pass;
            }
            Ok(all_pass)
        }
        Command::ReproduceFigure { out_dir, scale, bins, workers } => {
            let (summary, files) = reproduce_figure(scale, bins, workers)?;
            warn(summary.schedule_warning.clone());
            files.write_to(&out_dir)?;
            for p in &summary.panels {
                println!(
                    "l = {}: {} runs, horizon {}, converged {:.3}, in a neighborhood at stage 50 {:.3}",
                    p.ell, p.trajectories, p.horizon, p.converged_fraction, p.early_fraction
                );
            }
            eprintln!("wrote {} files to {}", files.names().count(), out_dir.display());
            Ok(true)
        }
        Command::ValidateConfig { config, set } => {
            let experiment = load_experiment(&config, &set)?;
            warn(experiment.schedule.validity_warning());
            let report = serde_json::json!({
                "valid": true,
                "config_hash": experiment.config_hash,
                "schedule_valid": experiment.schedule.is_valid(),
                "strict_equilibria": experiment
                    .game
                    .enumerate_strict_nash()
                    .map(|eqs| eqs.iter().map(|e| experiment.game.profile_label(e)).collect::<Vec<_>>())
                    .unwrap_or_default(),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
