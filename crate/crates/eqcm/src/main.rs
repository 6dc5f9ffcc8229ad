use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eqcm::artifacts::write_artifacts;
use eqcm::config::{assemble, AlphabetSpec, ConfigSources, SeedAxis, Task};
use eqcm::core::encoding::{default_aggregation, fit_max_entropy_bins};
use eqcm::evaluate::metrics_from_csv;
use eqcm::sweep::run_sweep;
use eqcm::wordlist::load_word_list;
use eqcm::{run_experiment, RunError, RunResult};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "eqcm",
    version,
    about = "Extreme quantum cognition machine simulator and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its artifacts.
    Run {
        /// JSON config merged over the preset.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Preset: task1, task2, task2_hw or custom.
        #[arg(long)]
        task: Option<Task>,
        /// Run k seeds (shifted by 0..k) and report median/IQR.
        #[arg(long)]
        seeds: Option<u64>,
        /// Seeds varied by --seeds.
        #[arg(long, value_enum, default_value_t = SeedAxis::Both)]
        vary: SeedAxis,
        #[arg(long, env = "EQCM_OUT_DIR")]
        out: Option<PathBuf>,
        /// Shorthand for `--set reservoir.seed=<n>`.
        #[arg(long)]
        goe_seed: Option<u64>,
        /// Override a config key, e.g. `--set attention.g1=0`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Fit max-entropy bins on a word list and print them as JSON.
    EncodeFit {
        #[arg(long)]
        words: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long, default_value_t = 7)]
        length: usize,
        /// Disable the default {ò→o, à→a} aggregation.
        #[arg(long)]
        no_aggregation: bool,
    },
    /// Score a CSV with `prediction` and `truth` columns.
    Metrics {
        #[arg(long)]
        predictions: PathBuf,
        /// Label of the positive class (default: the larger label).
        #[arg(long, allow_hyphen_values = true)]
        positive: Option<String>,
    },
}

fn run(cli: Cli) -> RunResult<serde_json::Value> {
    match cli.command {
        Command::Run {
            config,
            task,
            seeds,
            vary,
            out,
            goe_seed,
            set,
        } => {
            let mut overrides = Vec::new();
            if let Some(s) = goe_seed {
                overrides.push(("reservoir.seed".to_string(), s.to_string()));
            }
            for kv in set {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| RunError::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
                overrides.push((k.to_string(), v.to_string()));
            }
            let cfg = assemble(&ConfigSources {
                task,
                file: config,
                overrides,
                output_dir: out,
            })?;
            let dir = cfg.output_dir.clone();
            match seeds {
                Some(k) => {
                    let report = run_sweep(&cfg, vary, k, Some(&dir))?;
                    Ok(json!({"output_dir": dir, "sweep": report}))
                }
                None => {
                    let report = run_experiment(&cfg)?;
                    let files = write_artifacts(&report, &dir)?;
                    Ok(json!({
                        "output_dir": dir,
                        "artifacts": files,
                        "train": report.train.metrics,
                        "test": report.test.metrics,
                    }))
                }
            }
        }
        Command::EncodeFit {
            words,
            label,
            length,
            no_aggregation,
        } => {
            let alphabet = AlphabetSpec::Italian.build()?;
            let list = load_word_list(&words, length, &alphabet, &label)?;
            let aggregation = if no_aggregation {
                Default::default()
            } else {
                default_aggregation()
            };
            let p = fit_max_entropy_bins(&list.list.words, &alphabet, &aggregation, &label, None)?;
            Ok(serde_json::to_value(p)?)
        }
        Command::Metrics { predictions, positive } => Ok(serde_json::to_value(metrics_from_csv(
            &predictions,
            positive.as_deref(),
        )?)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("serializable");
            // A closed stdout (e.g. piped into `head`) is not a failure of the run.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let err = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            eprintln!("{err}");
            ExitCode::FAILURE
        }
    }
}
