//! `mfnnca`: grow, train and evaluate constructive networks from config files.
//!
//! Exit codes: 0 stopping criteria met (or command succeeded), 1 error,
//! 2 hidden-unit budget exhausted before the criteria were met.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use mfnnca::experiment::{rebuild_summary, run_eval, run_grow, run_sweep, run_train, SplitName};
use mfnnca::{ExperimentConfig, Termination};

const EXIT_BUDGET_EXHAUSTED: u8 = 2;

#[derive(Parser)]
#[command(name = "mfnnca", version, about = "Constructive single-hidden-layer network trainer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a network one hidden unit at a time until the stopping criteria hold.
    Grow {
        config: PathBuf,
        /// Config overrides, e.g. `--train.learning_rate 0.2` or `--stop.strict=true`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
        overrides: Vec<String>,
    },
    /// Train a fixed-size network (net.hidden_units) with plain backpropagation.
    Train {
        config: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
        overrides: Vec<String>,
    },
    /// Evaluate a saved model on one split of the configured dataset.
    Eval {
        model: PathBuf,
        config: PathBuf,
        #[arg(long, default_value = "test")]
        split: String,
        /// Where to write the result record (default: eval_<split>.csv next to the model).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
        overrides: Vec<String>,
    },
    /// Run `grow` for several seeds in parallel, one directory per seed.
    Sweep {
        config: PathBuf,
        /// Comma-separated seeds and inclusive ranges, e.g. `1..10` or `1,5,9`.
        #[arg(long, default_value = "1..10")]
        seeds: String,
        #[arg(long, default_value_t = 4)]
        threads: usize,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
        overrides: Vec<String>,
    },
    /// Rebuild and print summary.txt from a run directory's trace.csv.
    Report { run_dir: PathBuf },
}

fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| anyhow!("unexpected argument `{arg}` (overrides look like `--train.seed 3`)"))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| anyhow!("override `--{key}` is missing a value"))?;
                (key.to_string(), v.clone())
            }
        };
        if !key.contains('.') {
            bail!("unknown option `--{key}`");
        }
        out.push((key, value));
    }
    Ok(out)
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.parse()?, b.parse()?);
                if a > b {
                    bail!("empty seed range `{part}`");
                }
                seeds.extend(a..=b);
            }
            None => seeds.push(part.parse().with_context(|| format!("bad seed `{part}`"))?),
        }
    }
    if seeds.is_empty() {
        bail!("no seeds given");
    }
    Ok(seeds)
}

fn load_config(path: &Path, overrides: &[String]) -> Result<ExperimentConfig> {
    let overrides = parse_overrides(overrides)?;
    ExperimentConfig::load_with_overrides(path, &overrides)
        .with_context(|| format!("loading config {}", path.display()))
}

fn exit_for(termination: Termination) -> ExitCode {
    match termination {
        Termination::CriteriaMet => ExitCode::SUCCESS,
        Termination::BudgetExhausted => ExitCode::from(EXIT_BUDGET_EXHAUSTED),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Grow { config, overrides } => {
            let cfg = load_config(&config, &overrides)?;
            let report = run_grow(&cfg)?;
            print!("{}", std::fs::read_to_string(report.out_dir.join("summary.txt"))?);
            println!(
                "termination: {} after {} phase(s); artifacts in {}",
                report.termination,
                report.phases,
                report.out_dir.display()
            );
            Ok(exit_for(report.termination))
        }
        Command::Train { config, overrides } => {
            let cfg = load_config(&config, &overrides)?;
            for r in run_train(&cfg)? {
                println!(
                    "{:<5} {}/{} {:.2}% mse {:.6}",
                    r.split_name, r.classified, r.total, r.efficiency_percent, r.ms_error
                );
            }
            println!("artifacts in {}", cfg.out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            model,
            config,
            split,
            out,
            overrides,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let split: SplitName = split.parse()?;
            let result = run_eval(&model, &cfg, split)?;
            println!(
                "{}: {}/{} classified, efficiency {:.2}%, ms_error {}",
                result.split_name, result.classified, result.total, result.efficiency_percent, result.ms_error
            );
            let out = out.unwrap_or_else(|| {
                model
                    .parent()
                    .unwrap_or(std::path::Path::new("."))
                    .join(format!("eval_{}.csv", split.as_str()))
            });
            std::fs::write(&out, mfnnca::experiment::eval_csv(&[result]))
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            seeds,
            threads,
            overrides,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let seeds = parse_seeds(&seeds)?;
            let reports = run_sweep(&cfg, &seeds, threads)?;
            print!("{}", std::fs::read_to_string(cfg.out_dir.join("sweep.csv"))?);
            let all_met = reports.iter().all(|(_, r)| r.termination == Termination::CriteriaMet);
            Ok(exit_for(if all_met {
                Termination::CriteriaMet
            } else {
                Termination::BudgetExhausted
            }))
        }
        Command::Report { run_dir } => {
            print!("{}", rebuild_summary(&run_dir)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_both_styles() {
        let args: Vec<String> = ["--train.seed", "3", "--stop.strict=true"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            parse_overrides(&args).unwrap(),
            vec![
                ("train.seed".to_string(), "3".to_string()),
                ("stop.strict".to_string(), "true".to_string())
            ]
        );
        assert!(parse_overrides(&["--train.seed".to_string()]).is_err());
        assert!(parse_overrides(&["seed".to_string()]).is_err());
        assert!(parse_overrides(&["--verbose".to_string(), "1".to_string()]).is_err());
    }

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1..3,7").unwrap(), vec![1, 2, 3, 7]);
        assert!(parse_seeds("3..1").is_err());
        assert!(parse_seeds("").is_err());
    }
}
