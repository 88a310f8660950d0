use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use freelunch_cli::acceptance::{verify_all, Profile};
use freelunch_cli::config::{parse_config, ALL_EXPERIMENTS};
use freelunch_cli::runner::run_experiment;
use freelunch_core::learners::builtin_learner_names;

/// Exact-arithmetic verification lab for learning-theoretic symmetry claims.
#[derive(Parser)]
#[command(name = "freelunch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured experiment and write its reports.
    Run {
        /// TOML experiment configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: the config's `out_dir`, or `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's random seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = all available cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the full acceptance checklist.
    VerifyAll {
        /// `default` for the stated scales, `small` for a quick smoke run.
        #[arg(long, default_value = "default")]
        profile: String,
    },
    /// List the known experiments and learner registry.
    List,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            seed,
            workers,
        } => cmd_run(&config, out, seed, workers),
        Command::VerifyAll { profile } => cmd_verify_all(&profile),
        Command::List => {
            cmd_list();
            Ok(true)
        }
    }
}

fn cmd_run(
    config_path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<bool> {
    let mut config = parse_config(config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(workers) = workers {
        config.workers = workers;
    }
    if let Some(out) = out {
        config.out_dir = out;
    }
    if config.workers > 0 {
        // All exact reductions are order-independent, so the worker count
        // only affects wall time, never results.
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build_global()
            .ok();
    }

    let started = Instant::now();
    let bundle = run_experiment(&config)?;
    let elapsed = started.elapsed();

    std::fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("creating {}", config.out_dir.display()))?;
    for (name, contents) in &bundle.files {
        std::fs::write(config.out_dir.join(name), contents)
            .with_context(|| format!("writing {name}"))?;
    }
    let mut verdict_text = String::new();
    for verdict in &bundle.verdicts {
        let line = verdict.line();
        println!("{line}");
        let _ = writeln!(verdict_text, "{line}");
    }
    std::fs::write(config.out_dir.join("verdicts.txt"), &verdict_text)
        .context("writing verdicts.txt")?;

    // Wall time lives only here, never in the report files.
    let metadata = format!(
        "experiment,{}\nseed,{}\nworkers,{}\nelapsed_ms,{}\n",
        config.experiment.name(),
        config.seed,
        config.workers,
        elapsed.as_millis()
    );
    std::fs::write(config.out_dir.join("run.txt"), metadata).context("writing run.txt")?;

    Ok(bundle.all_pass())
}

fn cmd_verify_all(profile: &str) -> Result<bool> {
    let profile = Profile::parse(profile)?;
    let verdicts = verify_all(profile);
    for verdict in &verdicts {
        println!("{}", verdict.line());
    }
    let passed = verdicts.iter().filter(|v| v.pass).count();
    println!("summary,{passed}/{} criteria passed", verdicts.len());
    Ok(passed == verdicts.len())
}

fn cmd_list() {
    println!("experiments:");
    for name in ALL_EXPERIMENTS {
        println!("  {name}");
    }
    println!("learners:");
    for name in builtin_learner_names() {
        println!("  {name}");
    }
}
