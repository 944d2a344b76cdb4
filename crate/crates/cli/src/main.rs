use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use hgrisk_cli::*;
use hgrisk_core::{Condition, ExperimentConfig};

/// Heterogeneous graph pre-training and default-risk propagation pipeline.
#[derive(Parser)]
#[command(name = "hgrisk", version)]
struct Cli {
    /// Flat `section.key=value` experiment config; built-in defaults if absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Pipeline seed. Stage commands default to the first configured seed;
    /// for `run-all` it replaces the seed list.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress progress messages.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthetic graph, default cascade and task features.
    Generate,
    /// Masked-autoencoder pre-training; writes a checkpoint and loss log.
    Pretrain {
        /// `hgmae` (all loss terms) or `eta0` (full-graph term only).
        #[arg(long, default_value = "hgmae")]
        variant: Condition,
    },
    /// Node embeddings from a pre-training checkpoint.
    Embed {
        #[arg(long, default_value = "hgmae")]
        variant: Condition,
    },
    /// Labeled, balanced and split propagation pairs.
    Pairs,
    /// Fit the pair classifier for one feature condition.
    Train {
        /// `task_only`, `hgmae` or `eta0`.
        #[arg(long)]
        condition: Condition,
    },
    /// Score the test pairs for one feature condition.
    Evaluate {
        #[arg(long)]
        condition: Condition,
    },
    /// Every stage for every seed, then `results.tsv` and `summary.txt`.
    RunAll,
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg: ExperimentConfig = load_config(cli.config.as_deref())?;
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    let seed = cli.seed.unwrap_or(cfg.seeds[0]);
    let dir = SeedDir::new(&cfg.output_dir, seed);
    let quiet = cli.quiet;
    let log = move |msg: String| {
        if !quiet {
            eprintln!("{msg}");
        }
    };
    match cli.command {
        Command::Generate => {
            cmd_generate(&cfg, &dir)?;
            log(format!("wrote {}", dir.root.display()));
        }
        Command::Pretrain { variant } => {
            let (first, last) = cmd_pretrain(&cfg, &dir, variant)?;
            log(format!("{variant}: loss {first:.6} -> {last:.6}"));
        }
        Command::Embed { variant } => cmd_embed(&cfg, &dir, variant)?,
        Command::Pairs => {
            let (train, test) = cmd_pairs(&cfg, &dir)?;
            log(format!("{train} train / {test} test pairs"));
        }
        Command::Train { condition } => cmd_train(&cfg, &dir, condition)?,
        Command::Evaluate { condition } => {
            let row = cmd_evaluate(&dir, condition)?;
            let m = row.metrics;
            println!(
                "{condition}\tseed {seed}\tmicro_f1 {:.4}\taccuracy {:.4}\tauc {:.4}",
                m.micro_f1, m.accuracy, m.auc
            );
        }
        Command::RunAll => {
            if let Some(s) = cli.seed {
                cfg.seeds = vec![s];
            }
            let table = run_all(&cfg, &cfg.output_dir, &log)?;
            if !quiet {
                print!("{}", table.human_summary());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
