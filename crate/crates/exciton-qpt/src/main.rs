use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exciton_qpt::formats::{self, ChiRecord};
use exciton_qpt::parallel::configure_threads;
use exciton_qpt::pipeline;
use exciton_qpt::{AppError, Result, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "exciton-qpt", version, about = "Process tomography of an excitonic dimer from two-color photon-echo signals")]
struct Cli {
    /// Worker threads for ensemble averaging and reconstruction (0 = all cores).
    #[arg(long, global = true, env = "EXCITON_QPT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Average the ensemble, add noise, and write signals plus the nominal χ(T).
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (defaults to output_dir from the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides ensemble.seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reconstruct χ̂(T) from a signal table.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        signals: PathBuf,
        /// χ(T) trajectory to compare against; prints the mean relative error.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate design condition numbers over the sweep grid.
    Diagnose {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and check configs, signal tables, sidecars and χ trajectories.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn out_dir(flag: Option<PathBuf>, config: &exciton_qpt::Resolved) -> PathBuf {
    flag.unwrap_or_else(|| config.output_dir.clone())
}

fn load(path: &Path) -> Result<exciton_qpt::Resolved> {
    RunConfig::load(path)?.resolve().map_err(|e| match e {
        AppError::Config(msg) => AppError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    configure_threads(cli.threads).map_err(|e| AppError::Numerical(format!("thread pool: {e}")))?;
    match cli.command {
        Command::Simulate { config, out, seed } => {
            let mut run = load(&config)?;
            if let Some(seed) = seed {
                run.ensemble.seed = seed;
            }
            let sim = pipeline::simulate(&run)?;
            report_written(&pipeline::write_simulation(&out_dir(out, &run), &sim)?);
            println!(
                "simulated {} waiting times, n = {}, normalization = {:.6e}",
                sim.signals.len(),
                run.ensemble.n,
                sim.normalization
            );
        }
        Command::Reconstruct { config, signals, truth, out } => {
            let run = load(&config)?;
            let sets = formats::read_signals(&signals)?;
            let rec = pipeline::reconstruct(&run, &sets)?;
            report_written(&pipeline::write_reconstruction(&out_dir(out, &run), &rec)?);
            let constrained = rec.results.iter().filter(|r| r.constrained).count();
            let leakage =
                rec.results.iter().map(|r| r.chi_hat.leakage()).sum::<f64>() / rec.results.len() as f64;
            println!("condition_number = {:.4}", rec.condition_number);
            println!("initial_state_condition_number = {:.4}", rec.initial_state_condition_number);
            println!("constrained = {constrained}/{}", rec.results.len());
            println!("mean_leakage = {leakage:.6e}");
            if let Some(truth) = truth {
                let truth = formats::read_chi_json(&truth)?
                    .iter()
                    .map(ChiRecord::to_chi)
                    .collect::<Result<Vec<_>>>()?;
                let err = pipeline::average_relative_error(&rec.results, &truth)?;
                println!("avg_rel_err = {err:.6e}");
            }
        }
        Command::Diagnose { config, out } => {
            let run = load(&config)?;
            let rows = pipeline::diagnose(&run)?;
            let path = pipeline::write_diagnostics(&out_dir(out, &run), &rows)?;
            report_written(&[path]);
            let flagged = rows.iter().filter(|r| r.flagged).count();
            println!("{} grid points, {flagged} above threshold {}", rows.len(), run.sweep.threshold);
        }
        Command::Validate { files } => {
            let mut failed = Vec::new();
            for file in &files {
                match formats::validate_file(file) {
                    Ok(kind) => println!("{}: ok ({})", file.display(), kind.name()),
                    Err(e) => {
                        eprintln!("error: {e}");
                        failed.push(e);
                    }
                }
            }
            if let Some(first) = failed.first() {
                return Err(first.summarize(format!("{} of {} files failed validation", failed.len(), files.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
