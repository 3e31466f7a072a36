use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sqg_core::io::{
    export_plotdata, parse_config, recompute_diagnostics, resume_dir, run_to_dir, sweep_to_dir,
    verify_run, ExportKind, ResumeOutcome,
};
use sqg_core::solver::{RunOptions, RunStatus};
use sqg_core::SqgError;

const OUTPUT_ENV: &str = "SQG_OUTPUT_DIR";

const EXIT_CONFIG: u8 = 2;
const EXIT_BLOWUP: u8 = 3;
const EXIT_CORRUPT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "sqg",
    version,
    about = "Dissipative SQG solver with Littlewood-Paley diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration into a run directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Run directory; defaults to $SQG_OUTPUT_DIR/<config name>.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop after this many steps, leaving a resumable run.
        #[arg(long)]
        stop_after: Option<u64>,
    },
    /// Continue an interrupted run from its last snapshot.
    Resume { dir: PathBuf },
    /// Run a sequence of decreasing viscosities.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        epsilons: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute diagnostics from the stored snapshots.
    Diag { dir: PathBuf },
    /// Write plot data (energy, flux, criterion or spectrum) as CSV.
    Export {
        dir: PathBuf,
        #[arg(long)]
        kind: String,
    },
    /// Audit every artifact checksum recorded in the manifest.
    Verify { dir: PathBuf },
}

fn output_dir(out: Option<PathBuf>, config: &Path, suffix: &str) -> PathBuf {
    out.unwrap_or_else(|| {
        let root = std::env::var_os(OUTPUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("runs"));
        let stem = config
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        root.join(format!("{stem}{suffix}"))
    })
}

fn error_code(e: &SqgError) -> u8 {
    match e {
        SqgError::Config { .. }
        | SqgError::ConfigValue(_)
        | SqgError::OutOfRange(_)
        | SqgError::InvalidGrid(_)
        | SqgError::ShellRange { .. } => EXIT_CONFIG,
        SqgError::Corruption { .. }
        | SqgError::Snapshot(_)
        | SqgError::Schema(_)
        | SqgError::Json(_) => EXIT_CORRUPT,
        _ => 1,
    }
}

fn status_code(status: RunStatus) -> u8 {
    match status {
        RunStatus::Completed | RunStatus::Aborted => 0,
        RunStatus::BlownUp | RunStatus::Unresolved => EXIT_BLOWUP,
    }
}

fn report_run(dir: &Path, status: RunStatus, warnings: &[String]) -> u8 {
    for w in warnings {
        eprintln!("warning: {w}");
    }
    println!("{} {}", status.as_str(), dir.display());
    status_code(status)
}

fn execute(cli: Cli) -> Result<u8, SqgError> {
    match cli.command {
        Command::Run {
            config,
            out,
            stop_after,
        } => {
            let cfg = parse_config(&config)?;
            let dir = output_dir(out, &config, "");
            let opts = RunOptions {
                keep_samples: false,
                stop_after,
            };
            let (traj, m) = run_to_dir(&cfg, &dir, &opts)?;
            if let Some(b) = &traj.blow_up {
                eprintln!("step {} t={}: {}", b.step, b.time, b.reason);
            }
            Ok(report_run(&dir, m.status, &m.warnings))
        }
        Command::Resume { dir } => match resume_dir(&dir, &RunOptions::default())? {
            ResumeOutcome::AlreadyComplete(_) => {
                println!("run already completed, nothing to do: {}", dir.display());
                Ok(0)
            }
            ResumeOutcome::Resumed(_, m) => Ok(report_run(&dir, m.status, &[])),
        },
        Command::Sweep {
            config,
            epsilons,
            out,
        } => {
            let cfg = parse_config(&config)?;
            let dir = output_dir(out, &config, "_sweep");
            let s = sweep_to_dir(&cfg, &epsilons, &dir)?;
            let mut code = 0;
            for (d, m) in s.run_dirs.iter().zip(&s.manifests) {
                code = code.max(report_run(d, m.status, &[]));
            }
            Ok(code)
        }
        Command::Diag { dir } => {
            let traj = recompute_diagnostics(&dir)?;
            println!(
                "{} frames -> {}",
                traj.frames.len(),
                dir.join("diag").display()
            );
            Ok(0)
        }
        Command::Export { dir, kind } => {
            let kind: ExportKind = kind.parse()?;
            let path = export_plotdata(&dir, kind)?;
            println!("{}", path.display());
            Ok(0)
        }
        Command::Verify { dir } => {
            let r = verify_run(&dir)?;
            println!(
                "ok: {} artifacts verified, status {}",
                r.checked,
                r.status.as_str()
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
