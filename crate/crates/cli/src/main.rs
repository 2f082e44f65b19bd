use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qbounds_core::sweep::{
    figure_config, render_svg, run_sweep, write_csv, PointConfig, SvgStyle, SweepConfig,
};
use qbounds_core::variational::detector_report;
use qbounds_core::Error;

/// Share of failed grid points above which a sweep exits with status 3.
const FAILURE_FRACTION_LIMIT: f64 = 0.1;

#[derive(Parser)]
#[command(
    name = "qbounds",
    version,
    about = "Quantum estimation bounds for an accelerated two-level detector"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound at one point and print the report as JSON.
    Report {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a sweep from a JSON config and write CSV (and SVG if requested).
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a built-in figure sweep.
    Figure {
        #[arg(long)]
        id: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

enum Outcome {
    Ok,
    SolverFailures,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Schema { .. } | Error::Range(_) => 2,
        _ => 1,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn sweep(cfg: &SweepConfig, base: &Path, title: &str) -> Result<Outcome, Error> {
    let result = run_sweep(cfg)?;
    match &cfg.output {
        Some(out) => {
            write_csv(&result, &base.join(&out.csv_path))?;
            if let Some(svg) = &out.svg_path {
                let style = SvgStyle {
                    title: title.to_string(),
                    ..SvgStyle::default()
                };
                render_svg(&result, &base.join(svg), &style)?;
            }
        }
        None => print!("{}", qbounds_core::sweep::to_csv_string(&result)),
    }
    for row in result.rows.iter().filter(|r| !r.notes.is_empty()) {
        eprintln!(
            "{} = {}: {}",
            result.variable.name(),
            row.sweep_value,
            row.notes.join("; ")
        );
    }
    let failed = result.solver_failures() as f64 / result.rows.len() as f64;
    Ok(if failed > FAILURE_FRACTION_LIMIT {
        Outcome::SolverFailures
    } else {
        Outcome::Ok
    })
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Report { config } => {
            let cfg = PointConfig::parse(&read(&config)?)?;
            let report = detector_report(&cfg.detector_params()?, &cfg.params)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            println!("{json}");
            Ok(if report.solver_failure {
                Outcome::SolverFailures
            } else {
                Outcome::Ok
            })
        }
        Command::Sweep { config } => {
            let cfg = SweepConfig::parse(&read(&config)?)?;
            let title = config
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            sweep(&cfg, Path::new("."), &title)
        }
        Command::Figure { id, out_dir } => {
            let cfg = figure_config(&id)?;
            fs::create_dir_all(&out_dir).map_err(|source| Error::Io {
                path: out_dir.clone(),
                source,
            })?;
            sweep(&cfg, &out_dir, &format!("Figure {id}"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::SolverFailures) => {
            eprintln!(
                "error: solver failures exceed {:.0}% of points",
                FAILURE_FRACTION_LIMIT * 100.0
            );
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
