mod config;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use cvqnn::bench::{self, AggregateRow};
use cvqnn::{selftest, CutoffConfig, Strategy, TargetKind};

use crate::config::ConfigFile;
use crate::svg::{line_chart, Series};

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

#[derive(Parser)]
#[command(name = "cvqnn", version, about = "Quantum vs classical neural network regression benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train every model of a config over all seeds and export the results.
    Run {
        /// TOML experiment config.
        config: PathBuf,
        /// `--key value` pairs overriding config entries; nested keys are
        /// dotted, e.g. `--optimizer.epochs 500`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
        overrides: Vec<String>,
    },
    /// Recompute aggregates.csv from runs.csv.
    Report {
        dir: PathBuf,
        /// Also write MSE charts as SVG.
        #[arg(long)]
        svg: bool,
    },
    /// Run the analytic oracle checks.
    Selftest {
        /// Print the check names without running them.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = CutoffConfig::DEFAULT_DIM)]
        cutoff: usize,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_USAGE, error }
}

fn runtime(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_RUNTIME, error }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Run { config, overrides } => cmd_run(&config, &overrides),
        Command::Report { dir, svg } => cmd_report(&dir, svg),
        Command::Selftest { list, cutoff } => cmd_selftest(list, cutoff),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_run(config_path: &Path, overrides: &[String]) -> Result<(), Failure> {
    let cfg = ConfigFile::load(config_path, overrides).map_err(usage)?;
    let spec = cfg.to_spec().map_err(usage)?;
    let out_dir = cfg.resolved_out_dir();
    eprintln!(
        "training {} models x {} seeds ({} strategy, {} target)",
        spec.models.len(),
        spec.seeds,
        spec.strategy,
        spec.target
    );
    let results = match spec.strategy {
        Strategy::Layers => bench::run_strategy_layers(&spec),
        Strategy::Parameters => bench::run_strategy_parameters(&spec),
    }
    .map_err(|e| runtime(e.into()))?;
    let aggregates = bench::aggregate(&results);
    let files = bench::export(&results, &aggregates, &out_dir).map_err(|e| runtime(e.into()))?;
    print!("{}", summary_table(&aggregates));
    let failed = results.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} runs failed", results.len());
    }
    eprintln!(
        "wrote {}, {} and {} curve files",
        files.runs.display(),
        files.aggregates.display(),
        files.curves.len()
    );
    if failed == results.len() {
        return Err(runtime(anyhow::anyhow!("every run failed")));
    }
    Ok(())
}

fn cmd_report(dir: &Path, svg: bool) -> Result<(), Failure> {
    let runs = bench::read_runs_csv(&dir.join("runs.csv")).map_err(|e| runtime(e.into()))?;
    if runs.is_empty() {
        eprintln!("warning: {} has no runs", dir.join("runs.csv").display());
    }
    let aggregates = bench::aggregate(&runs);
    bench::write_aggregates_csv(&aggregates, &dir.join("aggregates.csv")).map_err(|e| runtime(e.into()))?;
    print!("{}", summary_table(&aggregates));
    if svg {
        for path in write_charts(&aggregates, dir).map_err(runtime)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn cmd_selftest(list: bool, cutoff: usize) -> Result<(), Failure> {
    if list {
        for name in selftest::check_names() {
            println!("{name}");
        }
        return Ok(());
    }
    let cfg = CutoffConfig::new(cutoff).map_err(|e| usage(e.into()))?;
    let reports = selftest::run_all(cfg);
    for r in &reports {
        println!(
            "{} {:<24} {:>6.2}s  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.seconds,
            r.detail
        );
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(runtime(anyhow::anyhow!("{failed} of {} checks failed", reports.len())));
    }
    Ok(())
}

/// Fixed-width table of the aggregate rows, one line per group.
fn summary_table(rows: &[AggregateRow]) -> String {
    let mut out = format!(
        "{:<24} {:<10} {:>6} {:>6} {:<8} {:>4} {:>11} {:>11} {:>11}\n",
        "model_id", "target", "layers", "params", "act", "n", "mean_mse", "std_mse", "min_mse"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<24} {:<10} {:>6} {:>6} {:<8} {:>4} {:>11.3e} {:>11.3e} {:>11.3e}\n",
            r.model_id,
            r.target.name(),
            r.layers,
            r.params,
            r.activation,
            r.n_seeds,
            r.mean_mse,
            r.std_mse,
            r.min_mse
        ));
    }
    out
}

/// One chart per (strategy, target): mean test MSE against depth for the
/// layers strategy, against parameter count for the parameters strategy.
/// With several classical configurations at one count, the best mean is
/// plotted.
fn write_charts(rows: &[AggregateRow], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for strategy in [Strategy::Layers, Strategy::Parameters] {
        for target in TargetKind::ALL {
            let subset: Vec<&AggregateRow> = rows
                .iter()
                .filter(|r| r.strategy == strategy && r.target == target)
                .collect();
            if subset.is_empty() {
                continue;
            }
            let mut series: Vec<Series> = Vec::new();
            for r in &subset {
                let x = match strategy {
                    Strategy::Layers => r.layers as f64,
                    Strategy::Parameters => r.params as f64,
                };
                let s = match series.iter_mut().position(|s| s.label == r.activation) {
                    Some(i) => &mut series[i],
                    None => {
                        series.push(Series {
                            label: r.activation.clone(),
                            points: Vec::new(),
                        });
                        series.last_mut().expect("just pushed")
                    }
                };
                match s.points.iter_mut().find(|(px, _)| *px == x) {
                    Some(p) => p.1 = p.1.min(r.mean_mse),
                    None => s.points.push((x, r.mean_mse)),
                }
            }
            for s in &mut series {
                s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
            }
            let (x_label, stem) = match strategy {
                Strategy::Layers => ("layers", "mse_vs_layers"),
                Strategy::Parameters => ("parameters", "mse_vs_params"),
            };
            let svg = line_chart(&format!("{target}: mean test MSE"), x_label, "MSE", &series);
            let path = dir.join(format!("{stem}_{target}.svg"));
            std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
    }
    Ok(written)
}
