use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use driftlab::data::{load_csv, parse_segments, synth_regime_series, TimeSeries};
use driftlab::detect::DetectorKind;
use driftlab::error::{Error, Result};
use driftlab::experiments::{
    best_configurations, emit_reports, find_equivalent_configurations, run_grid, Grid,
};
use driftlab::harness::{calibrate, Configuration, InputSource};
use driftlab::learn::{LearnerKind, TRAINING_SET_SIZE};
use driftlab::metrics::{error_bounds, mean_abs_perc};

#[derive(Parser)]
#[command(
    name = "driftlab",
    version,
    about = "Drift detectors and sliding-window learners on price series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration grid and write the reports.
    Run(RunArgs),
    /// Print the average-error band of a series.
    Bounds(BoundsArgs),
    /// Measure unit costs for runtime estimates.
    Calibrate(CalibrateArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Price CSV with a header row.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Synthetic regimes as `length:drift:volatility,...`.
    #[arg(long)]
    synthetic: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Price column of the CSV.
    #[arg(long, default_value = "Close")]
    column: String,
    /// Grid file, one configuration label per line, `ALL` as wildcard.
    #[arg(long)]
    grid: PathBuf,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "k-equiv", default_value_t = 2.0)]
    k_equiv: f64,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "Close")]
    column: String,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Price CSV; a synthetic 1250-point walk when absent.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value = "Close")]
    column: String,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Calibrate(a) => cmd_calibrate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("driftlab: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load(path: &Path, column: &str) -> Result<TimeSeries> {
    let loaded = load_csv(path, column)?;
    if !loaded.skipped_rows.is_empty() {
        eprintln!(
            "warning: skipped {} rows without a price (lines {:?})",
            loaded.warning_count(),
            loaded.skipped_rows
        );
    }
    Ok(loaded.series)
}

fn cmd_run(a: RunArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let ts = match (&a.source.data, &a.source.synthetic) {
        (Some(path), _) => load(path, &a.column)?,
        (None, Some(segments)) => {
            let synth = synth_regime_series(a.seed, &parse_segments(segments)?)?;
            synth.series.write_csv(a.out.join("series.csv"))?;
            synth.write_segments(a.out.join("segments.csv"))?;
            synth.series
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    let grid = Grid::from_file(&a.grid, a.runs, a.seed)?;
    eprintln!(
        "running {} configurations x {} runs on {} points",
        grid.configurations.len(),
        grid.runs,
        ts.len()
    );
    let table = run_grid(&grid, &ts)?;

    println!(
        "{:<36} {:>10} {:>9} {:>9} {:>9} {:>12}",
        "label", "runtime", "std", "drifts", "std", "mape"
    );
    for r in &table.rows {
        match &r.error {
            Some(e) => println!("{:<36} error: {e}", r.label),
            None => println!(
                "{:<36} {:>10.2} {:>9.2} {:>9.1} {:>9.1} {:>12.6}",
                r.label, r.runtime_mean, r.runtime_std, r.drifts_mean, r.drifts_std, r.mape
            ),
        }
    }

    let equiv = find_equivalent_configurations(&table, a.k_equiv);
    let best = equiv.as_ref().ok().map(best_configurations);
    emit_reports(&a.out, &table, equiv.as_ref().ok(), best.as_ref())?;
    let equiv = equiv?;
    let best = best.expect("set whenever equiv is");
    println!(
        "\nref_error {:.6} ({}), {} equivalent configurations at k = {}",
        equiv.ref_error,
        equiv.ref_label,
        equiv.len(),
        equiv.k
    );
    let pairs: Vec<String> = best
        .pairs
        .iter()
        .map(|(d, i)| format!("{d} {}", i.label()))
        .collect();
    println!(
        "best pairs: {}",
        if pairs.is_empty() {
            "none".into()
        } else {
            pairs.join(", ")
        }
    );
    println!("reports written to {}", a.out.display());
    Ok(())
}

fn cmd_bounds(a: BoundsArgs) -> Result<()> {
    let ts = load(&a.data, &a.column)?;
    let t0 = 3 + TRAINING_SET_SIZE;
    let t1 = ts.len() - 1;
    let yc_ape = (t0..=t1)
        .map(|t| ((ts.closes()[t - 1] - ts.closes()[t]) / ts.closes()[t]).abs())
        .sum::<f64>()
        / (t1 - t0 + 1) as f64;
    let b = error_bounds(&ts, yc_ape, t0..=t1)?;
    println!("range           [{t0}, {t1}]");
    println!("mean abs perc   {:.8}", mean_abs_perc(&ts, t0..=t1));
    println!(
        "literal         [{:.8}, {:.8}]",
        b.lower_literal, b.upper_literal
    );
    println!(
        "corrected       [{:.8}, {:.8}]",
        b.lower_corrected, b.upper_corrected
    );
    println!(
        "YC error        {:.8} ({})",
        yc_ape,
        if b.contains_corrected(yc_ape) {
            "inside"
        } else {
            "outside"
        }
    );
    Ok(())
}

fn cmd_calibrate(a: CalibrateArgs) -> Result<()> {
    let ts = match &a.data {
        Some(path) => load(path, &a.column)?,
        None => {
            synth_regime_series(
                a.seed,
                &parse_segments("625:0.0005:0.01,625:-0.0005:0.015")?,
            )?
            .series
        }
    };
    println!(
        "{:<10} {:>14} {:>14}",
        "learner", "fit/inst (s)", "predict (s)"
    );
    for l in LearnerKind::ALL {
        let u = calibrate(&Configuration::continuous(l).with_seed(a.seed), &ts, a.reps)?;
        println!(
            "{:<10} {:>14.3e} {:>14.3e}",
            l.label(),
            u.learn_per_instance,
            u.predict
        );
    }
    println!();
    println!(
        "{:<8} {:<5} {:>12} {:>12} {:>12}",
        "detector", "input", "fill (s)", "detect (s)", "update (s)"
    );
    for d in DetectorKind::ALL {
        for i in InputSource::ALL {
            let cfg = Configuration::sliding(LearnerKind::Yc, d, i).with_detector_seed(a.seed);
            let u = calibrate(&cfg, &ts, a.reps)?;
            println!(
                "{:<8} {:<5} {:>12.3e} {:>12.3e} {:>12.3e}",
                d.label(),
                i.label(),
                u.dd_fill,
                u.dd_detect,
                u.update
            );
        }
    }
    Ok(())
}
