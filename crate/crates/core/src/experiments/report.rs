//! CSV and text reports of a grid run.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{BestSet, EquivalenceSet, ResultRow, ResultTable};
use crate::error::{Error, Result};
use crate::harness::cost_breakdown;
use crate::metrics::LAST_K;

const RESULT_HEADER: &str =
    "label,runtime_mean,runtime_std,drifts_mean,drifts_std,mape,relearn_mean,concepts_mean,error";

/// Directory name of a configuration's per-run reports.
pub fn run_dir_name(label: &str) -> String {
    label.replace(' ', "_")
}

struct Sink {
    path: PathBuf,
    out: BufWriter<File>,
}

impl Sink {
    fn create(path: PathBuf) -> Result<Self> {
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(Self {
            out: BufWriter::new(file),
            path,
        })
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(|e| Error::io(&self.path, e))
    }

    fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))
    }
}

fn result_line(r: &ResultRow) -> String {
    match &r.error {
        Some(e) => format!("{},,,,,,,,\"{}\"", r.label, e.replace('"', "'")),
        None => format!(
            "{},{:.2},{:.2},{},{},{},{},{},",
            r.label,
            r.runtime_mean,
            r.runtime_std,
            r.drifts_mean,
            r.drifts_std,
            r.mape,
            r.relearn_mean,
            r.concepts_mean
        ),
    }
}

fn write_rows<'a>(path: PathBuf, rows: impl Iterator<Item = &'a ResultRow>) -> Result<()> {
    let mut sink = Sink::create(path)?;
    sink.line(RESULT_HEADER)?;
    for r in rows {
        sink.line(&result_line(r))?;
    }
    sink.finish()
}

/// Writes every report into `out`, creating it if needed. Per-run files
/// come from each row's first run and live in `runs/<label>/`.
pub fn emit_reports(
    out: &Path,
    table: &ResultTable,
    equiv: Option<&EquivalenceSet>,
    best: Option<&BestSet>,
) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_rows(out.join("results.csv"), table.rows.iter())?;
    write_rows(out.join("by_runtime.csv"), table.by_runtime().into_iter())?;

    let mut costs = Sink::create(out.join("phase_costs.csv"))?;
    costs.line(
        "label,learn_pct,pred_pct,dd_fill_pct,dd_detect_pct,update_pct,learn_s,pred_s,dd_fill_s,dd_detect_s,update_s",
    )?;
    for r in table.by_runtime() {
        let t = &r.timings_mean;
        let pct = match cost_breakdown(t) {
            Ok(s) => format!(
                "{:.2},{:.2},{:.2},{:.2},{:.2}",
                s.learn, s.pred, s.dd_fill, s.dd_detect, s.update
            ),
            Err(_) => ",,,,".to_string(),
        };
        costs.line(&format!(
            "{},{pct},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.label, t.learn, t.pred, t.dd_fill, t.dd_detect, t.update
        ))?;
    }
    costs.finish()?;

    if let Some(first) = table.ok_rows().find_map(|r| r.first_run.as_ref()) {
        let b = &first.bounds;
        let mut sink = Sink::create(out.join("bounds.csv"))?;
        sink.line("t,abs_perc,avg_abs_perc,sign,guess_correct,guess_wrong,lower_term,upper_term")?;
        for s in &b.steps {
            sink.line(&format!(
                "{},{},{},{},{},{},{},{}",
                s.t,
                s.abs_perc,
                s.avg_abs_perc,
                s.sign,
                s.guess_correct,
                s.guess_wrong,
                s.lower_term,
                s.upper_term
            ))?;
        }
        sink.finish()?;
    }

    let runs_dir = out.join("runs");
    for r in table.ok_rows() {
        let Some(run) = &r.first_run else { continue };
        let dir = runs_dir.join(run_dir_name(&r.label));
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

        let mut preds = Sink::create(dir.join("predictions.csv"))?;
        preds.line("t,actual,predicted,drift")?;
        let mut drifts = run.drift_points.iter().peekable();
        for p in run.log.global() {
            let flag = if drifts.peek() == Some(&&p.t) {
                drifts.next();
                1
            } else {
                0
            };
            preds.line(&format!("{},{},{},{flag}", p.t, p.actual, p.predicted))?;
        }
        preds.finish()?;

        let mut trace = Sink::create(dir.join("mape_trace.csv"))?;
        trace.line("t,mape_last_k")?;
        for (t, v) in run.log.last_k_trace(LAST_K) {
            trace.line(&format!("{t},{v}"))?;
        }
        trace.finish()?;
    }

    if let Some(e) = equiv {
        let mut sink = Sink::create(out.join("equiv.txt"))?;
        sink.line(&format!("ref_error {} ({})", e.ref_error, e.ref_label))?;
        sink.line(&format!("k {}", e.k))?;
        sink.line(&format!("members {}", e.len()))?;
        for (c, mape) in &e.members {
            sink.line(&format!("{}\t{mape}", c.label()))?;
        }
        sink.finish()?;
    }
    if let Some(b) = best {
        let mut sink = Sink::create(out.join("best.txt"))?;
        for (d, i) in &b.pairs {
            sink.line(&format!("{} {}", d.label(), i.label()))?;
        }
        sink.finish()?;
    }
    Ok(())
}
