//! CSV and text reports for a growth run.
//!
//! * `trace.csv`: one row per phase, columns [`TRACE_HEADER`].
//! * `errors_h<k>.csv`: `epoch,train_mse,valid_mse` for the phase with `k`
//!   hidden units, one row per epoch.
//! * `summary.txt`: fixed-width table, one row per phase with the selected
//!   phase marked `*`. Every value is a rounding of a `trace.csv` value.
//!
//! Efficiencies are printed with 2 decimals, overall efficiency with 5 and
//! errors as shortest round-trip decimals (CSV) or 5 decimals (summary).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::growth::{select_best_phase, GrowthTrace, PhaseRecord, SplitScore};
use crate::metrics::efficiency_percent;
use crate::scalar::Scalar;
use crate::training::ErrorHistory;

pub const TRACE_HEADER: &str = "hidden_units,epochs_phase,epochs_cumulative,\
train_classified,train_total,train_efficiency,train_mse,\
valid_classified,valid_total,valid_efficiency,valid_mse,\
test_classified,test_total,test_efficiency,test_mse,overall_efficiency";

pub const ERRORS_HEADER: &str = "epoch,train_mse,valid_mse";

pub fn trace_csv(phases: &[PhaseRecord]) -> String {
    let mut s = format!("{TRACE_HEADER}\n");
    for p in phases {
        write!(s, "{},{},{}", p.hidden_units, p.epochs_this_phase, p.cumulative_epochs).unwrap();
        for split in [&p.train, &p.valid, &p.test] {
            write!(
                s,
                ",{},{},{:.2},{}",
                split.classified, split.total, split.efficiency_percent, split.ms_error
            )
            .unwrap();
        }
        writeln!(s, ",{:.5}", p.overall_efficiency).unwrap();
    }
    s
}

/// Reads `trace.csv` back. Efficiencies are recomputed from the counts.
pub fn parse_trace_csv(text: &str) -> Result<Vec<PhaseRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(TRACE_HEADER) {
        return Err(Error::Input("trace.csv: unexpected header".into()));
    }
    let mut phases = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
        let bad = || Error::Input(format!("trace.csv line {}: malformed row", i + 2));
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 16 {
            return Err(bad());
        }
        let n = |k: usize| f[k].parse::<usize>().map_err(|_| bad());
        let score = |k: usize| -> Result<SplitScore> {
            let (classified, total) = (n(k)?, n(k + 1)?);
            if total == 0 || classified > total {
                return Err(bad());
            }
            Ok(SplitScore {
                classified,
                total,
                efficiency_percent: efficiency_percent(classified, total),
                ms_error: f[k + 3].parse().map_err(|_| bad())?,
            })
        };
        let (train, valid, test) = (score(3)?, score(7)?, score(11)?);
        let overall = efficiency_percent(
            train.classified + valid.classified + test.classified,
            train.total + valid.total + test.total,
        );
        phases.push(PhaseRecord {
            hidden_units: n(0)?,
            epochs_this_phase: n(1)?,
            cumulative_epochs: n(2)?,
            train,
            valid,
            test,
            overall_efficiency: overall,
        });
    }
    if phases.is_empty() {
        return Err(Error::Input("trace.csv has no phases".into()));
    }
    Ok(phases)
}

pub fn errors_csv<T: Scalar>(history: &ErrorHistory<T>) -> String {
    let mut s = format!("{ERRORS_HEADER}\n");
    for e in &history.per_epoch {
        match e.valid {
            Some(v) => writeln!(s, "{},{},{}", e.epoch, e.train, v).unwrap(),
            None => writeln!(s, "{},{},", e.epoch, e.train).unwrap(),
        }
    }
    s
}

/// Table with one row per phase; the row at `best` is marked with `*`.
pub fn summary_text(phases: &[PhaseRecord], best: usize) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{:>3} {:>6} | {:>5} {:>7} {:>8} | {:>5} {:>7} {:>8} | {:>5} {:>7} {:>8} | {:>9}",
        "", "", "TRAIN", "", "", "VALID", "", "", "TEST", "", "", ""
    )
    .unwrap();
    writeln!(
        s,
        "{:>3} {:>6} | {:>5} {:>7} {:>8} | {:>5} {:>7} {:>8} | {:>5} {:>7} {:>8} | {:>9}",
        "HU", "EPOCH", "CLASS", "EFF%", "MSE", "CLASS", "EFF%", "MSE", "CLASS", "EFF%", "MSE", "OVERALL%"
    )
    .unwrap();
    for (i, p) in phases.iter().enumerate() {
        write!(s, "{:>3} {:>6}", p.hidden_units, p.cumulative_epochs).unwrap();
        for split in [&p.train, &p.valid, &p.test] {
            write!(
                s,
                " | {:>5} {:>7.2} {:>8.5}",
                split.classified, split.efficiency_percent, split.ms_error
            )
            .unwrap();
        }
        write!(s, " | {:>9.5}", p.overall_efficiency).unwrap();
        s.push_str(if i == best { " *\n" } else { "\n" });
    }
    writeln!(
        s,
        "\nbest: {} hidden unit(s), overall efficiency {:.5}% (max overall, ties to fewer units)",
        phases[best].hidden_units, phases[best].overall_efficiency
    )
    .unwrap();
    s
}

/// Regenerates `summary.txt` content from a `trace.csv`.
pub fn summary_from_trace_csv(text: &str) -> Result<String> {
    let phases = parse_trace_csv(text)?;
    let best = select_best_phase(&phases)?;
    Ok(summary_text(&phases, best))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `trace.csv`, `errors_h<k>.csv` and `summary.txt` into `out_dir`.
pub fn emit_reports<T: Scalar>(trace: &GrowthTrace, histories: &[ErrorHistory<T>], out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_file(&out_dir.join("trace.csv"), &trace_csv(&trace.phases))?;
    for (phase, history) in trace.phases.iter().zip(histories) {
        write_file(
            &out_dir.join(format!("errors_h{}.csv", phase.hidden_units)),
            &errors_csv(history),
        )?;
    }
    write_file(
        &out_dir.join("summary.txt"),
        &summary_text(&trace.phases, trace.best_phase_index),
    )
}
