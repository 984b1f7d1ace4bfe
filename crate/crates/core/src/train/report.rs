use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::experiment::ExperimentReport;
use crate::{Error, Result, SCHEMA_VERSION};

pub const CSV_FILE: &str = "curves.csv";
pub const TABLE_FILE: &str = "table.txt";

fn pct(x: Option<f64>) -> String {
    x.map_or_else(|| "—".to_string(), |v| format!("{:.2}", 100.0 * v))
}

/// Summary table: one row per model with final-epoch mean ± SEM (%).
pub fn render_table(report: &ExperimentReport) -> String {
    let epochs = report.config.epochs;
    let mut out = String::new();
    let _ = writeln!(out, "Test accuracy (%) at epoch {epochs}, mean ± SEM over completed runs");
    let _ = writeln!(
        out,
        "{:<12} {:>6} {:>11} {:>16} {:>9}",
        "model", "params", "threshold", "accuracy", "runs"
    );
    for s in &report.summaries {
        let acc = match (s.final_mean, s.final_sem) {
            (Some(_), Some(_)) => format!("{} ± {}", pct(s.final_mean), pct(s.final_sem)),
            (Some(_), None) => pct(s.final_mean),
            _ => "—".to_string(),
        };
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>11.4} {:>16} {:>9}",
            s.model.to_string(),
            s.param_count,
            s.threshold,
            acc,
            format!("{}/{}", s.runs_completed, s.runs_requested)
        );
    }
    out
}

/// Per-epoch curves: `schema_version` comment line, then
/// `epoch,model,threshold,mean_acc,sem` (an absent SEM is an empty field).
pub fn render_csv(report: &ExperimentReport) -> String {
    let mut out = format!("# schema_version={SCHEMA_VERSION}\nepoch,model,threshold,mean_acc,sem\n");
    for s in &report.summaries {
        for e in &s.epochs {
            let sem = e.sem.map_or_else(String::new, |v| format!("{v:.16e}"));
            let _ = writeln!(
                out,
                "{},{},{:.16e},{:.16e},{}",
                e.epoch, s.model, s.threshold, e.mean_test_accuracy, sem
            );
        }
    }
    out
}

/// Reads `report.json` from `dir` and writes the table and CSV beside it.
pub fn write_report(dir: &Path, out_dir: &Path) -> Result<(PathBuf, PathBuf, String)> {
    let report = ExperimentReport::read(&dir.join(super::experiment::REPORT_FILE))?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let table = render_table(&report);
    let table_path = out_dir.join(TABLE_FILE);
    std::fs::write(&table_path, &table).map_err(|e| Error::io(&table_path, e))?;
    let csv_path = out_dir.join(CSV_FILE);
    std::fs::write(&csv_path, render_csv(&report)).map_err(|e| Error::io(&csv_path, e))?;
    Ok((table_path, csv_path, table))
}
