use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::run::{RunResult, RunStatus};
use crate::error::Result;

/// One row of `results.csv`. Runtime lives in `timings.csv` so that result
/// files of repeated runs are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub config_digest: String,
    pub repetition: usize,
    pub seed: u64,
    pub kind: String,
    pub algorithm: String,
    pub d: usize,
    pub n: usize,
    pub labels_used: usize,
    pub error: Option<f64>,
    pub noisy_error: Option<f64>,
    pub success: bool,
    pub status: RunStatus,
}

impl From<&RunResult> for ResultRow {
    fn from(r: &RunResult) -> Self {
        ResultRow {
            config_digest: r.config_digest.clone(),
            repetition: r.repetition,
            seed: r.seed,
            kind: r.kind.clone(),
            algorithm: r.algorithm.clone(),
            d: r.d,
            n: r.n,
            labels_used: r.labels_used,
            error: r.error,
            noisy_error: r.noisy_error,
            success: r.success,
            status: r.status,
        }
    }
}

const RESULT_HEADER: [&str; 12] = [
    "config_digest",
    "repetition",
    "seed",
    "kind",
    "algorithm",
    "d",
    "n",
    "labels_used",
    "error",
    "noisy_error",
    "success",
    "status",
];

pub fn write_results_csv<W: Write>(out: W, results: &[RunResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if results.is_empty() {
        w.write_record(RESULT_HEADER)?;
    }
    for r in results {
        w.serialize(ResultRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<ResultRow>, _>>()?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct TimingRow<'a> {
    config_digest: &'a str,
    repetition: usize,
    runtime_ms: f64,
}

pub fn write_timings_csv<W: Write>(out: W, results: &[RunResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if results.is_empty() {
        w.write_record(["config_digest", "repetition", "runtime_ms"])?;
    }
    for r in results {
        w.serialize(TimingRow { config_digest: &r.config_digest, repetition: r.repetition, runtime_ms: r.runtime_ms })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigSummary {
    pub config_digest: String,
    pub algorithm: String,
    pub runs: usize,
    pub failed: usize,
    /// Median over finished runs (mean of the middle pair for even counts).
    pub median_error: Option<f64>,
    pub max_labels: usize,
    pub successes: usize,
}

impl ConfigSummary {
    pub fn success_fraction(&self) -> f64 {
        self.successes as f64 / self.runs as f64
    }
}

/// Per-config summaries in order of first appearance.
pub fn summarize(rows: &[ResultRow]) -> Vec<ConfigSummary> {
    let mut order: Vec<&str> = Vec::new();
    for r in rows {
        if !order.contains(&r.config_digest.as_str()) {
            order.push(&r.config_digest);
        }
    }
    order
        .into_iter()
        .map(|digest| {
            let group: Vec<&ResultRow> = rows.iter().filter(|r| r.config_digest == digest).collect();
            let mut errors: Vec<f64> = group.iter().filter_map(|r| r.error).collect();
            errors.sort_by(f64::total_cmp);
            let median_error = match errors.len() {
                0 => None,
                k if k % 2 == 1 => Some(errors[k / 2]),
                k => Some((errors[k / 2 - 1] + errors[k / 2]) / 2.0),
            };
            ConfigSummary {
                config_digest: digest.to_string(),
                algorithm: group[0].algorithm.clone(),
                runs: group.len(),
                failed: group.iter().filter(|r| r.status == RunStatus::Failed).count(),
                median_error,
                max_labels: group.iter().map(|r| r.labels_used).max().unwrap_or(0),
                successes: group.iter().filter(|r| r.success).count(),
            }
        })
        .collect()
}

pub fn render_summary(summaries: &[ConfigSummary]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<16}  {:<9}  {:>5}  {:>6}  {:>12}  {:>10}  {:>8}",
        "config", "algorithm", "runs", "failed", "median_error", "max_labels", "success"
    );
    for c in summaries {
        let median = c.median_error.map_or_else(|| "-".to_string(), |e| format!("{e:.6}"));
        let _ = writeln!(
            s,
            "{:<16}  {:<9}  {:>5}  {:>6}  {:>12}  {:>10}  {:>8.4}",
            c.config_digest,
            c.algorithm,
            c.runs,
            c.failed,
            median,
            c.max_labels,
            c.success_fraction()
        );
    }
    s
}

/// Paths written by [`emit_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub results: PathBuf,
    pub timings: PathBuf,
    pub summary: PathBuf,
}

/// Writes `results.csv`, `timings.csv` and `summary.txt` into `dir`.
pub fn emit_report(results: &[RunResult], dir: impl AsRef<Path>) -> Result<ReportFiles> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let files = ReportFiles {
        results: dir.join("results.csv"),
        timings: dir.join("timings.csv"),
        summary: dir.join("summary.txt"),
    };
    write_results_csv(fs::File::create(&files.results)?, results)?;
    write_timings_csv(fs::File::create(&files.timings)?, results)?;
    let rows: Vec<ResultRow> = results.iter().map(ResultRow::from).collect();
    fs::write(&files.summary, render_summary(&summarize(&rows)))?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::Diagnostics;

    fn result(digest: &str, rep: usize, error: Option<f64>, labels: usize, success: bool) -> RunResult {
        RunResult {
            config_digest: digest.into(),
            repetition: rep,
            seed: u64::MAX - rep as u64,
            kind: "ecoc".into(),
            algorithm: "sl".into(),
            d: 2,
            n: 100,
            labels_used: labels,
            error,
            noisy_error: error.map(|e| e + 0.01),
            success,
            status: if error.is_some() { RunStatus::Ok } else { RunStatus::Failed },
            message: String::new(),
            runtime_ms: 1.5,
            diagnostics: Diagnostics::default(),
        }
    }

    #[test]
    fn empty_results_give_header_only() {
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "config_digest,repetition,seed,kind,algorithm,d,n,labels_used,error,noisy_error,success,status\n"
        );
    }

    #[test]
    fn reload_is_exact_and_summary_recomputes() {
        let results: Vec<RunResult> = (0..20)
            .map(|i| {
                let e = (i as f64 * 0.1234567890123).sin().abs() / 3.0;
                result("abc", i, (i != 7).then_some(e), i % 4, i % 3 != 0)
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&results, dir.path()).unwrap();
        let rows = read_results_csv(fs::File::open(&files.results).unwrap()).unwrap();
        assert_eq!(rows.len(), 20);
        for (row, r) in rows.iter().zip(&results) {
            assert_eq!(row, &ResultRow::from(r));
        }
        let s = summarize(&rows);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].runs, 20);
        assert_eq!(s[0].failed, 1);
        assert_eq!(s[0].successes, results.iter().filter(|r| r.success).count());
        assert_eq!(s[0].max_labels, 3);
        let text = fs::read_to_string(&files.summary).unwrap();
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn median_of_even_count() {
        let rows: Vec<ResultRow> = [0.1, 0.4, 0.2, 0.3].iter().enumerate().map(|(i, &e)| ResultRow::from(&result("x", i, Some(e), 1, true))).collect();
        assert!((summarize(&rows)[0].median_error.unwrap() - 0.25).abs() < 1e-15);
    }
}
