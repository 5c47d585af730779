//! Machine-readable benchmark reports.
//!
//! The JSON form is the full report: config echo, one record per worker,
//! and the aggregate rate, with stable field order. The CSV form is one row
//! per worker plus one aggregate row. Rates are integers in updates/second.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{BenchConfig, ReportFormat};
use crate::error::CliError;

/// Configuration echo embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub workers: usize,
    pub mode: String,
    pub scale: u32,
    pub skew: [f64; 4],
    pub batch_size: u64,
    pub num_batches: u64,
    pub seed: u64,
    pub value_mode: String,
    /// Cut schedule the run actually used (empty in flat mode).
    pub cuts: Vec<u64>,
    pub warmup_batches: u64,
    pub pregen: bool,
}

impl ConfigEcho {
    pub fn from_config(cfg: &BenchConfig) -> Self {
        Self {
            workers: cfg.workers,
            mode: cfg.mode.as_str().to_string(),
            scale: cfg.stream.scale,
            skew: cfg.stream.skew,
            batch_size: cfg.stream.batch_size,
            num_batches: cfg.stream.num_batches,
            seed: cfg.stream.seed,
            value_mode: match cfg.stream.value_mode {
                hypersparse::ValueMode::ConstantOne => "ones".to_string(),
                hypersparse::ValueMode::UnitRandom => "random".to_string(),
            },
            cuts: cfg.effective_cuts().cuts().to_vec(),
            warmup_batches: cfg.warmup_batches,
            pregen: cfg.pregen,
        }
    }
}

/// One worker's timed results and cascade counters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerReport {
    pub worker_id: usize,
    /// Timed (post-warmup) triples only.
    pub triples_ingested: u64,
    pub wall_seconds: f64,
    pub updates_per_second: u64,
    /// All triples the worker's accumulator absorbed, warmup included.
    pub updates_applied: u64,
    pub cascades_per_level: Vec<u64>,
    pub entries_promoted_per_level: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: ConfigEcho,
    pub workers: Vec<WorkerReport>,
    pub aggregate_updates_per_second: u64,
    /// Wall-clock span of the concurrent timed phase: the workers start
    /// together, so this is the longest per-worker time.
    pub wall_seconds: f64,
    /// RFC 3339.
    pub timestamp: String,
}

/// Integer rate from a triple count over a wall-clock span.
pub fn rate(triples: u64, wall_seconds: f64) -> u64 {
    if wall_seconds > 0.0 {
        (triples as f64 / wall_seconds) as u64
    } else {
        0
    }
}

/// The aggregate rate: total timed triples over the longest worker time.
/// Workers run concurrently, so the longest worker bounds the span of the
/// whole timed phase.
pub fn aggregate_rate(workers: &[WorkerReport]) -> u64 {
    rate(total_triples(workers), max_wall_seconds(workers))
}

pub fn total_triples(workers: &[WorkerReport]) -> u64 {
    workers.iter().map(|w| w.triples_ingested).sum()
}

pub fn max_wall_seconds(workers: &[WorkerReport]) -> f64 {
    workers.iter().map(|w| w.wall_seconds).fold(0.0, f64::max)
}

impl BenchReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "row_type,worker_id,triples_ingested,wall_seconds,updates_per_second\n",
        );
        for w in &self.workers {
            out.push_str(&format!(
                "worker,{},{},{},{}\n",
                w.worker_id, w.triples_ingested, w.wall_seconds, w.updates_per_second
            ));
        }
        out.push_str(&format!(
            "aggregate,,{},{},{}\n",
            total_triples(&self.workers),
            self.wall_seconds,
            self.aggregate_updates_per_second
        ));
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json_string(),
            ReportFormat::Csv => self.to_csv_string(),
        }
    }
}

/// Writes the report to `path` in the requested format.
pub fn emit_report(report: &BenchReport, format: ReportFormat, path: &Path) -> Result<(), CliError> {
    let body = report.render(format);
    let mut file = File::create(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    file.write_all(body.as_bytes())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
