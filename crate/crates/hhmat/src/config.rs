//! Benchmark and verify run configuration.

use std::path::PathBuf;

use hypersparse::{CutSchedule, StreamConfig};

use crate::error::CliError;

/// Which accumulator the workers ingest into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Multi-level cascading accumulator.
    Hierarchical,
    /// Single flat matrix driven through the same update path (a one-level
    /// hierarchy); the baseline the hierarchical mode is measured against.
    FlatBaseline,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Hierarchical => "hierarchical",
            Mode::FlatBaseline => "flat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Full configuration of one benchmark run.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub workers: usize,
    pub stream: StreamConfig,
    pub cuts: CutSchedule,
    pub mode: Mode,
    /// Batches each worker ingests before its timed region starts.
    pub warmup_batches: u64,
    /// Pre-generate each worker's batches before timing so the measurement
    /// covers insertion only; `false` fuses generation into the timed loop.
    pub pregen: bool,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        self.stream
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.warmup_batches >= self.stream.num_batches {
            return Err(CliError::Config(format!(
                "warmup ({}) must be below the batch count ({})",
                self.warmup_batches, self.stream.num_batches
            )));
        }
        // Batches are split across workers; every worker needs its warmup
        // plus at least one timed batch.
        let min_assigned = self.stream.num_batches / self.workers as u64;
        if min_assigned <= self.warmup_batches {
            return Err(CliError::Config(format!(
                "{} batches split over {} workers leaves some worker with {} batches, \
                 not enough for {} warmup plus one timed batch",
                self.stream.num_batches, self.workers, min_assigned, self.warmup_batches
            )));
        }
        Ok(())
    }

    /// The cut schedule the workers actually run with.
    pub fn effective_cuts(&self) -> CutSchedule {
        match self.mode {
            Mode::Hierarchical => self.cuts.clone(),
            Mode::FlatBaseline => CutSchedule::flat(),
        }
    }
}

impl Default for BenchConfig {
    /// Desk-scale defaults: one worker, a 2^32-square matrix, 100 batches of
    /// 100,000 with 10 warmup batches, pre-generation on.
    fn default() -> Self {
        Self {
            workers: 1,
            stream: StreamConfig { num_batches: 100, ..Default::default() },
            cuts: CutSchedule::default(),
            mode: Mode::Hierarchical,
            warmup_batches: 10,
            pregen: true,
            output: None,
            format: ReportFormat::Json,
        }
    }
}

/// Number of physical cores usable by this process: the smaller of the
/// physical core count and the scheduler-visible parallelism (which honors
/// cgroup limits).
pub fn physical_cores() -> usize {
    let physical = num_cpus::get_physical();
    let visible = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    physical.min(visible).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        BenchConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_zero_workers() {
        let cfg = BenchConfig { workers: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_warmup_at_or_above_batch_count() {
        let mut cfg = BenchConfig::default();
        cfg.stream.num_batches = 10;
        cfg.warmup_batches = 10;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_workers_starved_of_timed_batches() {
        let mut cfg = BenchConfig::default();
        cfg.stream.num_batches = 20;
        cfg.workers = 4; // 5 batches each
        cfg.warmup_batches = 5;
        assert!(cfg.validate().is_err());
        cfg.warmup_batches = 4;
        cfg.validate().unwrap();
    }

    #[test]
    fn flat_mode_drops_cuts() {
        let cfg = BenchConfig { mode: Mode::FlatBaseline, ..Default::default() };
        assert_eq!(cfg.effective_cuts().levels(), 1);
    }

    #[test]
    fn physical_cores_is_positive() {
        assert!(physical_cores() >= 1);
    }
}
