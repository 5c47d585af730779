//! Multi-worker streaming-insert benchmark.
//!
//! Each worker owns a private accumulator and a disjoint contiguous slice of
//! the stream's batch indices; there is no shared mutable state and no work
//! stealing. Workers pre-generate (by default) and warm up independently,
//! rendezvous at a barrier, then ingest their timed batches. The aggregate
//! rate is total timed triples over the longest per-worker time, i.e. the
//! span of the concurrent timed phase.

use std::ops::Range;
use std::sync::Barrier;
use std::time::Instant;

use chrono::{SecondsFormat, Utc};
use hypersparse::{
    generate_batch, CheckedPlus, EdgeTriple, HierarchicalMatrix, HypersparseMatrix,
};

use crate::config::BenchConfig;
use crate::error::CliError;
use crate::report::{self, BenchReport, ConfigEcho, WorkerReport};

/// A finished run: the report, plus each worker's flattened matrix when the
/// caller asked to keep them (used by equivalence checks).
pub struct BenchOutcome {
    pub report: BenchReport,
    pub matrices: Vec<Option<HypersparseMatrix<i64>>>,
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome, CliError> {
    run_bench_inner(cfg, false)
}

/// Like [`run_bench`] but each worker also returns `flatten()` of its final
/// accumulator. Meant for small verification configs; at full scale the
/// flattened copies are as large as the accumulators themselves.
pub fn run_bench_keeping_matrices(cfg: &BenchConfig) -> Result<BenchOutcome, CliError> {
    run_bench_inner(cfg, true)
}

fn run_bench_inner(cfg: &BenchConfig, keep_matrices: bool) -> Result<BenchOutcome, CliError> {
    cfg.validate()?;
    let assignments = split_batches(cfg.stream.num_batches, cfg.workers);
    let barrier = Barrier::new(cfg.workers);

    let results: Vec<Result<WorkerOutcome, CliError>> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(cfg.workers);
        for (worker_id, batch_range) in assignments.into_iter().enumerate() {
            let barrier = &barrier;
            handles.push(scope.spawn(move || {
                run_worker(cfg, worker_id, batch_range, barrier, keep_matrices)
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });

    // First worker error aborts the run; no partial report.
    let mut workers = Vec::with_capacity(cfg.workers);
    let mut matrices = Vec::with_capacity(cfg.workers);
    for result in results {
        let outcome = result?;
        workers.push(outcome.report);
        matrices.push(outcome.flattened);
    }

    let aggregate = report::aggregate_rate(&workers);
    let wall = report::max_wall_seconds(&workers);
    let bench_report = BenchReport {
        config: ConfigEcho::from_config(cfg),
        workers,
        aggregate_updates_per_second: aggregate,
        wall_seconds: wall,
        timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
    };

    if let Some(path) = &cfg.output {
        report::emit_report(&bench_report, cfg.format, path)?;
    }

    Ok(BenchOutcome { report: bench_report, matrices })
}

/// Contiguous near-even split of batch indices across workers; the first
/// `num_batches % workers` workers take one extra batch.
fn split_batches(num_batches: u64, workers: usize) -> Vec<Range<u64>> {
    let workers = workers as u64;
    let base = num_batches / workers;
    let extra = num_batches % workers;
    let mut ranges = Vec::with_capacity(workers as usize);
    let mut start = 0;
    for w in 0..workers {
        let len = base + u64::from(w < extra);
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

struct WorkerOutcome {
    report: WorkerReport,
    flattened: Option<HypersparseMatrix<i64>>,
}

fn run_worker(
    cfg: &BenchConfig,
    worker_id: usize,
    batch_range: Range<u64>,
    barrier: &Barrier,
    keep_matrix: bool,
) -> Result<WorkerOutcome, CliError> {
    let dim = cfg.stream.dimension();
    let warmup = cfg.warmup_batches as usize;

    // Setup (allocation, pre-generation, warmup) happens before the
    // rendezvous. Failures are carried across the barrier so the other
    // workers are never left waiting on a dead peer.
    let setup: Result<_, CliError> = (|| {
        let mut matrix =
            HierarchicalMatrix::new(dim, dim, cfg.effective_cuts(), CheckedPlus)?;
        let pregenerated: Vec<Vec<EdgeTriple<i64>>> = if cfg.pregen {
            batch_range
                .clone()
                .map(|i| generate_batch(&cfg.stream, i))
                .collect()
        } else {
            Vec::new()
        };
        if cfg.pregen {
            for batch in &pregenerated[..warmup] {
                matrix.update(batch)?;
            }
        } else {
            for index in batch_range.clone().take(warmup) {
                let batch = generate_batch(&cfg.stream, index);
                matrix.update(&batch)?;
            }
        }
        Ok((matrix, pregenerated))
    })();

    barrier.wait();
    let (mut matrix, pregenerated) = setup?;

    let timed_batches = (batch_range.end - batch_range.start) - cfg.warmup_batches;
    let start = Instant::now();
    if cfg.pregen {
        for batch in &pregenerated[warmup..] {
            matrix.update(batch)?;
        }
    } else {
        // Fused mode: generation cost is part of the measurement.
        for index in batch_range.skip(warmup) {
            let batch = generate_batch(&cfg.stream, index);
            matrix.update(&batch)?;
        }
    }
    let wall_seconds = start.elapsed().as_secs_f64();

    let triples_ingested = timed_batches * cfg.stream.batch_size;
    let stats = matrix.stats();
    let flattened = if keep_matrix { Some(matrix.flatten()?) } else { None };

    Ok(WorkerOutcome {
        report: WorkerReport {
            worker_id,
            triples_ingested,
            wall_seconds,
            updates_per_second: report::rate(triples_ingested, wall_seconds),
            updates_applied: stats.updates_applied,
            cascades_per_level: stats.cascades_per_level,
            entries_promoted_per_level: stats.entries_promoted_per_level,
        },
        flattened,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_covers_everything_disjointly() {
        for (batches, workers) in [(100u64, 1usize), (100, 3), (7, 7), (10, 4)] {
            let ranges = split_batches(batches, workers);
            assert_eq!(ranges.len(), workers);
            let mut next = 0;
            for r in &ranges {
                assert_eq!(r.start, next);
                next = r.end;
            }
            assert_eq!(next, batches);
            let sizes: Vec<u64> = ranges.iter().map(|r| r.end - r.start).collect();
            let min = *sizes.iter().min().unwrap();
            let max = *sizes.iter().max().unwrap();
            assert!(max - min <= 1);
        }
    }
}
