//! Correctness verification: hierarchy vs flat oracle on one stream.
//!
//! Runs the cascading accumulator and a single flat matrix over the
//! identical batch sequence, checks the per-layer occupancy bound after
//! every update, and compares the flattened result entry-for-entry at the
//! end. Any difference is reported with the first differing key.

use hypersparse::{
    generate_batch, CheckedPlus, CutSchedule, HierarchicalMatrix, HypersparseMatrix, StreamConfig,
};

use crate::error::CliError;

/// Verification is meant to stay cheap; larger streams belong in `bench`.
pub const MAX_VERIFY_TRIPLES: u128 = 1_000_000;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub stream: StreamConfig,
    pub cuts: CutSchedule,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            stream: StreamConfig {
                scale: 24,
                batch_size: 10_000,
                num_batches: 50,
                ..Default::default()
            },
            cuts: CutSchedule::default(),
        }
    }
}

/// Outcome of a passing verification.
#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub triples: u64,
    pub batches: u64,
    pub nnz: u64,
    pub cascades_per_level: Vec<u64>,
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifySummary, CliError> {
    run_verify_with_hook(cfg, |_| {})
}

/// Verification with a corruption hook applied to the flattened hierarchy
/// before comparison; the negative-control tests use it to prove the
/// comparison actually bites.
#[doc(hidden)]
pub fn run_verify_with_hook(
    cfg: &VerifyConfig,
    corrupt: impl FnOnce(&mut HypersparseMatrix<i64>),
) -> Result<VerifySummary, CliError> {
    cfg.stream
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    if cfg.stream.total_triples() > MAX_VERIFY_TRIPLES {
        return Err(CliError::Config(format!(
            "verify is limited to {MAX_VERIFY_TRIPLES} triples, config generates {}",
            cfg.stream.total_triples()
        )));
    }

    let dim = cfg.stream.dimension();
    let mut hierarchy = HierarchicalMatrix::new(dim, dim, cfg.cuts.clone(), CheckedPlus)?;
    let mut oracle = HypersparseMatrix::<i64>::new(dim, dim)?;

    for index in 0..cfg.stream.num_batches {
        let batch = generate_batch(&cfg.stream, index);
        hierarchy.update(&batch)?;
        for t in &batch {
            oracle.accumulate(t.row, t.col, t.val, &CheckedPlus)?;
        }
        check_quiescent(&hierarchy, index)?;
    }

    let mut flattened = hierarchy.flatten()?;
    corrupt(&mut flattened);

    if flattened != oracle {
        return Err(CliError::Verify(first_difference(&flattened, &oracle)));
    }

    let stats = hierarchy.stats();
    Ok(VerifySummary {
        triples: stats.updates_applied,
        batches: cfg.stream.num_batches,
        nnz: oracle.nnz(),
        cascades_per_level: stats.cascades_per_level,
    })
}

fn check_quiescent(h: &HierarchicalMatrix, batch_index: u64) -> Result<(), CliError> {
    let occupancy = h.layer_nnz();
    for (level, &cut) in h.cuts().cuts().iter().enumerate() {
        if occupancy[level] > cut {
            return Err(CliError::Verify(format!(
                "after batch {batch_index}: layer {} holds {} entries, above its cut {}",
                level + 1,
                occupancy[level],
                cut
            )));
        }
    }
    Ok(())
}

/// Describes the first (row, col) key, in sorted order, whose value differs
/// between the two matrices.
fn first_difference(got: &HypersparseMatrix<i64>, want: &HypersparseMatrix<i64>) -> String {
    if got.dims() != want.dims() {
        return format!("dimensions differ: {:?} vs {:?}", got.dims(), want.dims());
    }
    let got_triples = got.extract_triples();
    let want_triples = want.extract_triples();
    let mut gi = got_triples.iter().peekable();
    let mut wi = want_triples.iter().peekable();
    loop {
        match (gi.peek(), wi.peek()) {
            (Some(g), Some(w)) => {
                let gk = (g.row, g.col);
                let wk = (w.row, w.col);
                if gk < wk {
                    return format!(
                        "first difference at ({}, {}): got {}, oracle has no entry",
                        g.row, g.col, g.val
                    );
                } else if wk < gk {
                    return format!(
                        "first difference at ({}, {}): got no entry, oracle has {}",
                        w.row, w.col, w.val
                    );
                } else if g.val != w.val {
                    return format!(
                        "first difference at ({}, {}): got {}, oracle has {}",
                        g.row, g.col, g.val, w.val
                    );
                }
                gi.next();
                wi.next();
            }
            (Some(g), None) => {
                return format!(
                    "first difference at ({}, {}): got {}, oracle has no entry",
                    g.row, g.col, g.val
                );
            }
            (None, Some(w)) => {
                return format!(
                    "first difference at ({}, {}): got no entry, oracle has {}",
                    w.row, w.col, w.val
                );
            }
            (None, None) => return "matrices differ but no differing key found".to_string(),
        }
    }
}
