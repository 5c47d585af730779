//! N-level cascading accumulator over hypersparse layers.
//!
//! Updates land in the smallest layer A1, which stays within fast-memory
//! footprints. When a layer's stored-entry count exceeds its cut, the whole
//! layer is added into the next one and cleared, so the bulk of update work
//! happens in small, hot maps and slow-memory traffic is amortized over
//! entire layer promotions. Reads flatten the layers back into one matrix.
//!
//! The structure is logically equivalent to a single flat matrix: for any
//! update sequence, `flatten()` equals building one matrix from all triples.

use crate::error::{Error, Result};
use crate::matrix::{EdgeTriple, HypersparseMatrix, Value};
use crate::monoid::{AdditiveMonoid, CheckedPlus};

/// Default cut schedule: four levels with geometrically spaced cuts so the
/// first layer stays within L2-cache-scale footprints.
pub const DEFAULT_CUTS: [u64; 3] = [1 << 15, 1 << 19, 1 << 23];

/// Per-level overflow thresholds c_1 < c_2 < ... < c_{N-1}.
///
/// A schedule of length N-1 configures N layers; the deepest layer has no
/// cut and absorbs overflow unboundedly. An empty schedule is the degenerate
/// single-layer case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSchedule {
    cuts: Vec<u64>,
}

impl CutSchedule {
    pub fn new(cuts: Vec<u64>) -> Result<Self> {
        for (i, &cut) in cuts.iter().enumerate() {
            if cut == 0 {
                return Err(Error::InvalidCuts {
                    reason: format!("cut {} is zero; cuts must be positive", i + 1),
                });
            }
            if i > 0 && cuts[i - 1] >= cut {
                return Err(Error::InvalidCuts {
                    reason: format!(
                        "cuts must be strictly increasing, got {} then {}",
                        cuts[i - 1],
                        cut
                    ),
                });
            }
        }
        Ok(Self { cuts })
    }

    /// The single-layer schedule: no cuts, no cascades.
    pub fn flat() -> Self {
        Self { cuts: Vec::new() }
    }

    /// Number of layers this schedule configures.
    pub fn levels(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn cuts(&self) -> &[u64] {
        &self.cuts
    }
}

impl Default for CutSchedule {
    fn default() -> Self {
        Self { cuts: DEFAULT_CUTS.to_vec() }
    }
}

/// Observability counters for cascade tuning. All counters are cumulative
/// and never decrease.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CascadeStats {
    /// Total triples ingested across all `update` calls.
    pub updates_applied: u64,
    /// Cascades fired out of each level; the deepest level never fires.
    pub cascades_per_level: Vec<u64>,
    /// Entries promoted out of each level, summed over cascades.
    pub entries_promoted_per_level: Vec<u64>,
}

/// Ordered layers A1..AN sharing one coordinate space, plus cut schedule and
/// cascade statistics.
///
/// Quiescent invariant: after any public operation returns, every layer
/// above the deepest satisfies `nnz(A_i) <= c_i`.
///
/// Single-writer like the underlying matrices; intended parallelism is many
/// independent instances, one per worker.
#[derive(Debug, Clone)]
pub struct HierarchicalMatrix<V = i64, M = CheckedPlus> {
    layers: Vec<HypersparseMatrix<V>>,
    cuts: CutSchedule,
    monoid: M,
    stats: CascadeStats,
}

impl<V: Value, M: AdditiveMonoid<V>> HierarchicalMatrix<V, M> {
    pub fn new(nrows: u64, ncols: u64, cuts: CutSchedule, monoid: M) -> Result<Self> {
        let levels = cuts.levels();
        let layers = (0..levels)
            .map(|_| HypersparseMatrix::new(nrows, ncols))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layers,
            cuts,
            monoid,
            stats: CascadeStats {
                updates_applied: 0,
                cascades_per_level: vec![0; levels],
                entries_promoted_per_level: vec![0; levels],
            },
        })
    }

    /// Ingests a batch: duplicates inside the batch are pre-combined, the
    /// staged batch is added to A1, and cascades restore the quiescent
    /// invariant.
    ///
    /// Bounds are validated before anything mutates, so an out-of-bounds
    /// triple rejects the whole batch and leaves the hierarchy unchanged.
    pub fn update(&mut self, batch: &[EdgeTriple<V>]) -> Result<()> {
        let (nrows, ncols) = self.dims();
        for t in batch {
            if t.row >= nrows || t.col >= ncols {
                return Err(Error::IndexOutOfBounds { row: t.row, col: t.col, nrows, ncols });
            }
        }
        if batch.is_empty() {
            return Ok(());
        }
        let staged = HypersparseMatrix::build(nrows, ncols, batch, &self.monoid)?;
        self.layers[0].add_assign_with(&staged, &self.monoid)?;
        self.stats.updates_applied += batch.len() as u64;
        self.cascade()
    }

    /// One in-order pass over the levels: any layer over its cut is added to
    /// the next layer and cleared. Processing levels in order lets a
    /// promotion that overfills level i+1 be handled in the same pass,
    /// matching the repeat-until-quiescent-or-deepest rule.
    ///
    /// On overflow the error is returned before the source layer is cleared,
    /// so no entry is dropped.
    fn cascade(&mut self) -> Result<()> {
        for level in 0..self.layers.len() - 1 {
            // Cascade fires strictly above the cut, never at it.
            if self.layers[level].nnz() <= self.cuts.cuts()[level] {
                continue;
            }
            let promoted = self.layers[level].nnz();
            let (shallow, deeper) = self.layers.split_at_mut(level + 1);
            deeper[0].add_assign_with(&shallow[level], &self.monoid)?;
            shallow[level].clear();
            self.stats.cascades_per_level[level] += 1;
            self.stats.entries_promoted_per_level[level] += promoted;
        }
        Ok(())
    }

    /// Sums all layers into a fresh matrix; the hierarchy is not modified.
    pub fn flatten(&self) -> Result<HypersparseMatrix<V>> {
        let (nrows, ncols) = self.dims();
        let cap: u64 = self.layers.iter().map(|l| l.nnz()).sum();
        let mut out = HypersparseMatrix::with_capacity(nrows, ncols, cap as usize)?;
        for layer in &self.layers {
            out.add_assign_with(layer, &self.monoid)?;
        }
        Ok(out)
    }

    /// Folds every shallower layer into the deepest one, leaving the same
    /// logical matrix with all pending updates settled. Useful between
    /// ingest phases of a long-running stream; queries go through
    /// [`flatten`](Self::flatten), which never mutates.
    pub fn compact(&mut self) -> Result<()> {
        let last = self.layers.len() - 1;
        for level in 0..last {
            if self.layers[level].is_empty() {
                continue;
            }
            let (shallow, deepest) = self.layers.split_at_mut(last);
            deepest[0].add_assign_with(&shallow[level], &self.monoid)?;
            shallow[level].clear();
        }
        Ok(())
    }

    /// Snapshot of the cascade counters.
    pub fn stats(&self) -> CascadeStats {
        self.stats.clone()
    }

    pub fn layers(&self) -> &[HypersparseMatrix<V>] {
        &self.layers
    }

    pub fn cuts(&self) -> &CutSchedule {
        &self.cuts
    }

    pub fn num_levels(&self) -> usize {
        self.layers.len()
    }

    pub fn dims(&self) -> (u64, u64) {
        self.layers[0].dims()
    }

    /// Stored entries per level, shallowest first.
    pub fn layer_nnz(&self) -> Vec<u64> {
        self.layers.iter().map(|l| l.nnz()).collect()
    }
}
