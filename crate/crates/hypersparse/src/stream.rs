//! Deterministic power-law edge-stream generator.
//!
//! Edges come from R-MAT recursive quadrant sampling: each of the `scale`
//! bit levels picks one of four quadrants with probabilities (a, b, c, d),
//! and the chosen bits are appended to the row and column indices. Skewed
//! quadrant weights concentrate edges around low indices, producing the
//! power-law degree distributions typical of network traffic. Uniform
//! weights (0.25 each) degenerate to uniform random endpoints.
//!
//! The whole stream is a pure function of its [`StreamConfig`]. Each batch
//! draws from its own SplitMix64 substream seeded with `seed ^ batch_index`,
//! so batches can be generated in any order, on any thread, with identical
//! results.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::matrix::EdgeTriple;
use crate::rng::SplitMix64;

/// Default R-MAT quadrant weights, heavily skewed toward the first quadrant.
pub const DEFAULT_SKEW: [f64; 4] = [0.57, 0.19, 0.19, 0.05];

/// Uniform quadrant weights: no skew, endpoints uniform over the index space.
pub const UNIFORM_SKEW: [f64; 4] = [0.25, 0.25, 0.25, 0.25];

/// How triple values are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueMode {
    /// Every triple carries value 1, so accumulated values are occurrence
    /// counts.
    ConstantOne,
    /// Unit magnitude with random sign (+1 or -1); exercises cancellation
    /// and explicit-zero retention downstream.
    UnitRandom,
}

/// Parameters of a deterministic power-law stream over a
/// `2^scale x 2^scale` coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamConfig {
    /// Bits per endpoint index; endpoints lie in `[0, 2^scale)`.
    pub scale: u32,
    /// R-MAT quadrant probabilities (a, b, c, d), summing to 1, with the
    /// first quadrant at least as likely as each of the others.
    pub skew: [f64; 4],
    /// Triples per batch.
    pub batch_size: u64,
    /// Batches in the stream.
    pub num_batches: u64,
    pub seed: u64,
    pub value_mode: ValueMode,
}

impl Default for StreamConfig {
    /// The full-scale default: an IPv4-shaped matrix fed 100,000,000 triples
    /// as 1,000 batches of 100,000.
    fn default() -> Self {
        Self {
            scale: 32,
            skew: DEFAULT_SKEW,
            batch_size: 100_000,
            num_batches: 1_000,
            seed: 42,
            value_mode: ValueMode::ConstantOne,
        }
    }
}

impl StreamConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidStreamConfig { reason });
        if self.scale == 0 || self.scale > 63 {
            return fail(format!("scale must be in 1..=63, got {}", self.scale));
        }
        let sum: f64 = self.skew.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return fail(format!("skew must sum to 1, got {sum}"));
        }
        if self.skew.iter().any(|&p| p < 0.0) {
            return fail(format!("skew weights must be nonnegative, got {:?}", self.skew));
        }
        let [a, b, c, d] = self.skew;
        if a < b || a < c || a < d {
            return fail(format!(
                "first quadrant weight must dominate, got {:?}",
                self.skew
            ));
        }
        if self.batch_size == 0 {
            return fail("batch_size must be at least 1".to_string());
        }
        if self.num_batches == 0 {
            return fail("num_batches must be at least 1".to_string());
        }
        Ok(())
    }

    /// Side length of the coordinate space, `2^scale`.
    pub fn dimension(&self) -> u64 {
        1u64 << self.scale
    }

    /// Total triples across the whole stream.
    pub fn total_triples(&self) -> u128 {
        u128::from(self.batch_size) * u128::from(self.num_batches)
    }
}

/// Generates batch `batch_index` of the stream: exactly `cfg.batch_size`
/// triples with endpoints in `[0, 2^scale)`, fully determined by
/// `(cfg.seed, batch_index)`.
///
/// Repeated (row, col) pairs are expected and intentional; the stream counts
/// updates, not distinct entries.
///
/// Panics if `batch_index >= cfg.num_batches`.
pub fn generate_batch(cfg: &StreamConfig, batch_index: u64) -> Vec<EdgeTriple<i64>> {
    assert!(
        batch_index < cfg.num_batches,
        "batch index {batch_index} out of range for {} batches",
        cfg.num_batches
    );
    let mut rng = SplitMix64::new(cfg.seed ^ batch_index);
    let t_a = cfg.skew[0];
    let t_ab = t_a + cfg.skew[1];
    let t_abc = t_ab + cfg.skew[2];

    let mut out = Vec::with_capacity(cfg.batch_size as usize);
    for _ in 0..cfg.batch_size {
        let mut row = 0u64;
        let mut col = 0u64;
        for _ in 0..cfg.scale {
            let u = rng.next_f64();
            let (rbit, cbit) = if u < t_a {
                (0, 0)
            } else if u < t_ab {
                (0, 1)
            } else if u < t_abc {
                (1, 0)
            } else {
                (1, 1)
            };
            row = (row << 1) | rbit;
            col = (col << 1) | cbit;
        }
        let val = match cfg.value_mode {
            ValueMode::ConstantOne => 1,
            ValueMode::UnitRandom => {
                if rng.next_u64() & 1 == 0 {
                    1
                } else {
                    -1
                }
            }
        };
        out.push(EdgeTriple::new(row, col, val));
    }
    out
}

/// Histogram of per-row out-degrees: degree -> number of rows with that
/// degree. Degree counts triples (duplicates included), matching update
/// semantics.
pub fn degree_histogram<V>(triples: &[EdgeTriple<V>]) -> BTreeMap<u64, u64> {
    let mut per_row: HashMap<u64, u64> = HashMap::new();
    for t in triples {
        *per_row.entry(t.row).or_insert(0) += 1;
    }
    let mut hist = BTreeMap::new();
    for &degree in per_row.values() {
        *hist.entry(degree).or_insert(0) += 1;
    }
    hist
}
