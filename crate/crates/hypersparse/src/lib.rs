//! Hierarchical hypersparse matrices for high-rate streaming updates.
//!
//! A hypersparse matrix stores far fewer entries than it has rows or
//! columns (think a 2^32 x 2^32 origin-destination traffic matrix), so all
//! storage must scale with the entry count alone. Streaming millions of
//! single-entry updates into one big map hammers slow memory; the
//! [`HierarchicalMatrix`] absorbs updates in a small hot layer and cascades
//! whole layers into larger ones as they fill, keeping most work in fast
//! memory while remaining exactly equivalent to one flat matrix.
//!
//! ```
//! use hypersparse::{CheckedPlus, CutSchedule, EdgeTriple, HierarchicalMatrix};
//!
//! let cuts = CutSchedule::new(vec![4, 16]).unwrap();
//! let mut h = HierarchicalMatrix::new(1 << 32, 1 << 32, cuts, CheckedPlus).unwrap();
//! h.update(&[EdgeTriple::new(7, 9, 1), EdgeTriple::new(7, 9, 1)]).unwrap();
//! assert_eq!(h.flatten().unwrap().get(7, 9), Some(2));
//! ```
//!
//! [`stream`] generates deterministic power-law update streams for
//! benchmarking, batch by batch, reproducibly across threads.

pub mod error;
pub mod hierarchy;
pub mod matrix;
pub mod monoid;
pub mod rng;
pub mod stream;

pub use error::{Error, Result};
pub use hierarchy::{CascadeStats, CutSchedule, HierarchicalMatrix, DEFAULT_CUTS};
pub use matrix::{EdgeTriple, HypersparseMatrix, Value};
pub use monoid::{AdditiveMonoid, CheckedPlus, FloatPlus};
pub use rng::SplitMix64;
pub use stream::{
    degree_histogram, generate_batch, StreamConfig, ValueMode, DEFAULT_SKEW, UNIFORM_SKEW,
};
