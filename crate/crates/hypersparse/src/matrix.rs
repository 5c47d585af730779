//! Hypersparse matrices: associative (row, col) -> value maps over index
//! spaces far larger than the entry count.
//!
//! Storage is an unordered hash map keyed by the packed (row, col) pair, so
//! every cost is proportional to the number of stored entries and never to
//! the dimensions. A matrix over a 2^32 x 2^32 (or 2^64 x 2^64) index space
//! costs O(1) to create and O(nnz) to fill.
//!
//! Stored values may equal the additive identity: an entry that sums to zero
//! stays stored, and `nnz` counts stored entries.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hash, Hasher};

use crate::error::{Error, Result};
use crate::monoid::AdditiveMonoid;
use crate::rng::mix64;

/// Marker bound for matrix value types.
pub trait Value: Copy + PartialEq + std::fmt::Debug + Send + Sync + 'static {}

impl<T: Copy + PartialEq + std::fmt::Debug + Send + Sync + 'static> Value for T {}

/// One (row, col, value) update record; the unit of ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeTriple<V = i64> {
    pub row: u64,
    pub col: u64,
    pub val: V,
}

impl<V> EdgeTriple<V> {
    pub fn new(row: u64, col: u64, val: V) -> Self {
        Self { row, col, val }
    }
}

/// Hashes packed matrix keys with the SplitMix64 finalizer.
///
/// Keys are already dense integers, so one full-avalanche mix beats SipHash
/// on the insert path by a wide margin, and insert throughput is the whole
/// point of this structure.
#[derive(Debug, Default, Clone)]
pub struct PackedKeyHasher(u64);

impl Hasher for PackedKeyHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        // Generic fallback, unused by the integer key types below.
        for &b in bytes {
            self.0 = mix64(self.0 ^ u64::from(b));
        }
    }

    #[inline]
    fn write_u64(&mut self, k: u64) {
        self.0 = mix64(k);
    }

    #[inline]
    fn write_u128(&mut self, k: u128) {
        self.0 = mix64(mix64(k as u64) ^ (k >> 64) as u64);
    }
}

type KeyMap<K, V> = HashMap<K, V, BuildHasherDefault<PackedKeyHasher>>;

/// A (row, col) pair packed into one integer key.
///
/// Packed keys sort in (row, col) lexicographic order, which is what makes
/// sorted extraction a plain integer sort.
trait PackedKey: Copy + Eq + Ord + Hash {
    fn pack(row: u64, col: u64) -> Self;
    fn unpack(self) -> (u64, u64);
}

impl PackedKey for u64 {
    #[inline]
    fn pack(row: u64, col: u64) -> Self {
        (row << 32) | col
    }

    #[inline]
    fn unpack(self) -> (u64, u64) {
        (self >> 32, self & 0xFFFF_FFFF)
    }
}

impl PackedKey for u128 {
    #[inline]
    fn pack(row: u64, col: u64) -> Self {
        (u128::from(row) << 64) | u128::from(col)
    }

    #[inline]
    fn unpack(self) -> (u64, u64) {
        ((self >> 64) as u64, self as u64)
    }
}

/// Dimensions up to 2^32 pack into a single machine word (the IPv4-shaped
/// case); anything larger falls back to a 128-bit composite key.
const NARROW_LIMIT: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
enum Store<V> {
    Narrow(KeyMap<u64, V>),
    Wide(KeyMap<u128, V>),
}

/// A hypersparse matrix: a mapping from 64-bit (row, col) keys to values.
///
/// Equality (`==`) means identical dimensions and identical entry sets, key
/// and value; an explicitly stored zero differs from an absent entry.
///
/// Instances are single-writer: mutate from one thread at a time, read
/// concurrently only while no writer exists. There is no internal locking.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersparseMatrix<V = i64> {
    nrows: u64,
    ncols: u64,
    store: Store<V>,
}

impl<V: Value> HypersparseMatrix<V> {
    /// Creates an empty matrix. Cost is O(1) regardless of dimensions;
    /// `new(u64::MAX, u64::MAX)` is as cheap as `new(1, 1)`.
    ///
    /// Dimensions of exactly 2^64 are not representable in a u64 count; use
    /// `u64::MAX` for an effectively unbounded index space.
    pub fn new(nrows: u64, ncols: u64) -> Result<Self> {
        Self::with_capacity(nrows, ncols, 0)
    }

    /// Like [`new`](Self::new) with pre-allocated room for `cap` entries.
    pub fn with_capacity(nrows: u64, ncols: u64, cap: usize) -> Result<Self> {
        if nrows == 0 || ncols == 0 {
            return Err(Error::InvalidDimension { nrows, ncols });
        }
        let store = if nrows <= NARROW_LIMIT && ncols <= NARROW_LIMIT {
            Store::Narrow(KeyMap::with_capacity_and_hasher(cap, Default::default()))
        } else {
            Store::Wide(KeyMap::with_capacity_and_hasher(cap, Default::default()))
        };
        Ok(Self { nrows, ncols, store })
    }

    /// Builds a matrix from triples, combining duplicate keys with the
    /// monoid (GraphBLAS-style duplicate summing).
    pub fn build<M: AdditiveMonoid<V>>(
        nrows: u64,
        ncols: u64,
        triples: &[EdgeTriple<V>],
        monoid: &M,
    ) -> Result<Self> {
        let mut matrix = Self::with_capacity(nrows, ncols, triples.len())?;
        for t in triples {
            matrix.accumulate(t.row, t.col, t.val, monoid)?;
        }
        Ok(matrix)
    }

    pub fn nrows(&self) -> u64 {
        self.nrows
    }

    pub fn ncols(&self) -> u64 {
        self.ncols
    }

    pub fn dims(&self) -> (u64, u64) {
        (self.nrows, self.ncols)
    }

    /// Number of stored entries, including explicit zeros.
    pub fn nnz(&self) -> u64 {
        match &self.store {
            Store::Narrow(m) => m.len() as u64,
            Store::Wide(m) => m.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, row: u64, col: u64) -> Option<V> {
        match &self.store {
            Store::Narrow(m) => m.get(&u64::pack(row, col)).copied(),
            Store::Wide(m) => m.get(&u128::pack(row, col)).copied(),
        }
    }

    /// Inserts one triple, combining with any existing value at the key.
    #[inline]
    pub fn accumulate<M: AdditiveMonoid<V>>(
        &mut self,
        row: u64,
        col: u64,
        val: V,
        monoid: &M,
    ) -> Result<()> {
        if row >= self.nrows || col >= self.ncols {
            return Err(Error::IndexOutOfBounds {
                row,
                col,
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        match &mut self.store {
            Store::Narrow(m) => accumulate_into(m, u64::pack(row, col), val, monoid),
            Store::Wide(m) => accumulate_into(m, u128::pack(row, col), val, monoid),
        }
    }

    /// Element-wise key-union addition. Keys present in both operands carry
    /// the combined value; keys present in one carry that value unchanged.
    /// Neither input is modified.
    pub fn ewise_add<M: AdditiveMonoid<V>>(&self, other: &Self, monoid: &M) -> Result<Self> {
        self.check_same_dims(other)?;
        let mut out = self.clone();
        out.add_assign_with(other, monoid)?;
        Ok(out)
    }

    /// In-place element-wise addition: `self` becomes `self + other`.
    ///
    /// Merges `other`'s entries directly into `self`'s map, so no copy of
    /// `self`'s entry set is made. If the monoid overflows mid-merge the
    /// error names the offending key; entries merged before it remain
    /// combined (callers that need atomicity stage into a fresh matrix).
    pub fn add_assign_with<M: AdditiveMonoid<V>>(&mut self, other: &Self, monoid: &M) -> Result<()> {
        self.check_same_dims(other)?;
        match (&mut self.store, &other.store) {
            (Store::Narrow(dst), Store::Narrow(src)) => merge_into(dst, src, monoid),
            (Store::Wide(dst), Store::Wide(src)) => merge_into(dst, src, monoid),
            // The store variant is a pure function of the dimensions, which
            // were just checked equal.
            _ => unreachable!("store variant mismatch with equal dimensions"),
        }
    }

    /// Removes all entries, keeping dimensions. Bucket storage is recycled
    /// for reuse rather than freed; it is released when the matrix drops.
    pub fn clear(&mut self) {
        match &mut self.store {
            Store::Narrow(m) => m.clear(),
            Store::Wide(m) => m.clear(),
        }
    }

    /// All stored entries in strictly increasing (row, col) order.
    /// `build` on the result reproduces a matrix equal to `self`.
    pub fn extract_triples(&self) -> Vec<EdgeTriple<V>> {
        match &self.store {
            Store::Narrow(m) => extract_sorted(m),
            Store::Wide(m) => extract_sorted(m),
        }
    }

    /// Monoid-fold of each row's stored values. Rows without entries are
    /// absent from the result.
    pub fn row_sums<M: AdditiveMonoid<V>>(&self, monoid: &M) -> Result<BTreeMap<u64, V>> {
        self.axis_sums(monoid, |row, _col| row)
    }

    /// Column counterpart of [`row_sums`](Self::row_sums).
    pub fn col_sums<M: AdditiveMonoid<V>>(&self, monoid: &M) -> Result<BTreeMap<u64, V>> {
        self.axis_sums(monoid, |_row, col| col)
    }

    /// Monoid-fold of every stored value.
    pub fn value_sum<M: AdditiveMonoid<V>>(&self, monoid: &M) -> Result<V> {
        let mut acc = monoid.identity();
        for t in self.iter() {
            acc = monoid
                .combine(acc, t.val)
                .ok_or(Error::Overflow { row: t.row, col: t.col })?;
        }
        Ok(acc)
    }

    /// Iterates stored entries in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = EdgeTriple<V>> + '_ {
        let narrow = match &self.store {
            Store::Narrow(m) => Some(m.iter()),
            Store::Wide(_) => None,
        };
        let wide = match &self.store {
            Store::Wide(m) => Some(m.iter()),
            Store::Narrow(_) => None,
        };
        narrow
            .into_iter()
            .flatten()
            .map(|(&k, &v)| {
                let (row, col) = k.unpack();
                EdgeTriple::new(row, col, v)
            })
            .chain(wide.into_iter().flatten().map(|(&k, &v)| {
                let (row, col) = k.unpack();
                EdgeTriple::new(row, col, v)
            }))
    }

    fn axis_sums<M: AdditiveMonoid<V>>(
        &self,
        monoid: &M,
        axis: impl Fn(u64, u64) -> u64,
    ) -> Result<BTreeMap<u64, V>> {
        let mut sums = BTreeMap::new();
        for t in self.iter() {
            let key = axis(t.row, t.col);
            let acc = sums.entry(key).or_insert_with(|| monoid.identity());
            *acc = monoid
                .combine(*acc, t.val)
                .ok_or(Error::Overflow { row: t.row, col: t.col })?;
        }
        Ok(sums)
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                left_rows: self.nrows,
                left_cols: self.ncols,
                right_rows: other.nrows,
                right_cols: other.ncols,
            });
        }
        Ok(())
    }
}

#[inline]
fn accumulate_into<K: PackedKey, V: Value, M: AdditiveMonoid<V>>(
    map: &mut KeyMap<K, V>,
    key: K,
    val: V,
    monoid: &M,
) -> Result<()> {
    match map.entry(key) {
        Entry::Occupied(mut slot) => {
            let combined = monoid.combine(*slot.get(), val).ok_or_else(|| {
                let (row, col) = key.unpack();
                Error::Overflow { row, col }
            })?;
            *slot.get_mut() = combined;
        }
        Entry::Vacant(slot) => {
            slot.insert(val);
        }
    }
    Ok(())
}

fn merge_into<K: PackedKey, V: Value, M: AdditiveMonoid<V>>(
    dst: &mut KeyMap<K, V>,
    src: &KeyMap<K, V>,
    monoid: &M,
) -> Result<()> {
    dst.reserve(src.len());
    for (&key, &val) in src {
        accumulate_into(dst, key, val, monoid)?;
    }
    Ok(())
}

fn extract_sorted<K: PackedKey, V: Value>(map: &KeyMap<K, V>) -> Vec<EdgeTriple<V>> {
    let mut entries: Vec<(K, V)> = map.iter().map(|(&k, &v)| (k, v)).collect();
    entries.sort_unstable_by_key(|&(k, _)| k);
    entries
        .into_iter()
        .map(|(k, v)| {
            let (row, col) = k.unpack();
            EdgeTriple::new(row, col, v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::CheckedPlus;

    fn triples(spec: &[(u64, u64, i64)]) -> Vec<EdgeTriple> {
        spec.iter().map(|&(r, c, v)| EdgeTriple::new(r, c, v)).collect()
    }

    #[test]
    fn new_empty_at_ipv4_scale() {
        let m = HypersparseMatrix::<i64>::new(1 << 32, 1 << 32).unwrap();
        assert_eq!(m.nnz(), 0);
        assert_eq!(m.dims(), (1 << 32, 1 << 32));
    }

    #[test]
    fn new_at_max_dimensions_is_cheap() {
        // A dense or per-row representation could not even construct this;
        // finishing instantly with nnz = 0 is the storage-bound check.
        let m = HypersparseMatrix::<i64>::new(u64::MAX, u64::MAX).unwrap();
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn new_rejects_zero_dimension() {
        assert_eq!(
            HypersparseMatrix::<i64>::new(0, 5),
            Err(Error::InvalidDimension { nrows: 0, ncols: 5 })
        );
        assert!(HypersparseMatrix::<i64>::new(5, 0).is_err());
    }

    #[test]
    fn build_folds_duplicates() {
        let m = HypersparseMatrix::build(10, 10, &triples(&[(1, 2, 5), (1, 2, 3)]), &CheckedPlus)
            .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 2), Some(8));
    }

    #[test]
    fn build_empty_input() {
        let m = HypersparseMatrix::<i64>::build(10, 10, &[], &CheckedPlus).unwrap();
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn build_distinct_keys() {
        let m = HypersparseMatrix::build(10, 10, &triples(&[(1, 2, 5), (3, 4, 7)]), &CheckedPlus)
            .unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 2), Some(5));
        assert_eq!(m.get(3, 4), Some(7));
        assert_eq!(m.get(0, 0), None);
    }

    #[test]
    fn build_reports_offending_triple() {
        let err = HypersparseMatrix::build(10, 10, &triples(&[(1, 2, 5), (10, 0, 1)]), &CheckedPlus)
            .unwrap_err();
        assert_eq!(
            err,
            Error::IndexOutOfBounds { row: 10, col: 0, nrows: 10, ncols: 10 }
        );
    }

    #[test]
    fn build_reports_overflow() {
        let err = HypersparseMatrix::build(
            10,
            10,
            &triples(&[(1, 2, i64::MAX), (1, 2, 1)]),
            &CheckedPlus,
        )
        .unwrap_err();
        assert_eq!(err, Error::Overflow { row: 1, col: 2 });
    }

    #[test]
    fn ewise_add_key_union() {
        let a = HypersparseMatrix::build(10, 10, &triples(&[(0, 0, 1), (5, 7, 2)]), &CheckedPlus)
            .unwrap();
        let b = HypersparseMatrix::build(10, 10, &triples(&[(5, 7, 3), (9, 1, 4)]), &CheckedPlus)
            .unwrap();
        let sum = a.ewise_add(&b, &CheckedPlus).unwrap();
        assert_eq!(sum.nnz(), 3);
        assert_eq!(sum.get(0, 0), Some(1));
        assert_eq!(sum.get(5, 7), Some(5));
        assert_eq!(sum.get(9, 1), Some(4));
        // Inputs untouched.
        assert_eq!(a.nnz(), 2);
        assert_eq!(b.get(5, 7), Some(3));
    }

    #[test]
    fn ewise_add_identity_and_commutativity() {
        let a = HypersparseMatrix::build(8, 8, &triples(&[(1, 1, 4), (2, 3, -1)]), &CheckedPlus)
            .unwrap();
        let empty = HypersparseMatrix::new(8, 8).unwrap();
        assert_eq!(a.ewise_add(&empty, &CheckedPlus).unwrap(), a);
        let b = HypersparseMatrix::build(8, 8, &triples(&[(1, 1, 2), (7, 0, 9)]), &CheckedPlus)
            .unwrap();
        assert_eq!(
            a.ewise_add(&b, &CheckedPlus).unwrap(),
            b.ewise_add(&a, &CheckedPlus).unwrap()
        );
    }

    #[test]
    fn ewise_add_dimension_mismatch() {
        let a = HypersparseMatrix::<i64>::new(4, 4).unwrap();
        let b = HypersparseMatrix::<i64>::new(4, 5).unwrap();
        assert!(matches!(
            a.ewise_add(&b, &CheckedPlus),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn add_assign_combines_in_place() {
        let mut a =
            HypersparseMatrix::build(4, 4, &triples(&[(1, 1, 2)]), &CheckedPlus).unwrap();
        let b = HypersparseMatrix::build(4, 4, &triples(&[(1, 1, 3)]), &CheckedPlus).unwrap();
        a.add_assign_with(&b, &CheckedPlus).unwrap();
        assert_eq!(a.get(1, 1), Some(5));
        assert_eq!(b.get(1, 1), Some(3));
    }

    #[test]
    fn add_assign_empty_operands() {
        let mut a =
            HypersparseMatrix::build(4, 4, &triples(&[(1, 1, 2)]), &CheckedPlus).unwrap();
        let snapshot = a.clone();
        let empty = HypersparseMatrix::new(4, 4).unwrap();
        a.add_assign_with(&empty, &CheckedPlus).unwrap();
        assert_eq!(a, snapshot);

        let mut fresh = HypersparseMatrix::new(4, 4).unwrap();
        fresh.add_assign_with(&snapshot, &CheckedPlus).unwrap();
        assert_eq!(fresh, snapshot);
    }

    #[test]
    fn nnz_counts_explicit_zero() {
        let m = HypersparseMatrix::build(10, 10, &triples(&[(1, 2, 5), (1, 2, -5)]), &CheckedPlus)
            .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 2), Some(0));
    }

    #[test]
    fn clear_preserves_dims_and_is_idempotent() {
        let spec: Vec<(u64, u64, i64)> = (0..1000).map(|i| (i, i, 1)).collect();
        let mut m = HypersparseMatrix::build(2000, 2000, &triples(&spec), &CheckedPlus).unwrap();
        assert_eq!(m.nnz(), 1000);
        m.clear();
        assert_eq!(m.nnz(), 0);
        assert_eq!(m.dims(), (2000, 2000));
        m.clear();
        assert_eq!(m.nnz(), 0);

        // Behaves as fresh after clearing.
        m.accumulate(3, 4, 7, &CheckedPlus).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(3, 4), Some(7));
    }

    #[test]
    fn extract_is_sorted() {
        let m = HypersparseMatrix::build(10, 10, &triples(&[(5, 7, 5), (0, 0, 1)]), &CheckedPlus)
            .unwrap();
        assert_eq!(
            m.extract_triples(),
            triples(&[(0, 0, 1), (5, 7, 5)])
        );
        let empty = HypersparseMatrix::<i64>::new(10, 10).unwrap();
        assert!(empty.extract_triples().is_empty());
    }

    #[test]
    fn extract_sorted_in_wide_store() {
        let big = u64::MAX;
        let m = HypersparseMatrix::build(
            big,
            big,
            &triples(&[(big - 1, 0, 3), (0, big - 1, 2), (0, 3, 1)]),
            &CheckedPlus,
        )
        .unwrap();
        assert_eq!(
            m.extract_triples(),
            triples(&[(0, 3, 1), (0, big - 1, 2), (big - 1, 0, 3)])
        );
    }

    #[test]
    fn equality_semantics() {
        let a = HypersparseMatrix::build(10, 10, &triples(&[(1, 1, 3)]), &CheckedPlus).unwrap();
        assert_eq!(a, a.clone());

        // Same entries, different dims.
        let b = HypersparseMatrix::build(10, 11, &triples(&[(1, 1, 3)]), &CheckedPlus).unwrap();
        assert_ne!(a, b);

        // Explicit zero is a stored entry.
        let zero = HypersparseMatrix::build(10, 10, &triples(&[(1, 1, 0)]), &CheckedPlus).unwrap();
        let empty = HypersparseMatrix::<i64>::new(10, 10).unwrap();
        assert_ne!(zero, empty);
    }

    #[test]
    fn row_sums_folds_per_row() {
        let m = HypersparseMatrix::build(
            10,
            10,
            &triples(&[(1, 2, 5), (1, 9, 3), (4, 4, 7)]),
            &CheckedPlus,
        )
        .unwrap();
        let sums = m.row_sums(&CheckedPlus).unwrap();
        assert_eq!(sums.len(), 2);
        assert_eq!(sums[&1], 8);
        assert_eq!(sums[&4], 7);

        let empty = HypersparseMatrix::<i64>::new(10, 10).unwrap();
        assert!(empty.row_sums(&CheckedPlus).unwrap().is_empty());
    }

    #[test]
    fn col_sums_match_row_sums_of_transpose() {
        let spec = [(1u64, 2u64, 5i64), (3, 2, 4), (1, 9, 3), (4, 4, 7)];
        let m = HypersparseMatrix::build(10, 10, &triples(&spec), &CheckedPlus).unwrap();
        let transposed: Vec<EdgeTriple> =
            spec.iter().map(|&(r, c, v)| EdgeTriple::new(c, r, v)).collect();
        let mt = HypersparseMatrix::build(10, 10, &transposed, &CheckedPlus).unwrap();
        assert_eq!(
            m.col_sums(&CheckedPlus).unwrap(),
            mt.row_sums(&CheckedPlus).unwrap()
        );
    }

    #[test]
    fn row_sums_overflow_is_error() {
        let m = HypersparseMatrix::build(
            10,
            10,
            &triples(&[(1, 2, i64::MAX), (1, 9, 1)]),
            &CheckedPlus,
        )
        .unwrap();
        assert!(matches!(m.row_sums(&CheckedPlus), Err(Error::Overflow { row: 1, .. })));
    }

    #[test]
    fn storage_is_entry_proportional_at_full_scale() {
        // 10k entries scattered across a u64::MAX-sized index space; any
        // dimension-proportional bookkeeping would make this intractable.
        let mut m = HypersparseMatrix::<i64>::new(u64::MAX, u64::MAX).unwrap();
        let mut rng = crate::rng::SplitMix64::new(11);
        for _ in 0..10_000 {
            let row = rng.next_u64() % (u64::MAX - 1);
            let col = rng.next_u64() % (u64::MAX - 1);
            m.accumulate(row, col, 1, &CheckedPlus).unwrap();
        }
        assert!(m.nnz() <= 10_000);
        assert!(m.nnz() > 9_900); // collisions at this scale are negligible
    }

    #[test]
    fn value_sum_folds_everything() {
        let m = HypersparseMatrix::build(
            10,
            10,
            &triples(&[(1, 2, 5), (3, 4, -2), (0, 0, 7)]),
            &CheckedPlus,
        )
        .unwrap();
        assert_eq!(m.value_sum(&CheckedPlus).unwrap(), 10);
    }
}
