//! Commutative additive monoids used to merge colliding entries.

/// An associative, commutative combine operation with an identity element.
///
/// Implementations must satisfy, bit-exactly for integer value types:
/// `combine(a, b) = combine(b, a)`, `combine(combine(a, b), c) =
/// combine(a, combine(b, c))`, and `combine(v, identity()) = Some(v)`.
/// `None` signals that the combined value is not representable (overflow);
/// callers translate it into an error carrying the offending key.
pub trait AdditiveMonoid<V>: Send + Sync {
    fn identity(&self) -> V;

    fn combine(&self, a: V, b: V) -> Option<V>;
}

/// Checked 64-bit integer addition, the default monoid for count data.
///
/// Overflow is reported, never wrapped: a corrupted count is worse than a
/// failed update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckedPlus;

impl AdditiveMonoid<i64> for CheckedPlus {
    #[inline]
    fn identity(&self) -> i64 {
        0
    }

    #[inline]
    fn combine(&self, a: i64, b: i64) -> Option<i64> {
        a.checked_add(b)
    }
}

/// Plain f64 addition. Floats saturate to infinity instead of overflowing,
/// so combine never fails.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FloatPlus;

impl AdditiveMonoid<f64> for FloatPlus {
    #[inline]
    fn identity(&self) -> f64 {
        0.0
    }

    #[inline]
    fn combine(&self, a: f64, b: f64) -> Option<f64> {
        Some(a + b)
    }
}
