//! Shared domain types and geometry helpers: hyperrectangular bounds,
//! evaluated sets, batches, candidate sets, exploration/exploitation scores
//! and the seeded-randomness contract.
//!
//! Everything here is immutable after construction and all functions are
//! pure, so values can be shared freely across threads.
//!
//! The whole crate adopts a canonical minimize-both orientation for
//! point scores: the exploitation coordinate `mu` is minimized as-is, and
//! the exploration coordinate is stored negated (`sigma = -sigma_raw`) so
//! that "smaller is better" holds for both. High raw uncertainty (good for
//! exploration) therefore maps to a small canonical value, and Pareto
//! domination and hypervolume formulas apply verbatim on both coordinates.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-dimension lower/upper limits of the hyperrectangular solution space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<S: Scalar> {
    lower: Array1<S>,
    upper: Array1<S>,
}

impl<S: Scalar> Bounds<S> {
    /// Builds bounds from per-dimension limits. Each lower limit must be
    /// strictly below its upper limit.
    pub fn new(lower: Array1<S>, upper: Array1<S>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidBounds("zero-dimensional bounds".into()));
        }
        for (j, (lo, hi)) in lower.iter().zip(upper.iter()).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidBounds(format!("non-finite limit in dimension {j}")));
            }
            if *lo >= *hi {
                return Err(Error::InvalidBounds(format!(
                    "dimension {j}: lower {lo} must be strictly below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Convenience constructor from `(lower, upper)` pairs.
    pub fn from_pairs(pairs: &[(S, S)]) -> Result<Self> {
        let lower = pairs.iter().map(|p| p.0).collect();
        let upper = pairs.iter().map(|p| p.1).collect();
        Self::new(lower, upper)
    }

    /// The same interval repeated over `dim` dimensions.
    pub fn uniform(lo: S, hi: S, dim: usize) -> Result<Self> {
        Self::new(Array1::from_elem(dim, lo), Array1::from_elem(dim, hi))
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> ArrayView1<'_, S> {
        self.lower.view()
    }

    pub fn upper(&self) -> ArrayView1<'_, S> {
        self.upper.view()
    }

    /// Width of the interval in dimension `j`.
    pub fn span(&self, j: usize) -> S {
        self.upper[j] - self.lower[j]
    }

    /// True iff every coordinate of `point` lies inside its interval
    /// (boundaries inclusive).
    pub fn contains(&self, point: ArrayView1<'_, S>) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .enumerate()
                .all(|(j, x)| self.lower[j] <= *x && *x <= self.upper[j])
    }
}

/// Evaluated sample points with their observed objective values, optionally
/// carrying the bounds they were drawn from.
///
/// An empty set is representable (the post-hoc analyzer starts with one);
/// metric operations that need data reject it with an explicit error.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedSet<S: Scalar> {
    points: Array2<S>,
    values: Array1<S>,
    bounds: Option<Bounds<S>>,
}

impl<S: Scalar> EvaluatedSet<S> {
    pub fn new(points: Array2<S>, values: Array1<S>) -> Result<Self> {
        if points.nrows() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.nrows(),
                actual: values.len(),
            });
        }
        Ok(Self {
            points,
            values,
            bounds: None,
        })
    }

    /// Attaches bounds, checking every point against them.
    pub fn with_bounds(mut self, bounds: Bounds<S>) -> Result<Self> {
        validate_in_bounds_strict(&self.points.view(), &bounds)?;
        self.bounds = Some(bounds);
        Ok(self)
    }

    /// An empty set of the given dimension.
    pub fn empty(dim: usize) -> Self {
        Self {
            points: Array2::zeros((0, dim)),
            values: Array1::zeros(0),
            bounds: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> ArrayView2<'_, S> {
        self.points.view()
    }

    pub fn values(&self) -> ArrayView1<'_, S> {
        self.values.view()
    }

    pub fn bounds(&self) -> Option<&Bounds<S>> {
        self.bounds.as_ref()
    }

    /// Smallest observed value, if any.
    pub fn best(&self) -> Option<S> {
        self.values.iter().copied().reduce(S::min)
    }

    /// Returns a new set extended with the given points and values.
    pub fn extended(&self, points: ArrayView2<'_, S>, values: ArrayView1<'_, S>) -> Result<Self> {
        if !self.is_empty() && points.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: points.ncols(),
            });
        }
        if points.nrows() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.nrows(),
                actual: values.len(),
            });
        }
        let mut new_points = Array2::zeros((self.len() + points.nrows(), points.ncols()));
        let mut new_values = Array1::zeros(self.len() + values.len());
        for (i, row) in self.points.rows().into_iter().enumerate() {
            new_points.row_mut(i).assign(&row);
            new_values[i] = self.values[i];
        }
        for (i, row) in points.rows().into_iter().enumerate() {
            new_points.row_mut(self.len() + i).assign(&row);
            new_values[self.len() + i] = values[i];
        }
        Ok(Self {
            points: new_points,
            values: new_values,
            bounds: self.bounds.clone(),
        })
    }
}

/// The points selected for expensive evaluation in one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch<S: Scalar> {
    points: Array2<S>,
}

impl<S: Scalar> Batch<S> {
    pub fn new(points: Array2<S>) -> Result<Self> {
        if points.nrows() == 0 {
            return Err(Error::EmptyBatch { required: 1 });
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> ArrayView2<'_, S> {
        self.points.view()
    }
}

/// Candidate pool a batch is selected from.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet<S: Scalar> {
    points: Array2<S>,
}

impl<S: Scalar> CandidateSet<S> {
    pub fn new(points: Array2<S>) -> Result<Self> {
        if points.nrows() == 0 {
            return Err(Error::EmptyBatch { required: 1 });
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> ArrayView2<'_, S> {
        self.points.view()
    }
}

/// Per-point (exploitation, exploration) score in the canonical
/// minimize-both orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploreExploitScore<S: Scalar> {
    /// Exploitation value; smaller is better.
    pub mu: S,
    /// Exploration value in canonical orientation (negated raw score);
    /// smaller is better.
    pub sigma: S,
}

impl<S: Scalar> ExploreExploitScore<S> {
    /// Packs a raw score pair, negating the exploration coordinate into the
    /// canonical orientation.
    pub fn from_raw(mu: S, sigma_raw: S) -> Result<Self> {
        if !(mu.is_finite() && sigma_raw.is_finite()) {
            return Err(Error::NonFinite {
                context: "explore/exploit score",
            });
        }
        Ok(Self {
            mu,
            sigma: -sigma_raw,
        })
    }

    /// The raw (un-negated) exploration score, where larger means more
    /// exploratory.
    pub fn sigma_raw(&self) -> S {
        -self.sigma
    }

    /// True iff `self` weakly dominates `other`: at least as good on both
    /// coordinates and strictly better on one.
    pub fn dominates(&self, other: &Self) -> bool {
        self.mu <= other.mu
            && self.sigma <= other.sigma
            && (self.mu < other.mu || self.sigma < other.sigma)
    }
}

/// Seed for every stochastic component. The same seed yields bit-identical
/// outputs for the same configuration on one platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// The root generator for this seed.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Derives an independent, deterministic child seed. Substreams let
    /// per-feature or per-run loops draw randomness that does not depend on
    /// iteration order or thread scheduling.
    pub fn derive(self, a: u64, b: u64) -> RngSeed {
        // SplitMix64-style mixing of (seed, a, b) into a fresh stream key.
        let mut z = self.0 ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }

    /// Shorthand for `derive(a, b).rng()`.
    pub fn substream(self, a: u64, b: u64) -> ChaCha8Rng {
        self.derive(a, b).rng()
    }
}

/// True iff every coordinate of every point satisfies
/// `lower[j] <= x[j] <= upper[j]`.
pub fn validate_in_bounds<S: Scalar>(points: &ArrayView2<'_, S>, bounds: &Bounds<S>) -> Result<bool> {
    if points.ncols() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            actual: points.ncols(),
        });
    }
    Ok(points.rows().into_iter().all(|row| bounds.contains(row)))
}

/// Like [`validate_in_bounds`] but reports the first offending coordinate.
pub fn validate_in_bounds_strict<S: Scalar>(
    points: &ArrayView2<'_, S>,
    bounds: &Bounds<S>,
) -> Result<()> {
    if points.ncols() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            actual: points.ncols(),
        });
    }
    for (i, row) in points.rows().into_iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !(bounds.lower[j] <= *x && *x <= bounds.upper[j]) {
                return Err(Error::OutOfBounds {
                    row: i,
                    column: j,
                    value: x.to_f64().unwrap_or(f64::NAN),
                    lower: bounds.lower[j].to_f64().unwrap_or(f64::NAN),
                    upper: bounds.upper[j].to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    Ok(())
}

/// Euclidean distance between two rows.
pub fn euclidean<S: Scalar>(a: ArrayView1<'_, S>, b: ArrayView1<'_, S>) -> S {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y) * (*x - *y))
        .sum::<S>()
        .sqrt()
}

/// Matrix of Euclidean distances: entry `(i, j)` is the distance between
/// row `i` of `a` and row `j` of `b`.
pub fn pairwise_distance<S: Scalar>(
    a: &ArrayView2<'_, S>,
    b: &ArrayView2<'_, S>,
) -> Result<Array2<S>> {
    if a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            actual: b.ncols(),
        });
    }
    let mut out = Array2::zeros((a.nrows(), b.nrows()));
    for (i, ra) in a.rows().into_iter().enumerate() {
        for (j, rb) in b.rows().into_iter().enumerate() {
            out[(i, j)] = euclidean(ra, rb);
        }
    }
    Ok(out)
}

/// Minimum Euclidean distance from `point` to any row of `set`.
/// Returns `None` for an empty set.
pub fn min_distance_to_rows<S: Scalar>(
    point: ArrayView1<'_, S>,
    set: &ArrayView2<'_, S>,
) -> Option<S> {
    set.rows()
        .into_iter()
        .map(|row| euclidean(point, row))
        .reduce(S::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn bounds_reject_inverted_limits() {
        assert!(Bounds::new(array![0.0, 1.0], array![1.0, 1.0]).is_err());
        assert!(Bounds::new(array![0.0], array![1.0, 2.0]).is_err());
        assert!(Bounds::from_pairs(&[(0.0, 1.0), (0.0, 1.0)]).is_ok());
    }

    #[test]
    fn in_bounds_interior_and_boundary() {
        let b = Bounds::uniform(0.0, 1.0, 2).unwrap();
        let interior = array![[0.5, 0.5]];
        let boundary = array![[1.0, 0.0]];
        let outside = array![[1.1, 0.5]];
        assert!(validate_in_bounds(&interior.view(), &b).unwrap());
        assert!(validate_in_bounds(&boundary.view(), &b).unwrap());
        assert!(!validate_in_bounds(&outside.view(), &b).unwrap());
    }

    #[test]
    fn in_bounds_dimension_mismatch() {
        let b = Bounds::uniform(0.0, 1.0, 2).unwrap();
        let pts = array![[0.5, 0.5, 0.5]];
        match validate_in_bounds(&pts.view(), &b) {
            Err(Error::DimensionMismatch { expected: 2, actual: 3 }) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }

    #[test]
    fn pairwise_distance_345() {
        let a = array![[0.0, 0.0]];
        let b = array![[3.0, 4.0]];
        let d = pairwise_distance(&a.view(), &b.view()).unwrap();
        assert_eq!(d[(0, 0)], 5.0);
    }

    #[test]
    fn pairwise_distance_identity_and_hand_values() {
        let a = array![[1.0, 2.0]];
        let d = pairwise_distance(&a.view(), &a.view()).unwrap();
        assert_eq!(d[(0, 0)], 0.0);

        let a: Array2<f64> = array![[0.0, 0.0], [1.0, 0.0]];
        let b = array![[0.0, 1.0]];
        let d = pairwise_distance(&a.view(), &b.view()).unwrap();
        assert!((d[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((d[(1, 0)] - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn evaluated_set_rejects_length_mismatch() {
        let pts = array![[0.0, 0.0], [1.0, 1.0]];
        assert!(EvaluatedSet::new(pts, array![1.0]).is_err());
    }

    #[test]
    fn canonical_score_negates_exploration() {
        let s = ExploreExploitScore::from_raw(1.0, 2.0).unwrap();
        assert_eq!(s.mu, 1.0);
        assert_eq!(s.sigma, -2.0);
        assert_eq!(s.sigma_raw(), 2.0);
        assert!(ExploreExploitScore::from_raw(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn domination_is_weak_with_strict_part() {
        let a = ExploreExploitScore { mu: 1.0, sigma: 2.0 };
        let b = ExploreExploitScore { mu: 1.0, sigma: 3.0 };
        assert!(a.dominates(&b));
        assert!(!b.dominates(&a));
        assert!(!a.dominates(&a));
    }

    #[test]
    fn substreams_are_deterministic_and_distinct() {
        use rand::Rng;
        let seed = RngSeed(7);
        let a: f64 = seed.substream(1, 2).gen();
        let a2: f64 = seed.substream(1, 2).gen();
        let b: f64 = seed.substream(2, 1).gen();
        assert_eq!(a, a2);
        assert_ne!(a, b);
    }

    proptest! {
        #[test]
        fn pairwise_distance_symmetry(rows in proptest::collection::vec(
            proptest::collection::vec(-50.0f64..50.0, 3), 1..6),
            cols in proptest::collection::vec(proptest::collection::vec(-50.0f64..50.0, 3), 1..6))
        {
            let a = Array2::from_shape_vec((rows.len(), 3), rows.concat()).unwrap();
            let b = Array2::from_shape_vec((cols.len(), 3), cols.concat()).unwrap();
            let dab = pairwise_distance(&a.view(), &b.view()).unwrap();
            let dba = pairwise_distance(&b.view(), &a.view()).unwrap();
            for i in 0..a.nrows() {
                for j in 0..b.nrows() {
                    prop_assert!((dab[(i, j)] - dba[(j, i)]).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn pairwise_distance_scales_linearly(rows in proptest::collection::vec(
            proptest::collection::vec(-10.0f64..10.0, 2), 2..5), c in 0.1f64..10.0)
        {
            let a = Array2::from_shape_vec((rows.len(), 2), rows.concat()).unwrap();
            let scaled = a.mapv(|v| v * c);
            let d = pairwise_distance(&a.view(), &a.view()).unwrap();
            let ds = pairwise_distance(&scaled.view(), &scaled.view()).unwrap();
            for (orig, got) in d.iter().zip(ds.iter()) {
                let want = orig * c;
                let tol = 1e-12 * want.abs().max(1.0);
                prop_assert!((got - want).abs() <= tol);
            }
        }
    }
}
