//! Per-point sampling metrics: coordinate coverage (PCE), mean distance
//! from prior evaluations (MDPE), and Pareto hypervolume contributions over
//! the exploration/exploitation plane (CHEE).
//!
//! All score-space routines work on canonical minimize-both coordinates
//! (see [`crate::domain::ExploreExploitScore`]).

use ndarray::{Array1, ArrayView1};

use crate::domain::{euclidean, Bounds, EvaluatedSet, ExploreExploitScore};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Indices of the non-dominated points of a score list, sorted ascending by
/// `mu`. Along the sort, `mu` strictly increases and `sigma` strictly
/// decreases; exact duplicates keep the lowest index only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoFront2D {
    indices: Vec<usize>,
}

impl ParetoFront2D {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }
}

/// Reference point in the canonical score plane; weakly worse (greater or
/// equal on both coordinates) than every score it is used with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint2D<S: Scalar> {
    pub r_mu: S,
    pub r_sigma: S,
}

impl<S: Scalar> ReferencePoint2D<S> {
    /// Checks the reference-point invariant against one score.
    pub fn covers(&self, score: &ExploreExploitScore<S>) -> bool {
        self.r_mu >= score.mu && self.r_sigma >= score.sigma
    }

    fn ensure_covers(&self, score: &ExploreExploitScore<S>) -> Result<()> {
        if self.covers(score) {
            Ok(())
        } else {
            Err(Error::InvalidReferencePoint {
                r_mu: self.r_mu.to_f64().unwrap_or(f64::NAN),
                r_sigma: self.r_sigma.to_f64().unwrap_or(f64::NAN),
                mu: score.mu.to_f64().unwrap_or(f64::NAN),
                sigma: score.sigma.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

/// Point Coordinate Exploration: per dimension, the range covered by the
/// evaluated points normalized by the bounds width, plus the average over
/// dimensions. Every component lies in [0, 1].
pub fn pce<S: Scalar>(data: &EvaluatedSet<S>, bounds: &Bounds<S>) -> Result<(Array1<S>, S)> {
    if data.is_empty() {
        return Err(Error::EmptyEvaluatedSet { required: 1 });
    }
    if data.dim() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            actual: data.dim(),
        });
    }
    let d = data.dim();
    let mut per_dim = Array1::zeros(d);
    for j in 0..d {
        let col = data.points().column(j).to_owned();
        let lo = col.iter().copied().reduce(S::min).expect("non-empty");
        let hi = col.iter().copied().reduce(S::max).expect("non-empty");
        let coverage = (hi - lo) / bounds.span(j);
        per_dim[j] = coverage.max(S::zero()).min(S::one());
    }
    let average = per_dim.iter().copied().sum::<S>() / S::from_count(d);
    Ok((per_dim, average))
}

/// Mean Distance from Prior Evaluations: average Euclidean distance from
/// one point to every evaluated point.
pub fn mdpe<S: Scalar>(point: ArrayView1<'_, S>, data: &EvaluatedSet<S>) -> Result<S> {
    if data.is_empty() {
        return Err(Error::EmptyEvaluatedSet { required: 1 });
    }
    if point.len() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            actual: point.len(),
        });
    }
    let total: S = data
        .points()
        .rows()
        .into_iter()
        .map(|row| euclidean(point, row))
        .sum();
    Ok(total / S::from_count(data.len()))
}

/// Non-dominated front of a score list under weak domination on the
/// canonical coordinates.
pub fn pareto_front<S: Scalar>(scores: &[ExploreExploitScore<S>]) -> Result<ParetoFront2D> {
    if scores.is_empty() {
        return Err(Error::TooFewValues { required: 1, actual: 0 });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[a]
            .mu
            .partial_cmp(&scores[b].mu)
            .expect("finite scores")
            .then(
                scores[a]
                    .sigma
                    .partial_cmp(&scores[b].sigma)
                    .expect("finite scores"),
            )
            .then(a.cmp(&b))
    });
    let mut indices = Vec::new();
    let mut best_sigma = S::infinity();
    for idx in order {
        // Strict improvement in sigma keeps only non-dominated points and
        // drops exact duplicates (the lowest index arrives first).
        if scores[idx].sigma < best_sigma {
            best_sigma = scores[idx].sigma;
            indices.push(idx);
        }
    }
    indices.sort_by(|&a, &b| {
        scores[a]
            .mu
            .partial_cmp(&scores[b].mu)
            .expect("finite scores")
    });
    Ok(ParetoFront2D { indices })
}

/// Area of the union of rectangles spanned by the front members and the
/// reference point, computed exactly by a sweep over the mu-sorted front.
pub fn hv_union_2d<S: Scalar>(
    front: &ParetoFront2D,
    scores: &[ExploreExploitScore<S>],
    r: &ReferencePoint2D<S>,
) -> Result<S> {
    for &idx in front.indices() {
        r.ensure_covers(&scores[idx])?;
    }
    Ok(hv_union_of_members(front.indices(), scores, r))
}

/// Union area over an explicit member list (assumed mutually non-dominated
/// and covered by `r`).
fn hv_union_of_members<S: Scalar>(
    members: &[usize],
    scores: &[ExploreExploitScore<S>],
    r: &ReferencePoint2D<S>,
) -> S {
    if members.is_empty() {
        return S::zero();
    }
    let mut sorted: Vec<usize> = members.to_vec();
    sorted.sort_by(|&a, &b| {
        scores[a]
            .mu
            .partial_cmp(&scores[b].mu)
            .expect("finite scores")
    });
    let mut area = S::zero();
    for (pos, &idx) in sorted.iter().enumerate() {
        let next_mu = if pos + 1 < sorted.len() {
            scores[sorted[pos + 1]].mu
        } else {
            r.r_mu
        };
        let width = next_mu - scores[idx].mu;
        let height = r.r_sigma - scores[idx].sigma;
        area = area + width * height;
    }
    area
}

/// Contribution of one point to the front hypervolume:
/// `HV(front) - HV(front without the point)`. Exactly zero for points not
/// on the front.
pub fn chee<S: Scalar>(
    scores: &[ExploreExploitScore<S>],
    index: usize,
    r: &ReferencePoint2D<S>,
) -> Result<S> {
    if index >= scores.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: scores.len(),
        });
    }
    let front = pareto_front(scores)?;
    if !front.contains(index) {
        return Ok(S::zero());
    }
    for &idx in front.indices() {
        r.ensure_covers(&scores[idx])?;
    }
    let full = hv_union_of_members(front.indices(), scores, r);
    let without: Vec<usize> = front
        .indices()
        .iter()
        .copied()
        .filter(|&i| i != index)
        .collect();
    let reduced = hv_union_of_members(&without, scores, r);
    Ok(full - reduced)
}

/// Contribution of one point before and after its expensive evaluation:
/// the pre value uses the surrogate scores as given; the post value
/// replaces the point's `mu` by its observed objective value, with the
/// exploration coordinate frozen at selection time.
pub fn chee_pre_post<S: Scalar>(
    scores: &[ExploreExploitScore<S>],
    index: usize,
    observed_mu: S,
    r: &ReferencePoint2D<S>,
) -> Result<(S, S)> {
    let pre = chee(scores, index, r)?;
    let mut updated = scores.to_vec();
    updated[index].mu = observed_mu;
    let post = chee(&updated, index, r)?;
    Ok((pre, post))
}

/// Default reference point: each coordinate sits above the score maximum by
/// a tenth of the score range, or by 1.0 when the range collapses to zero.
pub fn default_reference<S: Scalar>(
    scores: &[ExploreExploitScore<S>],
) -> Result<ReferencePoint2D<S>> {
    if scores.is_empty() {
        return Err(Error::TooFewValues { required: 1, actual: 0 });
    }
    let margin = |min: S, max: S| {
        let range = max - min;
        if range > S::zero() {
            S::real(0.1) * range
        } else {
            S::one()
        }
    };
    let mu_min = scores.iter().map(|s| s.mu).reduce(S::min).expect("non-empty");
    let mu_max = scores.iter().map(|s| s.mu).reduce(S::max).expect("non-empty");
    let sg_min = scores.iter().map(|s| s.sigma).reduce(S::min).expect("non-empty");
    let sg_max = scores.iter().map(|s| s.sigma).reduce(S::max).expect("non-empty");
    Ok(ReferencePoint2D {
        r_mu: mu_max + margin(mu_min, mu_max),
        r_sigma: sg_max + margin(sg_min, sg_max),
    })
}
