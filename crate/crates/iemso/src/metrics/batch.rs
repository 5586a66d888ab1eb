//! Batch-level metrics: KDE differential entropy (DES), kernel-determinant
//! diversity (DIS), average batch distance (ABD) and the summed
//! exploration/exploitation hypervolume (HVE).

use crate::domain::{min_distance_to_rows, pairwise_distance, Batch, EvaluatedSet, ExploreExploitScore};
use crate::error::{Error, Result};
use crate::linalg;
use crate::metrics::sampling_core::ReferencePoint2D;
use crate::scalar::Scalar;

/// Floor applied to per-dimension KDE bandwidths.
const BANDWIDTH_FLOOR: f64 = 1e-9;
/// Diagonal jitter added to the DIS kernel matrix.
const DIS_JITTER: f64 = 1e-10;

/// Differential-entropy estimate of a batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesEstimate<S: Scalar> {
    /// Entropy estimate; can be negative for tightly clustered batches.
    pub entropy: S,
    /// Set when some dimension had (numerically) zero spread and its
    /// bandwidth was floored; the value is then dominated by the floor.
    pub degenerate: bool,
}

/// Density of the Selected Subset: the batch's differential entropy
/// estimated with a Gaussian-product KDE, evaluated in-sample. Bandwidths
/// follow Scott's rule per dimension.
pub fn des<S: Scalar>(batch: &Batch<S>) -> Result<DesEstimate<S>> {
    des_opts(batch, false)
}

/// [`des`] with an optional leave-one-out density evaluation, which removes
/// the self-term bias at the cost of diverging from the in-sample formula.
pub fn des_opts<S: Scalar>(batch: &Batch<S>, leave_one_out: bool) -> Result<DesEstimate<S>> {
    let k = batch.len();
    if k < 2 {
        return Err(Error::EmptyBatch { required: 2 });
    }
    let d = batch.dim();
    let points = batch.points();

    // Scott's rule: h_j = sd_j * k^(-1/(d+4)), with the per-dimension
    // sample standard deviation floored to keep the density finite.
    let factor = S::from_count(k).powf(-S::one() / S::from_count(d + 4));
    let mut bandwidths = Vec::with_capacity(d);
    let mut degenerate = false;
    for j in 0..d {
        let col = points.column(j);
        let mean = col.iter().copied().sum::<S>() / S::from_count(k);
        let ss: S = col.iter().map(|&v| (v - mean) * (v - mean)).sum();
        let sd = (ss / S::from_count(k - 1)).sqrt();
        let mut h = sd * factor;
        if h < S::real(BANDWIDTH_FLOOR) {
            h = S::real(BANDWIDTH_FLOOR);
            degenerate = true;
        }
        bandwidths.push(h);
    }

    let norm: S = bandwidths
        .iter()
        .map(|&h| S::one() / (h * (S::real(2.0) * S::PI()).sqrt()))
        .fold(S::one(), |acc, v| acc * v);

    let mut total = S::zero();
    for i in 0..k {
        let mut density = S::zero();
        let mut contributors = 0usize;
        for other in 0..k {
            if leave_one_out && other == i {
                continue;
            }
            let mut exponent = S::zero();
            for j in 0..d {
                let diff = (points[(i, j)] - points[(other, j)]) / bandwidths[j];
                exponent = exponent + diff * diff;
            }
            density = density + (-exponent / S::real(2.0)).exp();
            contributors += 1;
        }
        density = density * norm / S::from_count(contributors);
        total = total + density.ln();
    }
    Ok(DesEstimate {
        entropy: -total / S::from_count(k),
        degenerate,
    })
}

/// Bandwidth choice for the DIS similarity kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisBandwidth<S: Scalar> {
    /// Median of the batch's pairwise distances.
    Median,
    Fixed(S),
}

/// Diversity of the Selected Subset: determinant (and log-determinant) of
/// the RBF kernel matrix over the batch, with a small diagonal jitter.
/// Mutually distant points push the determinant toward 1, duplicates push
/// it toward 0.
pub fn dis<S: Scalar>(batch: &Batch<S>, bandwidth: DisBandwidth<S>) -> Result<(S, S)> {
    let k = batch.len();
    let points = batch.points();
    let dists = pairwise_distance(&points, &points)?;

    let h = match bandwidth {
        DisBandwidth::Fixed(h) => {
            if !(h > S::zero()) {
                return Err(Error::Config("DIS bandwidth must be positive".into()));
            }
            h
        }
        DisBandwidth::Median => {
            let mut offdiag = Vec::with_capacity(k * (k - 1) / 2);
            for i in 0..k {
                for j in i + 1..k {
                    offdiag.push(dists[(i, j)]);
                }
            }
            if offdiag.is_empty() {
                S::one() // k = 1: the kernel matrix is [1] regardless
            } else {
                offdiag.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
                let mid = offdiag.len() / 2;
                let median = if offdiag.len() % 2 == 1 {
                    offdiag[mid]
                } else {
                    (offdiag[mid - 1] + offdiag[mid]) / S::real(2.0)
                };
                median.max(S::real(1e-12))
            }
        }
    };

    let two_h2 = S::real(2.0) * h * h;
    let mut kernel = ndarray::Array2::zeros((k, k));
    for i in 0..k {
        for j in 0..k {
            let v = (-(dists[(i, j)] * dists[(i, j)]) / two_h2).exp();
            if !v.is_finite() {
                return Err(Error::NonFinite { context: "DIS kernel entry" });
            }
            kernel[(i, j)] = v;
        }
        kernel[(i, i)] = kernel[(i, i)] + S::real(DIS_JITTER);
    }
    Ok(linalg::lu_det(&kernel))
}

/// Average Batch Distance: mean over batch points of the minimum Euclidean
/// distance to the evaluated set. Zero exactly when the batch is contained
/// in the evaluated set.
pub fn abd<S: Scalar>(batch: &Batch<S>, data: &EvaluatedSet<S>) -> Result<S> {
    if data.is_empty() {
        return Err(Error::EmptyEvaluatedSet { required: 1 });
    }
    if batch.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            actual: batch.dim(),
        });
    }
    let total: S = batch
        .points()
        .rows()
        .into_iter()
        .map(|row| min_distance_to_rows(row, &data.points()).expect("non-empty data"))
        .sum();
    Ok(total / S::from_count(batch.len()))
}

/// Hypervolume of Exploration-Exploitation: sum over batch scores of the
/// rectangle each one spans against the reference point. A sum, not a
/// union — overlapping rectangles count multiply.
pub fn hve<S: Scalar>(
    scores: &[ExploreExploitScore<S>],
    r: &ReferencePoint2D<S>,
) -> Result<S> {
    let mut total = S::zero();
    for s in scores {
        if !r.covers(s) {
            return Err(Error::InvalidReferencePoint {
                r_mu: r.r_mu.to_f64().unwrap_or(f64::NAN),
                r_sigma: r.r_sigma.to_f64().unwrap_or(f64::NAN),
                mu: s.mu.to_f64().unwrap_or(f64::NAN),
                sigma: s.sigma.to_f64().unwrap_or(f64::NAN),
            });
        }
        total = total + (r.r_mu - s.mu) * (r.r_sigma - s.sigma);
    }
    Ok(total)
}
