//! Gaussian-process regressor with a squared-exponential kernel.
//!
//! This is a deliberately plain, optimization-free reference surrogate: the
//! length-scale comes from the median heuristic over pairwise distances of
//! inputs standardized per dimension, the signal variance from the sample
//! variance of the targets, and no marginal-likelihood tuning happens. The
//! prior mean is the training-target mean, so predictions revert to it far
//! from the data ("zero-mean" after centering).

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::domain::{EvaluatedSet, ExploreExploitScore};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Fitted Gaussian-process model. Immutable after construction; prediction
/// is pure and thread-safe.
#[derive(Debug, Clone)]
pub struct GpModel<S: Scalar> {
    /// Standardized training inputs (deduplicated).
    inputs: Array2<S>,
    /// Per-dimension offset of the standardization map.
    offset: Array1<S>,
    /// Per-dimension scale of the standardization map.
    scale: Array1<S>,
    /// Kernel length-scale in standardized coordinates.
    lengthscale: S,
    /// Kernel signal variance.
    signal_variance: S,
    /// Diagonal jitter actually used.
    jitter: S,
    /// Training-target mean (the prior mean).
    mean: S,
    /// Cholesky factor of the jittered kernel matrix.
    factor: Array2<S>,
    /// Precomputed `K^{-1} (y - mean)`.
    alpha: Array1<S>,
}

/// Fits a GP with heuristic hyperparameters.
pub fn fit_gp<S: Scalar>(data: &EvaluatedSet<S>) -> Result<GpModel<S>> {
    fit_gp_with(data, None, None)
}

/// Fits a GP, optionally pinning the length-scale and/or signal variance.
/// Unpinned parameters fall back to the heuristics.
pub fn fit_gp_with<S: Scalar>(
    data: &EvaluatedSet<S>,
    lengthscale: Option<S>,
    signal_variance: Option<S>,
) -> Result<GpModel<S>> {
    if data.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            actual: data.len(),
        });
    }
    let d = data.dim();

    // Standardize each dimension to [0, 1]: by the attached bounds when
    // present, otherwise by the data range.
    let (offset, scale) = match data.bounds() {
        Some(b) => (
            b.lower().to_owned(),
            Array1::from_shape_fn(d, |j| b.span(j)),
        ),
        None => {
            let mut lo = Array1::from_elem(d, S::infinity());
            let mut hi = Array1::from_elem(d, S::neg_infinity());
            for row in data.points().rows() {
                for j in 0..d {
                    lo[j] = lo[j].min(row[j]);
                    hi[j] = hi[j].max(row[j]);
                }
            }
            let span = Array1::from_shape_fn(d, |j| {
                let s = hi[j] - lo[j];
                if s > S::zero() { s } else { S::one() }
            });
            (lo, span)
        }
    };

    // Deduplicate identical rows, averaging their targets; duplicates would
    // make the kernel matrix singular.
    let (inputs, targets) = dedup_rows(&data.points(), &data.values(), &offset, &scale);
    let n = inputs.nrows();
    if n < 2 {
        return Err(Error::InsufficientData { required: 2, actual: n });
    }

    let lengthscale = match lengthscale {
        Some(l) => l,
        None => median_pairwise_distance(&inputs),
    };
    let signal_variance = match signal_variance {
        Some(v) => v,
        None => sample_variance(&targets.view()).max(S::real(1e-12)),
    };

    let mean = targets.iter().copied().sum::<S>() / S::from_count(n);
    let residuals = targets.mapv(|y| y - mean);

    let mut kernel = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let v = se_kernel(inputs.row(i), inputs.row(j), lengthscale, signal_variance);
            kernel[(i, j)] = v;
            kernel[(j, i)] = v;
        }
    }

    // Escalate jitter tenfold until the factorization succeeds.
    let mut jitter = S::real(1e-8) * signal_variance;
    let max_jitter = S::real(1e-2) * signal_variance;
    loop {
        let mut jittered = kernel.clone();
        for i in 0..n {
            jittered[(i, i)] = jittered[(i, i)] + jitter;
        }
        if let Some(factor) = linalg::cholesky(&jittered) {
            let alpha = linalg::cholesky_solve(&factor, residuals.view());
            return Ok(GpModel {
                inputs,
                offset,
                scale,
                lengthscale,
                signal_variance,
                jitter,
                mean,
                factor,
                alpha,
            });
        }
        jitter = jitter * S::real(10.0);
        if jitter > max_jitter {
            return Err(Error::FactorizationFailure {
                max_jitter: max_jitter.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
}

impl<S: Scalar> GpModel<S> {
    pub fn lengthscale(&self) -> S {
        self.lengthscale
    }

    pub fn signal_variance(&self) -> S {
        self.signal_variance
    }

    pub fn jitter(&self) -> S {
        self.jitter
    }

    /// Training points actually kept after deduplication.
    pub fn training_len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn dim(&self) -> usize {
        self.inputs.ncols()
    }

    /// Posterior mean and standard deviation at each query row.
    pub fn predict(&self, points: &ArrayView2<'_, S>) -> Result<(Array1<S>, Array1<S>)> {
        if points.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: points.ncols(),
            });
        }
        let q = points.nrows();
        let n = self.inputs.nrows();
        let mut means = Array1::zeros(q);
        let mut stds = Array1::zeros(q);
        let mut cross = Array1::zeros(n);
        for (qi, row) in points.rows().into_iter().enumerate() {
            let z = self.standardize(row);
            for i in 0..n {
                cross[i] = se_kernel(
                    z.view(),
                    self.inputs.row(i),
                    self.lengthscale,
                    self.signal_variance,
                );
            }
            let mean = self.mean + cross.dot(&self.alpha);
            let v = linalg::solve_lower(&self.factor, cross.view());
            let variance = (self.signal_variance - v.dot(&v)).max(S::zero());
            means[qi] = mean;
            stds[qi] = variance.sqrt();
        }
        Ok((means, stds))
    }

    /// Posterior mean only (cheaper: skips the triangular solve per query).
    pub fn predict_mean(&self, points: &ArrayView2<'_, S>) -> Result<Array1<S>> {
        if points.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: points.ncols(),
            });
        }
        let n = self.inputs.nrows();
        let mut out = Array1::zeros(points.nrows());
        let mut cross = Array1::zeros(n);
        for (qi, row) in points.rows().into_iter().enumerate() {
            let z = self.standardize(row);
            for i in 0..n {
                cross[i] = se_kernel(
                    z.view(),
                    self.inputs.row(i),
                    self.lengthscale,
                    self.signal_variance,
                );
            }
            out[qi] = self.mean + cross.dot(&self.alpha);
        }
        Ok(out)
    }

    fn standardize(&self, row: ArrayView1<'_, S>) -> Array1<S> {
        Array1::from_shape_fn(row.len(), |j| (row[j] - self.offset[j]) / self.scale[j])
    }
}

/// Scores query points with the surrogate: `mu` is the posterior mean and
/// the exploration coordinate is the posterior standard deviation, stored
/// in canonical (negated) orientation.
pub fn gp_predict<S: Scalar>(
    model: &GpModel<S>,
    points: &ArrayView2<'_, S>,
) -> Result<Vec<ExploreExploitScore<S>>> {
    let (means, stds) = model.predict(points)?;
    means
        .iter()
        .zip(stds.iter())
        .map(|(&mu, &sd)| ExploreExploitScore::from_raw(mu, sd))
        .collect()
}

fn se_kernel<S: Scalar>(a: ArrayView1<'_, S>, b: ArrayView1<'_, S>, lengthscale: S, s2: S) -> S {
    let mut dist2 = S::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        let diff = *x - *y;
        dist2 = dist2 + diff * diff;
    }
    s2 * (-dist2 / (S::real(2.0) * lengthscale * lengthscale)).exp()
}

fn dedup_rows<S: Scalar>(
    points: &ArrayView2<'_, S>,
    values: &ArrayView1<'_, S>,
    offset: &Array1<S>,
    scale: &Array1<S>,
) -> (Array2<S>, Array1<S>) {
    let mut kept: Vec<Array1<S>> = Vec::new();
    let mut sums: Vec<S> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for (row, &y) in points.rows().into_iter().zip(values.iter()) {
        let z = Array1::from_shape_fn(row.len(), |j| (row[j] - offset[j]) / scale[j]);
        match kept.iter().position(|existing| existing == &z) {
            Some(idx) => {
                sums[idx] = sums[idx] + y;
                counts[idx] += 1;
            }
            None => {
                kept.push(z);
                sums.push(y);
                counts.push(1);
            }
        }
    }
    let n = kept.len();
    let d = offset.len();
    let mut inputs = Array2::zeros((n, d));
    let mut targets = Array1::zeros(n);
    for (i, z) in kept.into_iter().enumerate() {
        inputs.row_mut(i).assign(&z);
        targets[i] = sums[i] / S::from_count(counts[i]);
    }
    (inputs, targets)
}

fn median_pairwise_distance<S: Scalar>(points: &Array2<S>) -> S {
    let n = points.nrows();
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            dists.push(crate::domain::euclidean(points.row(i), points.row(j)));
        }
    }
    dists.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let mid = dists.len() / 2;
    let median = if dists.len() % 2 == 1 {
        dists[mid]
    } else {
        (dists[mid - 1] + dists[mid]) / S::real(2.0)
    };
    median.max(S::real(1e-12))
}

fn sample_variance<S: Scalar>(values: &ArrayView1<'_, S>) -> S {
    let n = values.len();
    let mean = values.iter().copied().sum::<S>() / S::from_count(n);
    let ss: S = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    ss / S::from_count(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Bounds, RngSeed};
    use ndarray::array;
    use rand::Rng;

    fn one_d_set(xs: &[f64], ys: &[f64]) -> EvaluatedSet<f64> {
        let pts = Array2::from_shape_vec((xs.len(), 1), xs.to_vec()).unwrap();
        EvaluatedSet::new(pts, Array1::from_vec(ys.to_vec())).unwrap()
    }

    #[test]
    fn near_interpolation_at_training_points() {
        let data = one_d_set(&[0.0, 1.0], &[1.0, 2.0]);
        let model = fit_gp(&data).unwrap();
        let (means, _) = model.predict(&data.points()).unwrap();
        for (got, want) in means.iter().zip(data.values().iter()) {
            assert!(
                ((got - want) / want).abs() < 1e-3,
                "prediction {got} vs target {want}"
            );
        }
    }

    #[test]
    fn constant_targets_floor_signal_variance() {
        let data = one_d_set(&[0.0, 0.5, 1.0], &[3.0, 3.0, 3.0]);
        let model = fit_gp(&data).unwrap();
        assert_eq!(model.signal_variance(), 1e-12);
        let queries = array![[0.25], [0.75], [10.0]];
        let (means, _) = model.predict(&queries.view()).unwrap();
        for m in means.iter() {
            assert!((m - 3.0).abs() < 1e-6, "prediction {m} deviates from the mean");
        }
    }

    /// Independent hand computation of the posterior for the two-point
    /// fixture: inputs 0 and 1, targets 1 and 2, lengthscale 1, signal
    /// variance 1. Works the 2x2 linear algebra out explicitly.
    pub(crate) fn two_point_posterior_oracle(query: f64) -> (f64, f64) {
        let jitter = 1e-8;
        let k01 = (-0.5f64).exp();
        // K = [[1 + j, k01], [k01, 1 + j]], inverse via the 2x2 formula.
        let a = 1.0 + jitter;
        let det = a * a - k01 * k01;
        let inv = [[a / det, -k01 / det], [-k01 / det, a / det]];
        // Centered targets.
        let mean = 1.5;
        let r = [1.0 - mean, 2.0 - mean];
        let alpha = [
            inv[0][0] * r[0] + inv[0][1] * r[1],
            inv[1][0] * r[0] + inv[1][1] * r[1],
        ];
        let k_star = [
            (-0.5 * query * query).exp(),
            (-0.5 * (query - 1.0) * (query - 1.0)).exp(),
        ];
        let post_mean = mean + k_star[0] * alpha[0] + k_star[1] * alpha[1];
        let kik = inv[0][0] * k_star[0] * k_star[0]
            + 2.0 * inv[0][1] * k_star[0] * k_star[1]
            + inv[1][1] * k_star[1] * k_star[1];
        let post_var = (1.0 - kik).max(0.0);
        (post_mean, post_var)
    }

    #[test]
    fn posterior_matches_hand_oracle() {
        let data = one_d_set(&[0.0, 1.0], &[1.0, 2.0]);
        let model = fit_gp_with(&data, Some(1.0), Some(1.0)).unwrap();
        let (means, stds) = model.predict(&array![[0.5]].view()).unwrap();
        let (want_mean, want_var) = two_point_posterior_oracle(0.5);
        assert!((means[0] - want_mean).abs() < 1e-9, "{} vs {}", means[0], want_mean);
        assert!((stds[0] * stds[0] - want_var).abs() < 1e-9);
    }

    #[test]
    fn uncertainty_vanishes_at_data_and_reverts_far_away() {
        let data = one_d_set(&[0.4, 0.6], &[1.0, 2.0]);
        let model = fit_gp(&data).unwrap();
        let s = model.signal_variance().sqrt();

        let scores = gp_predict(&model, &array![[0.4]].view()).unwrap();
        assert!(scores[0].sigma_raw() <= 1e-3 * s);

        // Standardization maps the data to {0, 1}; x = 100 is hundreds of
        // length-scales away.
        let far = gp_predict(&model, &array![[100.0]].view()).unwrap();
        assert!((far[0].sigma_raw() - s).abs() <= 0.01 * s);
    }

    #[test]
    fn posterior_variance_never_exceeds_prior() {
        let mut rng = RngSeed(5).rng();
        let n = 12;
        let pts = Array2::from_shape_fn((n, 2), |_| rng.gen_range(0.0..1.0));
        let vals = Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0));
        let data = EvaluatedSet::new(pts, vals)
            .unwrap()
            .with_bounds(Bounds::uniform(0.0, 1.0, 2).unwrap())
            .unwrap();
        let model = fit_gp(&data).unwrap();
        let queries = Array2::from_shape_fn((50, 2), |_| rng.gen_range(0.0..1.0));
        let (_, stds) = model.predict(&queries.view()).unwrap();
        for sd in stds.iter() {
            assert!(sd * sd <= model.signal_variance() + 1e-9);
        }
    }

    #[test]
    fn duplicate_rows_are_merged_with_averaged_targets() {
        let pts: Array2<f64> = array![[0.0], [0.0], [1.0]];
        let data = EvaluatedSet::new(pts, array![1.0, 3.0, 5.0]).unwrap();
        let model = fit_gp(&data).unwrap();
        assert_eq!(model.training_len(), 2);
        // The duplicate at x = 0 trains on the average target 2.0.
        let (means, _) = model.predict(&array![[0.0]].view()).unwrap();
        assert!((means[0] - 2.0).abs() < 0.05, "got {}", means[0]);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let data = one_d_set(&[0.3], &[1.0]);
        match fit_gp(&data) {
            Err(Error::InsufficientData { required: 2, actual: 1 }) => {}
            other => panic!("expected insufficient data, got {other:?}"),
        }
    }
}
