//! Feature-importance metrics: permutation importance and Monte-Carlo
//! Shapley attribution engines, plus the exploration/exploitation (FIEE),
//! black-box objective (FIBB) and surrogate-prediction (FIS) metrics built
//! on them.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::Rng;

use crate::domain::{EvaluatedSet, RngSeed};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::surrogate::{distance_exploration, fit_tree, GpModel};

/// Attribution engine used for a feature-importance metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportanceMethod {
    Permutation,
    Shapley,
}

/// What the importance scores explain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportanceTarget {
    Objective,
    Exploitation,
    Exploration,
    Surrogate,
}

/// Which exploration score FIEE attributes: the surrogate's predictive
/// standard deviation, or the model-agnostic minimum distance to the
/// evaluated set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExplorationTarget {
    Surrogate,
    Distance,
}

/// Per-feature importance scores with their provenance tags.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceVector<S: Scalar> {
    pub scores: Array1<S>,
    pub method: ImportanceMethod,
    pub target: ImportanceTarget,
}

/// Estimator settings shared by the importance metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImportanceConfig {
    pub method: ImportanceMethod,
    /// Independent shuffles per feature for permutation importance.
    pub permutation_repeats: usize,
    /// Sampled permutations per attributed point for Shapley estimation.
    pub shapley_samples: usize,
    /// Background rows are uniformly subsampled (seeded) down to this cap.
    pub background_cap: usize,
    /// Points attributed for a global Shapley score are subsampled
    /// (seeded) down to this cap.
    pub attribution_cap: usize,
}

impl Default for ImportanceConfig {
    fn default() -> Self {
        Self {
            method: ImportanceMethod::Permutation,
            permutation_repeats: 10,
            shapley_samples: 128,
            background_cap: 256,
            attribution_cap: 64,
        }
    }
}

/// Permutation importance: the mean increase in mean-squared error of
/// `predict_fn` against `y_ref` when one feature column is shuffled,
/// averaged over `repeats` independent shuffles per feature. Shuffles are
/// drawn from per-(feature, repeat) substreams, so scores do not depend on
/// evaluation order.
pub fn permutation_importance<S, F>(
    predict_fn: F,
    x: &ArrayView2<'_, S>,
    y_ref: &ArrayView1<'_, S>,
    repeats: usize,
    seed: RngSeed,
) -> Result<Array1<S>>
where
    S: Scalar,
    F: Fn(&ArrayView2<'_, S>) -> Result<Array1<S>>,
{
    let n = x.nrows();
    if n < 5 {
        return Err(Error::InsufficientData { required: 5, actual: n });
    }
    if repeats == 0 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    if y_ref.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: y_ref.len(),
        });
    }
    let baseline = mse(&predict_fn(x)?.view(), y_ref);
    let d = x.ncols();
    let mut scores = Array1::zeros(d);
    let mut work = x.to_owned();
    for j in 0..d {
        let original = x.column(j).to_owned();
        let mut increase = S::zero();
        for rep in 0..repeats {
            let mut rng = seed.substream(j as u64, rep as u64);
            let mut shuffled = original.to_vec();
            for i in (1..n).rev() {
                let pick = rng.gen_range(0..=i);
                shuffled.swap(i, pick);
            }
            for (i, v) in shuffled.into_iter().enumerate() {
                work[(i, j)] = v;
            }
            let permuted_mse = mse(&predict_fn(&work.view())?.view(), y_ref);
            increase = increase + (permuted_mse - baseline);
        }
        scores[j] = increase / S::from_count(repeats);
        work.column_mut(j).assign(&original);
    }
    Ok(scores)
}

fn mse<S: Scalar>(pred: &ArrayView1<'_, S>, target: &ArrayView1<'_, S>) -> S {
    let n = S::from_count(pred.len());
    pred.iter()
        .zip(target.iter())
        .map(|(&p, &t)| (p - t) * (p - t))
        .sum::<S>()
        / n
}

/// Monte-Carlo Shapley estimate for one point.
#[derive(Debug, Clone)]
pub struct ShapleyEstimate<S: Scalar> {
    /// Per-feature attribution estimates.
    pub phi: Array1<S>,
    /// Per-feature Monte-Carlo standard errors.
    pub phi_se: Array1<S>,
    /// `sum(phi) - (f(x) - mean over background of f)`: the efficiency
    /// axiom holds up to this Monte-Carlo residual.
    pub efficiency_residual: S,
    /// Standard error of the residual.
    pub residual_se: S,
}

/// Shapley attribution by permutation sampling with marginal replacement
/// from background rows: each sample draws a background row and a feature
/// order, then flips features from the background value to the query value
/// one at a time, crediting each feature with the prediction change.
pub fn shapley_sampling<S, F>(
    predict_fn: F,
    x: ArrayView1<'_, S>,
    background: &ArrayView2<'_, S>,
    samples: usize,
    seed: RngSeed,
) -> Result<ShapleyEstimate<S>>
where
    S: Scalar,
    F: Fn(&ArrayView2<'_, S>) -> Result<Array1<S>>,
{
    let b = background.nrows();
    if b == 0 {
        return Err(Error::InsufficientData { required: 1, actual: 0 });
    }
    if samples == 0 {
        return Err(Error::Config("samples must be at least 1".into()));
    }
    let d = x.len();
    if background.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: background.ncols(),
        });
    }

    let mut rng = seed.rng();
    let mut sum = Array1::<S>::zeros(d);
    let mut sum_sq = Array1::<S>::zeros(d);
    let mut bg_value_sum = S::zero();
    let mut bg_value_sq = S::zero();

    // Each sample's walk is evaluated as one (d + 1)-row batch: row 0 is
    // the background point, row t has the first t features (in sampled
    // order) flipped to the query's values.
    let mut walk = Array2::zeros((d + 1, d));
    let mut order: Vec<usize> = (0..d).collect();
    for _ in 0..samples {
        let row = rng.gen_range(0..b);
        for i in (1..d).rev() {
            let pick = rng.gen_range(0..=i);
            order.swap(i, pick);
        }
        walk.row_mut(0).assign(&background.row(row));
        for t in 0..d {
            let prev = walk.row(t).to_owned();
            walk.row_mut(t + 1).assign(&prev);
            walk[(t + 1, order[t])] = x[order[t]];
        }
        let values = predict_fn(&walk.view())?;
        if values.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                actual: values.len(),
            });
        }
        for t in 0..d {
            let delta = values[t + 1] - values[t];
            sum[order[t]] = sum[order[t]] + delta;
            sum_sq[order[t]] = sum_sq[order[t]] + delta * delta;
        }
        bg_value_sum = bg_value_sum + values[0];
        bg_value_sq = bg_value_sq + values[0] * values[0];
    }

    let s = S::from_count(samples);
    let phi = sum.mapv(|v| v / s);
    let phi_se = if samples >= 2 {
        Array1::from_shape_fn(d, |j| {
            let var = ((sum_sq[j] - sum[j] * sum[j] / s) / (s - S::one())).max(S::zero());
            (var / s).sqrt()
        })
    } else {
        Array1::from_elem(d, S::infinity())
    };

    // Efficiency against the full-background mean: the sampled sum of
    // attributions telescopes to f(x) minus the mean prediction over the
    // sampled background rows.
    let full_bg_mean = {
        let preds = predict_fn(background)?;
        preds.iter().copied().sum::<S>() / S::from_count(b)
    };
    let f_x = {
        let mut q = Array2::zeros((1, d));
        q.row_mut(0).assign(&x);
        predict_fn(&q.view())?[0]
    };
    let phi_total = phi.iter().copied().sum::<S>();
    let efficiency_residual = phi_total - (f_x - full_bg_mean);
    let residual_se = if samples >= 2 {
        let var =
            ((bg_value_sq - bg_value_sum * bg_value_sum / s) / (s - S::one())).max(S::zero());
        (var / s).sqrt()
    } else {
        S::infinity()
    };

    Ok(ShapleyEstimate {
        phi,
        phi_se,
        efficiency_residual,
        residual_se,
    })
}

/// Feature importance for exploration and exploitation. Returns
/// `(eta, lambda)`: importance of each feature for the exploration score
/// and for the surrogate's exploitation prediction, as magnitudes.
pub fn fiee<S: Scalar>(
    model: &GpModel<S>,
    data: &EvaluatedSet<S>,
    exploration: ExplorationTarget,
    cfg: &ImportanceConfig,
    seed: RngSeed,
) -> Result<(ImportanceVector<S>, ImportanceVector<S>)> {
    let exploit = |pts: &ArrayView2<'_, S>| model.predict_mean(pts);
    let lambda = global_importance(&exploit, &data.points(), cfg, seed.derive(0xEE, 1))?;

    let eta = match exploration {
        ExplorationTarget::Surrogate => {
            let explore = |pts: &ArrayView2<'_, S>| model.predict(pts).map(|(_, std)| std);
            global_importance(&explore, &data.points(), cfg, seed.derive(0xEE, 2))?
        }
        ExplorationTarget::Distance => {
            let explore = |pts: &ArrayView2<'_, S>| distance_exploration(data, pts);
            global_importance(&explore, &data.points(), cfg, seed.derive(0xEE, 2))?
        }
    };

    Ok((
        ImportanceVector {
            scores: eta,
            method: cfg.method,
            target: ImportanceTarget::Exploration,
        },
        ImportanceVector {
            scores: lambda,
            method: cfg.method,
            target: ImportanceTarget::Exploitation,
        },
    ))
}

/// Feature importance for the black-box objective: fits a reference
/// regression tree on the evaluated set and scores its predictions against
/// the observed values.
pub fn fibb<S: Scalar>(
    data: &EvaluatedSet<S>,
    tree_max_depth: usize,
    tree_min_leaf: usize,
    cfg: &ImportanceConfig,
    seed: RngSeed,
) -> Result<ImportanceVector<S>> {
    let tree = fit_tree(data, tree_max_depth, tree_min_leaf)?;
    let predict = |pts: &ArrayView2<'_, S>| tree.predict(pts);
    let scores = match cfg.method {
        ImportanceMethod::Permutation => permutation_importance(
            predict,
            &data.points(),
            &data.values(),
            cfg.permutation_repeats,
            seed.derive(0xBB, 1),
        )?
        .mapv(|v| v.abs()),
        ImportanceMethod::Shapley => {
            mean_abs_shapley(&predict, &data.points(), cfg, seed.derive(0xBB, 1))?
        }
    };
    Ok(ImportanceVector {
        scores,
        method: cfg.method,
        target: ImportanceTarget::Objective,
    })
}

/// Signed and mean-absolute surrogate feature importance.
#[derive(Debug, Clone, PartialEq)]
pub struct FisResult<S: Scalar> {
    /// The literal signed mean of per-point attributions. Symmetric
    /// attributions can cancel this to zero.
    pub signed: ImportanceVector<S>,
    /// Mean of absolute per-point attributions, reported alongside.
    pub abs: ImportanceVector<S>,
}

/// Feature importance of a surrogate's predictions: per-point Shapley
/// attributions against the model's own output, averaged over the data
/// points both as a signed mean and as a mean of magnitudes. The
/// attribution-point and background sets are seeded subsamples capped by
/// the config.
pub fn fis<S, F>(
    predict_fn: F,
    points: &ArrayView2<'_, S>,
    cfg: &ImportanceConfig,
    seed: RngSeed,
) -> Result<FisResult<S>>
where
    S: Scalar,
    F: Fn(&ArrayView2<'_, S>) -> Result<Array1<S>>,
{
    let d = points.ncols();
    let attributed = subsample_rows(points, cfg.attribution_cap, seed.derive(0xF5, 1));
    let background = subsample_rows(points, cfg.background_cap, seed.derive(0xF5, 2));
    let mut signed = Array1::<S>::zeros(d);
    let mut abs = Array1::<S>::zeros(d);
    for (i, row) in attributed.rows().into_iter().enumerate() {
        let est = shapley_sampling(
            &predict_fn,
            row,
            &background.view(),
            cfg.shapley_samples,
            seed.derive(0xF5, 3 + i as u64),
        )?;
        for j in 0..d {
            signed[j] = signed[j] + est.phi[j];
            abs[j] = abs[j] + est.phi[j].abs();
        }
    }
    let n = S::from_count(attributed.nrows());
    Ok(FisResult {
        signed: ImportanceVector {
            scores: signed.mapv(|v| v / n),
            method: ImportanceMethod::Shapley,
            target: ImportanceTarget::Surrogate,
        },
        abs: ImportanceVector {
            scores: abs.mapv(|v| v / n),
            method: ImportanceMethod::Shapley,
            target: ImportanceTarget::Surrogate,
        },
    })
}

/// Global importance of `target_fn` over `x` with the configured engine,
/// as magnitudes.
fn global_importance<S, F>(
    target_fn: &F,
    x: &ArrayView2<'_, S>,
    cfg: &ImportanceConfig,
    seed: RngSeed,
) -> Result<Array1<S>>
where
    S: Scalar,
    F: Fn(&ArrayView2<'_, S>) -> Result<Array1<S>>,
{
    match cfg.method {
        ImportanceMethod::Permutation => {
            let y_ref = target_fn(x)?;
            Ok(
                permutation_importance(target_fn, x, &y_ref.view(), cfg.permutation_repeats, seed)?
                    .mapv(|v| v.abs()),
            )
        }
        ImportanceMethod::Shapley => mean_abs_shapley(target_fn, x, cfg, seed),
    }
}

fn mean_abs_shapley<S, F>(
    predict_fn: &F,
    points: &ArrayView2<'_, S>,
    cfg: &ImportanceConfig,
    seed: RngSeed,
) -> Result<Array1<S>>
where
    S: Scalar,
    F: Fn(&ArrayView2<'_, S>) -> Result<Array1<S>>,
{
    let d = points.ncols();
    let attributed = subsample_rows(points, cfg.attribution_cap, seed.derive(0xA5, 1));
    let background = subsample_rows(points, cfg.background_cap, seed.derive(0xA5, 2));
    let mut total = Array1::<S>::zeros(d);
    for (i, row) in attributed.rows().into_iter().enumerate() {
        let est = shapley_sampling(
            predict_fn,
            row,
            &background.view(),
            cfg.shapley_samples,
            seed.derive(0xA5, 3 + i as u64),
        )?;
        for j in 0..d {
            total[j] = total[j] + est.phi[j].abs();
        }
    }
    let n = S::from_count(attributed.nrows());
    Ok(total.mapv(|v| v / n))
}

/// Uniform seeded subsample of rows (without replacement) when over the
/// cap; the full matrix otherwise.
fn subsample_rows<S: Scalar>(points: &ArrayView2<'_, S>, cap: usize, seed: RngSeed) -> Array2<S> {
    let n = points.nrows();
    if n <= cap {
        return points.to_owned();
    }
    let mut rng = seed.rng();
    let mut indices: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let pick = rng.gen_range(0..=i);
        indices.swap(i, pick);
    }
    indices.truncate(cap);
    indices.sort_unstable();
    let mut out = Array2::zeros((cap, points.ncols()));
    for (to, &from) in indices.iter().enumerate() {
        out.row_mut(to).assign(&points.row(from));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::Rng;

    fn uniform_points(n: usize, d: usize, seed: u64) -> Array2<f64> {
        let mut rng = RngSeed(seed).rng();
        Array2::from_shape_fn((n, d), |_| rng.gen_range(0.0..1.0))
    }

    #[test]
    fn permutation_ignores_irrelevant_features() {
        let x = uniform_points(100, 3, 1);
        let f = |pts: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(pts.column(0).to_owned())
        };
        let y_ref = f(&x.view()).unwrap();
        let scores =
            permutation_importance(f, &x.view(), &y_ref.view(), 10, RngSeed(2)).unwrap();
        assert!(scores[0] > 0.0);
        assert!(scores[1].abs() <= 1e-9);
        assert!(scores[2].abs() <= 1e-9);
    }

    #[test]
    fn permutation_matches_variance_attribution_for_linear_model() {
        // For f = 3 x1 + x2 on independent uniforms, the MSE increase from
        // shuffling feature j is about 2 w_j^2 Var(x_j), so the score ratio
        // approaches 9.
        let x = uniform_points(4000, 2, 3);
        let f = |pts: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(Array1::from_shape_fn(pts.nrows(), |i| {
                3.0 * pts[(i, 0)] + pts[(i, 1)]
            }))
        };
        let y_ref = f(&x.view()).unwrap();
        let scores =
            permutation_importance(f, &x.view(), &y_ref.view(), 10, RngSeed(4)).unwrap();
        let ratio = scores[0] / scores[1];
        assert!(
            (ratio - 9.0).abs() / 9.0 < 0.3,
            "ratio {ratio} not within 30% of 9"
        );
    }

    #[test]
    fn permutation_rejects_tiny_samples() {
        let x = uniform_points(4, 2, 5);
        let f = |pts: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(pts.column(0).to_owned())
        };
        let y = f(&x.view()).unwrap();
        assert!(permutation_importance(f, &x.view(), &y.view(), 10, RngSeed(6)).is_err());
    }

    #[test]
    fn shapley_constant_function_attributes_nothing() {
        let bg = uniform_points(20, 3, 7);
        let f = |pts: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(Array1::from_elem(pts.nrows(), 5.0))
        };
        let x = array![0.3, 0.4, 0.5];
        let est = shapley_sampling(f, x.view(), &bg.view(), 64, RngSeed(8)).unwrap();
        for phi in est.phi.iter() {
            assert!(phi.abs() <= 1e-9);
        }
        assert!(est.efficiency_residual.abs() <= 1e-9);
    }

    #[test]
    fn shapley_recovers_linear_attributions() {
        let bg = uniform_points(64, 3, 9);
        let w = [2.0, -1.0, 0.5];
        let f = move |pts: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(Array1::from_shape_fn(pts.nrows(), |i| {
                w[0] * pts[(i, 0)] + w[1] * pts[(i, 1)] + w[2] * pts[(i, 2)]
            }))
        };
        let bg_mean: Vec<f64> = (0..3)
            .map(|j| bg.column(j).iter().sum::<f64>() / bg.nrows() as f64)
            .collect();
        let x = array![0.9, 0.1, 0.7];
        let est = shapley_sampling(f, x.view(), &bg.view(), 512, RngSeed(10)).unwrap();
        for j in 0..3 {
            let want = w[j] * (x[j] - bg_mean[j]);
            let tol = 3.0 * est.phi_se[j] + 1e-12;
            assert!(
                (est.phi[j] - want).abs() <= tol,
                "phi[{j}] = {} vs analytic {want} (tol {tol})",
                est.phi[j]
            );
        }
        assert!(est.efficiency_residual.abs() <= 3.0 * est.residual_se + 1e-12);
    }

    #[test]
    fn shapley_efficiency_residual_is_bounded_across_seeds() {
        let bg = uniform_points(32, 2, 11);
        let f = |pts: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(Array1::from_shape_fn(pts.nrows(), |i| {
                (pts[(i, 0)] * 3.0).sin() + pts[(i, 1)].powi(2)
            }))
        };
        let x = array![0.5, 0.25];
        for seed in 0..10u64 {
            let est = shapley_sampling(f, x.view(), &bg.view(), 128, RngSeed(seed)).unwrap();
            assert!(
                est.efficiency_residual.abs() <= 3.0 * est.residual_se + 1e-12,
                "seed {seed}: residual {} exceeds 3 se {}",
                est.efficiency_residual,
                est.residual_se
            );
        }
    }

    fn one_feature_gp() -> (GpModel<f64>, EvaluatedSet<f64>) {
        // Points vary only along the first feature; targets follow it.
        let mut rng = RngSeed(12).rng();
        let n = 30;
        let pts = Array2::from_shape_fn((n, 3), |(_, j)| {
            if j == 0 {
                rng.gen_range(0.0..1.0)
            } else {
                0.5
            }
        });
        let vals = Array1::from_shape_fn(n, |i| (3.0 * pts[(i, 0)]).sin());
        let data = EvaluatedSet::new(pts, vals).unwrap();
        let model = crate::surrogate::fit_gp(&data).unwrap();
        (model, data)
    }

    #[test]
    fn fiee_concentrates_on_the_varying_feature() {
        let (model, data) = one_feature_gp();
        let cfg = ImportanceConfig::default();
        let (eta, lambda) =
            fiee(&model, &data, ExplorationTarget::Surrogate, &cfg, RngSeed(13)).unwrap();
        assert_eq!(lambda.target, ImportanceTarget::Exploitation);
        assert_eq!(eta.target, ImportanceTarget::Exploration);
        for j in 1..3 {
            assert!(
                lambda.scores[0] >= 10.0 * lambda.scores[j].max(1e-30),
                "lambda not concentrated: {:?}",
                lambda.scores
            );
        }
    }

    #[test]
    fn fiee_handles_duplicated_columns() {
        // x2 := x1; remaining column is constant and must stay at zero.
        let mut rng = RngSeed(14).rng();
        let n = 30;
        let mut pts = Array2::zeros((n, 3));
        for i in 0..n {
            let v: f64 = rng.gen_range(0.0..1.0);
            pts[(i, 0)] = v;
            pts[(i, 1)] = v;
            pts[(i, 2)] = 0.5;
        }
        let vals = Array1::from_shape_fn(n, |i| pts[(i, 0)] * 2.0);
        let data = EvaluatedSet::new(pts, vals).unwrap();
        let model = crate::surrogate::fit_gp(&data).unwrap();
        let cfg = ImportanceConfig::default();
        let (_, lambda) =
            fiee(&model, &data, ExplorationTarget::Surrogate, &cfg, RngSeed(15)).unwrap();
        assert!(lambda.scores[0].is_finite() && lambda.scores[1].is_finite());
        assert!(lambda.scores[0] > 0.0);
        assert!(lambda.scores[2].abs() <= 1e-9, "constant column scored {}", lambda.scores[2]);
    }

    #[test]
    fn fiee_methods_agree_on_dominant_feature() {
        let (model, data) = one_feature_gp();
        let perm_cfg = ImportanceConfig::default();
        let shap_cfg = ImportanceConfig {
            method: ImportanceMethod::Shapley,
            shapley_samples: 64,
            attribution_cap: 16,
            ..ImportanceConfig::default()
        };
        let (_, lam_p) =
            fiee(&model, &data, ExplorationTarget::Surrogate, &perm_cfg, RngSeed(16)).unwrap();
        let (_, lam_s) =
            fiee(&model, &data, ExplorationTarget::Surrogate, &shap_cfg, RngSeed(16)).unwrap();
        let argmax = |v: &Array1<f64>| {
            v.iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(i, _)| i)
                .unwrap()
        };
        assert_eq!(argmax(&lam_p.scores), 0);
        assert_eq!(argmax(&lam_s.scores), 0);
    }

    #[test]
    fn fibb_puts_mass_on_the_generative_feature() {
        let mut rng = RngSeed(17).rng();
        let n = 200;
        let pts = Array2::from_shape_fn((n, 3), |_| rng.gen_range(0.0..1.0));
        let vals = Array1::from_shape_fn(n, |i| if pts[(i, 0)] > 0.5 { 1.0 } else { 0.0 });
        let data = EvaluatedSet::new(pts, vals).unwrap();
        let iv = fibb(&data, 4, 5, &ImportanceConfig::default(), RngSeed(18)).unwrap();
        let total: f64 = iv.scores.iter().sum();
        assert!(
            iv.scores[0] / total >= 0.9,
            "mass on feature 1 only {}",
            iv.scores[0] / total
        );
    }

    #[test]
    fn fibb_constant_targets_score_zero() {
        let pts = uniform_points(40, 2, 19);
        let data = EvaluatedSet::new(pts, Array1::from_elem(40, 3.0)).unwrap();
        let iv = fibb(&data, 4, 5, &ImportanceConfig::default(), RngSeed(20)).unwrap();
        for s in iv.scores.iter() {
            assert_eq!(*s, 0.0);
        }
    }

    #[test]
    fn fibb_row_shuffle_keeps_dominant_mass() {
        let mut rng = RngSeed(21).rng();
        let n = 200;
        let pts = Array2::from_shape_fn((n, 2), |_| rng.gen_range(0.0..1.0));
        let vals = Array1::from_shape_fn(n, |i| if pts[(i, 0)] > 0.5 { 1.0 } else { 0.0 });

        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut pts_shuffled = Array2::zeros((n, 2));
        let mut vals_shuffled = Array1::zeros(n);
        for (to, &from) in order.iter().enumerate() {
            pts_shuffled.row_mut(to).assign(&pts.row(from));
            vals_shuffled[to] = vals[from];
        }

        let cfg = ImportanceConfig::default();
        let a = fibb(
            &EvaluatedSet::new(pts, vals).unwrap(),
            4,
            5,
            &cfg,
            RngSeed(22),
        )
        .unwrap();
        let b = fibb(
            &EvaluatedSet::new(pts_shuffled, vals_shuffled).unwrap(),
            4,
            5,
            &cfg,
            RngSeed(22),
        )
        .unwrap();
        let mass = |v: &ImportanceVector<f64>| v.scores[0] / v.scores.iter().sum::<f64>();
        assert!(mass(&a) >= 0.9 && mass(&b) >= 0.9);
    }

    #[test]
    fn fis_signed_cancels_but_abs_does_not_for_symmetric_data() {
        // f = x1 with attribution points symmetric about the background
        // mean: signed attributions cancel, magnitudes do not.
        let m = 32;
        let pts = Array2::from_shape_fn((m, 2), |(i, j)| {
            if j == 0 {
                i as f64 / (m - 1) as f64
            } else {
                0.5
            }
        });
        let f = |q: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(q.column(0).to_owned())
        };
        let cfg = ImportanceConfig {
            shapley_samples: 128,
            ..ImportanceConfig::default()
        };
        let result = fis(f, &pts.view(), &cfg, RngSeed(23)).unwrap();
        assert!(
            result.signed.scores[0].abs() < 0.05,
            "signed {} should cancel",
            result.signed.scores[0]
        );
        assert!(
            result.abs.scores[0] > 0.1,
            "abs {} should stay positive",
            result.abs.scores[0]
        );
        // The unused feature contributes nothing either way.
        assert!(result.signed.scores[1].abs() <= 1e-9);
        assert!(result.abs.scores[1].abs() <= 1e-9);
    }

    #[test]
    fn fis_tree_on_single_feature_ignores_the_rest() {
        let mut rng = RngSeed(24).rng();
        let n = 100;
        let pts = Array2::from_shape_fn((n, 3), |_| rng.gen_range(0.0..1.0));
        let vals = Array1::from_shape_fn(n, |i| if pts[(i, 0)] > 0.5 { 1.0 } else { 0.0 });
        let data = EvaluatedSet::new(pts.clone(), vals).unwrap();
        let tree = fit_tree(&data, 3, 5).unwrap();
        let f = |q: &ArrayView2<'_, f64>| tree.predict(q);
        let cfg = ImportanceConfig {
            attribution_cap: 32,
            shapley_samples: 64,
            ..ImportanceConfig::default()
        };
        let result = fis(f, &pts.view(), &cfg, RngSeed(25)).unwrap();
        for j in 1..3 {
            assert!(
                result.abs.scores[j] <= 1e-9,
                "unused feature {j} scored {}",
                result.abs.scores[j]
            );
        }
        assert!(result.abs.scores[0] > 0.0);
    }

    #[test]
    fn fis_constant_model_is_all_zero() {
        let pts = uniform_points(20, 2, 26);
        let f = |q: &ArrayView2<'_, f64>| -> Result<Array1<f64>> {
            Ok(Array1::from_elem(q.nrows(), 1.0))
        };
        let result = fis(f, &pts.view(), &ImportanceConfig::default(), RngSeed(27)).unwrap();
        for j in 0..2 {
            assert!(result.signed.scores[j].abs() <= 1e-12);
            assert!(result.abs.scores[j].abs() <= 1e-12);
        }
    }
}
