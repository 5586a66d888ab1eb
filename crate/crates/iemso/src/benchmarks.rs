//! Synthetic black-box objectives with their standard literature bounds,
//! behind a uniform "expensive evaluation" interface with a call counter.

use std::sync::atomic::{AtomicU64, Ordering};

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::Rng;

use crate::domain::{validate_in_bounds_strict, Bounds, CandidateSet, RngSeed};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Branin,
    Rosenbrock,
    Rastrigin,
    Levy,
}

/// A benchmark objective. Evaluation is pure apart from the usage counter,
/// which is atomic so distinct runs can evaluate their own problems from
/// parallel threads.
#[derive(Debug)]
pub struct Problem<S: Scalar> {
    name: &'static str,
    family: Family,
    dim: usize,
    bounds: Bounds<S>,
    evaluations_used: AtomicU64,
}

/// Builds a benchmark problem by name. Supported: `branin` (d = 2 only),
/// `rosenbrock` (d >= 2), `rastrigin` (d >= 1), `levy` (d >= 1).
pub fn make_problem<S: Scalar>(name: &str, dim: usize) -> Result<Problem<S>> {
    let (family, canonical) = match name {
        "branin" => (Family::Branin, "branin"),
        "rosenbrock" => (Family::Rosenbrock, "rosenbrock"),
        "rastrigin" => (Family::Rastrigin, "rastrigin"),
        "levy" => (Family::Levy, "levy"),
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    let bounds = match family {
        Family::Branin => {
            if dim != 2 {
                return Err(Error::IllegalDimension {
                    name: canonical.into(),
                    dim,
                    reason: "branin is 2-dimensional only".into(),
                });
            }
            Bounds::from_pairs(&[(S::real(-5.0), S::real(10.0)), (S::real(0.0), S::real(15.0))])?
        }
        Family::Rosenbrock => {
            if dim < 2 {
                return Err(Error::IllegalDimension {
                    name: canonical.into(),
                    dim,
                    reason: "rosenbrock needs at least 2 dimensions".into(),
                });
            }
            Bounds::uniform(S::real(-5.0), S::real(10.0), dim)?
        }
        Family::Rastrigin => {
            if dim < 1 {
                return Err(Error::IllegalDimension {
                    name: canonical.into(),
                    dim,
                    reason: "dimension must be positive".into(),
                });
            }
            Bounds::uniform(S::real(-5.12), S::real(5.12), dim)?
        }
        Family::Levy => {
            if dim < 1 {
                return Err(Error::IllegalDimension {
                    name: canonical.into(),
                    dim,
                    reason: "dimension must be positive".into(),
                });
            }
            Bounds::uniform(S::real(-10.0), S::real(10.0), dim)?
        }
    };
    Ok(Problem {
        name: canonical,
        family,
        dim,
        bounds,
        evaluations_used: AtomicU64::new(0),
    })
}

impl<S: Scalar> Problem<S> {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &Bounds<S> {
        &self.bounds
    }

    /// Number of expensive evaluations consumed so far.
    pub fn evaluations_used(&self) -> u64 {
        self.evaluations_used.load(Ordering::Relaxed)
    }

    /// Evaluates the objective at each row, charging the budget counter.
    /// Every point must lie inside the problem bounds.
    pub fn evaluate(&self, points: &ArrayView2<'_, S>) -> Result<Array1<S>> {
        validate_in_bounds_strict(points, &self.bounds)?;
        let values = points
            .rows()
            .into_iter()
            .map(|row| self.objective(row))
            .collect();
        self.evaluations_used
            .fetch_add(points.nrows() as u64, Ordering::Relaxed);
        Ok(values)
    }

    fn objective(&self, x: ArrayView1<'_, S>) -> S {
        match self.family {
            Family::Branin => branin(x),
            Family::Rosenbrock => rosenbrock(x),
            Family::Rastrigin => rastrigin(x),
            Family::Levy => levy(x),
        }
    }
}

fn branin<S: Scalar>(x: ArrayView1<'_, S>) -> S {
    let pi = S::PI();
    let (x1, x2) = (x[0], x[1]);
    let a = S::one();
    let b = S::real(5.1) / (S::real(4.0) * pi * pi);
    let c = S::real(5.0) / pi;
    let r = S::real(6.0);
    let s = S::real(10.0);
    let t = S::one() / (S::real(8.0) * pi);
    let term = x2 - b * x1 * x1 + c * x1 - r;
    a * term * term + s * (S::one() - t) * x1.cos() + s
}

fn rosenbrock<S: Scalar>(x: ArrayView1<'_, S>) -> S {
    let hundred = S::real(100.0);
    let mut total = S::zero();
    for i in 0..x.len() - 1 {
        let a = x[i + 1] - x[i] * x[i];
        let b = S::one() - x[i];
        total = total + hundred * a * a + b * b;
    }
    total
}

fn rastrigin<S: Scalar>(x: ArrayView1<'_, S>) -> S {
    let ten = S::real(10.0);
    let two_pi = S::real(2.0) * S::PI();
    let sum: S = x.iter().map(|&v| v * v - ten * (two_pi * v).cos()).sum();
    ten * S::from_count(x.len()) + sum
}

fn levy<S: Scalar>(x: ArrayView1<'_, S>) -> S {
    let pi = S::PI();
    let one = S::one();
    let quarter = S::real(0.25);
    let ten = S::real(10.0);
    let w = |v: S| one + (v - one) * quarter;

    let w1 = w(x[0]);
    let first = (pi * w1).sin().powi(2);
    let d = x.len();
    let wd = w(x[d - 1]);
    let last = (wd - one).powi(2) * (one + (S::real(2.0) * pi * wd).sin().powi(2));
    let mut middle = S::zero();
    for i in 0..d - 1 {
        let wi = w(x[i]);
        middle = middle + (wi - one).powi(2) * (one + ten * (pi * wi + one).sin().powi(2));
    }
    first + middle + last
}

/// Draws `m` points independently and uniformly inside the bounds.
/// Deterministic for a fixed seed.
pub fn sample_candidates<S: Scalar>(
    bounds: &Bounds<S>,
    m: usize,
    seed: RngSeed,
) -> Result<CandidateSet<S>> {
    if m == 0 {
        return Err(Error::Config("candidate count must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let d = bounds.dim();
    let mut points = Array2::zeros((m, d));
    for i in 0..m {
        for j in 0..d {
            points[(i, j)] = rng.gen_range(bounds.lower()[j]..bounds.upper()[j]);
        }
    }
    CandidateSet::new(points)
}

/// Latin-hypercube variant of [`sample_candidates`]: one stratum per point
/// and dimension, with independently shuffled strata per dimension. Off by
/// default in the harness; enabled by the `--lhs` flag.
pub fn sample_candidates_lhs<S: Scalar>(
    bounds: &Bounds<S>,
    m: usize,
    seed: RngSeed,
) -> Result<CandidateSet<S>> {
    if m == 0 {
        return Err(Error::Config("candidate count must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let d = bounds.dim();
    let mut points = Array2::zeros((m, d));
    let m_s = S::from_count(m);
    for j in 0..d {
        let mut strata: Vec<usize> = (0..m).collect();
        // Fisher-Yates shuffle of the strata for this dimension.
        for i in (1..m).rev() {
            let k = rng.gen_range(0..=i);
            strata.swap(i, k);
        }
        for i in 0..m {
            let u: S = rng.gen_range(S::zero()..S::one());
            let frac = (S::from_count(strata[i]) + u) / m_s;
            points[(i, j)] = bounds.lower()[j] + frac * bounds.span(j);
        }
    }
    CandidateSet::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_in_bounds;
    use ndarray::array;

    #[test]
    fn standard_bounds_per_family() {
        let levy6: Problem<f64> = make_problem("levy", 6).unwrap();
        assert_eq!(levy6.dim(), 6);
        assert_eq!(levy6.bounds().lower()[0], -10.0);
        assert_eq!(levy6.bounds().upper()[5], 10.0);

        let rast10: Problem<f64> = make_problem("rastrigin", 10).unwrap();
        assert_eq!(rast10.bounds().lower()[9], -5.12);
        assert_eq!(rast10.bounds().upper()[0], 5.12);

        let branin: Problem<f64> = make_problem("branin", 2).unwrap();
        assert_eq!(branin.bounds().lower()[0], -5.0);
        assert_eq!(branin.bounds().upper()[0], 10.0);
        assert_eq!(branin.bounds().lower()[1], 0.0);
        assert_eq!(branin.bounds().upper()[1], 15.0);

        let rosen: Problem<f64> = make_problem("rosenbrock", 4).unwrap();
        assert_eq!(rosen.bounds().lower()[0], -5.0);
        assert_eq!(rosen.bounds().upper()[3], 10.0);
    }

    #[test]
    fn branin_rejects_other_dims() {
        match make_problem::<f64>("branin", 3) {
            Err(Error::IllegalDimension { dim: 3, .. }) => {}
            other => panic!("expected illegal dimension, got {other:?}"),
        }
        assert!(make_problem::<f64>("rosenbrock", 1).is_err());
        assert!(make_problem::<f64>("nosuch", 2).is_err());
    }

    #[test]
    fn known_minima() {
        let rast: Problem<f64> = make_problem("rastrigin", 10).unwrap();
        let origin = Array2::zeros((1, 10));
        assert!(rast.evaluate(&origin.view()).unwrap()[0].abs() < 1e-5);

        let levy: Problem<f64> = make_problem("levy", 6).unwrap();
        let ones = Array2::from_elem((1, 6), 1.0);
        assert!(levy.evaluate(&ones.view()).unwrap()[0].abs() < 1e-5);

        let rosen: Problem<f64> = make_problem("rosenbrock", 3).unwrap();
        let ones = Array2::from_elem((1, 3), 1.0);
        assert!(rosen.evaluate(&ones.view()).unwrap()[0].abs() < 1e-5);

        let branin: Problem<f64> = make_problem("branin", 2).unwrap();
        let argmin = array![[std::f64::consts::PI, 2.275]];
        let v = branin.evaluate(&argmin.view()).unwrap()[0];
        assert!((v - 0.397887).abs() < 1e-5, "branin minimum was {v}");
    }

    #[test]
    fn counter_tracks_points_and_out_of_bounds_reports_row() {
        let rast: Problem<f64> = make_problem("rastrigin", 2).unwrap();
        let pts = array![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]];
        rast.evaluate(&pts.view()).unwrap();
        assert_eq!(rast.evaluations_used(), 3);

        let bad = array![[0.0, 0.0], [0.0, 9.9]];
        match rast.evaluate(&bad.view()) {
            Err(Error::OutOfBounds { row: 1, column: 1, .. }) => {}
            other => panic!("expected out-of-bounds at row 1, got {other:?}"),
        }
        // Failed calls do not consume budget.
        assert_eq!(rast.evaluations_used(), 3);
    }

    #[test]
    fn candidate_sampling_is_deterministic_and_in_bounds() {
        let bounds = Bounds::uniform(0.0f64, 1.0, 2).unwrap();
        let a = sample_candidates(&bounds, 100, RngSeed(7)).unwrap();
        let b = sample_candidates(&bounds, 100, RngSeed(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert!(validate_in_bounds(&a.points(), &bounds).unwrap());

        let c = sample_candidates(&bounds, 100, RngSeed(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn candidate_mean_near_midpoint() {
        // Empirical per-coordinate mean within 3 standard errors of the
        // midpoint for a large sample: se = span / sqrt(12 m).
        let bounds = Bounds::from_pairs(&[(-2.0f64, 4.0), (10.0, 11.0)]).unwrap();
        let m = 2000;
        let cands = sample_candidates(&bounds, m, RngSeed(13)).unwrap();
        for j in 0..2 {
            let mean: f64 = cands.points().column(j).iter().sum::<f64>() / m as f64;
            let mid = (bounds.lower()[j] + bounds.upper()[j]) / 2.0;
            let se = bounds.span(j) / (12.0 * m as f64).sqrt();
            assert!(
                (mean - mid).abs() <= 3.0 * se,
                "dimension {j}: mean {mean} vs midpoint {mid} (se {se})"
            );
        }
    }

    #[test]
    fn lhs_is_in_bounds_and_stratified() {
        let bounds = Bounds::uniform(0.0f64, 1.0, 2).unwrap();
        let m = 64;
        let cands = sample_candidates_lhs(&bounds, m, RngSeed(3)).unwrap();
        assert!(validate_in_bounds(&cands.points(), &bounds).unwrap());
        // Each of the m strata holds exactly one point per dimension.
        for j in 0..2 {
            let mut seen = vec![false; m];
            for &v in cands.points().column(j).iter() {
                let stratum = ((v * m as f64) as usize).min(m - 1);
                assert!(!seen[stratum], "stratum {stratum} hit twice in dim {j}");
                seen[stratum] = true;
            }
        }
    }
}
