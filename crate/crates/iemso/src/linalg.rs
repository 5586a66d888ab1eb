//! Dense factorizations for the small symmetric kernel matrices used by the
//! surrogate model and the batch-diversity metric. Sizes here are tiny
//! (training-set or batch sized), so plain O(n^3) routines are plenty.

use ndarray::{Array1, Array2, ArrayView1};

use crate::scalar::Scalar;

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Returns `None` when a pivot is not strictly positive.
pub(crate) fn cholesky<S: Scalar>(a: &Array2<S>) -> Option<Array2<S>> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let mut l = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[(i, j)];
            for k in 0..j {
                sum = sum - l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if sum <= S::zero() || !sum.is_finite() {
                    return None;
                }
                l[(i, j)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Some(l)
}

/// Solves `L x = b` for lower-triangular `L`.
pub(crate) fn solve_lower<S: Scalar>(l: &Array2<S>, b: ArrayView1<'_, S>) -> Array1<S> {
    let n = l.nrows();
    let mut x = Array1::zeros(n);
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum = sum - l[(i, k)] * x[k];
        }
        x[i] = sum / l[(i, i)];
    }
    x
}

/// Solves `L^T x = b` for lower-triangular `L`.
pub(crate) fn solve_lower_transpose<S: Scalar>(l: &Array2<S>, b: ArrayView1<'_, S>) -> Array1<S> {
    let n = l.nrows();
    let mut x = Array1::zeros(n);
    for i in (0..n).rev() {
        let mut sum = b[i];
        for k in i + 1..n {
            sum = sum - l[(k, i)] * x[k];
        }
        x[i] = sum / l[(i, i)];
    }
    x
}

/// Solves `(L L^T) x = b`.
pub(crate) fn cholesky_solve<S: Scalar>(l: &Array2<S>, b: ArrayView1<'_, S>) -> Array1<S> {
    let y = solve_lower(l, b);
    solve_lower_transpose(l, y.view())
}

/// Determinant and log-determinant via LU factorization with partial
/// pivoting. Returns `(det, log_det)`; `log_det` is the log of |det| summed
/// in factored form so it stays finite where the plain product underflows.
pub(crate) fn lu_det<S: Scalar>(a: &Array2<S>) -> (S, S) {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let mut m = a.clone();
    let mut sign = S::one();
    for col in 0..n {
        // Partial pivoting: bring the largest remaining entry to the diagonal.
        let mut pivot_row = col;
        let mut pivot_mag = m[(col, col)].abs();
        for row in col + 1..n {
            let mag = m[(row, col)].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag == S::zero() {
            return (S::zero(), S::neg_infinity());
        }
        if pivot_row != col {
            for k in 0..n {
                let tmp = m[(col, k)];
                m[(col, k)] = m[(pivot_row, k)];
                m[(pivot_row, k)] = tmp;
            }
            sign = -sign;
        }
        for row in col + 1..n {
            let factor = m[(row, col)] / m[(col, col)];
            m[(row, col)] = factor;
            for k in col + 1..n {
                let delta = factor * m[(col, k)];
                m[(row, k)] = m[(row, k)] - delta;
            }
        }
    }
    let mut det = sign;
    let mut log_abs = S::zero();
    for i in 0..n {
        det = det * m[(i, i)];
        log_abs = log_abs + m[(i, i)].abs().ln();
    }
    let log_det = if det > S::zero() { log_abs } else { S::neg_infinity() };
    (det, log_det)
}
