//! Reference models for exploitation/exploration scoring, solution-space
//! partitioning and feature importance: a Gaussian-process regressor, a
//! CART regression tree, and a model-agnostic distance-based exploration
//! score.

mod gp;
mod tree;

pub use gp::{fit_gp, fit_gp_with, gp_predict, GpModel};
pub use tree::{extract_partitions, fit_tree, Cmp, Partition, Rule, TreeModel};

use ndarray::{Array1, ArrayView2};

use crate::domain::{min_distance_to_rows, EvaluatedSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Model-agnostic exploration score: for each query row, the minimum
/// Euclidean distance to any evaluated point. This is the raw orientation
/// (larger = more novel); callers negate it when packing scores.
pub fn distance_exploration<S: Scalar>(
    data: &EvaluatedSet<S>,
    points: &ArrayView2<'_, S>,
) -> Result<Array1<S>> {
    if data.is_empty() {
        return Err(Error::EmptyEvaluatedSet { required: 1 });
    }
    if points.ncols() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            actual: points.ncols(),
        });
    }
    Ok(Array1::from_shape_fn(points.nrows(), |i| {
        min_distance_to_rows(points.row(i), &data.points()).expect("non-empty data")
    }))
}
