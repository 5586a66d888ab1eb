//! Optimization-process metrics: partitioning-based solution-space analysis
//! (PSSA), convergence rate (CR) and optimization stability (OS).

use crate::domain::{Batch, EvaluatedSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::surrogate::{extract_partitions, fit_tree, Partition};

/// Denominators this close to zero (or below) make the relative-decrease
/// formula meaningless.
const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Best-known objective value after each iteration. Construction enforces
/// the running minimum, so the sequence is non-increasing by the time any
/// metric sees it.
#[derive(Debug, Clone, PartialEq)]
pub struct BestValueSequence<S: Scalar> {
    values: Vec<S>,
}

impl<S: Scalar> BestValueSequence<S> {
    /// Builds the sequence from raw per-iteration values by taking the
    /// running minimum.
    pub fn from_values(raw: impl IntoIterator<Item = S>) -> Self {
        let mut values = Vec::new();
        let mut best = S::infinity();
        for v in raw {
            best = best.min(v);
            values.push(best);
        }
        Self { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Partitioning-based solution-space analysis: fits a regression tree on
/// the evaluated set, extracts the leaf regions, and locates each batch
/// point in exactly one of them.
pub struct PssaResult<S: Scalar> {
    pub partitions: Vec<Partition<S>>,
    /// Partition index of each batch point.
    pub batch_assignment: Vec<usize>,
    /// Batch points per partition; sums to the batch size.
    pub per_partition_batch_counts: Vec<usize>,
}

pub fn pssa<S: Scalar>(
    data: &EvaluatedSet<S>,
    batch: &Batch<S>,
    max_depth: usize,
    min_leaf: usize,
) -> Result<PssaResult<S>> {
    let tree = fit_tree(data, max_depth, min_leaf)?;
    if batch.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            actual: batch.dim(),
        });
    }
    let partitions = extract_partitions(&tree);
    let mut counts = vec![0usize; partitions.len()];
    let mut assignment = Vec::with_capacity(batch.len());
    for row in batch.points().rows() {
        let leaf = tree.leaf_index(row);
        assignment.push(leaf);
        counts[leaf] += 1;
    }
    Ok(PssaResult {
        partitions,
        batch_assignment: assignment,
        per_partition_batch_counts: counts,
    })
}

/// Convergence Rate: the average relative decrease of the best-known value
/// per iteration. Every denominator must be strictly positive (beyond
/// 1e-12); sequences that touch or cross zero should use [`cr_shifted`].
pub fn cr<S: Scalar>(sequence: &BestValueSequence<S>) -> Result<S> {
    let values = sequence.values();
    if values.len() < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: values.len(),
        });
    }
    let mut total = S::zero();
    for t in 1..values.len() {
        let denom = values[t - 1];
        if !(denom > S::real(DENOMINATOR_FLOOR)) {
            return Err(Error::ConvergenceDenominator {
                index: t - 1,
                value: denom.to_f64().unwrap_or(f64::NAN),
            });
        }
        total = total + (values[t - 1] - values[t]) / denom;
    }
    Ok(total / S::from_count(values.len() - 1))
}

/// Convergence rate on the translated sequence `values - min + shift`,
/// which is strictly positive for any `shift > 0`. A documented variant,
/// never substituted silently for [`cr`].
pub fn cr_shifted<S: Scalar>(sequence: &BestValueSequence<S>, shift: S) -> Result<S> {
    if !(shift > S::zero()) {
        return Err(Error::Config("shift must be positive".into()));
    }
    let min = sequence
        .values()
        .iter()
        .copied()
        .reduce(S::min)
        .ok_or(Error::TooFewValues { required: 2, actual: 0 })?;
    let translated =
        BestValueSequence::from_values(sequence.values().iter().map(|&v| v - min + shift));
    cr(&translated)
}

/// Optimization Stability: population standard deviation of the final
/// objective values across runs.
pub fn os<S: Scalar>(final_values: &[S]) -> Result<S> {
    let m = final_values.len();
    if m < 2 {
        return Err(Error::TooFewValues { required: 2, actual: m });
    }
    let m_s = S::from_count(m);
    let mean = final_values.iter().copied().sum::<S>() / m_s;
    let ss: S = final_values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    Ok((ss / m_s).sqrt())
}
