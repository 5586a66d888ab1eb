//! CART regression tree grown by greedy variance reduction, plus extraction
//! of the leaf regions as human-readable rule conjunctions.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::domain::EvaluatedSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Variance-reduction threshold below which a split is not worth taking.
const MIN_VARIANCE_REDUCTION: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Node<S: Scalar> {
    Leaf {
        id: usize,
        count: usize,
        mean: S,
        variance: S,
    },
    Split {
        feature: usize,
        threshold: S,
        left: Box<Node<S>>,
        right: Box<Node<S>>,
    },
}

/// Fitted regression tree. The leaves partition the training inputs: every
/// point reaches exactly one leaf.
#[derive(Debug, Clone)]
pub struct TreeModel<S: Scalar> {
    root: Node<S>,
    dim: usize,
    n_leaves: usize,
    n_train: usize,
}

/// One side of a splitting rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    /// `x_j <= v`
    Le,
    /// `x_j > v`
    Gt,
}

/// A single `x_j <= v` / `x_j > v` condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rule<S: Scalar> {
    pub feature: usize,
    pub cmp: Cmp,
    pub threshold: S,
}

impl<S: Scalar> Rule<S> {
    pub fn matches(&self, point: ArrayView1<'_, S>) -> bool {
        match self.cmp {
            Cmp::Le => point[self.feature] <= self.threshold,
            Cmp::Gt => point[self.feature] > self.threshold,
        }
    }
}

/// A leaf region: the conjunction of rules on the root-to-leaf path plus
/// the leaf's training statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<S: Scalar> {
    pub rules: Vec<Rule<S>>,
    pub count: usize,
    pub mean: S,
    pub variance: S,
}

impl<S: Scalar> Partition<S> {
    /// True iff the point satisfies every rule of this region.
    pub fn contains(&self, point: ArrayView1<'_, S>) -> bool {
        self.rules.iter().all(|r| r.matches(point))
    }

    /// Renders the rule conjunction as `x3 <= 0.4125 AND x7 > -1.2000`
    /// (1-based feature indices, 4 decimal places). The root-only region
    /// renders as the empty string.
    pub fn rule_string(&self) -> String {
        self.rules
            .iter()
            .map(|r| {
                let op = match r.cmp {
                    Cmp::Le => "<=",
                    Cmp::Gt => ">",
                };
                format!(
                    "x{} {} {:.4}",
                    r.feature + 1,
                    op,
                    r.threshold.to_f64().unwrap_or(f64::NAN)
                )
            })
            .collect::<Vec<_>>()
            .join(" AND ")
    }
}

/// Grows a regression tree on `(points, values)`.
///
/// Split candidates are midpoints between consecutive sorted unique feature
/// values; growth stops at `max_depth`, when a child would fall below
/// `min_leaf` samples, or when the best split reduces the weighted variance
/// by less than 1e-12. Ties go to the lowest feature index, then the lowest
/// threshold.
pub fn fit_tree<S: Scalar>(
    data: &EvaluatedSet<S>,
    max_depth: usize,
    min_leaf: usize,
) -> Result<TreeModel<S>> {
    if min_leaf == 0 || max_depth == 0 {
        return Err(Error::Config(
            "tree max_depth and min_leaf must be positive".into(),
        ));
    }
    if data.len() < 2 * min_leaf {
        return Err(Error::InsufficientData {
            required: 2 * min_leaf,
            actual: data.len(),
        });
    }
    let indices: Vec<usize> = (0..data.len()).collect();
    let mut next_leaf_id = 0;
    let root = grow(
        &data.points(),
        &data.values(),
        indices,
        max_depth,
        min_leaf,
        &mut next_leaf_id,
    );
    Ok(TreeModel {
        root,
        dim: data.dim(),
        n_leaves: next_leaf_id,
        n_train: data.len(),
    })
}

fn grow<S: Scalar>(
    points: &ArrayView2<'_, S>,
    values: &ArrayView1<'_, S>,
    indices: Vec<usize>,
    depth_left: usize,
    min_leaf: usize,
    next_leaf_id: &mut usize,
) -> Node<S> {
    let (mean, variance) = moments(values, &indices);
    let make_leaf = |next_leaf_id: &mut usize| {
        let id = *next_leaf_id;
        *next_leaf_id += 1;
        Node::Leaf {
            id,
            count: indices.len(),
            mean,
            variance,
        }
    };

    if depth_left == 0 || indices.len() < 2 * min_leaf {
        return make_leaf(next_leaf_id);
    }
    let Some(split) = best_split(points, values, &indices, min_leaf, variance) else {
        return make_leaf(next_leaf_id);
    };

    let (mut left_idx, mut right_idx) = (Vec::new(), Vec::new());
    for &i in &indices {
        if points[(i, split.feature)] <= split.threshold {
            left_idx.push(i);
        } else {
            right_idx.push(i);
        }
    }
    let left = grow(points, values, left_idx, depth_left - 1, min_leaf, next_leaf_id);
    let right = grow(points, values, right_idx, depth_left - 1, min_leaf, next_leaf_id);
    Node::Split {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(left),
        right: Box::new(right),
    }
}

struct SplitChoice<S> {
    feature: usize,
    threshold: S,
}

fn best_split<S: Scalar>(
    points: &ArrayView2<'_, S>,
    values: &ArrayView1<'_, S>,
    indices: &[usize],
    min_leaf: usize,
    parent_variance: S,
) -> Option<SplitChoice<S>> {
    let n = indices.len();
    let n_s = S::from_count(n);
    let mut best: Option<(S, SplitChoice<S>)> = None;

    for feature in 0..points.ncols() {
        let mut order: Vec<usize> = indices.to_vec();
        order.sort_by(|&a, &b| {
            points[(a, feature)]
                .partial_cmp(&points[(b, feature)])
                .expect("finite feature values")
        });

        // Prefix sums over the sorted order let every threshold be scored
        // in O(1).
        let mut prefix_sum = S::zero();
        let mut prefix_sq = S::zero();
        let total_sum: S = order.iter().map(|&i| values[i]).sum();
        let total_sq: S = order.iter().map(|&i| values[i] * values[i]).sum();

        for pos in 0..n - 1 {
            let i = order[pos];
            prefix_sum = prefix_sum + values[i];
            prefix_sq = prefix_sq + values[i] * values[i];

            let here = points[(i, feature)];
            let next = points[(order[pos + 1], feature)];
            if here == next {
                continue; // not a boundary between distinct values
            }
            let n_left = pos + 1;
            let n_right = n - n_left;
            if n_left < min_leaf || n_right < min_leaf {
                continue;
            }
            let threshold = (here + next) / S::real(2.0);

            let nl = S::from_count(n_left);
            let nr = S::from_count(n_right);
            let var_left = (prefix_sq - prefix_sum * prefix_sum / nl).max(S::zero()) / nl;
            let rs = total_sum - prefix_sum;
            let rq = total_sq - prefix_sq;
            let var_right = (rq - rs * rs / nr).max(S::zero()) / nr;
            let weighted = (nl * var_left + nr * var_right) / n_s;
            let reduction = parent_variance - weighted;
            if reduction < S::real(MIN_VARIANCE_REDUCTION) {
                continue;
            }
            // Strict improvement keeps the first (lowest feature, lowest
            // threshold) candidate on ties.
            let better = match &best {
                None => true,
                Some((best_red, _)) => reduction > *best_red,
            };
            if better {
                best = Some((reduction, SplitChoice { feature, threshold }));
            }
        }
    }
    best.map(|(_, choice)| choice)
}

fn moments<S: Scalar>(values: &ArrayView1<'_, S>, indices: &[usize]) -> (S, S) {
    let n = S::from_count(indices.len());
    let mean = indices.iter().map(|&i| values[i]).sum::<S>() / n;
    let var = indices
        .iter()
        .map(|&i| (values[i] - mean) * (values[i] - mean))
        .sum::<S>()
        / n;
    (mean, var)
}

impl<S: Scalar> TreeModel<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn n_train(&self) -> usize {
        self.n_train
    }

    /// Predicted value (leaf mean) for each query row.
    pub fn predict(&self, points: &ArrayView2<'_, S>) -> Result<Array1<S>> {
        if points.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: points.ncols(),
            });
        }
        Ok(Array1::from_shape_fn(points.nrows(), |i| {
            match self.descend(points.row(i)) {
                Node::Leaf { mean, .. } => *mean,
                Node::Split { .. } => unreachable!("descend stops at leaves"),
            }
        }))
    }

    /// Index (in [`extract_partitions`] order) of the leaf the point falls in.
    pub fn leaf_index(&self, point: ArrayView1<'_, S>) -> usize {
        match self.descend(point) {
            Node::Leaf { id, .. } => *id,
            Node::Split { .. } => unreachable!("descend stops at leaves"),
        }
    }

    fn descend(&self, point: ArrayView1<'_, S>) -> &Node<S> {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { .. } => return node,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if point[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }
}

/// One [`Partition`] per leaf, in left-to-right (leaf id) order. The rules
/// are the conjunction along the root path; statistics come from the leaf.
pub fn extract_partitions<S: Scalar>(model: &TreeModel<S>) -> Vec<Partition<S>> {
    let mut out = Vec::with_capacity(model.n_leaves);
    let mut path = Vec::new();
    collect(&model.root, &mut path, &mut out);
    out
}

fn collect<S: Scalar>(node: &Node<S>, path: &mut Vec<Rule<S>>, out: &mut Vec<Partition<S>>) {
    match node {
        Node::Leaf {
            count,
            mean,
            variance,
            ..
        } => out.push(Partition {
            rules: path.clone(),
            count: *count,
            mean: *mean,
            variance: *variance,
        }),
        Node::Split {
            feature,
            threshold,
            left,
            right,
        } => {
            path.push(Rule {
                feature: *feature,
                cmp: Cmp::Le,
                threshold: *threshold,
            });
            collect(left, path, out);
            path.pop();
            path.push(Rule {
                feature: *feature,
                cmp: Cmp::Gt,
                threshold: *threshold,
            });
            collect(right, path, out);
            path.pop();
        }
    }
}
