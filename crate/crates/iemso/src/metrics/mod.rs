//! The metric suite: per-point sampling metrics, batch-properties metrics,
//! optimization-process metrics and feature-importance metrics.

pub mod batch;
pub mod importance;
pub mod process;
pub mod sampling_core;

pub use batch::{abd, des, des_opts, dis, hve, DesEstimate, DisBandwidth};
pub use importance::{
    fibb, fiee, fis, permutation_importance, shapley_sampling, ExplorationTarget, FisResult,
    ImportanceConfig, ImportanceMethod, ImportanceTarget, ImportanceVector, ShapleyEstimate,
};
pub use process::{cr, cr_shifted, os, pssa, BestValueSequence, PssaResult};
pub use sampling_core::{
    chee, chee_pre_post, default_reference, hv_union_2d, mdpe, pareto_front, pce, ParetoFront2D,
    ReferencePoint2D,
};
