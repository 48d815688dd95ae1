//! Flow-based local cluster improvement on undirected weighted graphs.
//!
//! The core routines are [`improve::mqi`], [`improve::flow_improve`] and
//! [`improve::local_flow_improve`]. Seeds can come from
//! [`diffusion::seeded_pagerank`] plus [`diffusion::sweep_cut`].

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffusion;
pub mod embed;
pub mod error;
pub mod flow;
pub mod frac;
pub mod generators;
pub mod graph;
pub mod imagegraph;
pub mod improve;
pub mod io;
pub mod metrics;
pub mod scalar;
pub mod svd;

pub use error::{Error, Result};
pub use frac::{Mode, ObjectiveKind, RatioObjective, TraceStep};
pub use graph::{BuildReport, NodeSet, WeightedGraph};
pub use improve::{Algorithm, Arithmetic, ImproveOptions, ImproveResult};
