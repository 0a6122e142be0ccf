//! Community detection on sparse non-uniform hypergraph stochastic block models.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: closed-form model algebra (SNR, order selection, expected
//!   adjacency, decision thresholds).
//! - [`sampler`]: seeded instance generation, edge coloring and vertex splits.
//! - [`graphlin`]: sparse adjacency matrices, regularization and truncated
//!   subspace solvers.
//! - [`detect`]: the spectral partition / correction / merging pipelines.
//! - [`metrics`]: permutation-matched accuracy accounting.
//! - [`conclab`]: concentration experiments for the adjacency matrix.
//! - [`experiment`]: SNR-ladder recovery experiments.
//! - [`format`]: the line-oriented hypergraph text format.

pub mod conclab;
pub mod detect;
mod error;
pub mod experiment;
pub mod format;
pub mod graphlin;
mod hypergraph;
pub mod metrics;
pub mod model;
pub(crate) mod rng;
pub mod sampler;

pub use error::{Error, Result};
pub use hypergraph::{
    Color, EdgeRef, Hypergraph, HypergraphBuilder, IncidenceIndex, LabelVector, Side,
    SplitAssignment, UNASSIGNED,
};
pub use model::{ModelParams, OrderRates, OrderSubset};
