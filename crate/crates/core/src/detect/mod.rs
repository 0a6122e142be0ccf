//! Detection pipelines over colored hypergraphs.
//!
//! Both pipelines pick the order subset of maximal SNR, split the edges into
//! a red and a blue half with fair coins, and run an initial spectral
//! partition on the red half followed by a combinatorial refinement on the
//! remaining edges.
//!
//! - `k >= 3` ([`partition_k`]): the vertices are split into `Z`, `Y1`, `Y2`.
//!   Candidate sets are grown inside `Z` from the singular subspace of the
//!   red `Z x Y1` block, corrected with red edges inside `Z`, and the `Y`
//!   vertices are merged in with blue edges.
//! - `k = 2` ([`partition_2`]): the halves come from the eigenvector of the
//!   regularized red adjacency orthogonal to the projected all-ones vector and
//!   are then corrected with blue edges.

mod binary;
mod counts;
mod kblock;

pub use binary::{correction_2, partition_2, spectral_partition_2, BinarySpectral};
pub use counts::{blue_weighted_count, centering_level, centering_vector, weighted_red_neighbors};
pub use kblock::{
    correction_k, merging, partition_k, spectral_partition_k, CandidateSet, MergeStats,
    SpectralStage,
};

use crate::error::{invalid, Error, Result};
use crate::graphlin::{self, LinearOperator, Mode, SolverOptions, SubspaceBasis};
use crate::hypergraph::{Color, Hypergraph, LabelVector};
use crate::model::{check_nu, preprocess_select, ModelParams, OrderSubset, DEFAULT_NU};
use crate::sampler;

/// Multiple of `M_max · d` above which a vertex counts as high degree.
pub const DEFAULT_TAU: f64 = 20.0;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Target correctness of the spectral stage, in `(0.5, 1)`.
    pub nu: f64,
    /// Order subset override; `None` selects the subset of maximal SNR.
    pub subset: Option<OrderSubset>,
    pub seed: u64,
    /// Tolerances of the subspace solver; its seed is taken from `seed`.
    pub solver: SolverOptions,
    pub tau: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            nu: DEFAULT_NU,
            subset: None,
            seed: 0,
            solver: SolverOptions::default(),
            tau: DEFAULT_TAU,
        }
    }
}

impl PipelineConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn solver(&self) -> SolverOptions {
        SolverOptions {
            seed: self.seed,
            ..self.solver
        }
    }
}

/// Per-stage counters of one pipeline run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub subset: Option<OrderSubset>,
    pub red_edges: usize,
    pub blue_edges: usize,
    pub z_size: usize,
    pub y1_size: usize,
    pub y2_size: usize,
    /// Number of sampled `Y2` columns.
    pub samples: usize,
    /// Candidate sets dropped for low blue density.
    pub discarded: usize,
    /// Vertices zeroed out by regularization.
    pub high_degree: usize,
    pub solver_iterations: usize,
    pub solver_residual: f64,
    pub solver_converged: bool,
    /// `Y` vertices reaching the merging threshold for several blocks.
    pub merge_conflicts: usize,
    /// `Y` vertices reaching it for none.
    pub merge_unqualified: usize,
    /// Vertices swapped by the binary correction.
    pub swaps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionOutcome {
    pub labels: LabelVector,
    pub diagnostics: Diagnostics,
}

/// Runs the pipeline matching `params.k()`.
pub fn partition(h: &Hypergraph, params: &ModelParams, cfg: &PipelineConfig) -> Result<PartitionOutcome> {
    if params.k() == 2 {
        partition_2(h, params, cfg)
    } else {
        partition_k(h, params, cfg)
    }
}

/// Inputs shared by both pipelines after pre-processing and coloring.
pub(crate) struct Prepared {
    pub subset: OrderSubset,
    pub red: Hypergraph,
    pub blue: Hypergraph,
}

/// Selects the order subset and colors the edges. A hypergraph that is
/// already colored keeps its colors.
pub(crate) fn prepare(h: &Hypergraph, params: &ModelParams, cfg: &PipelineConfig) -> Result<Prepared> {
    check_preconditions(h, params, cfg)?;
    let subset = match &cfg.subset {
        Some(s) => {
            params.restricted(s)?;
            s.clone()
        }
        None => preprocess_select(params)?,
    };
    let kept = h.restrict_orders(&subset);
    let colored = if kept.is_colored() {
        kept
    } else {
        sampler::color_edges(&kept, cfg.seed)?
    };
    Ok(Prepared {
        red: colored.color_class(Color::Red)?,
        blue: colored.color_class(Color::Blue)?,
        subset,
    })
}

pub(crate) fn check_preconditions(
    h: &Hypergraph,
    params: &ModelParams,
    cfg: &PipelineConfig,
) -> Result<()> {
    check_nu(cfg.nu)?;
    if h.n() != params.n() {
        return invalid(format!(
            "hypergraph has {} vertices but the model has {}",
            h.n(),
            params.n()
        ));
    }
    if params.n() < 4 * params.k() {
        return invalid(format!(
            "detection needs n >= 4k, got n = {}, k = {}",
            params.n(),
            params.k()
        ));
    }
    if !(cfg.tau > 0.0) {
        return invalid(format!("tau must be positive, got {}", cfg.tau));
    }
    Ok(())
}

/// Top subspace, accepting the last iterate when the solver runs out of
/// iterations.
pub(crate) fn solve<A: LinearOperator + ?Sized>(
    a: &A,
    k: usize,
    mode: Mode,
    cfg: &PipelineConfig,
) -> Result<(SubspaceBasis, bool)> {
    match graphlin::top_subspace(a, k, mode, &cfg.solver()) {
        Ok(basis) => Ok((basis, true)),
        Err(Error::Convergence {
            iterations,
            residual,
            last: Some(basis),
        }) => {
            log::warn!(
                "subspace solver stopped after {iterations} iterations at residual {residual:.3e}; \
                 using the last iterate"
            );
            Ok((*basis, false))
        }
        Err(e) => Err(e),
    }
}
