//! Sparse adjacency matrices, regularization and truncated subspace solvers.

mod norm;
mod sparse;
mod subspace;

pub use norm::spectral_norm;
pub use sparse::{
    adjacency, bipartite_embed, regularize, regularize_bipartite, row_sums, CsrMatrix,
    LinearOperator, SparseSymMatrix,
};
pub use subspace::{project, top_subspace, Mode, SolverOptions, SubspaceBasis};
