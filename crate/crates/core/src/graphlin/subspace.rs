use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use super::sparse::LinearOperator;
use crate::error::{invalid, Error, Result};
use crate::rng;

/// Which top subspace to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Eigenvectors of a symmetric operator, largest `|λ|` first.
    Symmetric,
    /// Left singular vectors, largest `σ` first.
    LeftSingular,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Extra block columns beyond `k`.
    pub oversample: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 500,
            oversample: 4,
            seed: 0,
        }
    }
}

/// Orthonormal basis of a top-`k` subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    /// `n x k`, orthonormal columns.
    pub vectors: DMatrix<f64>,
    /// Descending singular values (`|λ|` in symmetric mode).
    pub singular_values: Vec<f64>,
    /// Signed eigenvalues, symmetric mode only.
    pub eigenvalues: Option<Vec<f64>>,
    /// Largest residual relative to the top value.
    pub residual: f64,
    pub iterations: usize,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    /// Dense orthogonal projector `U Uᵀ`.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.vectors * self.vectors.transpose()
    }

    /// Coefficients `Uᵀ v`.
    pub fn coefficients(&self, v: &[f64]) -> DVector<f64> {
        self.vectors.tr_mul(&DVector::from_column_slice(v))
    }
}

/// `P_U v = U (Uᵀ v)`.
pub fn project(basis: &SubspaceBasis, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != basis.vectors.nrows() {
        return invalid(format!(
            "vector of length {} does not match basis dimension {}",
            v.len(),
            basis.vectors.nrows()
        ));
    }
    Ok((&basis.vectors * basis.coefficients(v)).as_slice().to_vec())
}

/// Top-`k` subspace by randomized block power iteration with Rayleigh-Ritz
/// extraction.
///
/// A triple counts as converged when `‖A v − σ u‖ ≤ tol · σ_1`. On running out
/// of iterations the error carries the last iterate.
pub fn top_subspace<A: LinearOperator + ?Sized>(
    a: &A,
    k: usize,
    mode: Mode,
    opts: &SolverOptions,
) -> Result<SubspaceBasis> {
    let n = a.nrows();
    if mode == Mode::Symmetric && a.ncols() != n {
        return invalid("symmetric mode needs a square operator");
    }
    if k == 0 || k > n {
        return invalid(format!("subspace dimension {k} out of range for n = {n}"));
    }
    let p = (k + opts.oversample).min(n);
    let mut rng = rng::stream(opts.seed, rng::SOLVER);
    let start = DMatrix::from_fn(n, p, |_, _| StandardNormal.sample(&mut rng));
    let mut q = start.qr().q();
    let mut last = None;
    for iter in 1..=opts.max_iter.max(1) {
        let w = match mode {
            Mode::LeftSingular => a.apply_block(&a.apply_transpose_block(&q)),
            Mode::Symmetric => a.apply_block(&q),
        };
        if iter == 1 && w.iter().all(|&x| x == 0.0) {
            return Ok(canonical_basis(n, k, mode));
        }
        let g = q.tr_mul(&w);
        let g = (&g + g.transpose()) * 0.5;
        let eig = SymmetricEigen::new(g);
        let mut order: Vec<usize> = (0..p).collect();
        let key = |i: usize| match mode {
            Mode::LeftSingular => eig.eigenvalues[i],
            Mode::Symmetric => eig.eigenvalues[i].abs(),
        };
        order.sort_by(|&i, &j| key(j).total_cmp(&key(i)).then(i.cmp(&j)));
        let y = DMatrix::from_fn(p, k, |r, c| eig.eigenvectors[(r, order[c])]);
        let ritz = &q * &y;
        let wy = &w * &y;
        let values: Vec<f64> = order[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
        let (singular, top) = match mode {
            Mode::LeftSingular => {
                let s: Vec<f64> = values.iter().map(|v| v.max(0.0).sqrt()).collect();
                let top = s[0];
                (s, top)
            }
            Mode::Symmetric => {
                let s: Vec<f64> = values.iter().map(|v| v.abs()).collect();
                let top = s[0];
                (s, top)
            }
        };
        let mut residual = 0.0f64;
        for c in 0..k {
            let r = (wy.column(c) - ritz.column(c) * values[c]).norm();
            // In singular mode the Ritz residual is of A Aᵀ; divide by σ to get
            // the residual of the singular triple.
            let r = match mode {
                Mode::LeftSingular if singular[c] > 0.0 => r / singular[c],
                _ => r,
            };
            residual = residual.max(if top > 0.0 { r / top } else { 0.0 });
        }
        let basis = SubspaceBasis {
            vectors: ritz,
            singular_values: singular,
            eigenvalues: (mode == Mode::Symmetric).then_some(values),
            residual,
            iterations: iter,
        };
        if residual <= opts.tol || p == n {
            return Ok(basis);
        }
        last = Some(basis);
        q = w.qr().q();
    }
    let last = last.expect("at least one iteration");
    Err(Error::Convergence {
        iterations: last.iterations,
        residual: last.residual,
        last: Some(Box::new(last)),
    })
}

fn canonical_basis(n: usize, k: usize, mode: Mode) -> SubspaceBasis {
    SubspaceBasis {
        vectors: DMatrix::from_fn(n, k, |i, j| if i == j { 1.0 } else { 0.0 }),
        singular_values: vec![0.0; k],
        eigenvalues: (mode == Mode::Symmetric).then(|| vec![0.0; k]),
        residual: 0.0,
        iterations: 1,
    }
}
