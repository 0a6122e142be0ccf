use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use super::sparse::LinearOperator;
use crate::error::{Error, Result};
use crate::rng;

/// Krylov dimension before an explicit restart.
const KRYLOV_DIM: usize = 160;
const MAX_RESTARTS: usize = 30;
/// How often, in Lanczos steps, the tridiagonal is re-solved.
const CHECK_EVERY: usize = 8;
const NORM_SEED: u64 = 0x6e6f_726d;

/// Largest singular value of `a`, to relative accuracy `tol`.
///
/// Runs Lanczos on `AᵀA` with full reorthogonalization and explicit restarts
/// from the best Ritz vector. Convergence is declared when the Ritz residual
/// `β_j |s_j|` of the top pair is at most `tol · θ`.
pub fn spectral_norm<A: LinearOperator + ?Sized>(a: &A, tol: f64) -> Result<f64> {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return Ok(0.0);
    }
    let mut rng = rng::stream(NORM_SEED, rng::NORM);
    let mut start: DVector<f64> = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
    let mut work = vec![0.0; a.nrows()];
    let mut gram = |x: &DVector<f64>| -> DVector<f64> {
        a.apply(x.as_slice(), &mut work);
        let mut y = DVector::zeros(n);
        a.apply_transpose(&work, y.as_mut_slice());
        y
    };
    let dim = KRYLOV_DIM.min(n);
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        let norm = start.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let mut basis: Vec<DVector<f64>> = vec![start / norm];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut best = None;
        for j in 0..dim {
            let mut w = gram(&basis[j]);
            let alpha = w.dot(&basis[j]);
            alphas.push(alpha);
            // Two passes of classical Gram-Schmidt keep the basis orthonormal.
            for _ in 0..2 {
                for v in &basis {
                    let c = w.dot(v);
                    w.axpy(-c, v, 1.0);
                }
            }
            let beta = w.norm();
            let at_end = j + 1 == dim;
            let exhausted = beta <= 1e-14 * alpha.abs().max(f64::MIN_POSITIVE);
            if exhausted || at_end || (j + 1) % CHECK_EVERY == 0 {
                let (value, vector) = top_ritz(&alphas, &betas);
                theta = value;
                residual = if exhausted {
                    0.0
                } else {
                    beta * vector[vector.len() - 1].abs()
                };
                if theta <= 0.0 && alphas.iter().all(|&x| x == 0.0) {
                    return Ok(0.0);
                }
                if residual <= tol * theta {
                    return Ok(theta.max(0.0).sqrt());
                }
                best = Some(vector);
            }
            if exhausted {
                break;
            }
            betas.push(beta);
            basis.push(w / beta);
        }
        let s = best.expect("checked at the last step");
        start = basis
            .iter()
            .zip(s.iter())
            .fold(DVector::zeros(n), |acc, (v, c)| acc + v * *c);
    }
    Err(Error::Convergence {
        iterations: MAX_RESTARTS * dim,
        residual: residual / theta.max(f64::MIN_POSITIVE),
        last: None,
    })
}

/// Largest eigenpair of the symmetric tridiagonal with diagonal `alphas` and
/// off-diagonal `betas`.
fn top_ritz(alphas: &[f64], betas: &[f64]) -> (f64, DVector<f64>) {
    let j = alphas.len();
    let t = DMatrix::from_fn(j, j, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let top = (0..j)
        .max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .expect("non-empty");
    (eig.eigenvalues[top], eig.eigenvectors.column(top).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_minus_identity() {
        let c = 1.5;
        let a = DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { c });
        assert!((spectral_norm(&a, 1e-12).unwrap() - 2.0 * c).abs() < 1e-10);
    }

    #[test]
    fn zero_matrix_has_zero_norm() {
        assert_eq!(spectral_norm(&DMatrix::<f64>::zeros(4, 4), 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn matches_dense_svd() {
        let a = DMatrix::from_fn(30, 20, |i, j| ((i * 7 + j * 13) % 11) as f64 - 5.0);
        let want = a.clone().svd(false, false).singular_values.max();
        let got = spectral_norm(&a, 1e-12).unwrap();
        assert!((got - want).abs() <= 1e-9 * want);
    }
}
