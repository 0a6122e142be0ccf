//! Concentration experiments: how far the adjacency matrix of a sampled
//! instance lies from its expectation in spectral norm, with and without
//! regularization.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphlin::{adjacency, row_sums, spectral_norm, LinearOperator, SparseSymMatrix};
use crate::model::{expected_rates, ModelParams};
use crate::sampler;

/// Largest `n` accepted by [`concentration_trial`].
pub const DEFAULT_CONCLAB_CAP: usize = 4000;

pub const CSV_HEADER: &str = "n,k,d,tau,seed,raw_ratio,reg_ratio,kept_fraction,high_degree_count";

/// The expected adjacency of the ground-truth partition as an operator:
/// `α` inside blocks, `β` across, zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedAdjacencyOperator {
    block_of: Vec<usize>,
    blocks: usize,
    alpha: f64,
    beta: f64,
}

impl ExpectedAdjacencyOperator {
    pub fn new(params: &ModelParams) -> Self {
        let rates = expected_rates(params);
        let block_of = sampler::ground_truth(params).as_slice().to_vec();
        Self {
            block_of,
            blocks: params.k(),
            alpha: rates.alpha,
            beta: rates.beta,
        }
    }
}

impl LinearOperator for ExpectedAdjacencyOperator {
    fn nrows(&self) -> usize {
        self.block_of.len()
    }

    fn ncols(&self) -> usize {
        self.block_of.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut block_sum = vec![0.0; self.blocks];
        for (&b, &xi) in self.block_of.iter().zip(x) {
            block_sum[b] += xi;
        }
        let total: f64 = block_sum.iter().sum();
        for ((yi, &b), &xi) in y.iter_mut().zip(&self.block_of).zip(x) {
            *yi = self.alpha * (block_sum[b] - xi) + self.beta * (total - block_sum[b]);
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y);
    }
}

/// `(A − E A)` masked to the principal submatrix on `keep`.
pub struct CenteredOperator<'a> {
    a: &'a SparseSymMatrix,
    expected: &'a ExpectedAdjacencyOperator,
    keep: Option<&'a [bool]>,
}

impl<'a> CenteredOperator<'a> {
    pub fn new(
        a: &'a SparseSymMatrix,
        expected: &'a ExpectedAdjacencyOperator,
        keep: Option<&'a [bool]>,
    ) -> Self {
        Self { a, expected, keep }
    }
}

impl LinearOperator for CenteredOperator<'_> {
    fn nrows(&self) -> usize {
        self.a.n()
    }

    fn ncols(&self) -> usize {
        self.a.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let masked: Vec<f64> = match self.keep {
            Some(keep) => x.iter().zip(keep).map(|(v, k)| if *k { *v } else { 0.0 }).collect(),
            None => x.to_vec(),
        };
        let mut ex = vec![0.0; x.len()];
        self.a.apply(&masked, y);
        self.expected.apply(&masked, &mut ex);
        for (i, (yi, e)) in y.iter_mut().zip(&ex).enumerate() {
            *yi = if self.keep.is_none_or(|k| k[i]) { *yi - e } else { 0.0 };
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationRecord {
    pub n: usize,
    pub k: usize,
    pub d: f64,
    pub tau: f64,
    pub seed: u64,
    /// `‖A − E A‖ / √d`.
    pub raw_ratio: f64,
    /// `‖(A − E A)_ℐ‖ / √d` with `ℐ = {i : row(i) ≤ τ d}`.
    pub reg_ratio: f64,
    pub kept_fraction: f64,
    pub high_degree_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOptions {
    /// `τ`; `None` means `20 · M`, with `M` the largest order.
    pub tau: Option<f64>,
    /// Relative tolerance of the norm estimates.
    pub tol: f64,
    pub dense_cap: usize,
}

impl Default for TrialOptions {
    fn default() -> Self {
        Self {
            tau: None,
            tol: 1e-8,
            dense_cap: DEFAULT_CONCLAB_CAP,
        }
    }
}

/// Samples one instance and measures both norm ratios.
///
/// `d = Σ_m (m−1) a_m` over every order of the model.
pub fn concentration_trial(
    params: &ModelParams,
    seed: u64,
    opts: &TrialOptions,
) -> Result<ConcentrationRecord> {
    let n = params.n();
    if n > opts.dense_cap {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the concentration cap of {}",
            opts.dense_cap
        )));
    }
    let d: f64 = params
        .orders()
        .iter()
        .map(|(&m, r)| (m - 1) as f64 * r.within)
        .sum();
    let tau = opts.tau.unwrap_or(20.0 * params.max_order() as f64);
    let (h, _) = sampler::sample_hsbm(params, seed)?;
    let a = adjacency(&h);
    let expected = ExpectedAdjacencyOperator::new(params);
    let keep: Vec<bool> = row_sums(&a).iter().map(|&r| r as f64 <= tau * d).collect();
    let kept = keep.iter().filter(|&&k| k).count();
    let raw = spectral_norm(&CenteredOperator::new(&a, &expected, None), opts.tol)?;
    let reg = spectral_norm(&CenteredOperator::new(&a, &expected, Some(&keep)), opts.tol)?;
    let scale = d.sqrt();
    let ratio = |x: f64| if scale > 0.0 { x / scale } else { 0.0 };
    Ok(ConcentrationRecord {
        n,
        k: params.k(),
        d,
        tau,
        seed,
        raw_ratio: ratio(raw),
        reg_ratio: ratio(reg),
        kept_fraction: kept as f64 / n as f64,
        high_degree_count: n - kept,
    })
}

/// Every `(grid point, seed)` pair, ordered by grid index and then seed.
/// Trials run on the current rayon pool.
pub fn sweep(
    grid: &[ModelParams],
    seeds: &[u64],
    opts: &TrialOptions,
) -> Result<Vec<ConcentrationRecord>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("concentration grid is empty".into()));
    }
    let jobs: Vec<(&ModelParams, u64)> = grid
        .iter()
        .flat_map(|p| seeds.iter().map(move |&s| (p, s)))
        .collect();
    jobs.par_iter()
        .map(|(p, s)| concentration_trial(p, *s, opts))
        .collect()
}

pub fn to_csv(records: &[ConcentrationRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{:.10},{:.10},{:.6},{}",
            r.n, r.k, r.d, r.tau, r.seed, r.raw_ratio, r.reg_ratio, r.kept_fraction,
            r.high_degree_count
        )
        .expect("writing to a string");
    }
    out
}
