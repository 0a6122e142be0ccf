//! Closed-form algebra of the non-uniform hypergraph SBM.
//!
//! A model is a vertex count `n`, a block count `k` and, for every hyperedge
//! order `m`, a pair of rates `(a_m, b_m)`: an `m`-set is an edge with
//! probability `a_m / C(n, m-1)` when all its vertices share a block and
//! `b_m / C(n, m-1)` otherwise.
//!
//! Every block-size expression (`n/k`, `n/2k`, `nu*n/2k`, ...) is rounded down
//! before it is fed to a binomial coefficient, and [`binom`] returns zero when
//! the upper argument is smaller than the lower one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Error, Result};

/// Default target correctness of the spectral stage.
pub const DEFAULT_NU: f64 = 0.75;

/// Largest `n` for which dense expected matrices are materialised.
pub const DEFAULT_DENSE_CAP: usize = 2000;

/// Relative tolerance under which two SNR values are considered tied.
const SNR_TIE_TOLERANCE: f64 = 1e-12;

/// Slack absorbed before flooring a real-valued set size such as `0.1 * 40 / 4`.
const FLOOR_SLACK: f64 = 1e-9;

/// Subset enumeration is exhaustive; refuse models with more orders than this.
const MAX_ENUMERATED_ORDERS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderRates {
    /// `a_m`: rate for hyperedges inside a single block.
    pub within: f64,
    /// `b_m`: rate for every other hyperedge.
    pub across: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    n: usize,
    k: usize,
    orders: BTreeMap<usize, OrderRates>,
}

impl ModelParams {
    /// Builds a validated model from `(m, a_m, b_m)` triples.
    pub fn new<I>(n: usize, k: usize, orders: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64, f64)>,
    {
        if k < 2 {
            return invalid(format!("block count must be at least 2, got {k}"));
        }
        if n < k {
            return invalid(format!("n = {n} is smaller than k = {k}"));
        }
        let mut map = BTreeMap::new();
        for (m, within, across) in orders {
            if m < 2 {
                return invalid(format!("hyperedge order must be at least 2, got {m}"));
            }
            if m > n {
                return invalid(format!("hyperedge order {m} exceeds n = {n}"));
            }
            if !within.is_finite() || !across.is_finite() {
                return invalid(format!("rates for order {m} must be finite"));
            }
            if across < 0.0 || within < across {
                return invalid(format!(
                    "order {m}: rates must satisfy a_m >= b_m >= 0, got a = {within}, b = {across}"
                ));
            }
            if map.insert(m, OrderRates { within, across }).is_some() {
                return invalid(format!("order {m} listed twice"));
            }
        }
        if map.is_empty() {
            return invalid("at least one hyperedge order is required");
        }
        Ok(Self { n, k, orders: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn orders(&self) -> &BTreeMap<usize, OrderRates> {
        &self.orders
    }

    pub fn order_list(&self) -> Vec<usize> {
        self.orders.keys().copied().collect()
    }

    pub fn rates(&self, m: usize) -> Option<OrderRates> {
        self.orders.get(&m).copied()
    }

    pub fn max_order(&self) -> usize {
        *self.orders.keys().next_back().expect("validated non-empty")
    }

    /// `floor(n / k)`, the nominal block size.
    pub fn block_size(&self) -> usize {
        self.n / self.k
    }

    /// Ground-truth block sizes: `floor(n/k)`, plus one for the first `n mod k` blocks.
    pub fn block_sizes(&self) -> Vec<usize> {
        let base = self.n / self.k;
        let extra = self.n % self.k;
        (0..self.k).map(|i| base + usize::from(i < extra)).collect()
    }

    /// The same model with every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.k,
            self.orders
                .iter()
                .map(|(&m, r)| (m, r.within * factor, r.across * factor)),
        )
    }

    /// Keeps only the orders of `subset`.
    pub fn restricted(&self, subset: &OrderSubset) -> Result<Self> {
        check_subset(self, subset)?;
        Self::new(
            self.n,
            self.k,
            subset.members().iter().map(|m| {
                let r = self.orders[m];
                (*m, r.within, r.across)
            }),
        )
    }

    fn all_rates_zero(&self) -> bool {
        self.orders
            .values()
            .all(|r| r.within == 0.0 && r.across == 0.0)
    }
}

/// A non-empty, sorted set of hyperedge orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderSubset {
    members: Vec<usize>,
}

impl OrderSubset {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return invalid("order subset must be non-empty");
        }
        if members[0] < 2 {
            return invalid(format!("hyperedge order must be at least 2, got {}", members[0]));
        }
        Ok(Self { members })
    }

    /// Every order present in `params`.
    pub fn all(params: &ModelParams) -> Self {
        Self {
            members: params.order_list(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Largest member of the subset.
    pub fn max_order(&self) -> usize {
        *self.members.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: usize) -> bool {
        self.members.binary_search(&m).is_ok()
    }
}

impl fmt::Display for OrderSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

fn check_subset(params: &ModelParams, subset: &OrderSubset) -> Result<()> {
    match subset.members().iter().find(|m| !params.orders.contains_key(m)) {
        Some(m) => invalid(format!("order {m} of subset {subset} is not part of the model")),
        None => Ok(()),
    }
}

pub(crate) fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.5 && nu < 1.0 {
        Ok(())
    } else {
        invalid(format!("nu must lie in (0.5, 1), got {nu}"))
    }
}

/// Binomial coefficient `C(x, j)` in floating point; zero when `x < j`.
pub fn binom(x: u64, j: u64) -> f64 {
    if j > x {
        return 0.0;
    }
    let j = j.min(x - j);
    let mut acc = 1.0;
    for i in 0..j {
        acc *= (x - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Rounds a non-negative real set size down to an integer.
pub fn floor_count(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        (x + FLOOR_SLACK).floor() as u64
    }
}

/// `d`: the degree scale `sum_{m in subset} (m - 1) a_m`.
pub fn degree_scale(params: &ModelParams, subset: &OrderSubset) -> Result<f64> {
    check_subset(params, subset)?;
    Ok(subset
        .members()
        .iter()
        .map(|m| (m - 1) as f64 * params.orders[m].within)
        .sum())
}

/// Signal-to-noise ratio of the sub-hypergraph made of the orders in `subset`.
pub fn snr_subset(params: &ModelParams, subset: &OrderSubset) -> Result<f64> {
    check_subset(params, subset)?;
    Ok(snr_unchecked(params, subset.members()))
}

fn snr_unchecked(params: &ModelParams, members: &[usize]) -> f64 {
    let k = params.k as f64;
    let mut signal = 0.0;
    let mut noise = 0.0;
    for m in members {
        let r = params.orders[m];
        let weight = (m - 1) as f64;
        let gap = (r.within - r.across) / k.powi(*m as i32 - 1);
        signal += weight * gap;
        noise += weight * (gap + r.across);
    }
    if noise == 0.0 {
        0.0
    } else {
        signal * signal / noise
    }
}

fn snr_cmp(a: f64, b: f64) -> Ordering {
    let scale = a.abs().max(b.abs());
    if (a - b).abs() <= SNR_TIE_TOLERANCE * scale {
        Ordering::Equal
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// SNR of every non-empty subset of the model's orders, in bitmask order.
pub fn snr_table(params: &ModelParams) -> Result<Vec<(OrderSubset, f64)>> {
    let orders = params.order_list();
    if orders.len() > MAX_ENUMERATED_ORDERS {
        return Err(Error::ResourceLimit(format!(
            "{} orders is too many for exhaustive subset enumeration",
            orders.len()
        )));
    }
    let mut table = Vec::with_capacity((1usize << orders.len()) - 1);
    for mask in 1usize..(1 << orders.len()) {
        let members: Vec<usize> = orders
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, m)| *m)
            .collect();
        let snr = snr_unchecked(params, &members);
        table.push((OrderSubset { members }, snr));
    }
    Ok(table)
}

/// Picks the order subset of maximal SNR.
///
/// Ties (relative difference below `1e-12`) go to the smaller subset, then to
/// the lexicographically smallest member list.
pub fn preprocess_select(params: &ModelParams) -> Result<OrderSubset> {
    if params.all_rates_zero() {
        return invalid("all rates are zero; no order carries information");
    }
    let table = snr_table(params)?;
    let mut best: Option<&(OrderSubset, f64)> = None;
    for entry in &table {
        best = match best {
            None => Some(entry),
            Some(current) => {
                let wins = match snr_cmp(entry.1, current.1) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => {
                        (entry.0.len(), entry.0.members()) < (current.0.len(), current.0.members())
                    }
                };
                Some(if wins { entry } else { current })
            }
        };
    }
    Ok(best.expect("at least one subset").0.clone())
}

/// Constant in the exponent of the error rate bound `exp(-C * SNR)`.
///
/// Reported for reference only; the bound is asymptotic.
pub fn error_exponent_constant(k: usize, subset: &OrderSubset, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    let top = subset.max_order() as i32 - 1;
    let spread = (nu.powi(top) - (1.0 - nu).powi(top)).powi(2);
    let top = f64::from(top);
    Ok(if k == 2 {
        spread / (8.0 * top * top)
    } else {
        spread / (top * top * 2f64.powi(2 * subset.max_order() as i32 + 3))
    })
}

/// Expected entries of the adjacency matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedRates {
    /// Expected entry between two distinct vertices of the same block.
    pub alpha: f64,
    /// Expected entry between vertices of different blocks.
    pub beta: f64,
    /// Per-order contributions `(alpha_m, beta_m)`.
    pub per_order: BTreeMap<usize, (f64, f64)>,
}

pub fn expected_rates(params: &ModelParams) -> ExpectedRates {
    let n = params.n as u64;
    let s = params.block_size() as u64;
    let mut per_order = BTreeMap::new();
    let (mut alpha, mut beta) = (0.0, 0.0);
    for (&m, r) in &params.orders {
        let m = m as u64;
        let norm = binom(n, m - 1);
        let inner = if s >= 2 { binom(s - 2, m - 2) } else { 0.0 };
        let total = binom(n - 2, m - 2);
        let alpha_m = inner * r.within / norm + (total - inner) * r.across / norm;
        let beta_m = total * r.across / norm;
        alpha += alpha_m;
        beta += beta_m;
        per_order.insert(m as usize, (alpha_m, beta_m));
    }
    ExpectedRates {
        alpha,
        beta,
        per_order,
    }
}

/// Dense block-constant matrix: `alpha` inside blocks, `beta` across, zero diagonal.
pub fn block_constant_matrix(
    sizes: &[usize],
    alpha: f64,
    beta: f64,
    dense_cap: usize,
) -> Result<DMatrix<f64>> {
    let n: usize = sizes.iter().sum();
    if n > dense_cap {
        return Err(Error::ResourceLimit(format!(
            "dense {n}x{n} matrix exceeds the cap of {dense_cap}"
        )));
    }
    let block: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &len)| std::iter::repeat_n(b, len))
        .collect();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else if block[i] == block[j] {
            alpha
        } else {
            beta
        }
    }))
}

/// Dense expected adjacency matrix of the model's ground-truth partition.
pub fn expected_adjacency(params: &ModelParams, dense_cap: usize) -> Result<DMatrix<f64>> {
    let rates = expected_rates(params);
    block_constant_matrix(&params.block_sizes(), rates.alpha, rates.beta, dense_cap)
}

/// Closed-form spectrum of the expected adjacency with equal blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectedSpectrum {
    /// Largest eigenvalue (multiplicity one).
    pub leading: f64,
    /// Community eigenvalue, multiplicity `k - 1`.
    pub community: f64,
    /// Remaining eigenvalue, multiplicity `n - k`.
    pub bulk: f64,
}

pub fn spectrum_from_rates(n: usize, k: usize, alpha: f64, beta: f64) -> ExpectedSpectrum {
    let s = n as f64 / k as f64;
    ExpectedSpectrum {
        leading: s * (alpha + (k - 1) as f64 * beta) - alpha,
        community: s * (alpha - beta) - alpha,
        bulk: -alpha,
    }
}

/// Eigenvalues of the expected adjacency matrix; requires `k | n`.
pub fn expected_eigenvalues(params: &ModelParams) -> Result<ExpectedSpectrum> {
    if params.n % params.k != 0 {
        return invalid(format!(
            "closed-form eigenvalues need equal blocks, but {} does not divide {}",
            params.k, params.n
        ));
    }
    let rates = expected_rates(params);
    Ok(spectrum_from_rates(params.n, params.k, rates.alpha, rates.beta))
}

/// Top `k` eigenvalues (descending) of a block-constant matrix with arbitrary
/// block sizes, through its `k x k` reduction `D^{1/2} W D^{1/2} - alpha I`.
pub fn block_constant_top_eigenvalues(sizes: &[usize], alpha: f64, beta: f64) -> Vec<f64> {
    let k = sizes.len();
    let reduced = DMatrix::from_fn(k, k, |i, j| {
        let w = if i == j { alpha } else { beta };
        w * ((sizes[i] * sizes[j]) as f64).sqrt()
    });
    let mut values: Vec<f64> = SymmetricEigen::new(reduced)
        .eigenvalues
        .iter()
        .map(|v| v - alpha)
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Probability that an edge is blue given that it is not red, `(psi_m, phi_m)`
/// for within-block and cross-block edges respectively.
pub fn blue_conditional_probs(
    params: &ModelParams,
    subset: &OrderSubset,
) -> Result<BTreeMap<usize, (f64, f64)>> {
    check_subset(params, subset)?;
    let n = params.n as u64;
    let mut out = BTreeMap::new();
    for &m in subset.members() {
        let r = params.orders[&m];
        let norm = 2.0 * binom(n, m as u64 - 1);
        let red_within = r.within / norm;
        let red_across = r.across / norm;
        if red_within >= 1.0 {
            return invalid(format!(
                "order {m}: a_m / (2 C(n, m-1)) = {red_within} must be below 1"
            ));
        }
        out.insert(
            m,
            (
                red_within / (1.0 - red_within),
                red_across / (1.0 - red_across),
            ),
        );
    }
    Ok(out)
}

/// Shared shape of the correction and merging thresholds: the midpoint of the
/// expected weighted neighbor counts into a nu-correct set of `half_block`
/// vertices, for a correctly and an incorrectly placed vertex.
fn midpoint_threshold(
    subset: &OrderSubset,
    half_block: f64,
    nu: f64,
    per_order: impl Fn(usize) -> (f64, f64),
) -> f64 {
    let major = floor_count(nu * half_block);
    let minor = floor_count((1.0 - nu) * half_block);
    let full = floor_count(half_block);
    let mut total = 0.0;
    for &m in subset.members() {
        let j = m as u64 - 1;
        let (signal, noise) = per_order(m);
        total += (m - 1) as f64
            * ((binom(major, j) + binom(minor, j)) * signal + 2.0 * binom(full, j) * noise);
    }
    total / 2.0
}

/// Correction threshold: midpoint of the expected weighted red-neighbor counts.
pub fn correction_threshold(params: &ModelParams, subset: &OrderSubset, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    check_subset(params, subset)?;
    let n = params.n as f64;
    let half_block = n / (2.0 * params.k as f64);
    Ok(midpoint_threshold(subset, half_block, nu, |m| {
        let r = params.orders[&m];
        let norm = 2.0 * binom(params.n as u64, m as u64 - 1);
        ((r.within - r.across) / norm, r.across / norm)
    }))
}

/// Merging threshold: as [`correction_threshold`] with the blue conditional
/// probabilities in place of the red rates.
pub fn merging_threshold(params: &ModelParams, subset: &OrderSubset, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    let probs = blue_conditional_probs(params, subset)?;
    let half_block = params.n as f64 / (2.0 * params.k as f64);
    Ok(midpoint_threshold(subset, half_block, nu, |m| {
        let (psi, phi) = probs[&m];
        (psi - phi, phi)
    }))
}

/// Binary correction threshold: the merging construction over halves of size `n/2`.
///
/// A vertex is counted "bad" (and swapped) when its weighted blue neighbor
/// count into the opposite half reaches this value.
pub fn binary_correction_threshold(
    params: &ModelParams,
    subset: &OrderSubset,
    nu: f64,
) -> Result<f64> {
    check_nu(nu)?;
    let probs = blue_conditional_probs(params, subset)?;
    let half = params.n as f64 / 2.0;
    Ok(midpoint_threshold(subset, half, nu, |m| {
        let (psi, phi) = probs[&m];
        (psi - phi, phi)
    }))
}

/// Blue-density thresholds for filtering candidate sets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityThresholds {
    /// Upper bound on the expected density of a set that is not nu-pure.
    pub lower: f64,
    /// Lower bound on the expected density of a set that is `(1+nu)/2`-pure.
    pub upper: f64,
    /// Midpoint of the two.
    pub cut: f64,
}

pub fn blue_density_thresholds(
    params: &ModelParams,
    subset: &OrderSubset,
    nu: f64,
) -> Result<DensityThresholds> {
    check_nu(nu)?;
    check_subset(params, subset)?;
    let n = params.n as f64;
    let k = params.k as f64;
    let major = floor_count(nu * n / (2.0 * k));
    let minor = floor_count((1.0 - nu) * n / (2.0 * k));
    let pure = floor_count((1.0 + nu) * n / (4.0 * k));
    let spread = floor_count((1.0 - nu) * n / (4.0 * k * (k - 1.0)));
    let full = floor_count(n / (2.0 * k));
    let (mut lower, mut upper) = (0.0, 0.0);
    for &m in subset.members() {
        let r = params.orders[&m];
        let mm = m as u64;
        let norm = binom(params.n as u64, mm - 1);
        let weight = (m * (m - 1)) as f64;
        let signal = (r.within - r.across) / norm;
        let noise = binom(full, mm) * r.across / norm;
        lower += weight * ((binom(major, mm) + binom(minor, mm)) * signal + noise);
        upper += weight * ((binom(pure, mm) + (k - 1.0) * binom(spread, mm)) * signal + noise);
    }
    let (lower, upper) = (lower / 2.0, upper / 2.0);
    Ok(DensityThresholds {
        lower,
        upper,
        cut: (lower + upper) / 2.0,
    })
}

/// Every decision threshold the pipelines use, computed once.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds {
    pub nu: f64,
    pub correction: f64,
    pub merging: f64,
    pub density: DensityThresholds,
    pub blue_probs: BTreeMap<usize, (f64, f64)>,
    pub degree_scale: f64,
}

impl Thresholds {
    pub fn compute(params: &ModelParams, subset: &OrderSubset, nu: f64) -> Result<Self> {
        Ok(Self {
            nu,
            correction: correction_threshold(params, subset, nu)?,
            merging: merging_threshold(params, subset, nu)?,
            density: blue_density_thresholds(params, subset, nu)?,
            blue_probs: blue_conditional_probs(params, subset)?,
            degree_scale: degree_scale(params, subset)?,
        })
    }
}
