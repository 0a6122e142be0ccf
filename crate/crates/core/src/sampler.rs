//! Instance generation, edge coloring and the random vertex split.
//!
//! Edges are drawn stratum by stratum (one stratum per block, plus the cross
//! stratum) for every order: first the edge count from its exact binomial law,
//! then that many distinct tuples, uniformly. Sparse strata use rejection
//! against a hash set; strata that are at least half full fall back to
//! selection sampling over an explicit enumeration.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Color, Hypergraph, LabelVector, Side, SplitAssignment};
use crate::model::{binom, ModelParams};
use crate::rng;

/// Largest stratum the selection-sampling fallback will enumerate.
const ENUMERATION_LIMIT: u128 = 50_000_000;

/// Exact `C(x, j)`, or `None` on overflow.
pub fn binom_exact(x: u64, j: u64) -> Option<u128> {
    if j > x {
        return Some(0);
    }
    let j = j.min(x - j);
    let mut acc: u128 = 1;
    for i in 0..j {
        acc = acc.checked_mul(u128::from(x - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Number of `m`-sets inside each block and across blocks.
pub fn stratum_sizes(sizes: &[usize], m: usize) -> Result<(Vec<u128>, u128)> {
    let overflow = || Error::ResourceLimit(format!("stratum size for order {m} overflows"));
    let n: usize = sizes.iter().sum();
    let within = sizes
        .iter()
        .map(|&s| binom_exact(s as u64, m as u64).ok_or_else(overflow))
        .collect::<Result<Vec<_>>>()?;
    let total = binom_exact(n as u64, m as u64).ok_or_else(overflow)?;
    let cross = total - within.iter().sum::<u128>();
    Ok((within, cross))
}

/// Edge probabilities `(within, across)` for order `m`, clamped to 1.
pub fn edge_probabilities(params: &ModelParams, m: usize) -> Option<(f64, f64)> {
    let rates = params.rates(m)?;
    let norm = binom(params.n() as u64, m as u64 - 1);
    let clamp = |rate: f64, which: &str| {
        let p = rate / norm;
        if p > 1.0 {
            log::warn!("order {m}: {which} probability {p:.3} clamped to 1");
            1.0
        } else {
            p
        }
    };
    Some((clamp(rates.within, "within-block"), clamp(rates.across, "cross-block")))
}

/// Ground-truth labels: consecutive runs, the remainder going to the first blocks.
pub fn ground_truth(params: &ModelParams) -> LabelVector {
    LabelVector::from_block_sizes(&params.block_sizes())
}

/// Draws an instance of the model.
pub fn sample_hsbm(params: &ModelParams, seed: u64) -> Result<(Hypergraph, LabelVector)> {
    let n = params.n();
    if u32::try_from(n).is_err() {
        return invalid(format!("vertex count {n} exceeds the supported range"));
    }
    let sizes = params.block_sizes();
    let starts: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect();
    let truth = ground_truth(params);
    let mut parts = BTreeMap::new();
    for m in params.order_list() {
        let (p_in, p_out) = edge_probabilities(params, m).expect("order from the model");
        let (within, cross) = stratum_sizes(&sizes, m)?;
        let mut edges: Vec<Vec<u32>> = Vec::new();
        for (b, &size) in within.iter().enumerate() {
            let mut rng = rng::sampler_stream(seed, m, b);
            let count = draw_count(&mut rng, size, p_in)?;
            let range = Stratum::Block {
                start: starts[b],
                len: sizes[b],
            };
            draw_tuples(&mut rng, &range, m, size, count, &truth, &mut edges)?;
        }
        let mut rng = rng::sampler_stream(seed, m, sizes.len());
        let count = draw_count(&mut rng, cross, p_out)?;
        draw_tuples(&mut rng, &Stratum::Cross { n }, m, cross, count, &truth, &mut edges)?;
        edges.sort_unstable();
        parts.insert(m, edges.into_iter().flatten().collect());
    }
    Ok((Hypergraph::from_sorted_parts(n, parts), truth))
}

fn draw_count(rng: &mut ChaCha8Rng, size: u128, p: f64) -> Result<u64> {
    let size = u64::try_from(size)
        .map_err(|_| Error::ResourceLimit(format!("stratum of {size} tuples is too large")))?;
    if size == 0 || p <= 0.0 {
        return Ok(0);
    }
    if p >= 1.0 {
        return Ok(size);
    }
    let law = Binomial::new(size, p)
        .map_err(|e| Error::InvalidArgument(format!("binomial({size}, {p}): {e}")))?;
    Ok(law.sample(rng))
}

enum Stratum {
    Block { start: usize, len: usize },
    Cross { n: usize },
}

impl Stratum {
    fn random_tuple(&self, rng: &mut ChaCha8Rng, m: usize) -> Vec<u32> {
        let (offset, len) = match *self {
            Stratum::Block { start, len } => (start, len),
            Stratum::Cross { n } => (0, n),
        };
        let mut t: Vec<u32> = index::sample(rng, len, m)
            .into_iter()
            .map(|i| (i + offset) as u32)
            .collect();
        t.sort_unstable();
        t
    }

    fn admits(&self, tuple: &[u32], truth: &LabelVector) -> bool {
        match self {
            Stratum::Block { .. } => true,
            Stratum::Cross { .. } => {
                let first = truth.get(tuple[0] as usize);
                tuple.iter().any(|&v| truth.get(v as usize) != first)
            }
        }
    }

    fn domain(&self) -> (usize, usize) {
        match *self {
            Stratum::Block { start, len } => (start, len),
            Stratum::Cross { n } => (0, n),
        }
    }
}

fn draw_tuples(
    rng: &mut ChaCha8Rng,
    stratum: &Stratum,
    m: usize,
    size: u128,
    count: u64,
    truth: &LabelVector,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    if 2 * u128::from(count) <= size {
        let mut seen = HashSet::with_capacity(count as usize);
        while (seen.len() as u64) < count {
            let t = stratum.random_tuple(rng, m);
            if stratum.admits(&t, truth) && seen.insert(t.clone()) {
                out.push(t);
            }
        }
        return Ok(());
    }
    let (offset, len) = stratum.domain();
    let domain = binom_exact(len as u64, m as u64).unwrap_or(u128::MAX);
    if domain > ENUMERATION_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "dense stratum of order {m} needs enumerating {domain} tuples"
        )));
    }
    // Selection sampling: keep each admissible tuple with probability
    // (still needed) / (still available).
    let mut needed = u128::from(count);
    let mut available = size;
    let mut t: Vec<u32> = (0..m as u32).collect();
    loop {
        let tuple: Vec<u32> = t.iter().map(|&i| i + offset as u32).collect();
        if stratum.admits(&tuple, truth) {
            if rng.random_range(0..available) < needed {
                out.push(tuple);
                needed -= 1;
                if needed == 0 {
                    return Ok(());
                }
            }
            available -= 1;
        }
        if !next_combination(&mut t, len as u32) {
            unreachable!("selection sampling ran out of tuples");
        }
    }
}

/// Advances `t` to the next `m`-combination of `0..len` in lexicographic order.
fn next_combination(t: &mut [u32], len: u32) -> bool {
    let m = t.len() as u32;
    let mut i = t.len();
    while i > 0 {
        i -= 1;
        if t[i] < len - m + i as u32 {
            t[i] += 1;
            for j in i + 1..t.len() {
                t[j] = t[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Colors each edge red or blue with a fair coin.
pub fn color_edges(h: &Hypergraph, seed: u64) -> Result<Hypergraph> {
    let mut rng = rng::stream(seed, rng::COLOR);
    h.with_colors(|| {
        if rng.random_bool(0.5) {
            Color::Red
        } else {
            Color::Blue
        }
    })
}

/// Sends each vertex to `Z` with probability 1/2, otherwise to `Y1` or `Y2`
/// with probability 1/2 each.
pub fn split_vertices(n: usize, seed: u64) -> SplitAssignment {
    let mut rng = rng::stream(seed, rng::SPLIT);
    SplitAssignment::new(
        (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    Side::Z
                } else if rng.random_bool(0.5) {
                    Side::Y1
                } else {
                    Side::Y2
                }
            })
            .collect(),
    )
}

/// Induced sub-hypergraph on `members`; vertex ids are kept.
pub fn restrict(h: &Hypergraph, members: &[bool]) -> Result<Hypergraph> {
    h.restrict(members)
}
