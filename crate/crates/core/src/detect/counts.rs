use crate::error::Result;
use crate::hypergraph::{Hypergraph, IncidenceIndex};
use crate::model::{binom, floor_count, ModelParams, OrderSubset};

/// Centering level on `Z`, `(ᾱ + β̄) / 2`, where `ᾱ`, `β̄` are the expected
/// entries of the perfectly split block between `Z` and one half of `Y`.
pub fn centering_level(params: &ModelParams, subset: &OrderSubset) -> Result<f64> {
    let restricted = params.restricted(subset)?;
    let n = params.n() as f64;
    let k = params.k() as f64;
    let block = floor_count(3.0 * n / (4.0 * k));
    let all = floor_count(3.0 * n / 4.0);
    let (mut alpha_bar, mut beta_bar) = (0.0, 0.0);
    for (&m, r) in restricted.orders() {
        let m = m as u64;
        let norm = binom(params.n() as u64, m - 1);
        let inner = if block >= 2 { binom(block - 2, m - 2) } else { 0.0 };
        let outer = if all >= 2 { binom(all - 2, m - 2) } else { 0.0 };
        alpha_bar += (inner * (r.within - r.across) + outer * r.across) / norm;
        beta_bar += outer * r.across / norm;
    }
    Ok((alpha_bar + beta_bar) / 2.0)
}

/// The centering vector: [`centering_level`] on `z`, zero elsewhere.
pub fn centering_vector(params: &ModelParams, subset: &OrderSubset, z: &[bool]) -> Result<Vec<f64>> {
    let level = centering_level(params, subset)?;
    Ok(z.iter().map(|&inside| if inside { level } else { 0.0 }).collect())
}

/// `Σ_m m(m−1) · |{order-m edges of h inside X}|`.
pub fn blue_weighted_count(h: &Hypergraph, members: &[bool]) -> f64 {
    h.iter()
        .filter(|e| e.inside(members))
        .map(|e| (e.order * (e.order - 1)) as f64)
        .sum()
}

/// [`blue_weighted_count`] through an incidence index: only edges through a
/// member are visited, each once via its smallest vertex.
pub(crate) fn blue_weighted_count_indexed(
    h: &Hypergraph,
    index: &IncidenceIndex,
    vertices: &[usize],
    members: &[bool],
) -> f64 {
    let mut total = 0.0;
    for &v in vertices {
        for &(m, i) in index.incident(v) {
            let e = h.edge(m as usize, i as usize);
            if e.vertices[0] as usize == v && e.inside(members) {
                total += (e.order * (e.order - 1)) as f64;
            }
        }
    }
    total
}

/// `Σ_m (m−1) · |{order-m edges through u whose other vertices all lie in the target}|`.
///
/// Only orders in `subset` contribute.
pub fn weighted_red_neighbors(
    h: &Hypergraph,
    u: usize,
    target: &[bool],
    subset: &OrderSubset,
) -> f64 {
    h.iter()
        .filter(|e| subset.contains(e.order) && e.contains(u) && e.others_inside(u, target))
        .map(|e| (e.order - 1) as f64)
        .sum()
}

/// Weighted neighbor counts of `u` into each of several target sets at once.
pub(crate) fn neighbor_counts(
    h: &Hypergraph,
    index: &IncidenceIndex,
    u: usize,
    targets: &[Vec<bool>],
) -> Vec<f64> {
    let mut counts = vec![0.0; targets.len()];
    for &(m, i) in index.incident(u) {
        let e = h.edge(m as usize, i as usize);
        for (j, target) in targets.iter().enumerate() {
            if e.others_inside(u, target) {
                counts[j] += (e.order - 1) as f64;
            }
        }
    }
    counts
}

/// Index of the largest count; the lowest index wins ties.
pub(crate) fn argmax(counts: &[f64]) -> usize {
    let mut best = 0;
    for (j, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = j;
        }
    }
    best
}
