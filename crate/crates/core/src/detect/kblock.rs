use nalgebra::DVector;
use rand::seq::index;

use super::counts::{argmax, blue_weighted_count_indexed, centering_level, neighbor_counts};
use super::{prepare, solve, Diagnostics, PartitionOutcome, PipelineConfig};
use crate::error::{invalid, Error, Result};
use crate::graphlin::{bipartite_embed, regularize_bipartite, Mode};
use crate::hypergraph::{Hypergraph, IncidenceIndex, LabelVector, Side, SplitAssignment, UNASSIGNED};
use crate::model::{check_nu, degree_scale, merging_threshold, ModelParams, OrderSubset};
use crate::{rng, sampler};

/// A candidate block grown from one sampled column.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    /// Ascending vertex ids, all in `Z`.
    pub vertices: Vec<usize>,
    /// `Σ m(m−1)` over blue edges inside the set.
    pub blue_density: f64,
}

impl CandidateSet {
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.vertices {
            m[v] = true;
        }
        m
    }
}

/// Output of the spectral stage.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralStage {
    pub candidates: Vec<CandidateSet>,
    pub samples: usize,
    pub discarded: usize,
    pub high_degree: usize,
    pub solver_iterations: usize,
    pub solver_residual: f64,
    pub solver_converged: bool,
}

/// Overlap bound `⌈(1−ν) n / k⌉` between accepted candidate sets.
fn overlap_limit(n: usize, k: usize, nu: f64) -> usize {
    ((1.0 - nu) * n as f64 / k as f64 - 1e-9).ceil().max(0.0) as usize
}

/// Number of `Y2` columns to sample, `⌈2k (ln n)²⌉`.
fn sample_count(n: usize, k: usize) -> usize {
    let ln = (n as f64).ln();
    (2.0 * k as f64 * ln * ln).ceil() as usize
}

/// Spectral stage: `k` candidate sets of size `⌊n/2k⌋` inside `Z`.
///
/// The singular subspace comes from the regularized red block between `Z`
/// and `Y1`. Each sampled `Y2` vertex contributes its centered red column
/// into `Z`, projected onto that subspace; its largest coordinates in `Z`
/// form a candidate. The lower half by blue density is dropped and the rest
/// is scanned greedily, densest first, for `k` sets that pairwise overlap in
/// fewer than `⌈(1−ν) n / k⌉` vertices.
pub fn spectral_partition_k(
    h_red: &Hypergraph,
    h_blue: &Hypergraph,
    split: &SplitAssignment,
    params: &ModelParams,
    subset: &OrderSubset,
    cfg: &PipelineConfig,
) -> Result<SpectralStage> {
    let n = params.n();
    let k = params.k();
    check_nu(cfg.nu)?;
    if n < 4 * k {
        return invalid(format!("spectral partition needs n >= 4k, got n = {n}, k = {k}"));
    }
    if split.len() != n || h_red.n() != n || h_blue.n() != n {
        return invalid("split and hypergraphs must cover the model's vertices");
    }
    let z = split.mask(&[Side::Z]);
    let y1 = split.mask(&[Side::Y1]);
    let y2 = split.mask(&[Side::Y2]);
    let z_list = split.members(&[Side::Z]);
    let y2_list = split.members(&[Side::Y2]);
    let set_size = n / (2 * k);
    if z_list.len() < set_size || y2_list.is_empty() {
        return Err(Error::PartitionFailure(format!(
            "split too unbalanced: |Z| = {}, |Y2| = {}",
            z_list.len(),
            y2_list.len()
        )));
    }

    let union = |a: &[bool], b: &[bool]| -> Vec<bool> { a.iter().zip(b).map(|(x, y)| *x || *y).collect() };
    let a1 = bipartite_embed(&h_red.restrict(&union(&z, &y1))?, &z, &y1)?;
    let threshold = cfg.tau * subset.max_order() as f64 * degree_scale(params, subset)?;
    let (a1, kept) = regularize_bipartite(&a1, threshold);
    let (basis, converged) = solve(&a1, k, Mode::LeftSingular, cfg)?;
    if basis.singular_values[0] == 0.0 {
        return Err(Error::PartitionFailure(
            "red Z x Y1 block is empty after regularization".into(),
        ));
    }
    let u = &basis.vectors;

    let wanted = sample_count(n, k);
    let mut sampled: Vec<usize> = if wanted >= y2_list.len() {
        y2_list.clone()
    } else {
        let mut rng = rng::stream(cfg.seed, rng::SAMPLE);
        index::sample(&mut rng, y2_list.len(), wanted)
            .into_iter()
            .map(|i| y2_list[i])
            .collect()
    };
    sampled.sort_unstable();

    // Row i of this matrix is the column of the red Z x Y2 block for i in Y2.
    let a2t = bipartite_embed(&h_red.restrict(&union(&z, &y2))?, &y2, &z)?;
    let level = centering_level(&params.scaled(0.5)?, subset)?;
    let mut center = DVector::zeros(k);
    for &v in &z_list {
        center += u.row(v).transpose() * level;
    }

    let blue_index = IncidenceIndex::new(h_blue);
    let mut candidates = Vec::with_capacity(sampled.len());
    for &i in &sampled {
        let (cols, vals) = a2t.row(i);
        let mut coeff = -center.clone();
        for (c, v) in cols.iter().zip(vals) {
            coeff += u.row(*c as usize).transpose() * f64::from(*v);
        }
        let mut scored: Vec<(f64, usize)> = z_list
            .iter()
            .map(|&v| ((u.row(v) * &coeff)[0], v))
            .collect();
        scored.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut vertices: Vec<usize> = scored[..set_size].iter().map(|s| s.1).collect();
        vertices.sort_unstable();
        let mut mask = vec![false; n];
        for &v in &vertices {
            mask[v] = true;
        }
        let blue_density = blue_weighted_count_indexed(h_blue, &blue_index, &vertices, &mask);
        candidates.push(CandidateSet {
            vertices,
            blue_density,
        });
    }

    // Stable sort: equal densities keep ascending sample order.
    candidates.sort_by(|a, b| b.blue_density.total_cmp(&a.blue_density));
    let discarded = candidates.len() / 2;
    candidates.truncate(candidates.len() - discarded);

    let limit = overlap_limit(n, k, cfg.nu);
    let mut accepted: Vec<(CandidateSet, Vec<bool>)> = Vec::with_capacity(k);
    for cand in candidates {
        if accepted.len() == k {
            break;
        }
        let distinct = accepted.iter().all(|(_, mask)| {
            cand.vertices.iter().filter(|&&v| mask[v]).count() < limit
        });
        if distinct {
            let mask = cand.mask(n);
            accepted.push((cand, mask));
        }
    }
    if accepted.len() < k {
        return Err(Error::PartitionFailure(format!(
            "found {} of {k} distinct candidate sets",
            accepted.len()
        )));
    }
    Ok(SpectralStage {
        candidates: accepted.into_iter().map(|(c, _)| c).collect(),
        samples: sampled.len(),
        discarded,
        high_degree: kept.iter().filter(|&&x| !x).count(),
        solver_iterations: basis.iterations,
        solver_residual: basis.residual,
        solver_converged: converged,
    })
}

/// Correction: every vertex of `Z` joins the candidate set it has the largest
/// weighted red-neighbor count into; the lowest index wins ties.
///
/// Vertices outside `Z` stay [`UNASSIGNED`].
pub fn correction_k(h_red: &Hypergraph, z: &[bool], candidates: &[CandidateSet]) -> LabelVector {
    let n = h_red.n();
    let index = IncidenceIndex::new(h_red);
    let targets: Vec<Vec<bool>> = candidates.iter().map(|c| c.mask(n)).collect();
    let mut labels = LabelVector::unassigned(n);
    for u in (0..n).filter(|&u| z[u]) {
        labels.set(u, argmax(&neighbor_counts(h_red, &index, u, &targets)));
    }
    labels
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MergeStats {
    pub conflicts: usize,
    pub unqualified: usize,
}

/// Merging: each vertex of `Y` joins the block whose corrected set it has at
/// least `threshold` weighted blue neighbors in. Conflicts and vertices that
/// qualify nowhere go to the block of largest count, lowest index on ties.
///
/// Labels already present in `corrected` are kept; the result is complete.
pub fn merging(
    h_blue: &Hypergraph,
    y: &[bool],
    corrected: &LabelVector,
    k: usize,
    threshold: f64,
) -> (LabelVector, MergeStats) {
    let n = h_blue.n();
    let index = IncidenceIndex::new(h_blue);
    let targets: Vec<Vec<bool>> = (0..k).map(|b| corrected.mask(b)).collect();
    let mut labels = corrected.clone();
    let mut stats = MergeStats::default();
    for w in 0..n {
        if !y[w] && corrected.get(w) != UNASSIGNED {
            continue;
        }
        let counts = neighbor_counts(h_blue, &index, w, &targets);
        let qualifying: Vec<usize> = (0..k).filter(|&j| counts[j] >= threshold).collect();
        let label = match qualifying.as_slice() {
            [only] => *only,
            [] => {
                stats.unqualified += 1;
                argmax(&counts)
            }
            _ => {
                stats.conflicts += 1;
                argmax(&counts)
            }
        };
        labels.set(w, label);
    }
    (labels, stats)
}

/// Full pipeline for `k >= 3`.
pub fn partition_k(h: &Hypergraph, params: &ModelParams, cfg: &PipelineConfig) -> Result<PartitionOutcome> {
    if params.k() < 3 {
        return invalid(format!("the k-block pipeline needs k >= 3, got {}", params.k()));
    }
    let prepared = prepare(h, params, cfg)?;
    let n = params.n();
    let split = sampler::split_vertices(n, cfg.seed);
    let stage = spectral_partition_k(
        &prepared.red,
        &prepared.blue,
        &split,
        params,
        &prepared.subset,
        cfg,
    )?;
    let z = split.mask(&[Side::Z]);
    let corrected = correction_k(&prepared.red, &z, &stage.candidates);
    let mu = merging_threshold(params, &prepared.subset, cfg.nu)?;
    let y = split.mask(&[Side::Y1, Side::Y2]);
    let (labels, stats) = merging(&prepared.blue, &y, &corrected, params.k(), mu);
    let diagnostics = Diagnostics {
        subset: Some(prepared.subset.clone()),
        red_edges: prepared.red.num_edges(),
        blue_edges: prepared.blue.num_edges(),
        z_size: split.count(Side::Z),
        y1_size: split.count(Side::Y1),
        y2_size: split.count(Side::Y2),
        samples: stage.samples,
        discarded: stage.discarded,
        high_degree: stage.high_degree,
        solver_iterations: stage.solver_iterations,
        solver_residual: stage.solver_residual,
        solver_converged: stage.solver_converged,
        merge_conflicts: stats.conflicts,
        merge_unqualified: stats.unqualified,
        swaps: 0,
    };
    log::info!(
        "k-block partition: |Z| = {}, |Y1| = {}, |Y2| = {}, samples = {}, discarded = {}",
        diagnostics.z_size,
        diagnostics.y1_size,
        diagnostics.y2_size,
        diagnostics.samples,
        diagnostics.discarded
    );
    Ok(PartitionOutcome { labels, diagnostics })
}
