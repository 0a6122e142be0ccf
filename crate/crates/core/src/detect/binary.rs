use super::counts::neighbor_counts;
use super::{prepare, solve, Diagnostics, PartitionOutcome, PipelineConfig};
use crate::error::{invalid, Error, Result};
use crate::graphlin::{adjacency, regularize, Mode};
use crate::hypergraph::{Hypergraph, IncidenceIndex, LabelVector};
use crate::model::{binary_correction_threshold, degree_scale, ModelParams, OrderSubset};

/// Output of the binary spectral stage.
#[derive(Clone, Debug, PartialEq)]
pub struct BinarySpectral {
    /// Labels 0 and 1; the first `⌈n/2⌉` vertices by the split vector get 0.
    pub labels: LabelVector,
    pub high_degree: usize,
    pub solver_iterations: usize,
    pub solver_residual: f64,
    pub solver_converged: bool,
}

/// Splits the vertices in half along the direction of the top-two eigenspace
/// of the regularized red adjacency that is orthogonal to the projected
/// all-ones vector (the second eigenvector when that projection vanishes).
pub fn spectral_partition_2(
    h_red: &Hypergraph,
    params: &ModelParams,
    subset: &OrderSubset,
    cfg: &PipelineConfig,
) -> Result<BinarySpectral> {
    let n = params.n();
    if params.k() != 2 {
        return invalid(format!("binary partition needs k = 2, got {}", params.k()));
    }
    if h_red.n() != n || n < 2 {
        return invalid("hypergraph does not match the model");
    }
    let threshold = cfg.tau * subset.max_order() as f64 * degree_scale(params, subset)?;
    let (a, kept) = regularize(&adjacency(h_red), threshold);
    let (basis, converged) = solve(&a, 2, Mode::Symmetric, cfg)?;
    if basis.singular_values[1] == 0.0 {
        return Err(Error::PartitionFailure(
            "regularized red adjacency has rank below two".into(),
        ));
    }
    let ones = vec![1.0; n];
    let c = basis.coefficients(&ones);
    let c_norm = c.norm();
    let direction: Vec<f64> = if c_norm <= 1e-12 * (n as f64).sqrt() {
        basis.vectors.column(1).iter().copied().collect()
    } else {
        let perp = nalgebra::DVector::from_vec(vec![-c[1] / c_norm, c[0] / c_norm]);
        (&basis.vectors * perp).iter().copied().collect()
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| direction[j].total_cmp(&direction[i]).then(i.cmp(&j)));
    let mut labels = LabelVector::new(vec![1; n]);
    for &v in &order[..n.div_ceil(2)] {
        labels.set(v, 0);
    }
    Ok(BinarySpectral {
        labels,
        high_degree: kept.iter().filter(|&&x| !x).count(),
        solver_iterations: basis.iterations,
        solver_residual: basis.residual,
        solver_converged: converged,
    })
}

/// Binary correction: a vertex whose weighted blue neighbor count into the
/// opposite side reaches `threshold` swaps sides. All vertices are judged
/// against the input sides.
///
/// Returns the corrected labels and the number of swaps.
pub fn correction_2(h_blue: &Hypergraph, sides: &LabelVector, threshold: f64) -> (LabelVector, usize) {
    let n = h_blue.n();
    let index = IncidenceIndex::new(h_blue);
    let targets = [sides.mask(0), sides.mask(1)];
    let mut out = sides.clone();
    let mut swaps = 0;
    for v in 0..n {
        let side = sides.get(v);
        if side > 1 {
            continue;
        }
        let counts = neighbor_counts(h_blue, &index, v, &targets);
        if counts[1 - side] >= threshold {
            out.set(v, 1 - side);
            swaps += 1;
        }
    }
    (out, swaps)
}

/// Full pipeline for `k = 2`.
pub fn partition_2(h: &Hypergraph, params: &ModelParams, cfg: &PipelineConfig) -> Result<PartitionOutcome> {
    if params.k() != 2 {
        return invalid(format!("the binary pipeline needs k = 2, got {}", params.k()));
    }
    let prepared = prepare(h, params, cfg)?;
    let stage = spectral_partition_2(&prepared.red, params, &prepared.subset, cfg)?;
    let threshold = binary_correction_threshold(params, &prepared.subset, cfg.nu)?;
    let (labels, swaps) = correction_2(&prepared.blue, &stage.labels, threshold);
    let diagnostics = Diagnostics {
        subset: Some(prepared.subset.clone()),
        red_edges: prepared.red.num_edges(),
        blue_edges: prepared.blue.num_edges(),
        high_degree: stage.high_degree,
        solver_iterations: stage.solver_iterations,
        solver_residual: stage.solver_residual,
        solver_converged: stage.solver_converged,
        swaps,
        ..Diagnostics::default()
    };
    log::info!("binary partition: {swaps} vertices swapped by correction");
    Ok(PartitionOutcome { labels, diagnostics })
}
