//! Seeded Monte Carlo checks of the detection stages on planted instances.

use hyperblock::detect::{
    correction_k, partition, partition_2, partition_k, spectral_partition_2, spectral_partition_k,
    CandidateSet, PipelineConfig, SpectralStage,
};
use hyperblock::metrics::{accuracy_report, gamma_correctness, matched_accuracy};
use hyperblock::model::preprocess_select;
use hyperblock::sampler::{color_edges, sample_hsbm, split_vertices};
use hyperblock::{Color, Error, Hypergraph, LabelVector, ModelParams, Side, SplitAssignment, UNASSIGNED};
use rayon::prelude::*;

const NU: f64 = 0.75;

fn planted_k3() -> ModelParams {
    ModelParams::new(2000, 3, [(2, 60.0, 2.0), (3, 60.0, 2.0)]).unwrap()
}

fn planted_k2() -> ModelParams {
    ModelParams::new(2000, 2, [(2, 60.0, 4.0)]).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 }
}

struct Colored {
    red: Hypergraph,
    blue: Hypergraph,
}

/// Order selection and coloring as the pipelines do it for `seed`.
fn colored(h: &Hypergraph, params: &ModelParams, seed: u64) -> Colored {
    let subset = preprocess_select(params).unwrap();
    let c = color_edges(&h.restrict_orders(&subset), seed).unwrap();
    Colored {
        red: c.color_class(Color::Red).unwrap(),
        blue: c.color_class(Color::Blue).unwrap(),
    }
}

struct KStage {
    truth: LabelVector,
    split: SplitAssignment,
    red: Hypergraph,
    stage: Result<SpectralStage, Error>,
}

fn k_stage(params: &ModelParams, seed: u64) -> KStage {
    let (h, truth) = sample_hsbm(params, seed).unwrap();
    let c = colored(&h, params, seed);
    let split = split_vertices(params.n(), seed);
    let subset = preprocess_select(params).unwrap();
    let stage = spectral_partition_k(
        &c.red,
        &c.blue,
        &split,
        params,
        &subset,
        &PipelineConfig::with_seed(seed),
    );
    KStage { truth, split, red: c.red, stage }
}

fn nu_correct(set: &CandidateSet, truth: &LabelVector, k: usize) -> bool {
    let mut hits = vec![0usize; k];
    for &v in &set.vertices {
        hits[truth.get(v)] += 1;
    }
    *hits.iter().max().unwrap() as f64 >= NU * set.vertices.len() as f64
}

/// Labels restricted to the vertices of `keep`, in vertex order.
fn restrict(labels: &LabelVector, keep: &[usize]) -> LabelVector {
    LabelVector::new(keep.iter().map(|&v| labels.get(v)).collect())
}

#[test]
fn candidate_sets_are_nu_correct() {
    let params = planted_k3();
    let good = (0..50u64)
        .into_par_iter()
        .filter(|&seed| {
            let s = k_stage(&params, seed);
            s.stage.is_ok_and(|st| st.candidates.iter().all(|c| nu_correct(c, &s.truth, 3)))
        })
        .count();
    assert!(good >= 45, "{good} of 50 seeds");
}

#[test]
fn correction_does_not_lose_accuracy() {
    let params = planted_k3();
    let improved = (0..50u64)
        .into_par_iter()
        .filter(|&seed| {
            let s = k_stage(&params, seed);
            let Ok(stage) = s.stage else { return false };
            let z_mask = s.split.mask(&[Side::Z]);
            let z = s.split.members(&[Side::Z]);
            let mut before = LabelVector::unassigned(params.n());
            for (i, c) in stage.candidates.iter().enumerate() {
                for &v in &c.vertices {
                    if before.get(v) == UNASSIGNED {
                        before.set(v, i);
                    }
                }
            }
            let after = correction_k(&s.red, &z_mask, &stage.candidates);
            let truth = restrict(&s.truth, &z);
            let pre = matched_accuracy(&truth, &restrict(&before, &z)).unwrap();
            let post = matched_accuracy(&truth, &restrict(&after, &z)).unwrap();
            post >= pre
        })
        .count();
    assert!(improved >= 40, "{improved} of 50 seeds");
}

#[test]
fn final_partition_reaches_target_correctness() {
    let params = planted_k3();
    let good = (0..50u64)
        .into_par_iter()
        .filter(|&seed| {
            let (h, truth) = sample_hsbm(&params, seed).unwrap();
            partition_k(&h, &params, &PipelineConfig::with_seed(seed))
                .is_ok_and(|o| gamma_correctness(&truth, &o.labels).unwrap() >= NU)
        })
        .count();
    assert!(good >= 40, "{good} of 50 seeds");
}

#[test]
fn strong_signal_graph_instance() {
    let params = ModelParams::new(3000, 3, [(2, 80.0, 2.0)]).unwrap();
    let gammas: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let (h, truth) = sample_hsbm(&params, seed).unwrap();
            partition(&h, &params, &PipelineConfig::with_seed(seed))
                .map_or(0.0, |o| gamma_correctness(&truth, &o.labels).unwrap())
        })
        .collect();
    assert!(median(gammas.clone()) >= 0.9, "{gammas:?}");
}

#[test]
fn sparse_null_reports_failure() {
    // No structure and about one red edge per Y2 column.
    let params = ModelParams::new(3000, 3, [(2, 2.0, 2.0), (3, 2.0, 2.0)]).unwrap();
    for seed in 0..3 {
        let (h, _) = sample_hsbm(&params, seed).unwrap();
        let err = partition_k(&h, &params, &PipelineConfig::with_seed(seed)).unwrap_err();
        assert!(matches!(err, Error::PartitionFailure(_)), "{err}");
    }
}

#[test]
fn binary_spectral_stage_is_accurate() {
    let params = planted_k2();
    let subset = preprocess_select(&params).unwrap();
    let good = (0..50u64)
        .into_par_iter()
        .filter(|&seed| {
            let (h, truth) = sample_hsbm(&params, seed).unwrap();
            let c = colored(&h, &params, seed);
            spectral_partition_2(&c.red, &params, &subset, &PipelineConfig::with_seed(seed))
                .is_ok_and(|s| gamma_correctness(&truth, &s.labels).unwrap() >= 0.9)
        })
        .count();
    assert!(good >= 45, "{good} of 50 seeds");
}

#[test]
fn binary_correction_does_not_lose_accuracy() {
    let params = planted_k2();
    let subset = preprocess_select(&params).unwrap();
    let improved = (0..50u64)
        .into_par_iter()
        .filter(|&seed| {
            let (h, truth) = sample_hsbm(&params, seed).unwrap();
            let cfg = PipelineConfig::with_seed(seed);
            let c = colored(&h, &params, seed);
            let Ok(spectral) = spectral_partition_2(&c.red, &params, &subset, &cfg) else {
                return false;
            };
            let Ok(full) = partition_2(&h, &params, &cfg) else { return false };
            matched_accuracy(&truth, &full.labels).unwrap()
                >= matched_accuracy(&truth, &spectral.labels).unwrap()
        })
        .count();
    assert!(improved >= 40, "{improved} of 50 seeds");
}

#[test]
fn binary_null_is_at_chance() {
    let params = ModelParams::new(2000, 2, [(2, 32.0, 32.0)]).unwrap();
    let acc: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let (h, truth) = sample_hsbm(&params, seed).unwrap();
            let o = partition_2(&h, &params, &PipelineConfig::with_seed(seed)).unwrap();
            accuracy_report(&truth, &o.labels).unwrap().matched_accuracy
        })
        .collect();
    let m = median(acc.clone());
    assert!((0.5..=0.55).contains(&m), "{acc:?}");
}

#[test]
fn pipelines_are_deterministic() {
    for params in [planted_k2(), planted_k3()] {
        let (h, _) = sample_hsbm(&params, 17).unwrap();
        let cfg = PipelineConfig::with_seed(17);
        let a = partition(&h, &params, &cfg).unwrap();
        let b = partition(&h, &params, &cfg).unwrap();
        assert_eq!(a, b);
    }
}

/// Red edges inside `Z` or inside `Y`, and blue edges leaving `Z`, do not
/// reach the spectral stage.
#[test]
fn spectral_stage_ignores_unused_edges() {
    let params = planted_k3();
    let seed = 4;
    let (h, _) = sample_hsbm(&params, seed).unwrap();
    let c = colored(&h, &params, seed);
    let split = split_vertices(params.n(), seed);
    let subset = preprocess_select(&params).unwrap();
    let cfg = PipelineConfig::with_seed(seed);
    let z = split.mask(&[Side::Z]);
    let y = split.mask(&[Side::Y1, Side::Y2]);
    let inside = |mask: &[bool], vs: &[u32]| vs.iter().all(|&v| mask[v as usize]);
    let red = c.red.filter(|e| !inside(&z, e.vertices) && !inside(&y, e.vertices));
    let blue = c.blue.filter(|e| inside(&z, e.vertices));
    assert!(red.num_edges() < c.red.num_edges());
    assert!(blue.num_edges() < c.blue.num_edges());
    let full = spectral_partition_k(&c.red, &c.blue, &split, &params, &subset, &cfg).unwrap();
    let reduced = spectral_partition_k(&red, &blue, &split, &params, &subset, &cfg).unwrap();
    assert_eq!(full, reduced);
}
