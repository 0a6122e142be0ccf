//! Recovery experiments along an SNR ladder.
//!
//! Each rung sets `a_m = b_m + Δ` for every order of a base model and runs a
//! fixed number of seeded trials. Trial `t` of every rung uses seed
//! `seed + t`, so rungs share their random streams.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::detect::{partition, PipelineConfig};
use crate::error::{Error, Result};
use crate::metrics::accuracy_report;
use crate::model::{preprocess_select, snr_subset, ModelParams};
use crate::sampler::sample_hsbm;

pub const CSV_HEADER: &str =
    "config_hash,rung,delta,snr,trial,seed,status,gamma,matched_accuracy,misclassification";

#[derive(Clone, Debug, PartialEq)]
pub struct LadderConfig {
    /// Base model; only its `n`, `k` and cross rates `b_m` are used.
    pub base: ModelParams,
    /// Gaps `a_m − b_m`, one rung each.
    pub deltas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub pipeline: PipelineConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialStatus {
    Ok,
    Failure,
}

impl TrialStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TrialStatus::Ok => "ok",
            TrialStatus::Failure => "failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub config_hash: u64,
    pub rung: usize,
    pub delta: f64,
    /// SNR of the subset the pipeline selects at this rung.
    pub snr: f64,
    pub trial: usize,
    pub seed: u64,
    pub status: TrialStatus,
    pub gamma: f64,
    pub matched_accuracy: f64,
    pub misclassification: f64,
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

/// Hash of a configuration's debug rendering.
pub fn config_hash(cfg: &LadderConfig) -> u64 {
    fnv1a64(format!("{cfg:?}").as_bytes())
}

/// The model of one rung.
pub fn rung_model(base: &ModelParams, delta: f64) -> Result<ModelParams> {
    ModelParams::new(
        base.n(),
        base.k(),
        base.orders()
            .iter()
            .map(|(&m, r)| (m, r.across + delta, r.across)),
    )
}

/// Runs every `(rung, trial)` pair on the current rayon pool; records come
/// back ordered by rung, then trial.
///
/// A trial whose pipeline reports a partition failure is kept with status
/// `failure` and the misclassification of a uniform guess, `1 − 1/k`.
pub fn run_ladder(cfg: &LadderConfig) -> Result<Vec<ExperimentRecord>> {
    if cfg.deltas.is_empty() || cfg.trials == 0 {
        return Err(Error::InvalidArgument(
            "ladder needs at least one rung and one trial".into(),
        ));
    }
    let hash = config_hash(cfg);
    let rungs = cfg
        .deltas
        .iter()
        .map(|&d| {
            let model = rung_model(&cfg.base, d)?;
            let subset = match &cfg.pipeline.subset {
                Some(s) => s.clone(),
                None => preprocess_select(&model)?,
            };
            let snr = snr_subset(&model, &subset)?;
            Ok((model, snr))
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..rungs.len())
        .flat_map(|r| (0..cfg.trials).map(move |t| (r, t)))
        .collect();
    jobs.par_iter()
        .map(|&(rung, trial)| {
            let (model, snr) = &rungs[rung];
            let seed = cfg.seed.wrapping_add(trial as u64);
            let (h, truth) = sample_hsbm(model, seed)?;
            let pipeline = PipelineConfig {
                seed,
                ..cfg.pipeline.clone()
            };
            let base = ExperimentRecord {
                config_hash: hash,
                rung,
                delta: cfg.deltas[rung],
                snr: *snr,
                trial,
                seed,
                status: TrialStatus::Ok,
                gamma: 0.0,
                matched_accuracy: 0.0,
                misclassification: 0.0,
            };
            match partition(&h, model, &pipeline) {
                Ok(outcome) => {
                    let report = accuracy_report(&truth, &outcome.labels)?;
                    Ok(ExperimentRecord {
                        gamma: report.gamma,
                        matched_accuracy: report.matched_accuracy,
                        misclassification: 1.0 - report.matched_accuracy,
                        ..base
                    })
                }
                Err(Error::PartitionFailure(reason)) => {
                    log::warn!("rung {rung} trial {trial}: {reason}");
                    let k = model.k() as f64;
                    Ok(ExperimentRecord {
                        status: TrialStatus::Failure,
                        matched_accuracy: 1.0 / k,
                        misclassification: 1.0 - 1.0 / k,
                        ..base
                    })
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// `(snr, median misclassification)` per rung, sorted by SNR ascending.
pub fn summarize(records: &[ExperimentRecord]) -> Vec<(f64, f64)> {
    let rungs = records.iter().map(|r| r.rung).max().map_or(0, |m| m + 1);
    let mut out: Vec<(f64, f64)> = (0..rungs)
        .filter_map(|rung| {
            let rows: Vec<&ExperimentRecord> = records.iter().filter(|r| r.rung == rung).collect();
            let first = rows.first()?;
            let mis: Vec<f64> = rows.iter().map(|r| r.misclassification).collect();
            Some((first.snr, median(&mis)))
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{:016x},{},{},{:.10},{},{},{},{:.10},{:.10},{:.10}",
            r.config_hash,
            r.rung,
            r.delta,
            r.snr,
            r.trial,
            r.seed,
            r.status.as_str(),
            r.gamma,
            r.matched_accuracy,
            r.misclassification
        )
        .expect("writing to a string");
    }
    out
}

/// Two whitespace-separated columns, `snr median_misclassification`.
pub fn summary_table(summary: &[(f64, f64)]) -> String {
    let mut out = String::from("# snr median_misclassification\n");
    for (snr, mis) in summary {
        writeln!(out, "{snr:.10} {mis:.10}").expect("writing to a string");
    }
    out
}
