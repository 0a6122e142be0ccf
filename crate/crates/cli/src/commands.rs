use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use hyperblock::detect::partition;
use hyperblock::experiment::{records_csv, run_ladder, summarize, summary_table, LadderConfig};
use hyperblock::format::{parse_hypergraph, write_hypergraph, write_labels, HypergraphFile};
use hyperblock::metrics::accuracy_report;
use hyperblock::model::{error_exponent_constant, preprocess_select, snr_table};
use hyperblock::{conclab, sampler};

use crate::config::RunConfig;
use crate::error::CliError;

pub const REPORT_HEADER: &str = "gamma,matched_accuracy,misclassified";

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// SNR of every order subset; the selected one is marked with `*`.
pub fn snr(cfg: &RunConfig) -> Result<String, CliError> {
    let model = &cfg.model;
    let best = preprocess_select(model)?;
    let mut out = format!("# n = {}, k = {}\nsubset\tsnr\tselected\n", model.n(), model.k());
    for (subset, value) in snr_table(model)? {
        let mark = if subset == best { "*" } else { "" };
        writeln!(out, "{subset}\t{value:.10}\t{mark}").expect("writing to a string");
    }
    let c = error_exponent_constant(model.k(), &best, cfg.nu)?;
    writeln!(out, "# error exponent constant for {best} at nu = {}: {c:.6e}", cfg.nu)
        .expect("writing to a string");
    Ok(out)
}

/// A seeded instance in the hypergraph text format, with its labels.
pub fn sample(cfg: &RunConfig) -> Result<String, CliError> {
    let (h, truth) = sampler::sample_hsbm(&cfg.model, cfg.seed)?;
    log::info!("sampled {} edges on {} vertices", h.num_edges(), h.n());
    Ok(write_hypergraph(&HypergraphFile {
        hypergraph: h,
        k: cfg.model.k(),
        max_order: cfg.model.max_order(),
        labels: Some(truth),
    }))
}

pub struct Detection {
    pub labels: String,
    /// Present when ground truth is known.
    pub report: Option<String>,
}

/// Runs the partition pipeline on `input`, or on a fresh sample when absent.
pub fn detect(cfg: &RunConfig, input: Option<&Path>) -> Result<Detection, CliError> {
    let (h, truth) = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let file = parse_hypergraph(&text)?;
            if file.hypergraph.n() != cfg.model.n() || file.k != cfg.model.k() {
                return Err(CliError::Invalid(format!(
                    "input has n = {}, k = {}; config has n = {}, k = {}",
                    file.hypergraph.n(),
                    file.k,
                    cfg.model.n(),
                    cfg.model.k()
                )));
            }
            (file.hypergraph, file.labels)
        }
        None => {
            let (h, truth) = sampler::sample_hsbm(&cfg.model, cfg.seed)?;
            (h, Some(truth))
        }
    };
    let outcome = partition(&h, &cfg.model, &cfg.pipeline())?;
    log::info!("diagnostics: {:?}", outcome.diagnostics);
    let report = match truth {
        Some(truth) => {
            let r = accuracy_report(&truth, &outcome.labels)?;
            Some(format!(
                "{REPORT_HEADER}\n{:.10},{:.10},{}\n",
                r.gamma, r.matched_accuracy, r.misclassified
            ))
        }
        None => None,
    };
    Ok(Detection {
        labels: write_labels(&outcome.labels),
        report,
    })
}

/// Per-trial records and the `(snr, median misclassification)` summary.
pub fn experiment(cfg: &RunConfig) -> Result<(String, String), CliError> {
    let ladder = LadderConfig {
        base: cfg.model.clone(),
        deltas: cfg.ladder.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        pipeline: cfg.pipeline(),
    };
    let records = run_ladder(&ladder)?;
    Ok((records_csv(&records), summary_table(&summarize(&records))))
}

/// Concentration sweep over `ns`, seeds `seed .. seed + trials`.
pub fn conclab(cfg: &RunConfig) -> Result<String, CliError> {
    let grid = cfg
        .ns
        .iter()
        .map(|&n| cfg.model_at(n))
        .collect::<Result<Vec<_>, _>>()?;
    let seeds: Vec<u64> = (0..cfg.trials as u64).map(|t| cfg.seed.wrapping_add(t)).collect();
    let records = conclab::sweep(&grid, &seeds, &cfg.trial_options())?;
    Ok(conclab::to_csv(&records))
}
