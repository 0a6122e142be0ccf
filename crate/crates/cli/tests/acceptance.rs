//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`); exits non-zero when any
//! criterion fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyperblock::conclab::{sweep, TrialOptions};
use hyperblock::detect::{partition, PipelineConfig};
use hyperblock::experiment::{run_ladder, summarize, LadderConfig};
use hyperblock::graphlin::{adjacency, regularize, row_sums, top_subspace, Mode, SolverOptions};
use hyperblock::metrics::accuracy_report;
use hyperblock::model::{
    degree_scale, expected_adjacency, expected_eigenvalues, preprocess_select,
};
use hyperblock::sampler::sample_hsbm;
use hyperblock::{HypergraphBuilder, LabelVector, ModelParams, OrderSubset};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};
use tempfile::TempDir;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Nearest-rank percentile, `q` in (0, 1].
fn percentile(v: &mut [f64], q: f64) -> f64 {
    v.sort_by(f64::total_cmp);
    let rank = (q * v.len() as f64).ceil() as usize;
    v[rank.max(1) - 1]
}

fn random_orders(rng: &mut ChaCha8Rng, candidates: &[usize]) -> Vec<usize> {
    loop {
        let picked: Vec<usize> = candidates.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if !picked.is_empty() {
            return picked;
        }
    }
}

// 1 ------------------------------------------------------------------------

fn closed_form_eigenvalues() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let k = rng.random_range(2..=4usize);
        let n = k * rng.random_range(2..=200 / k);
        let orders: Vec<(usize, f64, f64)> = random_orders(&mut rng, &[2, 3, 4])
            .into_iter()
            .filter(|&m| m <= n)
            .map(|m| {
                let b = rng.random_range(0.0..5.0);
                (m, b + rng.random_range(0.0..20.0), b)
            })
            .collect();
        let orders = if orders.is_empty() { vec![(2, 3.0, 1.0)] } else { orders };
        let params = ModelParams::new(n, k, orders).expect("valid model");
        let closed = expected_eigenvalues(&params).expect("equal blocks");
        let mut want = vec![closed.leading];
        want.extend(std::iter::repeat_n(closed.community, k - 1));
        want.extend(std::iter::repeat_n(closed.bulk, n - k));
        want.sort_by(|a, b| b.total_cmp(a));
        let dense = expected_adjacency(&params, 1000).expect("within cap");
        let mut got: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        got.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in want.iter().zip(&got) {
            worst = worst.max((a - b).abs());
        }
    }
    outcome(worst <= 1e-9, format!("max abs error {worst:.3e} over 50 models (tol 1e-9)"))
}

// 2 ------------------------------------------------------------------------

/// Exact SNR as a fraction `num / den` for quarter-integer rates.
fn exact_snr(k: i128, rates: &[(usize, i128, i128)], members: &[usize]) -> (i128, i128) {
    // Scale every term by 4 k^5 so all quantities are integers.
    let mut signal = 0i128;
    let mut noise = 0i128;
    for &(m, a4, b4) in rates.iter().filter(|r| members.contains(&r.0)) {
        let w = (m - 1) as i128;
        let gap = (a4 - b4) * k.pow(6 - m as u32);
        signal += w * gap;
        noise += w * (gap + b4 * k.pow(5));
    }
    if noise == 0 {
        (0, 1)
    } else {
        (signal * signal, noise)
    }
}

fn subset_selection_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    let mut cases = 0;
    while cases < 1000 {
        let k = rng.random_range(2..=5usize);
        let orders = random_orders(&mut rng, &[2, 3, 4, 5, 6]);
        let rates: Vec<(usize, i128, i128)> = orders
            .iter()
            .map(|&m| {
                let b4 = if rng.random_bool(0.2) { 0 } else { rng.random_range(0..=40) };
                let gap4 = if rng.random_bool(0.2) { 0 } else { rng.random_range(0..=40) };
                (m, b4 + gap4, b4)
            })
            .collect();
        if rates.iter().all(|r| r.1 == 0) {
            continue;
        }
        cases += 1;
        let params = ModelParams::new(
            200,
            k,
            rates.iter().map(|&(m, a4, b4)| (m, a4 as f64 / 4.0, b4 as f64 / 4.0)),
        )
        .expect("valid model");
        let got = preprocess_select(&params).expect("selectable");

        let mut best: Option<(Vec<usize>, (i128, i128))> = None;
        for mask in 1usize..(1 << orders.len()) {
            let members: Vec<usize> = (0..orders.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| orders[i])
                .collect();
            let snr = exact_snr(k as i128, &rates, &members);
            let better = match &best {
                None => true,
                Some((cur, (num, den))) => {
                    let lhs = snr.0 * den;
                    let rhs = num * snr.1;
                    lhs > rhs || (lhs == rhs && (members.len(), &members) < (cur.len(), cur))
                }
            };
            if better {
                best = Some((members, snr));
            }
        }
        if got.members() != best.expect("non-empty").0.as_slice() {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches in 1000 models"))
}

// 3 ------------------------------------------------------------------------

fn binom_u64(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn sampler_chi_square() -> Outcome {
    const TRIALS: usize = 500;
    let n = 60usize;
    let model = [(2usize, 10.0, 2.0), (3usize, 20.0, 4.0)];
    let params = ModelParams::new(n, 2, model).expect("valid model");
    // Strata: (order, within?) with their sizes and edge probabilities.
    let mut strata = Vec::new();
    for &(m, a, b) in &model {
        let within = 2 * binom_u64(30, m as u64);
        let total = binom_u64(n as u64, m as u64);
        let norm = binom_u64(n as u64, m as u64 - 1) as f64;
        strata.push((m, true, within, a / norm));
        strata.push((m, false, total - within, b / norm));
    }
    let counts: Vec<Vec<u64>> = (0..TRIALS as u64)
        .into_par_iter()
        .map(|seed| {
            let (h, truth) = sample_hsbm(&params, 1000 + seed).expect("sample");
            let mut c = vec![0u64; strata.len()];
            for e in h.iter() {
                let first = truth.get(e.vertices[0] as usize);
                let within = e.vertices.iter().all(|&v| truth.get(v as usize) == first);
                let idx = strata
                    .iter()
                    .position(|s| s.0 == e.order && s.1 == within)
                    .expect("known stratum");
                c[idx] += 1;
            }
            c
        })
        .collect();

    let mut statistic = 0.0;
    let mut dof = 0usize;
    for (s, &(_, _, size, p)) in strata.iter().enumerate() {
        let dist = Binomial::new(p, size).expect("valid binomial");
        // Consecutive bins with expected frequency at least 5.
        let mut edges = Vec::new();
        let mut mass = 0.0;
        let mut cum = 0.0;
        for x in 0..=size {
            let px = dist.pmf(x);
            mass += px;
            cum += px;
            if mass * TRIALS as f64 >= 5.0 && (1.0 - cum) * TRIALS as f64 >= 5.0 {
                edges.push(x);
                mass = 0.0;
            }
        }
        let bin_of = |x: u64| edges.partition_point(|&e| e < x);
        let bins = edges.len() + 1;
        let mut expected = vec![0.0; bins];
        for x in 0..=size {
            expected[bin_of(x)] += dist.pmf(x) * TRIALS as f64;
        }
        let mut observed = vec![0.0; bins];
        for c in &counts {
            observed[bin_of(c[s])] += 1.0;
        }
        statistic += observed
            .iter()
            .zip(&expected)
            .map(|(o, e)| (o - e) * (o - e) / e)
            .sum::<f64>();
        dof += bins - 1;
    }
    let critical = ChiSquared::new(dof as f64).expect("dof > 0").inverse_cdf(0.99);
    outcome(
        statistic <= critical,
        format!("chi2 = {statistic:.2} on {dof} dof, critical value {critical:.2} at 0.01"),
    )
}

// 4 ------------------------------------------------------------------------

fn regularization_postcondition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0;
    let mut trimmed = 0;
    for trial in 0..100u64 {
        let n = rng.random_range(50..=400usize);
        let k = rng.random_range(2..=3usize);
        let orders: Vec<(usize, f64, f64)> = random_orders(&mut rng, &[2, 3])
            .into_iter()
            .map(|m| {
                let b = rng.random_range(0.5..3.0);
                (m, b + rng.random_range(0.0..10.0), b)
            })
            .collect();
        let params = ModelParams::new(n, k, orders).expect("valid model");
        let (h, _) = sample_hsbm(&params, trial).expect("sample");
        let subset = OrderSubset::all(&params);
        let threshold = 20.0 * subset.max_order() as f64 * degree_scale(&params, &subset).unwrap();

        // Plant a few hubs whose row sums exceed the threshold.
        let mut builder = HypergraphBuilder::new(n).expect("n > 0");
        for e in h.iter() {
            let v: Vec<usize> = e.vertices.iter().map(|&x| x as usize).collect();
            builder.add_edge(&v, None).expect("edge from a valid hypergraph");
        }
        for hub in 0..rng.random_range(0..=3usize) {
            let wanted = (threshold / 2.0) as usize + rng.random_range(0..50);
            let mut added = 0;
            while added < wanted {
                let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
                if builder.add_edge(&[hub, x, y], None).is_ok() {
                    added += 1;
                }
            }
        }
        let a = adjacency(&builder.build());
        let before = row_sums(&a);
        let (reg, kept) = regularize(&a, threshold);
        let after = row_sums(&reg);
        trimmed += kept.iter().filter(|&&x| !x).count();
        let ok = after.iter().all(|&r| r as f64 <= threshold)
            && before
                .iter()
                .zip(&kept)
                .all(|(&r, &keep)| keep == (r as f64 <= threshold));
        if !ok {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violating instances of 100 ({trimmed} vertices trimmed in total)"),
    )
}

// 5 ------------------------------------------------------------------------

fn solver_fidelity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_sv = 0.0f64;
    let mut worst_proj = 0.0f64;
    let mut failures = 0;
    for trial in 0..20u64 {
        let n = rng.random_range(100..=300usize);
        let k = rng.random_range(2..=3usize);
        let mut orders = vec![(2usize, rng.random_range(30.0..50.0), rng.random_range(1.0..3.0))];
        if rng.random_bool(0.5) {
            orders.push((3, rng.random_range(10.0..20.0), rng.random_range(0.5..2.0)));
        }
        let params = ModelParams::new(n, k, orders).expect("valid model");
        let (h, _) = sample_hsbm(&params, trial).expect("sample");
        let a = adjacency(&h);
        let opts = SolverOptions {
            seed: trial,
            ..SolverOptions::default()
        };
        let basis = match top_subspace(&a, k, Mode::LeftSingular, &opts) {
            Ok(b) => b,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let svd = a.to_dense().svd(true, false);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        let u = svd.u.as_ref().expect("left vectors");
        let mut top = DMatrix::zeros(n, k);
        for (c, &i) in order[..k].iter().enumerate() {
            let sigma = svd.singular_values[i];
            worst_sv = worst_sv.max((basis.singular_values[c] - sigma).abs() / sigma);
            top.set_column(c, &u.column(i));
        }
        let diff = basis.projector() - &top * top.transpose();
        let norm = diff.singular_values().max();
        worst_proj = worst_proj.max(norm);
    }
    outcome(
        failures == 0 && worst_sv <= 1e-8 && worst_proj <= 1e-6,
        format!(
            "max relative singular value error {worst_sv:.3e} (tol 1e-8), max projector error {worst_proj:.3e} (tol 1e-6), {failures} solver errors"
        ),
    )
}

// 6, 7 ---------------------------------------------------------------------

/// `k = 2`, orders {2, 3}, `d = a_2 + 2 a_3 = 30`.
fn concentration_model(n: usize) -> ModelParams {
    ModelParams::new(n, 2, [(2, 10.0, 2.0), (3, 10.0, 2.0)]).expect("valid model")
}

fn concentration_trend() -> Outcome {
    let ns = [500, 1000, 2000, 4000];
    let grid: Vec<ModelParams> = ns.iter().map(|&n| concentration_model(n)).collect();
    let seeds: Vec<u64> = (0..50).collect();
    let records = match sweep(&grid, &seeds, &TrialOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("sweep failed: {e}")),
    };
    let p90: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let mut v: Vec<f64> = records.iter().filter(|r| r.n == n).map(|r| r.reg_ratio).collect();
            percentile(&mut v, 0.9)
        })
        .collect();
    let non_increasing = p90.windows(2).all(|w| w[1] <= w[0]);
    let bounded = p90.iter().all(|&x| x <= 10.0);
    let shown: Vec<String> = ns.iter().zip(&p90).map(|(n, p)| format!("{n}: {p:.4}")).collect();
    outcome(
        non_increasing && bounded,
        format!(
            "p90 of regularized ratio [{}]; non-increasing = {non_increasing}, bounded by 10 = {bounded}",
            shown.join(", ")
        ),
    )
}

fn high_degree_sparsity() -> Outcome {
    let params = concentration_model(5000);
    let subset = preprocess_select(&params).expect("selectable");
    let d = degree_scale(&params, &subset).expect("subset of the model");
    let threshold = 20.0 * subset.max_order() as f64 * d;
    let exceed: usize = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let (h, _) = sample_hsbm(&params, seed).expect("sample");
            let high = row_sums(&adjacency(&h)).iter().filter(|&&r| r as f64 > threshold).count();
            usize::from(high as f64 / 5000.0 > d.powi(-3))
        })
        .sum();
    outcome(
        d >= 30.0 && exceed <= 5,
        format!("d = {d}, high-degree fraction above d^-3 in {exceed} of 100 trials (limit 5)"),
    )
}

// 8 ------------------------------------------------------------------------

/// Common rate with the planted model's expected per-order degree.
fn degree_matched_rate(n: usize, k: usize, m: usize, a: f64, b: f64) -> f64 {
    let c = |x: usize, j: usize| hyperblock::model::binom(x as u64, j as u64);
    let inside = c(n / k - 1, m - 1);
    let all = c(n - 1, m - 1);
    (a * inside + b * (all - inside)) / all
}

fn recovery_quality() -> Outcome {
    let (n, k) = (3000, 3);
    let planted = [(2usize, 80.0, 2.0), (3usize, 40.0, 2.0)];
    let params = ModelParams::new(n, k, planted).expect("valid model");
    let null = ModelParams::new(
        n,
        k,
        planted.iter().map(|&(m, a, b)| {
            let c = degree_matched_rate(n, k, m, a, b);
            (m, c, c)
        }),
    )
    .expect("valid model");
    let run = |p: &ModelParams| -> Vec<Option<(f64, f64)>> {
        (0..20u64)
            .into_par_iter()
            .map(|seed| {
                let (h, truth) = sample_hsbm(p, seed).expect("sample");
                let out = partition(&h, p, &PipelineConfig::with_seed(seed)).ok()?;
                let r = accuracy_report(&truth, &out.labels).expect("same length");
                Some((r.gamma, r.matched_accuracy))
            })
            .collect()
    };
    let planted_runs = run(&params);
    let failed = planted_runs.iter().filter(|r| r.is_none()).count();
    // A failed run contributes gamma 0.
    let mut gammas: Vec<f64> = planted_runs.iter().map(|r| r.map_or(0.0, |x| x.0)).collect();
    let gamma = median(&mut gammas);

    let null_runs = run(&null);
    let mut null_acc: Vec<f64> = null_runs.iter().flatten().map(|x| x.1).collect();
    let null_failed = 20 - null_acc.len();
    let null_median = if null_acc.len() >= 10 { median(&mut null_acc) } else { f64::NAN };
    let null_ok = (0.28..=0.40).contains(&null_median);
    outcome(
        gamma >= 0.9 && null_ok,
        format!(
            "median gamma {gamma:.4} (>= 0.9, {failed} of 20 runs failed); null median matched accuracy {null_median:.4} in [0.28, 0.40] ({null_failed} of 20 runs failed)"
        ),
    )
}

// 9 ------------------------------------------------------------------------

fn weak_consistency_trend() -> Outcome {
    let cfg = LadderConfig {
        base: ModelParams::new(3000, 2, [(2, 10.0, 10.0)]).expect("valid model"),
        deltas: vec![10.0, 20.0, 40.0, 80.0],
        trials: 20,
        seed: 0,
        pipeline: PipelineConfig::default(),
    };
    let records = match run_ladder(&cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("ladder failed: {e}")),
    };
    // Rungs are ordered by gap; SNR grows with it.
    let medians: Vec<f64> = summarize(&records).iter().map(|s| s.1).collect();
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = medians.iter().map(|m| format!("{m:.4}")).collect();
    outcome(
        decreasing && medians.len() == 4,
        format!("median misclassification along the ladder [{}]", shown.join(", ")),
    )
}

// 10 -----------------------------------------------------------------------

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn metric_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let k = rng.random_range(1..=4usize);
        let n = rng.random_range(1..=40usize);
        let truth: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let estimate: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let brute = permutations(k)
            .iter()
            .map(|p| truth.iter().zip(&estimate).filter(|(t, e)| p[**t] == **e).count())
            .max()
            .expect("at least one permutation");
        let report =
            accuracy_report(&LabelVector::new(truth), &LabelVector::new(estimate)).expect("valid");
        if n - report.misclassified != brute {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches in 1000 labelings"))
}

// 11 -----------------------------------------------------------------------

fn run_cli(dir: &Path, config: &Path, jobs: usize, args: &[&str]) -> Result<(), String> {
    let output = Command::new(env!("CARGO_BIN_EXE_hyperblock"))
        .current_dir(dir)
        .env_remove("HYPERBLOCK_LOG")
        .arg("--config")
        .arg(config)
        .arg("--jobs")
        .arg(jobs.to_string())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if output.status.success() {
        Ok(())
    } else {
        Err(format!(
            "`{}` exited with {}: {}",
            args.join(" "),
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        ))
    }
}

fn cli_reproducibility() -> Outcome {
    let dir = TempDir::new().expect("temp dir");
    let k3 = dir.path().join("k3.toml");
    let k2 = dir.path().join("k2.toml");
    fs::write(&k3, "n = 600\nk = 3\na_2 = 80\nb_2 = 2\na_3 = 40\nb_3 = 2\nseed = 3\n").unwrap();
    fs::write(
        &k2,
        "n = 400\nk = 2\na_2 = 10\nb_2 = 10\na_3 = 6\nb_3 = 2\nseed = 5\ntrials = 4\nladder = [5, 20, 40]\nns = [200, 400]\n",
    )
    .unwrap();
    let jobs = [("run1", 1), ("run2", 1), ("run3", 4)];
    let commands: Vec<(&Path, Vec<&str>, Vec<&str>)> = vec![
        (&k3, vec!["snr"], vec!["snr.txt"]),
        (&k3, vec!["sample"], vec!["sample.txt"]),
        (&k3, vec!["detect", "--report", "{}/report.csv"], vec!["labels.tsv", "report.csv"]),
        (&k3, vec!["detect", "--input", "{}/sample.txt"], vec!["labels_file.tsv"]),
        (&k2, vec!["experiment", "--summary", "{}/summary.dat"], vec!["experiment.csv", "summary.dat"]),
        (&k2, vec!["conclab"], vec!["conclab.csv"]),
    ];
    let mut files = 0;
    for (tag, j) in jobs {
        let out = dir.path().join(tag);
        fs::create_dir(&out).unwrap();
        for (config, args, outputs) in &commands {
            let prefix = out.to_str().unwrap();
            let mut argv: Vec<String> = args.iter().map(|a| a.replace("{}", prefix)).collect();
            argv.push("--out".into());
            argv.push(format!("{prefix}/{}", outputs[0]));
            let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
            if let Err(e) = run_cli(&out, config, j, &argv) {
                return outcome(false, e);
            }
        }
    }
    for (_, _, outputs) in &commands {
        for name in outputs {
            let read = |tag: &str| fs::read(dir.path().join(tag).join(name)).unwrap_or_default();
            let first = read("run1");
            if first.is_empty() || first != read("run2") || first != read("run3") {
                return outcome(false, format!("{name} differs between runs"));
            }
            files += 1;
        }
    }
    outcome(true, format!("{files} output files byte-identical across --jobs 1, 1, 4"))
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check, Option<u64>); 11] = [
        ("closed-form eigenvalues", closed_form_eigenvalues, Some(30)),
        ("subset selection oracle", subset_selection_oracle, Some(5)),
        ("sampler chi-square", sampler_chi_square, Some(60)),
        ("regularization postcondition", regularization_postcondition, None),
        ("solver fidelity", solver_fidelity, None),
        ("concentration trend", concentration_trend, Some(600)),
        ("high-degree sparsity", high_degree_sparsity, Some(300)),
        ("recovery quality", recovery_quality, Some(900)),
        ("weak-consistency trend", weak_consistency_trend, Some(1200)),
        ("metric oracle", metric_oracle, None),
        ("cli reproducibility", cli_reproducibility, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|s| elapsed < Duration::from_secs(s));
        let pass = result.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit.map_or(String::new(), |s| format!(", limit {s} s"));
        println!(
            "{} {:>2} {name}: {} [{:.1} s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
