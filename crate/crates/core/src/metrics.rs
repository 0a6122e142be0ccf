//! Accuracy of an estimated labeling against the truth, up to relabeling.
//!
//! Both metrics work on the contingency table `C[t][e] = |V_t ∩ V̂_e|` with
//! `K = max label + 1` rows and columns. Unassigned estimates never match.

use crate::error::{invalid, Result};
use crate::hypergraph::{LabelVector, UNASSIGNED};

/// Largest `K` for which γ-correctness scans every permutation.
const FACTORIAL_SCAN_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyReport {
    /// Best-permutation minimum over true blocks of `|V_t ∩ V̂_π(t)| / |V_t|`.
    pub gamma: f64,
    /// Best-permutation fraction of correctly labeled vertices.
    pub matched_accuracy: f64,
    /// `K x K` contingency counts, rows indexed by true block. Unassigned
    /// estimates appear in no column.
    pub contingency: Vec<Vec<usize>>,
    pub misclassified: usize,
}

fn check_inputs(truth: &LabelVector, estimate: &LabelVector) -> Result<()> {
    if truth.len() != estimate.len() {
        return invalid(format!(
            "label vectors differ in length: {} vs {}",
            truth.len(),
            estimate.len()
        ));
    }
    if truth.is_empty() {
        return invalid("label vectors are empty");
    }
    if !truth.is_complete() {
        return invalid("ground truth has unassigned vertices");
    }
    Ok(())
}

/// Contingency table `C[t][e]`, square of side `K`.
pub fn contingency(truth: &LabelVector, estimate: &LabelVector) -> Result<Vec<Vec<usize>>> {
    check_inputs(truth, estimate)?;
    let k = truth.label_bound().max(estimate.label_bound());
    let mut table = vec![vec![0usize; k]; k];
    for (&t, &e) in truth.as_slice().iter().zip(estimate.as_slice()) {
        if e != UNASSIGNED {
            table[t][e] += 1;
        }
    }
    Ok(table)
}

/// Maximum-weight perfect assignment on a square matrix; `result[row] = col`.
///
/// O(K³) shortest augmenting paths with potentials.
pub fn max_weight_assignment(weights: &[Vec<i64>]) -> Vec<usize> {
    let k = weights.len();
    if k == 0 {
        return Vec::new();
    }
    // Minimize the negated weights. Index 0 is a virtual column/row.
    let cost = |i: usize, j: usize| -weights[i - 1][j - 1];
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; k + 1];
    let mut v = vec![0i64; k + 1];
    let mut owner = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        owner[0] = i;
        let mut j0 = 0;
        let mut min_to = vec![inf; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=k {
                if !used[j] {
                    let reduced = cost(i0, j) - u[i0] - v[j];
                    if reduced < min_to[j] {
                        min_to[j] = reduced;
                        way[j] = j0;
                    }
                    if min_to[j] < delta {
                        delta = min_to[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![0usize; k];
    for j in 1..=k {
        result[owner[j] - 1] = j - 1;
    }
    result
}

/// Best-permutation fraction of correctly labeled vertices.
pub fn matched_accuracy(truth: &LabelVector, estimate: &LabelVector) -> Result<f64> {
    let table = contingency(truth, estimate)?;
    Ok(matched_count(&table) as f64 / truth.len() as f64)
}

fn matched_count(table: &[Vec<usize>]) -> usize {
    let weights: Vec<Vec<i64>> = table
        .iter()
        .map(|row| row.iter().map(|&c| c as i64).collect())
        .collect();
    max_weight_assignment(&weights)
        .iter()
        .enumerate()
        .map(|(t, &e)| table[t][e])
        .sum()
}

/// `max_π min_t |V_t ∩ V̂_π(t)| / |V_t|` over true blocks that are non-empty.
pub fn gamma_correctness(truth: &LabelVector, estimate: &LabelVector) -> Result<f64> {
    let table = contingency(truth, estimate)?;
    Ok(gamma_from_table(&table, &block_sizes(truth, table.len())))
}

fn block_sizes(truth: &LabelVector, k: usize) -> Vec<usize> {
    let mut sizes = vec![0; k];
    for &t in truth.as_slice() {
        sizes[t] += 1;
    }
    sizes
}

fn gamma_from_table(table: &[Vec<usize>], sizes: &[usize]) -> f64 {
    let k = table.len();
    // Empty true blocks impose no constraint.
    let ratio = |t: usize, e: usize| {
        if sizes[t] == 0 {
            f64::INFINITY
        } else {
            table[t][e] as f64 / sizes[t] as f64
        }
    };
    if k <= FACTORIAL_SCAN_LIMIT {
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = 0.0f64;
        loop {
            let worst = (0..k).map(|t| ratio(t, perm[t])).fold(f64::INFINITY, f64::min);
            best = best.max(worst);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        return best.min(1.0);
    }
    // Bottleneck assignment: the largest threshold admitting a perfect
    // matching on the pairs whose ratio reaches it.
    let mut levels: Vec<f64> = (0..k)
        .flat_map(|t| (0..k).map(move |e| (t, e)))
        .map(|(t, e)| ratio(t, e))
        .filter(|r| r.is_finite())
        .collect();
    levels.push(0.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if has_perfect_matching(k, |t, e| ratio(t, e) >= levels[mid]) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    levels[lo].min(1.0)
}

fn has_perfect_matching(k: usize, allowed: impl Fn(usize, usize) -> bool) -> bool {
    fn augment(
        t: usize,
        k: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for e in 0..k {
            if allowed(t, e) && !seen[e] {
                seen[e] = true;
                if owner[e].is_none_or(|o| augment(o, k, allowed, seen, owner)) {
                    owner[e] = Some(t);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; k];
    (0..k).all(|t| {
        let mut seen = vec![false; k];
        augment(t, k, &allowed, &mut seen, &mut owner)
    })
}

/// Rearranges to the next lexicographic permutation; false after the last.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn accuracy_report(truth: &LabelVector, estimate: &LabelVector) -> Result<AccuracyReport> {
    let table = contingency(truth, estimate)?;
    let matched = matched_count(&table);
    Ok(AccuracyReport {
        gamma: gamma_from_table(&table, &block_sizes(truth, table.len())),
        matched_accuracy: matched as f64 / truth.len() as f64,
        misclassified: truth.len() - matched,
        contingency: table,
    })
}
