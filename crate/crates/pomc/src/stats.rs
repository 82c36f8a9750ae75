//! Rank-based significance testing and batch aggregation of per-change
//! results.

use serde::{Deserialize, Serialize};

/// Pool size at or below which the Mann-Whitney p-value is computed from
/// the exact permutation distribution.
pub const EXACT_LIMIT: usize = 12;

/// Midranks of the pooled samples, in pool order (`a` then `b`).
fn midranks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..a.len() + b.len()).collect();
    let value = |i: usize| if i < a.len() { a[i] } else { b[i - a.len()] };
    order.sort_by(|&x, &y| value(x).total_cmp(&value(y)));
    let mut ranks = vec![0.0; order.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && value(order[j]) == value(order[i]) {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        i = j;
    }
    ranks
}

/// Exact two-sided p-value: the probability, over all `C(n1+n2, n1)`
/// assignments of the pooled values to the first group, that
/// `|U' - n1*n2/2|` is at least the observed `|U - n1*n2/2|`. Counted
/// exactly with an integer subset-sum DP over doubled midranks.
fn exact_p(doubled: &[i64], n1: usize, observed_doubled_sum: i64) -> f64 {
    let n = doubled.len();
    let total: i64 = doubled.iter().sum();
    // ways[c][s] = number of c-subsets with doubled-rank sum s.
    let max_sum = total as usize;
    let mut ways = vec![vec![0u64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1;
    for &r in doubled {
        for c in (0..n1).rev() {
            for s in 0..=(max_sum - r as usize) {
                if ways[c][s] > 0 {
                    ways[c + 1][s + r as usize] += ways[c][s];
                }
            }
        }
    }
    // With S the doubled rank sum of the first group, 2*U1 = S - n1*(n1+1)
    // and 2*mu = n1*n2, so |U' - mu| >= |U - mu| iff |S' - c0| >= |S - c0|
    // with c0 = n1*(n1+1) + n1*n2. All integers, so the count is exact.
    let n2 = n - n1;
    let c0 = (n1 * (n1 + 1) + n1 * n2) as i64;
    let obs_dev = (observed_doubled_sum - c0).abs();
    let mut extreme: u64 = 0;
    let mut count: u64 = 0;
    for (s, &w) in ways[n1].iter().enumerate() {
        if w == 0 {
            continue;
        }
        count += w;
        if (s as i64 - c0).abs() >= obs_dev {
            extreme += w;
        }
    }
    extreme as f64 / count as f64
}

/// Complementary CDF of the standard normal.
fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// Two-sided Mann-Whitney U test with midrank tie handling. Returns
/// `(U, p)` where `U` is the statistic of the first sample. The exact
/// permutation distribution is used when `n1 + n2 <=` [`EXACT_LIMIT`];
/// otherwise the tie-corrected normal approximation with continuity
/// correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert!(!a.is_empty() && !b.is_empty(), "samples must be nonempty");
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let ranks = midranks(a, b);
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let u2 = (n1 * n2) as f64 - u1;

    let p = if n <= EXACT_LIMIT {
        // Doubled midranks are exact integers.
        let doubled: Vec<i64> = ranks.iter().map(|r| (2.0 * r).round() as i64).collect();
        let observed: i64 = doubled[..n1].iter().sum();
        exact_p(&doubled, n1, observed)
    } else {
        // Tie correction: sigma^2 = n1*n2/12 * [(n+1) - sum(t^3 - t) / (n(n-1))].
        let mut sorted = ranks.clone();
        sorted.sort_by(f64::total_cmp);
        let mut tie_term = 0.0;
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i + 1;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            let t = (j - i) as f64;
            tie_term += t * t * t - t;
            i = j;
        }
        let sigma2 = (n1 * n2) as f64 / 12.0
            * ((n + 1) as f64 - tie_term / (n as f64 * (n as f64 - 1.0)));
        if sigma2 <= 0.0 {
            1.0 // every pooled value identical
        } else {
            let mean = (n1 * n2) as f64 / 2.0;
            let z = (u1.max(u2) - mean - 0.5) / sigma2.sqrt();
            (2.0 * normal_sf(z)).clamp(0.0, 1.0)
        }
    };
    (u1, p)
}

/// Exact two-sided sign test against a fixed reference: p-value of seeing
/// an imbalance at least as extreme among the non-tied observations.
pub fn sign_test_two_sided(n_above: usize, n_below: usize) -> f64 {
    let n = n_above + n_below;
    if n == 0 {
        return 1.0;
    }
    let k = n_above.min(n_below);
    // P[X <= k] for X ~ Binomial(n, 1/2), accumulated without overflow.
    let mut term = 0.5f64.powi(n as i32); // P[X = 0]
    let mut tail = term;
    for i in 0..k {
        term *= (n - i) as f64 / (i + 1) as f64;
        tail += term;
    }
    (2.0 * tail).min(1.0)
}

/// Outcome of one change: POMC against the deterministic greedy value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Loss,
    Win,
    Tie,
}

/// Per-change comparison data: one greedy value (greedy is deterministic)
/// and one POMC value per repetition.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChangeRecord {
    pub change_index: usize,
    pub interval: u64,
    pub level: f64,
    pub greedy_value: f64,
    pub pomc_values: Vec<f64>,
}

/// Classify one change at significance level `alpha` using an exact
/// two-sided sign test on the runs that differ from the greedy value:
/// `Win` if significant with positive median difference, `Loss` if
/// significant with negative median difference, `Tie` otherwise.
pub fn classify_change(record: &ChangeRecord, alpha: f64) -> Classification {
    let above = record
        .pomc_values
        .iter()
        .filter(|&&v| v > record.greedy_value)
        .count();
    let below = record
        .pomc_values
        .iter()
        .filter(|&&v| v < record.greedy_value)
        .count();
    let p = sign_test_two_sided(above, below);
    if p >= alpha {
        return Classification::Tie;
    }
    let mut diffs: Vec<f64> = record
        .pomc_values
        .iter()
        .map(|v| v - record.greedy_value)
        .collect();
    diffs.sort_by(f64::total_cmp);
    let mid = diffs.len() / 2;
    let median = if diffs.len() % 2 == 1 {
        diffs[mid]
    } else {
        (diffs[mid - 1] + diffs[mid]) / 2.0
    };
    if median > 0.0 {
        Classification::Win
    } else if median < 0.0 {
        Classification::Loss
    } else {
        Classification::Tie
    }
}

/// Aggregated statistics for one interval setting within one batch.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalStats {
    pub interval: u64,
    pub mean: f64,
    pub std: f64,
    pub losses: usize,
    pub wins: usize,
    pub ties: usize,
}

/// One batch of consecutive changes.
#[derive(Clone, Debug, Serialize)]
pub struct BatchRow {
    pub first_change: usize,
    pub last_change: usize,
    pub greedy_mean: f64,
    pub greedy_std: f64,
    pub per_interval: Vec<IntervalStats>,
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Group records into batches of `batch_size` consecutive changes and
/// aggregate: greedy mean/std over the batch, and per interval the pooled
/// POMC mean/std plus loss-win-tie counts (one classification per change,
/// so `L + W + T` equals the number of changes in the batch).
pub fn aggregate_batches(records: &[ChangeRecord], batch_size: usize, alpha: f64) -> Vec<BatchRow> {
    assert!(batch_size >= 1, "batch size must be positive");
    let mut intervals: Vec<u64> = records.iter().map(|r| r.interval).collect();
    intervals.sort_unstable();
    intervals.dedup();
    let mut change_indices: Vec<usize> = records.iter().map(|r| r.change_index).collect();
    change_indices.sort_unstable();
    change_indices.dedup();

    change_indices
        .chunks(batch_size)
        .map(|batch| {
            let in_batch = |r: &&ChangeRecord| batch.contains(&r.change_index);
            // Greedy is interval-independent: one value per change.
            let greedy_values: Vec<f64> = batch
                .iter()
                .map(|&c| {
                    records
                        .iter()
                        .find(|r| r.change_index == c)
                        .expect("change index present")
                        .greedy_value
                })
                .collect();
            let (greedy_mean, greedy_std) = mean_std(&greedy_values);
            let per_interval = intervals
                .iter()
                .map(|&interval| {
                    let rs: Vec<&ChangeRecord> = records
                        .iter()
                        .filter(|r| r.interval == interval)
                        .filter(in_batch)
                        .collect();
                    let pooled: Vec<f64> =
                        rs.iter().flat_map(|r| r.pomc_values.iter().copied()).collect();
                    let (mean, std) = mean_std(&pooled);
                    let mut losses = 0;
                    let mut wins = 0;
                    let mut ties = 0;
                    for r in &rs {
                        match classify_change(r, alpha) {
                            Classification::Loss => losses += 1,
                            Classification::Win => wins += 1,
                            Classification::Tie => ties += 1,
                        }
                    }
                    IntervalStats {
                        interval,
                        mean,
                        std,
                        losses,
                        wins,
                        ties,
                    }
                })
                .collect();
            BatchRow {
                first_change: batch[0],
                last_change: *batch.last().unwrap(),
                greedy_mean,
                greedy_std,
                per_interval,
            }
        })
        .collect()
}

/// CSV emission: a `#` comment line naming the configuration, a header,
/// then one row per batch with per-interval mean/std/L/W/T columns.
pub fn table_to_csv(k: usize, density: f64, rows: &[BatchRow], comment: &str) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "# {comment}");
    let mut header = String::from("k,density,changes,greedy_mean,greedy_std");
    if let Some(first) = rows.first() {
        for is in &first.per_interval {
            let t = is.interval;
            let _ = write!(
                header,
                ",pomc{t}_mean,pomc{t}_std,pomc{t}_losses,pomc{t}_wins,pomc{t}_ties"
            );
        }
    }
    let _ = writeln!(out, "{header}");
    for row in rows {
        let _ = write!(
            out,
            "{k},{density},{}-{},{},{}",
            row.first_change, row.last_change, row.greedy_mean, row.greedy_std
        );
        for is in &row.per_interval {
            let _ = write!(
                out,
                ",{},{},{},{},{}",
                is.mean, is.std, is.losses, is.wins, is.ties
            );
        }
        let _ = writeln!(out);
    }
    out
}
