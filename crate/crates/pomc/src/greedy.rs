//! Deterministic greedy baseline: repeatedly add the feasible element with
//! the largest marginal gain.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::matroid::PartitionMatroid;
use crate::objective::{CountingOracle, SetFunction};
use crate::solution::Solution;

/// When to stop adding elements.
///
/// `PositiveGain` stops as soon as no feasible addition strictly improves
/// the objective — the right default for non-monotone objectives like
/// max-cut, where filling the budget can decrease the value. `FillBudget`
/// keeps adding the best feasible element (even at zero or negative gain)
/// until no feasible addition exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopPolicy {
    PositiveGain,
    FillBudget,
}

impl StopPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopPolicy::PositiveGain => "positive-gain",
            StopPolicy::FillBudget => "fill-budget",
        }
    }
}

impl FromStr for StopPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive-gain" => Ok(StopPolicy::PositiveGain),
            "fill-budget" => Ok(StopPolicy::FillBudget),
            other => Err(format!(
                "unknown stop policy '{other}' (expected positive-gain or fill-budget)"
            )),
        }
    }
}

/// Greedy maximization under a partition matroid, starting from the empty
/// set. Every candidate is scored with one oracle call; ties break to the
/// lowest element index, so the result is fully deterministic.
pub fn greedy_solve<F: SetFunction>(
    oracle: &mut CountingOracle<F>,
    matroid: &PartitionMatroid,
    policy: StopPolicy,
) -> (Solution, f64) {
    let n = matroid.n();
    let mut current = Solution::empty(n);
    let mut current_value = oracle.evaluate(&current);
    let mut counts = vec![0usize; matroid.k()];

    loop {
        let mut best: Option<(usize, f64)> = None;
        for v in 0..n {
            if current.contains(v) || counts[matroid.block_of(v)] >= matroid.thresholds()[matroid.block_of(v)] {
                continue;
            }
            current.insert(v);
            let value = oracle.evaluate(&current);
            current.remove(v);
            // Strictly-greater keeps the lowest index on ties.
            if best.map_or(true, |(_, bv)| value > bv) {
                best = Some((v, value));
            }
        }
        let Some((v, value)) = best else {
            break; // no feasible addition
        };
        if policy == StopPolicy::PositiveGain && value - current_value <= 0.0 {
            break;
        }
        current.insert(v);
        counts[matroid.block_of(v)] += 1;
        current_value = value;
    }
    (current, current_value)
}
