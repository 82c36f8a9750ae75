use std::cmp::Ordering;

use crate::matroid::PartitionMatroid;
use crate::objective::{CountingOracle, SetFunction};
use crate::solution::Solution;

/// First objective value: the raw objective for feasible solutions, or an
/// `Infeasible` sentinel that compares strictly below every real value.
///
/// The sentinel keeps comparisons total and NaN-free; oracle values are
/// asserted finite and non-negative at evaluation time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ObjectiveValue {
    Infeasible,
    Feasible(f64),
}

impl ObjectiveValue {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ObjectiveValue::Feasible(_))
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            ObjectiveValue::Feasible(v) => Some(v),
            ObjectiveValue::Infeasible => None,
        }
    }
}

impl Eq for ObjectiveValue {}

impl PartialOrd for ObjectiveValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ObjectiveValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use ObjectiveValue::{Feasible, Infeasible};
        match (self, other) {
            (Infeasible, Infeasible) => Ordering::Equal,
            (Infeasible, Feasible(_)) => Ordering::Less,
            (Feasible(_), Infeasible) => Ordering::Greater,
            (Feasible(a), Feasible(b)) => a.total_cmp(b),
        }
    }
}

/// Bi-objective fitness `(f1, f2)`: `f1` is the constrained objective
/// ([`ObjectiveValue`]) and `f2 = -|X|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiFitness {
    pub objective: ObjectiveValue,
    pub neg_size: i64,
}

impl BiFitness {
    pub fn new(objective: ObjectiveValue, cardinality: usize) -> Self {
        BiFitness {
            objective,
            neg_size: -(cardinality as i64),
        }
    }

    /// Weak dominance: no worse in both objectives.
    pub fn weakly_dominates(&self, other: &BiFitness) -> bool {
        self.objective >= other.objective && self.neg_size >= other.neg_size
    }

    /// Strict dominance: weak dominance plus strictly better in at least
    /// one objective.
    pub fn strictly_dominates(&self, other: &BiFitness) -> bool {
        self.weakly_dominates(other) && self != other
    }
}

/// Outcome of comparing `a` against `b` under the dominance relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    /// `a` weakly dominates `b` and is strictly better in some objective.
    Strict,
    /// `a` and `b` are equal in both objectives.
    WeakOnly,
    /// `a` does not weakly dominate `b`.
    None,
}

pub fn dominance(a: &BiFitness, b: &BiFitness) -> Dominance {
    if !a.weakly_dominates(b) {
        Dominance::None
    } else if a == b {
        Dominance::WeakOnly
    } else {
        Dominance::Strict
    }
}

/// An evaluated solution: the raw oracle value is cached so that threshold
/// changes can re-derive `f1` without further oracle calls (`f` itself does
/// not depend on the thresholds).
#[derive(Clone, Debug)]
pub struct Member {
    pub solution: Solution,
    pub raw_value: f64,
    pub fitness: BiFitness,
}

/// Evaluate a solution under the current constraints: exactly one oracle
/// call; `f1 = f(X)` if feasible, the infeasible sentinel otherwise;
/// `f2 = -|X|`.
pub fn evaluate<F: SetFunction>(
    solution: Solution,
    oracle: &mut CountingOracle<F>,
    matroid: &PartitionMatroid,
) -> Member {
    let raw_value = oracle.evaluate(&solution);
    let objective = if matroid.is_feasible(&solution) {
        ObjectiveValue::Feasible(raw_value)
    } else {
        ObjectiveValue::Infeasible
    };
    let fitness = BiFitness::new(objective, solution.cardinality());
    Member {
        solution,
        raw_value,
        fitness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Modular;

    fn fit(f1: ObjectiveValue, size: usize) -> BiFitness {
        BiFitness::new(f1, size)
    }

    fn feasible(v: f64, size: usize) -> BiFitness {
        fit(ObjectiveValue::Feasible(v), size)
    }

    #[test]
    fn infeasible_sorts_below_every_real() {
        assert!(ObjectiveValue::Infeasible < ObjectiveValue::Feasible(0.0));
        assert!(ObjectiveValue::Infeasible < ObjectiveValue::Feasible(f64::MAX));
        assert_eq!(ObjectiveValue::Infeasible, ObjectiveValue::Infeasible);
    }

    #[test]
    fn dominance_strict() {
        assert_eq!(
            dominance(&feasible(5.0, 2), &feasible(3.0, 4)),
            Dominance::Strict
        );
    }

    #[test]
    fn dominance_weak_only_on_equality() {
        assert_eq!(
            dominance(&feasible(5.0, 2), &feasible(5.0, 2)),
            Dominance::WeakOnly
        );
    }

    #[test]
    fn dominance_none_when_incomparable() {
        assert_eq!(
            dominance(&feasible(5.0, 4), &feasible(3.0, 2)),
            Dominance::None
        );
        // The reverse direction is also None: dominance is directional.
        assert_eq!(
            dominance(&feasible(3.0, 4), &feasible(5.0, 2)),
            Dominance::None
        );
    }

    #[test]
    fn dominance_relation_laws_on_a_small_grid() {
        // Exhaustive check of reflexivity (weak), antisymmetry (strict) and
        // transitivity over a grid of fitness values including the sentinel.
        let f1s = [
            ObjectiveValue::Infeasible,
            ObjectiveValue::Feasible(0.0),
            ObjectiveValue::Feasible(1.0),
            ObjectiveValue::Feasible(2.0),
        ];
        let sizes = [0usize, 1, 2, 3];
        let mut grid = Vec::new();
        for &f1 in &f1s {
            for &s in &sizes {
                grid.push(fit(f1, s));
            }
        }
        for a in &grid {
            assert!(a.weakly_dominates(a));
            assert!(!a.strictly_dominates(a));
            for b in &grid {
                if a.strictly_dominates(b) {
                    assert!(!b.strictly_dominates(a));
                }
                for c in &grid {
                    if a.weakly_dominates(b) && b.weakly_dominates(c) {
                        assert!(a.weakly_dominates(c));
                    }
                }
            }
        }
    }

    #[test]
    fn evaluate_feasible_solution() {
        // f(X) = 7 with |X| = 3 -> (7, -3).
        let f = Modular::new(vec![4.0, 2.0, 1.0, 9.0]);
        let m = PartitionMatroid::single_block(4, 3).unwrap();
        let mut oracle = CountingOracle::new(f);
        let member = evaluate(Solution::from_indices(4, &[0, 1, 2]), &mut oracle, &m);
        assert_eq!(member.fitness, feasible(7.0, 3));
        assert_eq!(member.raw_value, 7.0);
        assert_eq!(oracle.eval_count(), 1);
    }

    #[test]
    fn evaluate_infeasible_solution_keeps_raw_value() {
        let f = Modular::new(vec![1.0; 5]);
        let m = PartitionMatroid::single_block(5, 3).unwrap();
        let mut oracle = CountingOracle::new(f);
        let member = evaluate(Solution::full(5), &mut oracle, &m);
        assert_eq!(member.fitness.objective, ObjectiveValue::Infeasible);
        assert_eq!(member.fitness.neg_size, -5);
        assert_eq!(member.raw_value, 5.0);
    }

    #[test]
    fn evaluate_empty_set() {
        let f = Modular::new(vec![1.0, 2.0]);
        let m = PartitionMatroid::single_block(2, 1).unwrap();
        let mut oracle = CountingOracle::new(f);
        let member = evaluate(Solution::empty(2), &mut oracle, &m);
        assert_eq!(member.fitness, feasible(0.0, 0));
    }
}
