use rand::Rng;

use crate::fitness::{Member, ObjectiveValue};
use crate::matroid::PartitionMatroid;

/// The archive of mutually non-dominated evaluated solutions.
///
/// Between steps the population holds at most one member per cardinality
/// level, always contains the empty solution, and (since infeasible
/// offspring are strictly dominated by the empty solution) only feasible
/// members — which bounds its size by `d + 1`.
#[derive(Clone, Debug)]
pub struct Population {
    members: Vec<Member>,
}

impl Population {
    /// Start from the evaluated empty solution.
    pub fn with_initial(empty: Member) -> Self {
        assert_eq!(
            empty.solution.cardinality(),
            0,
            "initial member must be the empty solution"
        );
        Population {
            members: vec![empty],
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn get(&self, idx: usize) -> &Member {
        &self.members[idx]
    }

    /// Uniform parent selection.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> &Member {
        &self.members[rng.random_range(0..self.members.len())]
    }

    /// Survivor selection for a new offspring: if some member strictly
    /// dominates it the population is unchanged; otherwise every member it
    /// weakly dominates is removed and the offspring is added. Returns
    /// whether the offspring entered.
    pub fn insert(&mut self, offspring: Member) -> bool {
        if self
            .members
            .iter()
            .any(|m| m.fitness.strictly_dominates(&offspring.fitness))
        {
            return false;
        }
        self.members
            .retain(|m| !offspring.fitness.weakly_dominates(&m.fitness));
        self.members.push(offspring);
        true
    }

    /// Re-derive every member's `f1` from its cached raw value and the
    /// current feasibility. No oracle calls: `f` does not depend on the
    /// thresholds.
    pub fn refresh_feasibility(&mut self, matroid: &PartitionMatroid) {
        for m in &mut self.members {
            m.fitness.objective = if matroid.is_feasible(&m.solution) {
                ObjectiveValue::Feasible(m.raw_value)
            } else {
                ObjectiveValue::Infeasible
            };
        }
    }

    /// Remove every member weakly dominated by a different member
    /// (the change-event prune). Removal is simultaneous.
    pub fn prune_dominated(&mut self) {
        let keep: Vec<bool> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, x)| {
                !self
                    .members
                    .iter()
                    .enumerate()
                    .any(|(j, y)| j != i && y.fitness.weakly_dominates(&x.fitness))
            })
            .collect();
        let mut it = keep.iter();
        self.members.retain(|_| *it.next().unwrap());
    }

    /// Member maximizing `f1`; ties broken by larger `f2` (smaller set),
    /// then by lexicographically lowest bit vector.
    pub fn best(&self) -> &Member {
        self.members
            .iter()
            .max_by(|a, b| {
                a.fitness
                    .objective
                    .cmp(&b.fitness.objective)
                    .then(a.fitness.neg_size.cmp(&b.fitness.neg_size))
                    // max_by keeps the later of equal elements, so order the
                    // lexicographically lower solution as the greater one.
                    .then_with(|| b.solution.cmp(&a.solution))
            })
            .expect("population is never empty")
    }

    /// Structural invariant check, used by tests and verification harnesses.
    /// `d` is the current threshold sum.
    pub fn check_invariants(&self, d: usize) -> Result<(), String> {
        if self.members.len() > d + 1 {
            return Err(format!("population size {} exceeds d+1 = {}", self.members.len(), d + 1));
        }
        if !self.members.iter().any(|m| m.solution.cardinality() == 0) {
            return Err("empty solution missing from population".into());
        }
        let mut seen_sizes = std::collections::HashSet::new();
        for m in &self.members {
            if !seen_sizes.insert(m.solution.cardinality()) {
                return Err(format!(
                    "two members share cardinality {}",
                    m.solution.cardinality()
                ));
            }
        }
        for (i, a) in self.members.iter().enumerate() {
            for (j, b) in self.members.iter().enumerate() {
                if i != j && a.fitness.weakly_dominates(&b.fitness) {
                    return Err(format!(
                        "member {:?} {:?} dominates member {:?} {:?}",
                        a.solution, a.fitness, b.solution, b.fitness
                    ));
                }
            }
        }
        Ok(())
    }
}
