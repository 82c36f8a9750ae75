//! The Pareto optimization main loop: uniform parent selection, independent
//! per-bit mutation, elitist survivor selection, and change-event handling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fitness::{evaluate, Member};
use crate::matroid::PartitionMatroid;
use crate::objective::{CountingOracle, SetFunction};
use crate::population::Population;
use crate::solution::Solution;

/// One optimizer instance. Single-threaded; independent instances are safe
/// to run concurrently, each with its own seed.
///
/// Randomness protocol (part of the reproducibility contract): the rng is
/// ChaCha8 seeded with `seed_from_u64`; each step draws first the parent
/// index via `random_range(0..population_len)`, then one `f64` in `[0, 1)`
/// per bit in index order, flipping where the draw is below `1/n`.
#[derive(Clone, Debug)]
pub struct Pomc<F> {
    oracle: CountingOracle<F>,
    matroid: PartitionMatroid,
    population: Population,
    rng: ChaCha8Rng,
}

impl<F: SetFunction> Pomc<F> {
    /// Initialize with the evaluated empty solution. This initial evaluation
    /// consumes one oracle call, so `evaluations()` starts at 1 and
    /// thereafter equals 1 + the number of steps taken.
    pub fn new(function: F, matroid: PartitionMatroid, seed: u64) -> Result<Self> {
        if function.ground_size() != matroid.n() {
            return Err(Error::InvalidConfig(format!(
                "objective ground set size {} does not match matroid ground set size {}",
                function.ground_size(),
                matroid.n()
            )));
        }
        let mut oracle = CountingOracle::new(function);
        let empty = evaluate(Solution::empty(matroid.n()), &mut oracle, &matroid);
        Ok(Pomc {
            oracle,
            matroid,
            population: Population::with_initial(empty),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// One iteration: sample a parent uniformly, flip each bit independently
    /// with probability `1/n`, evaluate the offspring (one oracle call), and
    /// apply survivor selection.
    pub fn step(&mut self) {
        let parent_idx = self.rng.random_range(0..self.population.len());
        let parent = self.population.get(parent_idx).solution.clone();
        let offspring = mutate(&parent, &mut self.rng);
        let member = evaluate(offspring, &mut self.oracle, &self.matroid);
        self.population.insert(member);
    }

    /// Run exactly `iterations` steps.
    pub fn run(&mut self, iterations: u64) {
        for _ in 0..iterations {
            self.step();
        }
    }

    /// Handle a change event: replace the thresholds, re-derive every
    /// member's `f1` from its cached raw value (zero oracle calls), then
    /// remove members weakly dominated by another member.
    pub fn on_change(&mut self, new_thresholds: Vec<usize>) -> Result<()> {
        self.matroid.set_thresholds(new_thresholds)?;
        self.population.refresh_feasibility(&self.matroid);
        self.population.prune_dominated();
        Ok(())
    }

    /// The member maximizing `f1` (the empty solution is always present and
    /// feasible). Ties go to the smaller set, then the lexicographically
    /// lowest bit vector.
    pub fn best(&self) -> &Member {
        self.population.best()
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn matroid(&self) -> &PartitionMatroid {
        &self.matroid
    }

    /// Oracle calls so far; equal to 1 (init) + steps taken, regardless of
    /// change events.
    pub fn evaluations(&self) -> u64 {
        self.oracle.eval_count()
    }

    pub fn objective(&self) -> &F {
        self.oracle.function()
    }
}

/// Standard bit-flip mutation: each bit flips independently with
/// probability `1/n`, drawing one `f64` per bit in index order. No
/// resampling when nothing flips.
fn mutate<R: Rng>(parent: &Solution, rng: &mut R) -> Solution {
    let n = parent.len();
    let p = 1.0 / n as f64;
    let mut bits = parent.bits().to_vec();
    for b in &mut bits {
        if rng.random::<f64>() < p {
            *b = !*b;
        }
    }
    Solution::from_bits(bits)
}
