//! Pareto optimization for subset selection under dynamic partition
//! matroid constraints.
//!
//! The optimizer ([`Pomc`]) maintains an archive of mutually non-dominated
//! solutions over the bi-objective `(f1, f2)` where `f1` is the objective
//! (or an infeasibility sentinel) and `f2 = -|X|`, evolving by uniform
//! parent selection and standard per-bit mutation. When constraint
//! thresholds change, cached raw objective values are re-interpreted under
//! the new feasibility and dominated members are pruned — no oracle calls
//! are spent on the change itself.
//!
//! Around the optimizer:
//! - [`greedy`]: a deterministic greedy baseline with restart.
//! - [`maxcut`]: the weighted random-graph benchmark objective.
//! - [`dynamics`]: threshold-level random walks and their integer mapping.
//! - [`metrics`]: brute-force verification oracles (feasible optimum,
//!   submodularity ratio, monotonicity term) and the executable
//!   approximation-bound formulas.
//! - [`stats`]: Mann-Whitney U (exact and asymptotic), sign-test
//!   classification, and batch aggregation.
//! - [`experiment`]: seeded, reproducible experiment harnesses and file
//!   emission (records line-JSON, CSV tables, metadata).

pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod fitness;
pub mod greedy;
pub mod matroid;
pub mod maxcut;
pub mod metrics;
pub mod objective;
pub mod pomc;
pub mod population;
pub mod solution;
pub mod stats;

pub use error::{Error, Result};
pub use fitness::{dominance, evaluate, BiFitness, Dominance, Member, ObjectiveValue};
pub use matroid::PartitionMatroid;
pub use objective::{CountingOracle, SetFunction};
pub use pomc::Pomc;
pub use population::Population;
pub use solution::Solution;
