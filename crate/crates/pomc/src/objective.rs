use crate::solution::Solution;

/// A set function `f : 2^V -> R+` queried through the oracle model.
///
/// Implementations must be deterministic and must return finite,
/// non-negative values.
pub trait SetFunction {
    /// Size of the ground set `V`.
    fn ground_size(&self) -> usize;

    /// `f(X)`.
    fn value(&self, x: &Solution) -> f64;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, x: &Solution) -> f64 {
        (**self).value(x)
    }
}

/// Wraps a [`SetFunction`] and counts oracle calls. Time is measured in
/// evaluations, so every algorithm in this crate routes objective queries
/// through one of these; `eval_count` increments by exactly 1 per call.
#[derive(Clone, Debug)]
pub struct CountingOracle<F> {
    function: F,
    evals: u64,
}

impl<F: SetFunction> CountingOracle<F> {
    pub fn new(function: F) -> Self {
        CountingOracle { function, evals: 0 }
    }

    pub fn ground_size(&self) -> usize {
        self.function.ground_size()
    }

    /// One oracle call. Panics if the function violates its contract
    /// (non-finite or negative value).
    pub fn evaluate(&mut self, x: &Solution) -> f64 {
        self.evals += 1;
        let v = self.function.value(x);
        assert!(
            v.is_finite() && v >= 0.0,
            "objective returned {v}, expected a finite non-negative value"
        );
        // Normalize -0.0 so objective comparisons are total.
        if v == 0.0 {
            0.0
        } else {
            v
        }
    }

    pub fn eval_count(&self) -> u64 {
        self.evals
    }

    pub fn function(&self) -> &F {
        &self.function
    }
}

/// Modular (additive) objective: `f(X) = Σ_{i∈X} w_i`.
#[derive(Clone, Debug)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        Modular { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, x: &Solution) -> f64 {
        x.indices().map(|i| self.weights[i]).sum()
    }
}

/// Unweighted coverage objective: element `i` covers a fixed subset of a
/// universe (at most 64 items), and `f(X)` is the number of universe items
/// covered by the union. Monotone and submodular, with integer values, so
/// brute-force identities hold exactly in floating point.
#[derive(Clone, Debug)]
pub struct Coverage {
    masks: Vec<u64>,
}

impl Coverage {
    pub fn new(masks: Vec<u64>) -> Self {
        Coverage { masks }
    }

    /// Random instance: each of the `n` elements covers each of
    /// `universe <= 64` items independently with probability `p`.
    pub fn random<R: rand::Rng>(n: usize, universe: u32, p: f64, rng: &mut R) -> Self {
        assert!(universe <= 64);
        let masks = (0..n)
            .map(|_| {
                let mut m = 0u64;
                for item in 0..universe {
                    if rng.random::<f64>() < p {
                        m |= 1 << item;
                    }
                }
                m
            })
            .collect();
        Coverage { masks }
    }
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.masks.len()
    }

    fn value(&self, x: &Solution) -> f64 {
        let mut union = 0u64;
        for i in x.indices() {
            union |= self.masks[i];
        }
        union.count_ones() as f64
    }
}
