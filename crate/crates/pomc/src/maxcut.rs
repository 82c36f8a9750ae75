//! Weighted undirected max-cut objective and the random graph benchmark
//! generator.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::objective::SetFunction;
use crate::solution::Solution;

/// Undirected graph with edge weights in `[0, 1]`, stored once per
/// unordered pair (`u < v`), no self-loops, no duplicates. Non-edges have
/// implicit weight 0.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) weight {w} outside [0, 1]"
                )));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
            normalized.push((a, b, w));
        }
        Ok(WeightedGraph {
            n,
            edges: normalized,
        })
    }

    /// Random graph with exactly `floor(density * n^2)` distinct unordered
    /// edges on distinct vertices, each weight uniform on `[0, 1)`.
    ///
    /// Edges are rejection-sampled as vertex pairs; a weight is drawn only
    /// when a pair is accepted, and the edge list is sorted afterwards, so
    /// the result is a pure function of `(n, density, rng state)`.
    pub fn generate<R: Rng>(n: usize, density: f64, rng: &mut R) -> Result<Self> {
        if !(density > 0.0 && density <= 1.0) {
            return Err(Error::InvalidGraph(format!(
                "density {density} outside (0, 1]"
            )));
        }
        let target = (density * (n * n) as f64).floor() as usize;
        let max_edges = n * n.saturating_sub(1) / 2;
        if target > max_edges {
            return Err(Error::InvalidGraph(format!(
                "floor(density * n^2) = {target} exceeds the {max_edges} distinct pairs on {n} vertices"
            )));
        }
        let mut seen = HashSet::with_capacity(target);
        let mut edges = Vec::with_capacity(target);
        while edges.len() < target {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if seen.insert((a, b)) {
                edges.push((a, b, rng.random::<f64>()));
            }
        }
        edges.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        Ok(WeightedGraph { n, edges })
    }

    /// Three vertices, all pairs connected with weight 1.
    pub fn triangle() -> Self {
        WeightedGraph {
            n: 3,
            edges: vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Total weight of edges with exactly one endpoint in `X`.
    pub fn cut_value(&self, x: &Solution) -> f64 {
        assert_eq!(
            x.len(),
            self.n,
            "solution length {} does not match vertex count {}",
            x.len(),
            self.n
        );
        self.edges
            .iter()
            .filter(|&&(u, v, _)| x.contains(u) != x.contains(v))
            .map(|&(_, _, w)| w)
            .sum()
    }

    /// Text serialization: first line `n m`, then `m` lines `u v w`.
    /// Weights print in shortest round-trip decimal form, so
    /// parse(write(g)) == g bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v, w) in &self.edges {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::GraphFormat("empty file".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .ok_or_else(|| Error::GraphFormat("missing vertex count".into()))?
            .parse()
            .map_err(|e| Error::GraphFormat(format!("bad vertex count: {e}")))?;
        let m: usize = parts
            .next()
            .ok_or_else(|| Error::GraphFormat("missing edge count".into()))?
            .parse()
            .map_err(|e| Error::GraphFormat(format!("bad edge count: {e}")))?;
        if parts.next().is_some() {
            return Err(Error::GraphFormat("trailing tokens in header".into()));
        }
        let mut edges = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse_err =
                |what: &str| Error::GraphFormat(format!("line {}: bad {what}", lineno + 2));
            let u: usize = parts
                .next()
                .ok_or_else(|| parse_err("edge"))?
                .parse()
                .map_err(|_| parse_err("vertex"))?;
            let v: usize = parts
                .next()
                .ok_or_else(|| parse_err("edge"))?
                .parse()
                .map_err(|_| parse_err("vertex"))?;
            let w: f64 = parts
                .next()
                .ok_or_else(|| parse_err("edge"))?
                .parse()
                .map_err(|_| parse_err("weight"))?;
            if parts.next().is_some() {
                return Err(parse_err("edge: trailing tokens"));
            }
            edges.push((u, v, w));
        }
        if edges.len() != m {
            return Err(Error::GraphFormat(format!(
                "header promises {m} edges, found {}",
                edges.len()
            )));
        }
        WeightedGraph::new(n, edges).map_err(|e| Error::GraphFormat(e.to_string()))
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        WeightedGraph::from_text(&text)
    }
}

/// Max-cut as a [`SetFunction`]. The graph is immutable and shared, so
/// clones are cheap and instances can run concurrently.
#[derive(Clone, Debug)]
pub struct MaxCut {
    graph: Arc<WeightedGraph>,
}

impl MaxCut {
    pub fn new(graph: WeightedGraph) -> Self {
        MaxCut {
            graph: Arc::new(graph),
        }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
}

impl SetFunction for MaxCut {
    fn ground_size(&self) -> usize {
        self.graph.n()
    }

    fn value(&self, x: &Solution) -> f64 {
        self.graph.cut_value(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generate_exact_edge_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = WeightedGraph::generate(200, 0.01, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 400);
        let g = WeightedGraph::generate(200, 0.2, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 8000);
    }

    #[test]
    fn generate_small_graph_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = WeightedGraph::generate(10, 0.05, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 5);
        let mut pairs = HashSet::new();
        for &(u, v, w) in g.edges() {
            assert!(u < v && v < 10);
            assert!((0.0..=1.0).contains(&w));
            assert!(pairs.insert((u, v)));
        }
    }

    #[test]
    fn generate_is_deterministic_per_seed() {
        let a = WeightedGraph::generate(50, 0.1, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = WeightedGraph::generate(50, 0.1, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generate_rejects_impossible_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // floor(0.6 * 16) = 9 > C(4,2) = 6.
        assert!(WeightedGraph::generate(4, 0.6, &mut rng).is_err());
        assert!(WeightedGraph::generate(4, 0.0, &mut rng).is_err());
        assert!(WeightedGraph::generate(4, 1.5, &mut rng).is_err());
    }

    #[test]
    fn cut_of_empty_and_full_sets_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = WeightedGraph::generate(12, 0.3, &mut rng).unwrap();
        assert_eq!(g.cut_value(&Solution::empty(12)), 0.0);
        assert_eq!(g.cut_value(&Solution::full(12)), 0.0);
    }

    #[test]
    fn triangle_single_vertex_cut_is_two() {
        let g = WeightedGraph::triangle();
        assert_eq!(g.cut_value(&Solution::from_indices(3, &[0])), 2.0);
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(WeightedGraph::new(3, vec![(0, 0, 0.5)]).is_err());
        assert!(WeightedGraph::new(3, vec![(0, 3, 0.5)]).is_err());
        assert!(WeightedGraph::new(3, vec![(0, 1, 1.5)]).is_err());
        assert!(WeightedGraph::new(3, vec![(0, 1, f64::NAN)]).is_err());
        assert!(WeightedGraph::new(3, vec![(0, 1, 0.5), (1, 0, 0.2)]).is_err());
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(WeightedGraph::from_text("").is_err());
        assert!(WeightedGraph::from_text("3\n").is_err());
        assert!(WeightedGraph::from_text("3 1\n").is_err());
        assert!(WeightedGraph::from_text("3 1\n0 1 0.5\n0 2 0.5\n").is_err());
        assert!(WeightedGraph::from_text("3 1\n0 1 nope\n").is_err());
        assert!(WeightedGraph::from_text("3 1\n0 1 NaN\n").is_err());
        assert!(WeightedGraph::from_text("3 1\n0 1 0.5 junk\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip_is_bit_exact(seed in 0u64..500, n in 2usize..30, frac in 0.01f64..0.4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let density = frac.min((n * (n - 1) / 2) as f64 / (n * n) as f64);
            prop_assume!(density > 0.0);
            let g = WeightedGraph::generate(n, density, &mut rng).unwrap();
            let parsed = WeightedGraph::from_text(&g.to_text()).unwrap();
            prop_assert_eq!(&parsed, &g);
            prop_assert_eq!(parsed.to_text(), g.to_text());
        }

        #[test]
        fn cut_is_symmetric_under_complement(seed in 0u64..500, mask in 0u64..64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = WeightedGraph::generate(6, 0.3, &mut rng).unwrap();
            let x = Solution::from_mask(6, mask);
            prop_assert_eq!(g.cut_value(&x), g.cut_value(&x.complement()));
        }
    }
}
