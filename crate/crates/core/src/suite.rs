//! Named small graphs and seeded random graphs used by checks and tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder, Scalar};

#[derive(Clone, Debug)]
pub struct SuiteGraph {
    pub name: String,
    pub graph: Graph,
}

impl SuiteGraph {
    fn new(name: impl Into<String>, graph: Graph) -> Self {
        SuiteGraph { name: name.into(), graph }
    }
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, &edges).expect("valid complete graph")
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("valid cycle")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("valid path")
}

/// `w × h` grid; vertex `(x, y)` has id `y·w + x`.
pub fn grid(w: usize, h: usize) -> Graph {
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                edges.push((v, v + 1));
            }
            if y + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    Graph::from_edges(w * h, &edges).expect("valid grid")
}

/// Outer 5-cycle on 0..5, inner pentagram on 5..10.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("valid Petersen graph")
}

/// Random spanning tree on shuffled labels plus each remaining pair with
/// probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for k in 1..n {
        let (u, v) = (order[k], order[rng.random_range(0..k)]);
        present[u][v] = true;
        present[v][u] = true;
        edges.push((u.min(v), u.max(v)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !present[i][j] && rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    Graph::from_edges(n, &edges).expect("valid random graph")
}

/// Same topology with conductances `p/q`, `p ∈ 1..=9`, `q ∈ 1..=5`.
pub fn with_random_rational_weights(g: &Graph, rng: &mut impl Rng) -> Graph {
    let mut b = GraphBuilder::new(g.n());
    for &(u, v) in g.edges() {
        let c = BigRational::new(BigInt::from(rng.random_range(1..=9)), BigInt::from(rng.random_range(1..=5)));
        b.add_weighted_edge(u, v, Scalar::Exact(c)).expect("valid weight");
    }
    b.build().expect("valid weighted graph")
}

pub fn with_seeded_weights(g: &Graph, seed: u64) -> Graph {
    with_random_rational_weights(g, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `count` seeded random connected graphs with `4 <= n <= max_n`.
pub fn random_graphs(seed: u64, count: usize, max_n: usize) -> Vec<SuiteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(4..=max_n);
            let p = rng.random_range(0.1..0.5);
            SuiteGraph::new(format!("random-{i}-n{n}"), random_connected(n, p, &mut rng))
        })
        .collect()
}

/// K4, K5, Petersen, C5..C9, 4×4 and 5×5 grids and 20 random graphs with
/// `n <= 14`, all with unit conductances.
pub fn finite_suite(seed: u64) -> Vec<SuiteGraph> {
    let mut out = vec![
        SuiteGraph::new("K4", complete(4)),
        SuiteGraph::new("K5", complete(5)),
        SuiteGraph::new("petersen", petersen()),
    ];
    for n in 5..=9 {
        out.push(SuiteGraph::new(format!("C{n}"), cycle(n)));
    }
    out.push(SuiteGraph::new("grid-4x4", grid(4, 4)));
    out.push(SuiteGraph::new("grid-5x5", grid(5, 5)));
    out.extend(random_graphs(seed, 20, 14));
    out
}

/// Unit suite followed by a weighted copy of each member.
pub fn finite_suite_with_weights(seed: u64) -> Vec<SuiteGraph> {
    let unit = finite_suite(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let weighted: Vec<SuiteGraph> = unit
        .iter()
        .map(|s| SuiteGraph::new(format!("{}-weighted", s.name), with_random_rational_weights(&s.graph, &mut rng)))
        .collect();
    unit.into_iter().chain(weighted).collect()
}
