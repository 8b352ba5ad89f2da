//! Walk enumeration and closed-walk counts.
//!
//! Walks may revisit vertices. Enumeration is depth-first and visits
//! neighbors in increasing id order, so the stream is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::WalkError;
use crate::graph::{Graph, VertexId};
use crate::lattice::{self, BoundaryMode, LatticeFamily};

/// Number of length-`s` walks from `v` to every vertex (row `v` of `A^s`).
pub fn walk_count_vector(g: &Graph, v: VertexId, s: usize) -> Result<Vec<u128>, WalkError> {
    if !g.is_unit() {
        return Err(WalkError::NotUnit);
    }
    let mut counts = vec![0u128; g.n()];
    counts[v] = 1;
    for _ in 0..s {
        let mut next = vec![0u128; g.n()];
        for (u, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(w, _) in g.neighbors(u) {
                next[w] = next[w].checked_add(c).ok_or(WalkError::Overflow)?;
            }
        }
        counts = next;
    }
    Ok(counts)
}

/// Δ_s at `v`: closed walks of length `s`, from the adjacency power.
pub fn closed_walk_count(g: &Graph, v: VertexId, s: usize) -> Result<u128, WalkError> {
    Ok(walk_count_vector(g, v, s)?[v])
}

/// Δ_s at `v` by explicit enumeration. Exponential; small `s` only.
pub fn closed_walk_count_dfs(g: &Graph, v: VertexId, s: usize) -> Result<u128, WalkError> {
    if !g.is_unit() {
        return Err(WalkError::NotUnit);
    }
    Ok(enumerate_walks(g, v, s).filter(|w| *w.last().expect("non-empty") == v).count() as u128)
}

/// Depth-first stream of every walk `v = v_0 ∼ v_1 ∼ … ∼ v_r`.
pub struct Walks<'g> {
    graph: &'g Graph,
    length: usize,
    path: Vec<VertexId>,
    next: Vec<usize>,
    done: bool,
}

pub fn enumerate_walks(g: &Graph, v: VertexId, r: usize) -> Walks<'_> {
    Walks {
        graph: g,
        length: r,
        path: vec![v],
        next: vec![0],
        done: false,
    }
}

impl Iterator for Walks<'_> {
    type Item = Vec<VertexId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.length == 0 {
            self.done = true;
            return Some(self.path.clone());
        }
        loop {
            let depth = self.path.len() - 1;
            let u = self.path[depth];
            let nbrs = self.graph.neighbors(u);
            if self.next[depth] < nbrs.len() {
                let w = nbrs[self.next[depth]].0;
                self.next[depth] += 1;
                self.path.push(w);
                if self.path.len() == self.length + 1 {
                    let walk = self.path.clone();
                    self.path.pop();
                    return Some(walk);
                }
                self.next.push(0);
            } else {
                self.path.pop();
                self.next.pop();
                if self.path.is_empty() {
                    self.done = true;
                    return None;
                }
            }
        }
    }
}

/// Which walks a sum ranges over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkFilter {
    #[default]
    All,
    /// Drops length-3 walks `v x v w`, `v w x w` and length-4 walks
    /// `v x y z w` with `y ∈ {v, w}` or `z = x`.
    NonDegenerate,
}

/// True for the backtracking shapes that shorten the walk's reach.
///
/// Only defined for lengths 3 and 4.
pub fn is_degenerate(walk: &[VertexId]) -> Result<bool, WalkError> {
    match walk.len() - 1 {
        3 => {
            let (v, x, y, w) = (walk[0], walk[1], walk[2], walk[3]);
            Ok(y == v || w == x)
        }
        4 => {
            let (v, x, y, z, w) = (walk[0], walk[1], walk[2], walk[3], walk[4]);
            Ok(y == v || y == w || z == x)
        }
        r => Err(WalkError::UnsupportedCensus(r)),
    }
}

impl WalkFilter {
    pub fn admits(self, walk: &[VertexId]) -> Result<bool, WalkError> {
        match self {
            WalkFilter::All => Ok(true),
            WalkFilter::NonDegenerate => Ok(!is_degenerate(walk)?),
        }
    }
}

/// Endpoint multiplicities of the walks from `v` that pass `filter`.
pub fn endpoint_multiplicities(
    g: &Graph,
    v: VertexId,
    r: usize,
    filter: WalkFilter,
) -> Result<BTreeMap<VertexId, u64>, WalkError> {
    if r == 0 {
        return Err(WalkError::ZeroLength);
    }
    let mut out = BTreeMap::new();
    for walk in enumerate_walks(g, v, r) {
        if filter.admits(&walk)? {
            *out.entry(*walk.last().expect("non-empty")).or_insert(0) += 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkCensus {
    pub r: usize,
    pub total: u64,
    pub degenerate: u64,
    /// All length-`r` walks by endpoint.
    pub multiplicities: BTreeMap<VertexId, u64>,
    /// Degenerate walks by endpoint.
    pub degenerate_multiplicities: BTreeMap<VertexId, u64>,
}

impl WalkCensus {
    pub fn non_degenerate(&self) -> u64 {
        self.total - self.degenerate
    }
}

pub fn degenerate_census(g: &Graph, v: VertexId, r: usize) -> Result<WalkCensus, WalkError> {
    if r != 3 && r != 4 {
        return Err(WalkError::UnsupportedCensus(r));
    }
    let mut census = WalkCensus {
        r,
        total: 0,
        degenerate: 0,
        multiplicities: BTreeMap::new(),
        degenerate_multiplicities: BTreeMap::new(),
    };
    for walk in enumerate_walks(g, v, r) {
        let end = *walk.last().expect("non-empty");
        census.total += 1;
        *census.multiplicities.entry(end).or_insert(0) += 1;
        if is_degenerate(&walk)? {
            census.degenerate += 1;
            *census.degenerate_multiplicities.entry(end).or_insert(0) += 1;
        }
    }
    Ok(census)
}

/// Δ_0 … Δ_{s_max} at one vertex of a `degree`-regular graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkCountTable {
    pub degree: usize,
    pub deltas: Vec<u64>,
}

impl WalkCountTable {
    pub fn delta(&self, s: usize) -> Option<u64> {
        self.deltas.get(s).copied()
    }
}

pub fn walk_count_table(g: &Graph, v: VertexId, s_max: usize) -> Result<WalkCountTable, WalkError> {
    let deltas = (0..=s_max)
        .map(|s| closed_walk_count(g, v, s).and_then(|d| u64::try_from(d).map_err(|_| WalkError::Overflow)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WalkCountTable { degree: g.neighbor_count(v), deltas })
}

/// Δ_s for the infinite lattice, read off the origin of a ball large enough
/// that no closed walk of length `s_max` meets the boundary.
pub fn lattice_walk_table(family: LatticeFamily, s_max: usize) -> Result<WalkCountTable, WalkError> {
    let lg = lattice::build(family, BoundaryMode::Ball(s_max + 1)).expect("positive radius");
    let mut table = walk_count_table(&lg.graph, lg.origin, s_max)?;
    table.degree = family.degree();
    Ok(table)
}
