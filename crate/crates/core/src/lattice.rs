//! Finite pieces of the four planar lattice families.
//!
//! Sites are addressed by an integer unit-cell coordinate plus a sublattice
//! index. Balls are grown by graph distance from the origin site (cell
//! `(0, 0)`, sublattice 0) and are therefore nested; tori wrap whole cells
//! modulo `L` along both axes.
//!
//! Cell layouts:
//! - square: one site per cell, neighbors `(±1, 0)`, `(0, ±1)`;
//! - triangular: one site per cell over the basis `(1, 0)`, `(1/2, √3/2)`,
//!   so the six neighbors are `±(1, 0)`, `±(0, 1)`, `±(-1, 1)`;
//! - hexagonal: sites A (0) and B (1); A at `c` joins B at `c`, `c - (1, 0)`
//!   and `c - (0, 1)`;
//! - truncated square: a small square of sites E (0), N (1), W (2), S (3)
//!   per cell, joined around the square, with octagon-octagon edges from E
//!   to the W of the cell to the right and from N to the S of the cell above.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;
use crate::graph::{Graph, GraphBuilder, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeFamily {
    Square,
    Triangular,
    Hexagonal,
    TruncatedSquare,
}

impl LatticeFamily {
    pub const ALL: [LatticeFamily; 4] = [
        LatticeFamily::Square,
        LatticeFamily::Triangular,
        LatticeFamily::Hexagonal,
        LatticeFamily::TruncatedSquare,
    ];

    /// Degree of every vertex of the infinite lattice.
    pub fn degree(self) -> usize {
        match self {
            LatticeFamily::Square => 4,
            LatticeFamily::Triangular => 6,
            LatticeFamily::Hexagonal | LatticeFamily::TruncatedSquare => 3,
        }
    }

    pub fn sites_per_cell(self) -> u8 {
        match self {
            LatticeFamily::Square | LatticeFamily::Triangular => 1,
            LatticeFamily::Hexagonal => 2,
            LatticeFamily::TruncatedSquare => 4,
        }
    }

    pub fn is_triangle_free(self) -> bool {
        !matches!(self, LatticeFamily::Triangular)
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeFamily::Square => "square",
            LatticeFamily::Triangular => "triangular",
            LatticeFamily::Hexagonal => "hexagonal",
            LatticeFamily::TruncatedSquare => "truncated-square",
        }
    }

    /// Neighbors of `site` in the infinite lattice, in a fixed order.
    pub fn neighbors(self, site: Site) -> Vec<Site> {
        let (x, y) = site.cell;
        let at = |dx: i64, dy: i64, sub: u8| Site { cell: (x + dx, y + dy), sub };
        match self {
            LatticeFamily::Square => vec![at(1, 0, 0), at(0, 1, 0), at(-1, 0, 0), at(0, -1, 0)],
            LatticeFamily::Triangular => vec![
                at(1, 0, 0),
                at(0, 1, 0),
                at(-1, 1, 0),
                at(-1, 0, 0),
                at(0, -1, 0),
                at(1, -1, 0),
            ],
            LatticeFamily::Hexagonal => match site.sub {
                0 => vec![at(0, 0, 1), at(-1, 0, 1), at(0, -1, 1)],
                _ => vec![at(0, 0, 0), at(1, 0, 0), at(0, 1, 0)],
            },
            LatticeFamily::TruncatedSquare => match site.sub {
                0 => vec![at(0, 0, 1), at(0, 0, 3), at(1, 0, 2)],
                1 => vec![at(0, 0, 0), at(0, 0, 2), at(0, 1, 3)],
                2 => vec![at(0, 0, 1), at(0, 0, 3), at(-1, 0, 0)],
                _ => vec![at(0, 0, 2), at(0, 0, 0), at(0, -1, 1)],
            },
        }
    }
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeFamily {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "square" => Ok(LatticeFamily::Square),
            "triangular" => Ok(LatticeFamily::Triangular),
            "hexagonal" | "honeycomb" => Ok(LatticeFamily::Hexagonal),
            "truncated-square" | "truncatedsquare" => Ok(LatticeFamily::TruncatedSquare),
            _ => Err(LatticeError::UnknownFamily(s.to_string())),
        }
    }
}

/// A lattice site: unit cell plus sublattice index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub cell: (i64, i64),
    pub sub: u8,
}

impl Site {
    pub const ORIGIN: Site = Site { cell: (0, 0), sub: 0 };

    pub fn new(x: i64, y: i64, sub: u8) -> Self {
        Site { cell: (x, y), sub }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// All sites within this graph distance of the origin.
    Ball(usize),
    /// `L × L` cells with periodic wrapping.
    Torus(usize),
}

/// A finite lattice graph together with its site bookkeeping.
#[derive(Clone, Debug)]
pub struct LatticeGraph {
    pub graph: Graph,
    pub origin: VertexId,
    pub family: LatticeFamily,
    pub mode: BoundaryMode,
    sites: Vec<Site>,
    index: HashMap<Site, VertexId>,
}

impl LatticeGraph {
    pub fn site(&self, v: VertexId) -> Site {
        self.sites[v]
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Vertex at `site`, wrapping cell coordinates on a torus.
    pub fn vertex_at(&self, site: Site) -> Option<VertexId> {
        let key = match self.mode {
            BoundaryMode::Ball(_) => site,
            BoundaryMode::Torus(l) => {
                let l = l as i64;
                Site::new(site.cell.0.rem_euclid(l), site.cell.1.rem_euclid(l), site.sub)
            }
        };
        self.index.get(&key).copied()
    }
}

/// Builds a ball or torus of the given family.
pub fn build(family: LatticeFamily, mode: BoundaryMode) -> Result<LatticeGraph, LatticeError> {
    match mode {
        BoundaryMode::Ball(m) => build_ball(family, m),
        BoundaryMode::Torus(l) => build_torus(family, l),
    }
}

fn build_ball(family: LatticeFamily, radius: usize) -> Result<LatticeGraph, LatticeError> {
    if radius == 0 {
        return Err(LatticeError::ZeroRadius);
    }
    let mut index = HashMap::new();
    let mut sites = vec![Site::ORIGIN];
    let mut depth = vec![0usize];
    index.insert(Site::ORIGIN, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        if depth[u] == radius {
            continue;
        }
        for nb in family.neighbors(sites[u]) {
            if !index.contains_key(&nb) {
                index.insert(nb, sites.len());
                sites.push(nb);
                depth.push(depth[u] + 1);
                queue.push_back(sites.len() - 1);
            }
        }
    }
    let mut b = GraphBuilder::new(sites.len());
    for (u, &s) in sites.iter().enumerate() {
        for nb in family.neighbors(s) {
            if let Some(&v) = index.get(&nb) {
                if u < v {
                    b.add_edge(u, v)?;
                }
            }
        }
    }
    Ok(LatticeGraph {
        graph: b.build()?,
        origin: 0,
        family,
        mode: BoundaryMode::Ball(radius),
        sites,
        index,
    })
}

fn build_torus(family: LatticeFamily, l: usize) -> Result<LatticeGraph, LatticeError> {
    if l < 3 {
        return Err(LatticeError::TorusTooSmall(l));
    }
    let spc = family.sites_per_cell() as usize;
    let li = l as i64;
    let id = |s: Site| -> VertexId {
        let x = s.cell.0.rem_euclid(li) as usize;
        let y = s.cell.1.rem_euclid(li) as usize;
        (x * l + y) * spc + s.sub as usize
    };
    let mut sites = Vec::with_capacity(l * l * spc);
    for x in 0..li {
        for y in 0..li {
            for sub in 0..spc as u8 {
                sites.push(Site::new(x, y, sub));
            }
        }
    }
    let mut b = GraphBuilder::new(sites.len());
    for (u, &s) in sites.iter().enumerate() {
        for nb in family.neighbors(s) {
            let v = id(nb);
            if u < v {
                b.add_edge(u, v)?;
            }
        }
    }
    let index = sites.iter().enumerate().map(|(v, &s)| (s, v)).collect();
    Ok(LatticeGraph {
        graph: b.build()?,
        origin: 0,
        family,
        mode: BoundaryMode::Torus(l),
        sites,
        index,
    })
}

/// Fraction of ball vertices that miss at least one lattice neighbor.
pub fn boundary_fraction(lg: &LatticeGraph) -> Result<f64, LatticeError> {
    if let BoundaryMode::Torus(_) = lg.mode {
        return Err(LatticeError::NoBoundary);
    }
    let k = lg.family.degree();
    let g = &lg.graph;
    let boundary = (0..g.n()).filter(|&v| g.neighbor_count(v) < k).count();
    Ok(boundary as f64 / g.n() as f64)
}

/// Nested balls for strictly increasing radii.
pub fn swelling_sequence(
    family: LatticeFamily,
    radii: &[usize],
) -> Result<Vec<LatticeGraph>, LatticeError> {
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LatticeError::NonMonotoneRadii);
    }
    radii
        .iter()
        .map(|&m| build(family, BoundaryMode::Ball(m)))
        .collect()
}

// ---------------------------------------------------------------------------
// Pair classes
// ---------------------------------------------------------------------------

/// A vertex pair described relative to the origin site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairClass {
    pub family: LatticeFamily,
    /// Cell displacement of the target from the origin cell.
    pub offset: (i64, i64),
    /// Sublattice of the target.
    pub target_sub: u8,
    pub tag: String,
}

/// The two edge classes of the truncated square lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncatedEdge {
    /// Edge shared by a square and an octagon.
    SquareOctagon,
    /// Edge shared by two octagons.
    OctagonOctagon,
}

impl PairClass {
    fn with(family: LatticeFamily, offset: (i64, i64), target_sub: u8, tag: &str) -> Self {
        PairClass { family, offset, target_sub, tag: tag.to_string() }
    }

    pub fn square(dx: i64, dy: i64) -> Self {
        Self::with(LatticeFamily::Square, (dx, dy), 0, &format!("{dx},{dy}"))
    }

    pub fn triangular(dx: i64, dy: i64) -> Self {
        Self::with(LatticeFamily::Triangular, (dx, dy), 0, &format!("{dx},{dy}"))
    }

    pub fn triangular_d1() -> Self {
        Self::with(LatticeFamily::Triangular, (1, 0), 0, "d1")
    }

    /// Two steps with a 60° turn between them.
    pub fn triangular_turn60() -> Self {
        Self::with(LatticeFamily::Triangular, (1, 1), 0, "turn60")
    }

    /// Two steps in the same direction.
    pub fn triangular_straight2() -> Self {
        Self::with(LatticeFamily::Triangular, (2, 0), 0, "straight2")
    }

    pub fn hexagonal_d1() -> Self {
        Self::with(LatticeFamily::Hexagonal, (0, 0), 1, "d1")
    }

    pub fn hexagonal_d2() -> Self {
        Self::with(LatticeFamily::Hexagonal, (1, 0), 0, "d2")
    }

    pub fn truncated_square(edge: TruncatedEdge) -> Self {
        match edge {
            TruncatedEdge::SquareOctagon => {
                Self::with(LatticeFamily::TruncatedSquare, (0, 0), 1, "square-octagon")
            }
            TruncatedEdge::OctagonOctagon => {
                Self::with(LatticeFamily::TruncatedSquare, (1, 0), 2, "octagon-octagon")
            }
        }
    }

    /// Generic displacement with an explicit target sublattice.
    pub fn displacement(family: LatticeFamily, dx: i64, dy: i64, sub: u8) -> Self {
        let tag = if family.sites_per_cell() == 1 {
            format!("{dx},{dy}")
        } else {
            format!("{dx},{dy},{sub}")
        };
        Self::with(family, (dx, dy), sub, &tag)
    }

    /// Parses a named class (`d1`, `d2`, `turn60`, `straight2`,
    /// `square-octagon`, `octagon-octagon`) or `dx,dy[,sub]`.
    pub fn parse(family: LatticeFamily, text: &str) -> Result<Self, LatticeError> {
        let t = text.trim().to_ascii_lowercase();
        let named = match (family, t.as_str()) {
            (LatticeFamily::Square, "d1") => Some(Self::square(1, 0)),
            (LatticeFamily::Triangular, "d1") => Some(Self::triangular_d1()),
            (LatticeFamily::Triangular, "turn60" | "turn-60") => Some(Self::triangular_turn60()),
            (LatticeFamily::Triangular, "straight2" | "straight-2") => {
                Some(Self::triangular_straight2())
            }
            (LatticeFamily::Hexagonal, "d1") => Some(Self::hexagonal_d1()),
            (LatticeFamily::Hexagonal, "d2" | "2-path") => Some(Self::hexagonal_d2()),
            (LatticeFamily::TruncatedSquare, "square-octagon" | "sq-oct") => {
                Some(Self::truncated_square(TruncatedEdge::SquareOctagon))
            }
            (LatticeFamily::TruncatedSquare, "octagon-octagon" | "oct-oct") => {
                Some(Self::truncated_square(TruncatedEdge::OctagonOctagon))
            }
            _ => None,
        };
        if let Some(pc) = named {
            return Ok(pc);
        }
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        let bad = || LatticeError::UnknownPairClass(text.to_string());
        let num = |s: &str| s.parse::<i64>().map_err(|_| bad());
        match parts.as_slice() {
            [dx, dy] => Ok(Self::displacement(family, num(dx)?, num(dy)?, 0)),
            [dx, dy, sub] => {
                let sub: u8 = sub.parse().map_err(|_| bad())?;
                if sub >= family.sites_per_cell() {
                    return Err(bad());
                }
                Ok(Self::displacement(family, num(dx)?, num(dy)?, sub))
            }
            _ => Err(bad()),
        }
    }

    pub fn target_site(&self) -> Site {
        Site { cell: self.offset, sub: self.target_sub }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.tag)
    }
}

/// Origin and the vertex at the class's displacement.
pub fn resolve_pair(lg: &LatticeGraph, pc: &PairClass) -> Result<(VertexId, VertexId), LatticeError> {
    if pc.family != lg.family {
        return Err(LatticeError::WrongFamily {
            class: pc.to_string(),
            family: lg.family.to_string(),
        });
    }
    let target = lg
        .vertex_at(pc.target_site())
        .ok_or_else(|| LatticeError::PairOutsideLattice(pc.to_string()))?;
    if target == lg.origin {
        return Err(LatticeError::PairOutsideLattice(pc.to_string()));
    }
    Ok((lg.origin, target))
}

/// Pair classes of a subdivided lattice up to distance 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubdividedPair {
    /// Original vertex and an adjacent midpoint.
    D1,
    /// Two original vertices at distance 2 (class 2a).
    D2Original,
    /// Two midpoints at distance 2 (class 2b).
    D2Subdividing,
    /// Distance 3: an original vertex and a midpoint.
    D3,
}

impl SubdividedPair {
    pub const ALL: [SubdividedPair; 4] = [
        SubdividedPair::D1,
        SubdividedPair::D2Original,
        SubdividedPair::D2Subdividing,
        SubdividedPair::D3,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SubdividedPair::D1 => "d1",
            SubdividedPair::D2Original => "2a",
            SubdividedPair::D2Subdividing => "2b",
            SubdividedPair::D3 => "d3",
        }
    }

    pub fn distance(self) -> usize {
        match self {
            SubdividedPair::D1 => 1,
            SubdividedPair::D2Original | SubdividedPair::D2Subdividing => 2,
            SubdividedPair::D3 => 3,
        }
    }
}

impl FromStr for SubdividedPair {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d1" | "1" => Ok(SubdividedPair::D1),
            "2a" | "d2a" => Ok(SubdividedPair::D2Original),
            "2b" | "d2b" => Ok(SubdividedPair::D2Subdividing),
            "d3" | "3" => Ok(SubdividedPair::D3),
            _ => Err(LatticeError::UnknownPairClass(s.to_string())),
        }
    }
}

/// Resolves a subdivided pair class on `lg.graph.subdivide()`.
///
/// Relies on [`Graph::subdivide`] keeping original ids and placing the
/// midpoint of edge `e` at `n + e`.
pub fn resolve_subdivided_pair(
    lg: &LatticeGraph,
    which: SubdividedPair,
) -> Result<(VertexId, VertexId), LatticeError> {
    let g = &lg.graph;
    let n = g.n();
    let o = lg.origin;
    let outside = || LatticeError::PairOutsideLattice(format!("subdivided:{}", which.tag()));
    let nbrs = g.neighbors(o);
    let &(a, e_oa) = nbrs.first().ok_or_else(outside)?;
    let (_, e_ab) = g
        .neighbors(a)
        .iter()
        .copied()
        .find(|&(b, _)| b != o && !g.has_edge(o, b))
        .ok_or_else(outside)?;
    Ok(match which {
        SubdividedPair::D1 => (o, n + e_oa),
        SubdividedPair::D2Original => (o, a),
        SubdividedPair::D2Subdividing => {
            let &(_, e_other) = nbrs.get(1).ok_or_else(outside)?;
            (n + e_oa, n + e_other)
        }
        SubdividedPair::D3 => (o, n + e_ab),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_ball_one() {
        let lg = build(LatticeFamily::Square, BoundaryMode::Ball(1)).unwrap();
        assert_eq!((lg.graph.n(), lg.graph.m()), (5, 4));
        assert_eq!(lg.graph.neighbor_count(lg.origin), 4);
    }

    #[test]
    fn hexagonal_ball_one() {
        let lg = build(LatticeFamily::Hexagonal, BoundaryMode::Ball(1)).unwrap();
        assert_eq!((lg.graph.n(), lg.graph.m()), (4, 3));
        assert_eq!(lg.graph.neighbor_count(lg.origin), 3);
    }

    #[test]
    fn square_torus_four() {
        let lg = build(LatticeFamily::Square, BoundaryMode::Torus(4)).unwrap();
        assert_eq!((lg.graph.n(), lg.graph.m()), (16, 32));
        assert!((0..16).all(|v| lg.graph.neighbor_count(v) == 4));
    }

    #[test]
    fn torus_counts_every_family() {
        for family in LatticeFamily::ALL {
            for l in [3, 4, 7] {
                let lg = build(family, BoundaryMode::Torus(l)).unwrap();
                let k = family.degree();
                let n = family.sites_per_cell() as usize * l * l;
                assert_eq!(lg.graph.n(), n, "{family} L={l}");
                assert_eq!(lg.graph.m(), k * n / 2, "{family} L={l}");
                assert!((0..n).all(|v| lg.graph.neighbor_count(v) == k));
                assert!(lg.graph.is_connected());
            }
        }
    }

    #[test]
    fn small_torus_rejected() {
        assert!(matches!(
            build(LatticeFamily::Square, BoundaryMode::Torus(2)),
            Err(LatticeError::TorusTooSmall(2))
        ));
        assert!(matches!(
            build(LatticeFamily::Square, BoundaryMode::Ball(0)),
            Err(LatticeError::ZeroRadius)
        ));
    }

    #[test]
    fn ball_interior_is_regular() {
        for family in LatticeFamily::ALL {
            let m = 5;
            let lg = build(family, BoundaryMode::Ball(m)).unwrap();
            let dist = lg.graph.distances_from(lg.origin);
            assert!(lg.graph.is_connected());
            for v in 0..lg.graph.n() {
                let d = dist[v].unwrap();
                assert!(d <= m);
                if d < m {
                    assert_eq!(lg.graph.neighbor_count(v), family.degree(), "{family}");
                }
            }
        }
    }

    #[test]
    fn truncated_square_edge_classes() {
        // Every vertex: two edges on its square, one octagon-octagon edge.
        let lg = build(LatticeFamily::TruncatedSquare, BoundaryMode::Torus(4)).unwrap();
        for v in 0..lg.graph.n() {
            let s = lg.site(v);
            let same_cell = lg
                .graph
                .neighbors(v)
                .iter()
                .filter(|&&(w, _)| lg.site(w).cell == s.cell)
                .count();
            assert_eq!(same_cell, 2);
        }
        // Square edges lie on 4-cycles, octagon-octagon edges on none.
        let (o, sq) = resolve_pair(&lg, &PairClass::truncated_square(TruncatedEdge::SquareOctagon)).unwrap();
        let (_, oo) = resolve_pair(&lg, &PairClass::truncated_square(TruncatedEdge::OctagonOctagon)).unwrap();
        let on_four_cycle = |a: usize, b: usize| {
            lg.graph.neighbors(a).iter().any(|&(x, _)| {
                x != b && lg.graph.neighbors(b).iter().any(|&(y, _)| y != a && lg.graph.has_edge(x, y))
            })
        };
        assert!(on_four_cycle(o, sq));
        assert!(!on_four_cycle(o, oo));
    }

    #[test]
    fn boundary_fraction_examples() {
        let lg = build(LatticeFamily::Square, BoundaryMode::Ball(1)).unwrap();
        assert_eq!(boundary_fraction(&lg).unwrap(), 0.8);
        let t = build(LatticeFamily::Square, BoundaryMode::Torus(5)).unwrap();
        assert!(matches!(boundary_fraction(&t), Err(LatticeError::NoBoundary)));
    }

    #[test]
    fn resolve_square_pairs() {
        let lg = build(LatticeFamily::Square, BoundaryMode::Ball(5)).unwrap();
        let dist = lg.graph.distances_from(lg.origin);
        let (_, t) = resolve_pair(&lg, &PairClass::square(1, 0)).unwrap();
        assert_eq!(dist[t], Some(1));
        let (_, t) = resolve_pair(&lg, &PairClass::square(2, 1)).unwrap();
        assert_eq!(dist[t], Some(3));
        assert!(matches!(
            resolve_pair(&lg, &PairClass::square(4, 3)),
            Err(LatticeError::PairOutsideLattice(_))
        ));
        assert!(resolve_pair(&lg, &PairClass::hexagonal_d1()).is_err());
    }

    #[test]
    fn named_classes_have_nominal_distance() {
        let cases = [
            (PairClass::triangular_d1(), 1),
            (PairClass::triangular_turn60(), 2),
            (PairClass::triangular_straight2(), 2),
            (PairClass::hexagonal_d1(), 1),
            (PairClass::hexagonal_d2(), 2),
            (PairClass::truncated_square(TruncatedEdge::SquareOctagon), 1),
            (PairClass::truncated_square(TruncatedEdge::OctagonOctagon), 1),
            (PairClass::square(3, 0), 3),
        ];
        for (pc, d) in cases {
            let lg = build(pc.family, BoundaryMode::Ball(4)).unwrap();
            let (o, t) = resolve_pair(&lg, &pc).unwrap();
            assert_eq!(lg.graph.distances_from(o)[t], Some(d), "{pc}");
        }
    }

    #[test]
    fn subdivided_pairs_have_nominal_distance() {
        let lg = build(LatticeFamily::Hexagonal, BoundaryMode::Torus(6)).unwrap();
        let s = lg.graph.subdivide();
        for which in SubdividedPair::ALL {
            let (a, b) = resolve_subdivided_pair(&lg, which).unwrap();
            assert_eq!(s.distances_from(a)[b], Some(which.distance()), "{which:?}");
        }
        let (a, b) = resolve_subdivided_pair(&lg, SubdividedPair::D2Subdividing).unwrap();
        assert_eq!(s.label(a), Some(crate::graph::LABEL_SUBDIVIDING));
        assert_eq!(s.label(b), Some(crate::graph::LABEL_SUBDIVIDING));
    }

    #[test]
    fn swelling_sequence_nests() {
        let seq = swelling_sequence(LatticeFamily::Square, &[1, 2]).unwrap();
        assert_eq!(seq[0].graph.n(), 5);
        assert_eq!(seq[1].graph.n(), 13);
        for v in 0..seq[0].graph.n() {
            assert_eq!(seq[1].vertex_at(seq[0].site(v)), Some(v));
        }
        assert!(matches!(
            swelling_sequence(LatticeFamily::Square, &[2, 2]),
            Err(LatticeError::NonMonotoneRadii)
        ));
        let hex = swelling_sequence(LatticeFamily::Hexagonal, &[1, 2, 3]).unwrap();
        let f: Vec<f64> = hex.iter().map(|lg| boundary_fraction(lg).unwrap()).collect();
        assert!(f[0] > f[1] && f[1] > f[2], "{f:?}");
    }

    #[test]
    fn parse_pair_classes() {
        assert_eq!(PairClass::parse(LatticeFamily::Square, "2,1").unwrap(), PairClass::square(2, 1));
        assert_eq!(
            PairClass::parse(LatticeFamily::Hexagonal, "d2").unwrap(),
            PairClass::hexagonal_d2()
        );
        assert_eq!(
            PairClass::parse(LatticeFamily::Hexagonal, "0,0,1").unwrap().target_site(),
            Site::new(0, 0, 1)
        );
        assert!(PairClass::parse(LatticeFamily::Hexagonal, "0,0,2").is_err());
        assert!(PairClass::parse(LatticeFamily::Square, "knight").is_err());
        assert_eq!("honeycomb".parse::<LatticeFamily>().unwrap(), LatticeFamily::Hexagonal);
    }
}
