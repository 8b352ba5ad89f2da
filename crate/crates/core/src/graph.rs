//! Simple undirected graphs with per-edge conductances.
//!
//! A [`Graph`] is immutable once built. Every graph carries a single
//! [`ScalarKind`]: either all conductances are exact rationals (the default,
//! and the only kind the exact oracle accepts) or all are `f64`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::io::{BufReader, Read, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Label assigned by [`Graph::subdivide`] to vertices of the input graph.
pub const LABEL_ORIGINAL: &str = "original";
/// Label assigned by [`Graph::subdivide`] to the inserted midpoint vertices.
pub const LABEL_SUBDIVIDING: &str = "subdividing";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Exact,
    Float,
}

/// A number that is either an exact rational or a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn one(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Exact => Scalar::Exact(BigRational::one()),
            ScalarKind::Float => Scalar::Float(1.0),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Exact(_) => ScalarKind::Exact,
            Scalar::Float(_) => ScalarKind::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => x.is_finite() && *x > 0.0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl Serialize for Scalar {
    /// `{"exact": "p/q", "value": f}` for rationals, `{"value": f}` for floats.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Scalar", 2)?;
        if let Scalar::Exact(r) = self {
            st.serialize_field("exact", &format!("{}/{}", r.numer(), r.denom()))?;
        }
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

/// Weighted degree: the sum of conductances incident to a vertex.
pub type WeightedDegree = Scalar;

/// Converts a big rational to the nearest-ish `f64`, surviving huge
/// numerators and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both parts down to a comparable bit length first.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 1000).max(0) as usize;
    let shift_d = (db - 1000).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

#[derive(Clone, Debug)]
enum Weights {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Finite simple undirected graph with positive conductances.
#[derive(Clone, Debug)]
pub struct Graph {
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    weights: Weights,
    float_weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

/// Incremental, validating constructor for [`Graph`].
#[derive(Debug)]
pub struct GraphBuilder {
    n: usize,
    kind: Option<ScalarKind>,
    edges: Vec<(VertexId, VertexId, Scalar)>,
    seen: HashSet<(VertexId, VertexId)>,
    labels: Option<Vec<String>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            kind: None,
            edges: Vec::new(),
            seen: HashSet::new(),
            labels: None,
        }
    }

    /// Fixes the scalar kind up front; otherwise the first weighted edge
    /// decides and unit edges default to exact.
    pub fn with_kind(mut self, kind: ScalarKind) -> Self {
        self.kind = Some(kind);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Adds a unit-conductance edge.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        let kind = self.kind.unwrap_or(ScalarKind::Exact);
        self.add_weighted_edge(u, v, Scalar::one(kind))
    }

    pub fn add_weighted_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        conductance: Scalar,
    ) -> Result<EdgeId, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::InvalidVertex { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.kind {
            Some(k) if k != conductance.kind() => return Err(GraphError::MixedScalarKinds),
            Some(_) => {}
            None => self.kind = Some(conductance.kind()),
        }
        if !conductance.is_positive() {
            return Err(GraphError::NonPositiveConductance { u, v });
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return Err(GraphError::DuplicateEdge(key.0, key.1));
        }
        self.edges.push((u, v, conductance));
        Ok(self.edges.len() - 1)
    }

    pub fn labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount { expected: self.n, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        if self.n == 0 {
            return Err(GraphError::Empty);
        }
        let kind = self.kind.unwrap_or(ScalarKind::Exact);
        let mut adjacency = vec![Vec::new(); self.n];
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut exact = Vec::new();
        let mut float = Vec::new();
        let mut float_weights = Vec::with_capacity(self.edges.len());
        for (e, (u, v, c)) in self.edges.into_iter().enumerate() {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
            edges.push((u, v));
            float_weights.push(c.to_f64());
            match c {
                Scalar::Exact(r) => exact.push(r),
                Scalar::Float(x) => float.push(x),
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let weights = match kind {
            ScalarKind::Exact => Weights::Exact(exact),
            ScalarKind::Float => Weights::Float(float),
        };
        Ok(Graph {
            edges,
            adjacency,
            weights,
            float_weights,
            labels: self.labels,
        })
    }
}

impl Graph {
    /// Unit-conductance exact graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        b.build()
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Neighbors of `v` with the connecting edge id, sorted by neighbor id.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn neighbor_count(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        match self.weights {
            Weights::Exact(_) => ScalarKind::Exact,
            Weights::Float(_) => ScalarKind::Float,
        }
    }

    pub fn conductance(&self, e: EdgeId) -> Scalar {
        match &self.weights {
            Weights::Exact(w) => Scalar::Exact(w[e].clone()),
            Weights::Float(w) => Scalar::Float(w[e]),
        }
    }

    pub fn conductance_f64(&self, e: EdgeId) -> f64 {
        self.float_weights[e]
    }

    /// `None` on float graphs.
    pub fn conductance_exact(&self, e: EdgeId) -> Option<&BigRational> {
        match &self.weights {
            Weights::Exact(w) => Some(&w[e]),
            Weights::Float(_) => None,
        }
    }

    /// True when every conductance is exactly one.
    pub fn is_unit(&self) -> bool {
        match &self.weights {
            Weights::Exact(w) => w.iter().all(One::is_one),
            Weights::Float(w) => w.iter().all(|&c| c == 1.0),
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<WeightedDegree, GraphError> {
        if v >= self.n() {
            return Err(GraphError::InvalidVertex { vertex: v, n: self.n() });
        }
        Ok(match &self.weights {
            Weights::Exact(w) => Scalar::Exact(
                self.adjacency[v]
                    .iter()
                    .fold(BigRational::zero(), |acc, &(_, e)| acc + &w[e]),
            ),
            Weights::Float(_) => Scalar::Float(self.degree_f64(v)),
        })
    }

    pub fn degree_f64(&self, v: VertexId) -> f64 {
        self.adjacency[v]
            .iter()
            .map(|&(_, e)| self.float_weights[e])
            .sum()
    }

    /// Exact weighted degree; `None` on float graphs.
    pub fn degree_exact(&self, v: VertexId) -> Option<BigRational> {
        match &self.weights {
            Weights::Exact(w) => Some(
                self.adjacency[v]
                    .iter()
                    .fold(BigRational::zero(), |acc, &(_, e)| acc + &w[e]),
            ),
            Weights::Float(_) => None,
        }
    }

    /// Σ_v deg(v), equal to twice the total conductance.
    pub fn total_degree(&self) -> Scalar {
        match &self.weights {
            Weights::Exact(w) => {
                let s = w.iter().fold(BigRational::zero(), |acc, c| acc + c);
                Scalar::Exact(s * BigRational::from_integer(BigInt::from(2)))
            }
            Weights::Float(w) => Scalar::Float(2.0 * w.iter().sum::<f64>()),
        }
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Returns a copy carrying the given vertex labels.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Graph, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::LabelCount { expected: self.n(), got: labels.len() });
        }
        let mut g = self.clone();
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|d| d.is_some())
    }

    /// Unweighted BFS distances from `source`.
    pub fn distances_from(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &(w, _) in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Copy of the graph without edge `e`; vertex ids are unchanged.
    pub fn without_edge(&self, e: EdgeId) -> Graph {
        let mut b = GraphBuilder::new(self.n()).with_kind(self.scalar_kind());
        for (f, &(u, v)) in self.edges.iter().enumerate() {
            if f != e {
                b.add_weighted_edge(u, v, self.conductance(f))
                    .expect("edges of a valid graph stay valid");
            }
        }
        let mut g = b.build().expect("non-empty");
        g.labels = self.labels.clone();
        g
    }

    /// Inserts a midpoint vertex on every edge.
    ///
    /// Original ids are kept; the midpoint of edge `e` gets id `n + e`. Both
    /// halves inherit the original conductance, so unit edges stay unit.
    pub fn subdivide(&self) -> Graph {
        let n = self.n();
        let mut b = GraphBuilder::new(n + self.m()).with_kind(self.scalar_kind());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let c = self.conductance(e);
            b.add_weighted_edge(u, n + e, c.clone()).expect("fresh vertex");
            b.add_weighted_edge(n + e, v, c).expect("fresh vertex");
        }
        let labels = (0..n + self.m())
            .map(|v| if v < n { LABEL_ORIGINAL } else { LABEL_SUBDIVIDING }.to_string())
            .collect();
        b.labels(labels).and_then(GraphBuilder::build).expect("valid subdivision")
    }
}

// ---------------------------------------------------------------------------
// Edge-list text format
// ---------------------------------------------------------------------------

const SCALAR_DIRECTIVE: &str = "scalar:";
const VERTICES_DIRECTIVE: &str = "vertices:";

/// Parses an exact conductance token: integer, `p/q`, or plain decimal.
fn parse_exact(token: &str) -> Option<BigRational> {
    if let Some((p, q)) = token.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(numer, denom);
    Some(if neg { -r } else { r })
}

fn parse_float(token: &str) -> Option<f64> {
    if let Some((p, q)) = token.split_once('/') {
        let p: f64 = p.trim().parse().ok()?;
        let q: f64 = q.trim().parse().ok()?;
        return Some(p / q);
    }
    token.parse().ok()
}

/// Parses the edge-list format: `u v [conductance]` per line, `#` comments.
///
/// Two optional comment directives are honoured: `# scalar: float|exact`
/// (default exact) and `# vertices: N` (default max id + 1).
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut kind = ScalarKind::Exact;
    let mut declared_n: Option<usize> = None;
    let mut rows: Vec<(usize, VertexId, VertexId, Option<&str>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (content, comment) = match raw.split_once('#') {
            Some((c, rest)) => (c, Some(rest.trim())),
            None => (raw, None),
        };
        if let Some(comment) = comment {
            if let Some(value) = comment.strip_prefix(SCALAR_DIRECTIVE) {
                kind = match value.trim() {
                    "exact" => ScalarKind::Exact,
                    "float" => ScalarKind::Float,
                    other => {
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: format!("unknown scalar kind {other:?}"),
                        })
                    }
                };
            } else if let Some(value) = comment.strip_prefix(VERTICES_DIRECTIVE) {
                declared_n = Some(value.trim().parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    message: format!("bad vertex count {:?}", value.trim()),
                })?);
            }
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(GraphError::Parse {
                line: line_no,
                message: format!("expected `u v [conductance]`, got {} fields", tokens.len()),
            });
        }
        let parse_id = |t: &str| {
            t.parse::<VertexId>().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("bad vertex id {t:?}"),
            })
        };
        rows.push((line_no, parse_id(tokens[0])?, parse_id(tokens[1])?, tokens.get(2).copied()));
    }
    let max_id = rows.iter().map(|&(_, u, v, _)| u.max(v) + 1).max().unwrap_or(0);
    let n = declared_n.unwrap_or(max_id).max(max_id);
    let mut b = GraphBuilder::new(n).with_kind(kind);
    for (line, u, v, token) in rows {
        let c = match token {
            None => Scalar::one(kind),
            Some(t) => {
                let parsed = match kind {
                    ScalarKind::Exact => parse_exact(t).map(Scalar::Exact),
                    ScalarKind::Float => parse_float(t).map(Scalar::Float),
                };
                parsed.ok_or_else(|| GraphError::Parse {
                    line,
                    message: format!("bad conductance {t:?}"),
                })?
            }
        };
        b.add_weighted_edge(u, v, c).map_err(|e| match e {
            GraphError::Parse { .. } => e,
            other => GraphError::Parse { line, message: other.to_string() },
        })?;
    }
    b.build()
}

pub fn load_edge_list<R: Read>(source: R) -> Result<Graph, GraphError> {
    let mut text = String::new();
    BufReader::new(source).read_to_string(&mut text)?;
    parse_edge_list(&text)
}

/// Writes the canonical edge-list form; [`parse_edge_list`] inverts it.
pub fn save_edge_list<W: Write>(g: &Graph, mut sink: W) -> Result<(), GraphError> {
    let kind = match g.scalar_kind() {
        ScalarKind::Exact => "exact",
        ScalarKind::Float => "float",
    };
    writeln!(sink, "# {SCALAR_DIRECTIVE} {kind}")?;
    writeln!(sink, "# {VERTICES_DIRECTIVE} {}", g.n())?;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match g.conductance(e) {
            Scalar::Exact(r) if r.is_one() => writeln!(sink, "{u} {v}")?,
            Scalar::Exact(r) if r.denom().is_one() => writeln!(sink, "{u} {v} {}", r.numer())?,
            Scalar::Exact(r) => writeln!(sink, "{u} {v} {}/{}", r.numer(), r.denom())?,
            Scalar::Float(x) => writeln!(sink, "{u} {v} {x:?}")?,
        }
    }
    Ok(())
}

pub fn to_edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    save_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}
