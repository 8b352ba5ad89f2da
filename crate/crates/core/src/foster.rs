//! Foster identities on finite graphs and resistance sum rules on lattices.
//!
//! On a finite connected graph with walk transition matrix `P`, the sum over
//! every walk `i = v_0 ∼ v_1 ∼ … ∼ v_r = j` of
//! `C(walk) · R_ij / (deg v_1 ⋯ deg v_{r-1})` equals
//! `2 (Σ_{s<r} tr(P^s) - r)`, where `C(walk)` is the product of the edge
//! conductances along the walk (1 for unit graphs). Passing to a smallish
//! vertex-transitive lattice of degree `k` gives the sum rule
//! `Σ_walks R_{v_0 v_r} = 2 k^{r-1} Σ_{s<r} Δ_s / k^s`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::FosterError;
use crate::exact::{self, ExactConfig, RatMatrix};
use crate::graph::{ratio_to_f64, Graph, Scalar, ScalarKind, VertexId};
use crate::lattice::{self, BoundaryMode, LatticeFamily, Site};
use crate::par;
use crate::solver::{self, ExtrapolationResult, LaplacianSystem, SolveConfig, SweepConfig};
use crate::walks::{self, WalkCountTable, WalkFilter};

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Arithmetic used for a finite check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumRuleReport {
    pub context: String,
    pub r: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub residual: Scalar,
    pub kind: ScalarKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walks: Option<WalkSummary>,
}

impl SumRuleReport {
    fn new(context: String, r: usize, lhs: Scalar, rhs: Scalar, walks: Option<WalkSummary>) -> Self {
        let residual = match (&lhs, &rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            (a, b) => Scalar::Float(a.to_f64() - b.to_f64()),
        };
        let kind = residual.kind();
        SumRuleReport { context, r, lhs, rhs, residual, kind, walks }
    }

    /// Exact zero for exact reports; `|residual| <= tol` otherwise.
    pub fn holds(&self, tol: f64) -> bool {
        match &self.residual {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkSummary {
    pub walks: u64,
    pub filter: WalkFilter,
}

// ---------------------------------------------------------------------------
// Finite graphs
// ---------------------------------------------------------------------------

/// `W_r = A (D⁻¹ A)^{r-1}`: entry `(i, j)` sums `C(walk) / (deg v_1 ⋯ deg v_{r-1})`
/// over length-`r` walks from `i` to `j`.
pub fn walk_weight_matrix(g: &Graph, r: usize) -> Result<RatMatrix, FosterError> {
    if r == 0 {
        return Err(FosterError::ZeroLength);
    }
    let n = g.n();
    let c = |e| g.conductance_exact(e).cloned().ok_or(crate::error::OracleError::FloatGraph);
    let inv_deg: Vec<BigRational> = (0..n)
        .map(|v| g.degree_exact(v).map(|d| d.recip()).ok_or(crate::error::OracleError::FloatGraph))
        .collect::<Result<_, _>>()?;
    let mut w: RatMatrix = (0..n).map(|_| vec![BigRational::zero(); n]).collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let ce = c(e)?;
        w[u][v] = ce.clone();
        w[v][u] = ce;
    }
    for _ in 1..r {
        let next = w
            .iter()
            .map(|row| {
                let mut out = vec![BigRational::zero(); n];
                for (k, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let scaled = x * &inv_deg[k];
                    for &(j, e) in g.neighbors(k) {
                        out[j] += &scaled * g.conductance_exact(e).expect("exact graph");
                    }
                }
                out
            })
            .collect();
        w = next;
    }
    Ok(w)
}

fn walk_weight_matrix_f64(g: &Graph, r: usize) -> Vec<Vec<f64>> {
    let n = g.n();
    let inv_deg: Vec<f64> = (0..n).map(|v| 1.0 / g.degree_f64(v)).collect();
    let mut w = vec![vec![0.0; n]; n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        w[u][v] = g.conductance_f64(e);
        w[v][u] = g.conductance_f64(e);
    }
    for _ in 1..r {
        w = w
            .iter()
            .map(|row| {
                let mut out = vec![0.0; n];
                for (k, &x) in row.iter().enumerate() {
                    if x != 0.0 {
                        for &(j, e) in g.neighbors(k) {
                            out[j] += x * inv_deg[k] * g.conductance_f64(e);
                        }
                    }
                }
                out
            })
            .collect();
    }
    w
}

/// All-pairs resistances by CG, one solve per unordered pair.
fn float_resistances(g: &Graph, cfg: &SolveConfig) -> Result<Vec<Vec<f64>>, FosterError> {
    let n = g.n();
    let system = LaplacianSystem::new(g)?;
    let rows = par::map_indices(n, cfg.parallel, |i| {
        (i + 1..n)
            .map(|j| system.resistance(i, j, cfg).map(|r| r.value))
            .collect::<Result<Vec<f64>, _>>()
    });
    let mut out = vec![vec![0.0; n]; n];
    for (i, row) in rows.into_iter().enumerate() {
        for (off, r) in row?.into_iter().enumerate() {
            out[i][i + 1 + off] = r;
            out[i + 1 + off][i] = r;
        }
    }
    Ok(out)
}

/// Left side of the finite Foster identity.
pub fn finite_foster_lhs(g: &Graph, r: usize, mode: CheckMode) -> Result<Scalar, FosterError> {
    if r == 0 {
        return Err(FosterError::ZeroLength);
    }
    match mode {
        CheckMode::Exact => {
            let res = exact::exact_resistance_matrix(g, &ExactConfig::default())?;
            let w = walk_weight_matrix(g, r)?;
            let mut sum = BigRational::zero();
            for i in 0..g.n() {
                for j in 0..g.n() {
                    if !w[i][j].is_zero() && i != j {
                        sum += &w[i][j] * res.get(i, j);
                    }
                }
            }
            Ok(Scalar::Exact(sum))
        }
        CheckMode::Float => {
            let res = float_resistances(g, &SolveConfig::default())?;
            let w = walk_weight_matrix_f64(g, r);
            let sum = (0..g.n())
                .flat_map(|i| (0..g.n()).map(move |j| (i, j)))
                .map(|(i, j)| w[i][j] * res[i][j])
                .sum();
            Ok(Scalar::Float(sum))
        }
    }
}

fn trace_powers_f64(g: &Graph, r_max: usize) -> Vec<f64> {
    let n = g.n();
    let inv_deg: Vec<f64> = (0..n).map(|v| 1.0 / g.degree_f64(v)).collect();
    let mut traces = vec![0.0; r_max + 1];
    for v in 0..n {
        let mut row = vec![0.0; n];
        row[v] = 1.0;
        traces[0] += 1.0;
        for t in traces.iter_mut().skip(1) {
            let mut next = vec![0.0; n];
            for (u, &x) in row.iter().enumerate() {
                if x != 0.0 {
                    for &(w, e) in g.neighbors(u) {
                        next[w] += x * g.conductance_f64(e) * inv_deg[u];
                    }
                }
            }
            row = next;
            *t += row[v];
        }
    }
    traces
}

/// Right side of the finite Foster identity: `2 (Σ_{s<r} tr(P^s) - r)`.
pub fn finite_foster_rhs(g: &Graph, r: usize, mode: CheckMode) -> Result<Scalar, FosterError> {
    if r == 0 {
        return Err(FosterError::ZeroLength);
    }
    match mode {
        CheckMode::Exact => {
            let traces = exact::exact_trace_powers(g, r - 1, &ExactConfig::default())?;
            let s = traces.iter().fold(BigRational::zero(), |a, t| a + t);
            Ok(Scalar::Exact((s - int(r as i64)) * int(2)))
        }
        CheckMode::Float => {
            let s: f64 = trace_powers_f64(g, r - 1).iter().sum();
            Ok(Scalar::Float(2.0 * (s - r as f64)))
        }
    }
}

pub fn finite_foster_check(g: &Graph, r: usize, mode: CheckMode, context: &str) -> Result<SumRuleReport, FosterError> {
    let lhs = finite_foster_lhs(g, r, mode)?;
    let rhs = finite_foster_rhs(g, r, mode)?;
    Ok(SumRuleReport::new(context.to_string(), r, lhs, rhs, None))
}

/// Both sides of `Σ_{i,j} π_j P^r_{ji} E_i T_j = Σ_{s<r} tr(P^s) - r`, exactly.
pub fn finite_hitting_form_check(g: &Graph, r: usize, context: &str) -> Result<SumRuleReport, FosterError> {
    if r == 0 {
        return Err(FosterError::ZeroLength);
    }
    let cfg = ExactConfig::default();
    let pi = exact::stationary_distribution(g, &cfg)?;
    let pr = exact::transition_power(g, r, &cfg)?;
    let hit = exact::exact_hitting_times(g, &cfg)?;
    let mut lhs = BigRational::zero();
    for i in 0..g.n() {
        for j in 0..g.n() {
            if i != j && !pr[j][i].is_zero() {
                lhs += &pi[j] * &pr[j][i] * hit.get(i, j);
            }
        }
    }
    let traces = exact::exact_trace_powers(g, r - 1, &cfg)?;
    let rhs = traces.iter().fold(BigRational::zero(), |a, t| a + t) - int(r as i64);
    Ok(SumRuleReport::new(context.to_string(), r, Scalar::Exact(lhs), Scalar::Exact(rhs), None))
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// `2 k^{r-1} Σ_{s<r} Δ_s / k^s`.
pub fn infinite_sum_rule_rhs(k: u64, deltas: &WalkCountTable, r: usize) -> Result<BigRational, FosterError> {
    if r == 0 {
        return Err(FosterError::ZeroLength);
    }
    if deltas.deltas.len() < r {
        return Err(FosterError::InsufficientTable { have: deltas.deltas.len(), need: r });
    }
    let k = int(k as i64);
    let mut sum = BigRational::zero();
    let mut kpow = BigRational::one();
    for s in 0..r {
        sum += int(deltas.deltas[s] as i64) / &kpow;
        kpow *= &k;
    }
    Ok(int(2) * num_traits::pow(k, r - 1) * sum)
}

/// Sum rule over non-backtracking walks: `2k² - 2k + 2` for `r = 3`,
/// `2k³ - 4k² + 4k` for `r = 4` on triangle-free lattices.
pub fn nondegenerate_rule_rhs(k: u64, r: usize, triangle_free: bool) -> Result<BigRational, FosterError> {
    let k = k as i64;
    match r {
        3 => Ok(int(2 * k * k - 2 * k + 2)),
        4 if triangle_free => Ok(int(2 * k * k * k - 4 * k * k + 4 * k)),
        4 => Err(FosterError::NeedsTriangleFree),
        _ => Err(FosterError::UnsupportedRule(r)),
    }
}

/// Resistances on the subdivision of a 2-arc-transitive lattice of degree
/// `k`: adjacent, distance 2 between originals, distance 2 between
/// midpoints, distance 3.
pub fn subdivision_closed_forms(k: i64) -> Result<[BigRational; 4], FosterError> {
    if k < 2 {
        return Err(FosterError::DegreeTooSmall { min: 2, got: k });
    }
    let q = |p: i64, d: i64| BigRational::new(p.into(), d.into());
    Ok([
        q(k + 2, 2 * k),
        q(4, k),
        q(k, k - 1),
        q(k * k + 5 * k - 2, 2 * k * (k - 1)),
    ])
}

/// Edge resistance on an edge-transitive smallish lattice whose endpoints
/// have degrees `deg_i` and `deg_j`.
pub fn doyle_formula(deg_i: i64, deg_j: i64) -> Result<BigRational, FosterError> {
    if deg_i < 1 || deg_j < 1 {
        return Err(FosterError::DegreeTooSmall { min: 1, got: deg_i.min(deg_j) });
    }
    Ok(BigRational::new((deg_i + deg_j).into(), (deg_i * deg_j).into()))
}

// ---------------------------------------------------------------------------
// Lattice sums
// ---------------------------------------------------------------------------

/// One endpoint class in a lattice sum: a site relative to the origin, how
/// many walks end there, and its extrapolated resistance from the origin.
#[derive(Clone, Debug, Serialize)]
pub struct EndpointTerm {
    pub site: Site,
    pub multiplicity: u64,
    pub resistance: f64,
    pub extrapolation: ExtrapolationResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSumReport {
    pub family: LatticeFamily,
    pub r: usize,
    pub filter: WalkFilter,
    pub walks: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
    pub terms: Vec<EndpointTerm>,
}

impl LatticeSumReport {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.relative_error <= rel_tol
    }
}

/// Expected value of the lattice sum for `filter`.
pub fn lattice_sum_rhs(family: LatticeFamily, r: usize, filter: WalkFilter) -> Result<BigRational, FosterError> {
    let k = family.degree() as u64;
    match filter {
        WalkFilter::All => infinite_sum_rule_rhs(k, &walks::lattice_walk_table(family, r)?, r),
        WalkFilter::NonDegenerate => nondegenerate_rule_rhs(k, r, family.is_triangle_free()),
    }
}

/// Left side of the lattice sum rule: Σ over length-`r` walks from the
/// origin of the infinite-lattice resistance between the walk's ends.
///
/// Walks are grouped by endpoint, so each distinct endpoint costs one
/// extrapolated resistance.
pub fn infinite_sum_rule_lhs(
    family: LatticeFamily,
    r: usize,
    filter: WalkFilter,
    sweep: &SweepConfig,
) -> Result<LatticeSumReport, FosterError> {
    if r == 0 {
        return Err(FosterError::ZeroLength);
    }
    if r > 4 {
        return Err(FosterError::LengthTooLarge(r));
    }
    let host = lattice::build(family, BoundaryMode::Ball(r + 1))?;
    let ends = walks::endpoint_multiplicities(&host.graph, host.origin, r, filter)?;
    let total: u64 = ends.values().sum();
    let mut by_site: BTreeMap<Site, u64> = BTreeMap::new();
    for (&v, &count) in &ends {
        if v != host.origin {
            *by_site.entry(host.site(v)).or_insert(0) += count;
        }
    }
    let sites: Vec<Site> = by_site.keys().copied().collect();
    let fits = solver::infinite_resistances_from_origin(family, &sites, sweep)?;
    let terms: Vec<EndpointTerm> = sites
        .into_iter()
        .zip(fits)
        .map(|(site, fit)| EndpointTerm {
            site,
            multiplicity: by_site[&site],
            resistance: fit.limit,
            extrapolation: fit,
        })
        .collect();
    let lhs: f64 = terms.iter().map(|t| t.multiplicity as f64 * t.resistance).sum();
    let rhs = ratio_to_f64(&lattice_sum_rhs(family, r, filter)?);
    Ok(LatticeSumReport {
        family,
        r,
        filter,
        walks: total,
        lhs,
        rhs,
        relative_error: (lhs - rhs).abs() / rhs.abs(),
        terms,
    })
}

/// Midpoint form of the length-2 rule: the sum over unordered pairs of
/// distinct neighbors `{x, y}` of the origin of `R_xy`, which equals `k`.
pub fn midpoint_second_rule_lhs(family: LatticeFamily, sweep: &SweepConfig) -> Result<LatticeSumReport, FosterError> {
    let nbrs = family.neighbors(Site::ORIGIN);
    let mut pairs = Vec::new();
    for (a, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[a + 1..] {
            pairs.push((x, y));
        }
    }
    let fits = solver::infinite_resistances(family, &pairs, sweep)?;
    let terms: Vec<EndpointTerm> = pairs
        .iter()
        .zip(fits)
        .map(|(&(_, y), fit)| EndpointTerm {
            site: y,
            multiplicity: 1,
            resistance: fit.limit,
            extrapolation: fit,
        })
        .collect();
    let lhs: f64 = terms.iter().map(|t| t.resistance).sum();
    let rhs = family.degree() as f64;
    Ok(LatticeSumReport {
        family,
        r: 2,
        filter: WalkFilter::All,
        walks: pairs.len() as u64,
        lhs,
        rhs,
        relative_error: (lhs - rhs).abs() / rhs,
        terms,
    })
}

/// Walk count at `v` used in summaries.
pub fn walk_summary(g: &Graph, v: VertexId, r: usize, filter: WalkFilter) -> Result<WalkSummary, FosterError> {
    let ends = walks::endpoint_multiplicities(g, v, r, filter)?;
    Ok(WalkSummary { walks: ends.values().sum(), filter })
}
