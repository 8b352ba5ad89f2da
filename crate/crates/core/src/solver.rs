//! Floating-point effective resistances at lattice scale.
//!
//! Potentials come from preconditioned conjugate gradient on the Laplacian
//! grounded at the highest-index vertex, with a Jacobi preconditioner.
//! Infinite-lattice values are estimated from a sweep of torus (or ball)
//! sizes followed by extrapolation in `1/L`.

use serde::{Deserialize, Serialize};

use crate::closed_form::{ClosedFormRef, ClosedFormTable};
use crate::error::SolveError;
use crate::graph::{Graph, VertexId};
use crate::lattice::{self, BoundaryMode, LatticeFamily, PairClass, Site, SubdividedPair};
use crate::par;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Target relative residual `‖b - Lx‖ / ‖b‖`.
    pub tolerance: f64,
    /// Iteration cap; `None` means `20·√n`.
    pub max_iterations: Option<usize>,
    /// Fan batch solves out over the thread pool.
    pub parallel: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { tolerance: 1e-10, max_iterations: None, parallel: par::ENABLED }
    }
}

impl SolveConfig {
    fn cap(&self, n: usize) -> usize {
        self.max_iterations
            .unwrap_or_else(|| (20.0 * (n as f64).sqrt()).ceil() as usize)
            .max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Cg,
    CgBall,
    CgTorus,
    Extrapolated,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResistanceReport {
    pub pair: (VertexId, VertexId),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub value: f64,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrapolation: Option<ExtrapolationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormRef>,
}

/// Grounded Laplacian in compressed sparse rows.
#[derive(Clone, Debug)]
pub struct LaplacianSystem {
    n: usize,
    ground: VertexId,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    weights: Vec<f64>,
    diag: Vec<f64>,
}

impl LaplacianSystem {
    pub fn new(g: &Graph) -> Result<Self, SolveError> {
        if !g.is_connected() {
            return Err(SolveError::Disconnected);
        }
        let n = g.n();
        let mut row_start = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(2 * g.m());
        let mut weights = Vec::with_capacity(2 * g.m());
        let mut diag = vec![0.0; n];
        row_start.push(0);
        for (u, d) in diag.iter_mut().enumerate() {
            for &(v, e) in g.neighbors(u) {
                let c = g.conductance_f64(e);
                *d += c;
                cols.push(v);
                weights.push(c);
            }
            row_start.push(cols.len());
        }
        Ok(LaplacianSystem { n, ground: n - 1, row_start, cols, weights, diag })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `y = L x` with the ground row zeroed; `x[ground]` must be zero.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for u in 0..self.n {
            if u == self.ground {
                y[u] = 0.0;
                continue;
            }
            let mut acc = self.diag[u] * x[u];
            for k in self.row_start[u]..self.row_start[u + 1] {
                acc -= self.weights[k] * x[self.cols[k]];
            }
            y[u] = acc;
        }
    }

    /// Solves `L x = b` on the non-ground vertices; returns the potential
    /// vector, iteration count and final true relative residual.
    pub fn solve(&self, b: &[f64], cfg: &SolveConfig) -> Result<(Vec<f64>, usize, f64), SolveError> {
        let n = self.n;
        let mut rhs = b.to_vec();
        rhs[self.ground] = 0.0;
        let bnorm = norm(&rhs);
        let mut x = vec![0.0; n];
        if bnorm == 0.0 {
            return Ok((x, 0, 0.0));
        }
        let inv_diag: Vec<f64> = self.diag.iter().map(|&d| 1.0 / d).collect();
        let precondition = |r: &[f64], z: &mut [f64]| {
            for u in 0..n {
                z[u] = if u == self.ground { 0.0 } else { r[u] * inv_diag[u] };
            }
        };
        let mut r = rhs.clone();
        let mut z = vec![0.0; n];
        precondition(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; n];
        let cap = cfg.cap(n);
        let mut residual = 1.0;
        for it in 1..=cap {
            self.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            axpy(alpha, &p, &mut x);
            axpy(-alpha, &ap, &mut r);
            if norm(&r) / bnorm <= cfg.tolerance {
                // Confirm against the true residual before accepting.
                self.apply(&x, &mut ap);
                for u in 0..n {
                    r[u] = rhs[u] - ap[u];
                }
                residual = norm(&r) / bnorm;
                if residual <= cfg.tolerance {
                    return Ok((x, it, residual));
                }
            }
            precondition(&r, &mut z);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for u in 0..n {
                p[u] = z[u] + beta * p[u];
            }
            residual = norm(&r) / bnorm;
        }
        Err(SolveError::NoConvergence { iterations: cap, residual })
    }

    /// Resistance between `i` and `j` from one solve of `L x = e_i - e_j`.
    pub fn resistance(&self, i: VertexId, j: VertexId, cfg: &SolveConfig) -> Result<ResistanceReport, SolveError> {
        for v in [i, j] {
            if v >= self.n {
                return Err(SolveError::InvalidVertex { vertex: v, n: self.n });
            }
        }
        if i == j {
            return Err(SolveError::SamePair(i));
        }
        let mut b = vec![0.0; self.n];
        b[i] = 1.0;
        b[j] = -1.0;
        let (x, iterations, residual) = self.solve(&b, cfg)?;
        Ok(ResistanceReport {
            pair: (i, j),
            label: None,
            value: x[i] - x[j],
            method: Method::Cg,
            iterations,
            residual,
            error_estimate: None,
            extrapolation: None,
            closed_form: None,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn cg_resistance(g: &Graph, i: VertexId, j: VertexId, cfg: &SolveConfig) -> Result<ResistanceReport, SolveError> {
    LaplacianSystem::new(g)?.resistance(i, j, cfg)
}

/// One solve per target, sharing the assembled system. Each target's result
/// is identical to a standalone [`cg_resistance`] call.
pub fn batch_resistances_from(
    g: &Graph,
    source: VertexId,
    targets: &[VertexId],
    cfg: &SolveConfig,
) -> Result<Vec<ResistanceReport>, SolveError> {
    let system = LaplacianSystem::new(g)?;
    batch_on_system(&system, source, targets, cfg)
}

fn batch_on_system(
    system: &LaplacianSystem,
    source: VertexId,
    targets: &[VertexId],
    cfg: &SolveConfig,
) -> Result<Vec<ResistanceReport>, SolveError> {
    if let Some(&t) = targets.iter().find(|&&t| t == source) {
        return Err(SolveError::SamePair(t));
    }
    par::map_slice(targets, cfg.parallel, |&t| system.resistance(source, t, cfg))
        .into_iter()
        .collect()
}

// ---------------------------------------------------------------------------
// Extrapolation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtrapolationModel {
    /// Least squares `v(L) = v∞ + a/L + b/L²` over all points.
    #[default]
    InvPoly,
    /// Quadratic extrapolation in `1/L` to zero through the last three points.
    Richardson,
}

impl std::str::FromStr for ExtrapolationModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inv-poly" => Ok(ExtrapolationModel::InvPoly),
            "richardson" => Ok(ExtrapolationModel::Richardson),
            _ => Err(format!("unknown extrapolation model {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationResult {
    pub sizes: Vec<f64>,
    pub values: Vec<f64>,
    pub limit: f64,
    /// RMS deviation of the fitted model from the data.
    pub fit_residual: f64,
    pub model: ExtrapolationModel,
}

pub fn extrapolate(sizes: &[f64], values: &[f64], model: ExtrapolationModel) -> Result<ExtrapolationResult, SolveError> {
    if sizes.len() != values.len() {
        return Err(SolveError::LengthMismatch);
    }
    if sizes.len() < 3 {
        return Err(SolveError::TooFewPoints(sizes.len()));
    }
    if sizes[0] <= 0.0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SolveError::NonIncreasingSizes);
    }
    let (limit, fit_residual) = match model {
        ExtrapolationModel::InvPoly => inv_poly_fit(sizes, values)?,
        ExtrapolationModel::Richardson => {
            let k = sizes.len();
            (neville_at_zero(&sizes[k - 3..], &values[k - 3..])?, 0.0)
        }
    };
    Ok(ExtrapolationResult {
        sizes: sizes.to_vec(),
        values: values.to_vec(),
        limit,
        fit_residual,
        model,
    })
}

fn inv_poly_fit(sizes: &[f64], values: &[f64]) -> Result<(f64, f64), SolveError> {
    // Work with h = L0/L so the columns are O(1), and subtract the first
    // value so a constant sequence solves to exact zeros.
    let base = values[0];
    let h: Vec<f64> = sizes.iter().map(|&l| sizes[0] / l).collect();
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for (&hi, &vi) in h.iter().zip(values) {
        let row = [1.0, hi, hi * hi];
        for r in 0..3 {
            for c in 0..3 {
                ata[r][c] += row[r] * row[c];
            }
            atb[r] += row[r] * (vi - base);
        }
    }
    let coef = solve3(ata, atb).ok_or(SolveError::DegenerateFit)?;
    let ss: f64 = h
        .iter()
        .zip(values)
        .map(|(&hi, &vi)| {
            let fit = coef[0] + coef[1] * hi + coef[2] * hi * hi;
            (vi - base - fit).powi(2)
        })
        .sum();
    Ok((base + coef[0], (ss / sizes.len() as f64).sqrt()))
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..3 {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let mut acc = b[r];
        for c in r + 1..3 {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

/// Neville's scheme for the interpolating polynomial in `h = 1/L`, at `h = 0`.
fn neville_at_zero(sizes: &[f64], values: &[f64]) -> Result<f64, SolveError> {
    let h: Vec<f64> = sizes.iter().map(|&l| 1.0 / l).collect();
    let mut t = values.to_vec();
    for level in 1..t.len() {
        for i in (level..t.len()).rev() {
            let denom = h[i - level] - h[i];
            if denom == 0.0 {
                return Err(SolveError::DegenerateFit);
            }
            t[i] = (h[i - level] * t[i] - h[i] * t[i - 1]) / denom;
        }
    }
    Ok(*t.last().expect("non-empty"))
}

// ---------------------------------------------------------------------------
// Infinite-lattice estimates
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepBoundary {
    #[default]
    Torus,
    Ball,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Torus side lengths, or ball radii.
    pub sizes: Vec<usize>,
    pub boundary: SweepBoundary,
    pub model: ExtrapolationModel,
    pub solve: SolveConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            sizes: vec![16, 32, 64],
            boundary: SweepBoundary::Torus,
            model: ExtrapolationModel::InvPoly,
            solve: SolveConfig::default(),
        }
    }
}

impl SweepConfig {
    fn mode(&self, size: usize) -> BoundaryMode {
        match self.boundary {
            SweepBoundary::Torus => BoundaryMode::Torus(size),
            SweepBoundary::Ball => BoundaryMode::Ball(size),
        }
    }

    fn method(&self) -> Method {
        match self.boundary {
            SweepBoundary::Torus => Method::CgTorus,
            SweepBoundary::Ball => Method::CgBall,
        }
    }
}

/// Extrapolated resistances from the origin to each target site.
///
/// One finite lattice is built per size and shared by all targets.
pub fn infinite_resistances_from_origin(
    family: LatticeFamily,
    targets: &[Site],
    sweep: &SweepConfig,
) -> Result<Vec<ExtrapolationResult>, SolveError> {
    let mut per_size: Vec<Vec<f64>> = Vec::with_capacity(sweep.sizes.len());
    for &size in &sweep.sizes {
        let lg = lattice::build(family, sweep.mode(size))?;
        let ids = targets
            .iter()
            .map(|&s| {
                lg.vertex_at(s)
                    .filter(|&v| v != lg.origin)
                    .ok_or_else(|| lattice_outside(family, s))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let system = LaplacianSystem::new(&lg.graph)?;
        let reports = batch_on_system(&system, lg.origin, &ids, &sweep.solve)?;
        per_size.push(reports.into_iter().map(|r| r.value).collect());
    }
    let sizes: Vec<f64> = sweep.sizes.iter().map(|&s| s as f64).collect();
    (0..targets.len())
        .map(|t| {
            let values: Vec<f64> = per_size.iter().map(|row| row[t]).collect();
            extrapolate(&sizes, &values, sweep.model)
        })
        .collect()
}

/// Extrapolated resistances between arbitrary site pairs, one CG solve per
/// pair and size.
pub fn infinite_resistances(
    family: LatticeFamily,
    pairs: &[(Site, Site)],
    sweep: &SweepConfig,
) -> Result<Vec<ExtrapolationResult>, SolveError> {
    let mut per_size: Vec<Vec<f64>> = Vec::with_capacity(sweep.sizes.len());
    for &size in &sweep.sizes {
        let lg = lattice::build(family, sweep.mode(size))?;
        let locate = |s: Site| lg.vertex_at(s).ok_or_else(|| lattice_outside(family, s));
        let ids = pairs
            .iter()
            .map(|&(a, b)| Ok((locate(a)?, locate(b)?)))
            .collect::<Result<Vec<_>, SolveError>>()?;
        let system = LaplacianSystem::new(&lg.graph)?;
        let values = par::map_slice(&ids, sweep.solve.parallel, |&(a, b)| system.resistance(a, b, &sweep.solve))
            .into_iter()
            .map(|r| r.map(|r| r.value))
            .collect::<Result<Vec<_>, _>>()?;
        per_size.push(values);
    }
    let sizes: Vec<f64> = sweep.sizes.iter().map(|&s| s as f64).collect();
    (0..pairs.len())
        .map(|t| {
            let values: Vec<f64> = per_size.iter().map(|row| row[t]).collect();
            extrapolate(&sizes, &values, sweep.model)
        })
        .collect()
}

fn lattice_outside(family: LatticeFamily, s: Site) -> SolveError {
    SolveError::Lattice(crate::error::LatticeError::PairOutsideLattice(format!(
        "{family}:{},{},{}",
        s.cell.0, s.cell.1, s.sub
    )))
}

fn report_from_sweep(
    pair: (VertexId, VertexId),
    label: String,
    sweep_cfg: &SweepConfig,
    per_size: Vec<ResistanceReport>,
    closed_form: Option<ClosedFormRef>,
) -> Result<ResistanceReport, SolveError> {
    let sizes: Vec<f64> = sweep_cfg.sizes.iter().map(|&s| s as f64).collect();
    let values: Vec<f64> = per_size.iter().map(|r| r.value).collect();
    let fit = extrapolate(&sizes, &values, sweep_cfg.model)?;
    let last = *values.last().expect("at least three sizes");
    let worst = per_size.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(ResistanceReport {
        pair,
        label: Some(label),
        value: fit.limit,
        method: Method::Extrapolated,
        iterations: per_size.iter().map(|r| r.iterations).sum(),
        residual: worst,
        error_estimate: Some((fit.limit - last).abs().max(fit.fit_residual)),
        extrapolation: Some(fit),
        closed_form,
    })
}

/// Infinite-lattice resistance for a pair class, by sweep and extrapolation.
pub fn infinite_pair_resistance(pc: &PairClass, sweep: &SweepConfig) -> Result<ResistanceReport, SolveError> {
    let per_size = par::map_slice(&sweep.sizes, sweep.solve.parallel, |&size| {
        let lg = lattice::build(pc.family, sweep.mode(size))?;
        let (o, t) = lattice::resolve_pair(&lg, pc)?;
        let mut r = cg_resistance(&lg.graph, o, t, &sweep.solve)?;
        r.method = sweep.method();
        Ok::<_, SolveError>(r)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let pair = per_size.last().map(|r| r.pair).unwrap_or_default();
    let closed = ClosedFormTable::builtin().lookup(pc).map(|e| e.reference());
    report_from_sweep(pair, pc.to_string(), sweep, per_size, closed)
}

/// Resistance for a pair class of the subdivided lattice.
pub fn subdivided_pair_resistance(
    family: LatticeFamily,
    which: SubdividedPair,
    sweep: &SweepConfig,
) -> Result<ResistanceReport, SolveError> {
    let per_size = par::map_slice(&sweep.sizes, sweep.solve.parallel, |&size| {
        let lg = lattice::build(family, sweep.mode(size))?;
        let (a, b) = lattice::resolve_subdivided_pair(&lg, which)?;
        let mut r = cg_resistance(&lg.graph.subdivide(), a, b, &sweep.solve)?;
        r.method = sweep.method();
        Ok::<_, SolveError>(r)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let pair = per_size.last().map(|r| r.pair).unwrap_or_default();
    let closed = ClosedFormTable::builtin()
        .lookup_subdivided(family, which)
        .map(|e| e.reference());
    report_from_sweep(pair, format!("subdivided-{family}:{}", which.tag()), sweep, per_size, closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn cycle_adjacent() {
        let r = cg_resistance(&cycle(4), 0, 1, &SolveConfig::default()).unwrap();
        assert!((r.value - 0.75).abs() < 1e-10);
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn errors_are_reported() {
        let cfg = SolveConfig::default();
        assert!(matches!(cg_resistance(&cycle(4), 1, 1, &cfg), Err(SolveError::SamePair(1))));
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(cg_resistance(&split, 0, 1, &cfg), Err(SolveError::Disconnected)));
        let tight = SolveConfig { max_iterations: Some(1), ..SolveConfig::default() };
        assert!(matches!(
            cg_resistance(&cycle(40), 0, 20, &tight),
            Err(SolveError::NoConvergence { iterations: 1, .. })
        ));
        assert!(matches!(
            batch_resistances_from(&cycle(4), 2, &[1, 2], &cfg),
            Err(SolveError::SamePair(2))
        ));
    }

    #[test]
    fn batch_is_bitwise_identical_to_single_calls() {
        let g = cycle(4);
        let cfg = SolveConfig::default();
        let batch = batch_resistances_from(&g, 0, &[1, 2], &cfg).unwrap();
        for (r, t) in batch.iter().zip([1, 2]) {
            let single = cg_resistance(&g, 0, t, &cfg).unwrap();
            assert_eq!(r.value.to_bits(), single.value.to_bits());
            assert_eq!(r.iterations, single.iterations);
        }
        let seq = SolveConfig { parallel: false, ..cfg.clone() };
        let again = batch_resistances_from(&g, 0, &[1, 2], &seq).unwrap();
        assert_eq!(
            batch.iter().map(|r| r.value.to_bits()).collect::<Vec<_>>(),
            again.iter().map(|r| r.value.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn extrapolation_examples() {
        let c = extrapolate(&[8.0, 16.0, 32.0], &[0.7, 0.7, 0.7], ExtrapolationModel::InvPoly).unwrap();
        assert_eq!(c.limit, 0.7);
        let sizes = [8.0, 16.0, 32.0];
        let values: Vec<f64> = sizes.iter().map(|l| 1.0 + 1.0 / l).collect();
        for model in [ExtrapolationModel::InvPoly, ExtrapolationModel::Richardson] {
            let fit = extrapolate(&sizes, &values, model).unwrap();
            assert!((fit.limit - 1.0).abs() < 1e-12, "{model:?}: {}", fit.limit);
        }
        let more = [8.0, 12.0, 16.0, 24.0, 32.0];
        let values: Vec<f64> = more.iter().map(|l| 2.0 - 3.0 / l + 5.0 / (l * l)).collect();
        let fit = extrapolate(&more, &values, ExtrapolationModel::InvPoly).unwrap();
        assert!((fit.limit - 2.0).abs() < 1e-12);
        assert!(fit.fit_residual < 1e-12);
    }

    #[test]
    fn extrapolation_errors() {
        let m = ExtrapolationModel::InvPoly;
        assert!(matches!(extrapolate(&[1.0, 2.0], &[1.0, 1.0], m), Err(SolveError::TooFewPoints(2))));
        assert!(matches!(
            extrapolate(&[1.0, 3.0, 2.0], &[1.0, 1.0, 1.0], m),
            Err(SolveError::NonIncreasingSizes)
        ));
        assert!(matches!(extrapolate(&[1.0, 2.0, 3.0], &[1.0, 1.0], m), Err(SolveError::LengthMismatch)));
    }
}
