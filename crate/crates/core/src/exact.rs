//! Exact rational linear algebra on small graphs.
//!
//! Everything here is ground truth for the floating-point paths: effective
//! resistances from grounded Laplacian minors, hitting times from the
//! restricted walk generator, and traces of transition-matrix powers. Systems
//! are solved by fraction-free (Bareiss) elimination over the integers after
//! clearing row denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::OracleError;
use crate::graph::{Graph, ScalarKind, VertexId};
use crate::par;

/// Dense matrix of exact rationals, row-major.
pub type RatMatrix = Vec<Vec<BigRational>>;

#[derive(Clone, Copy, Debug)]
pub struct ExactConfig {
    pub size_cap: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { size_cap: 400 }
    }
}

fn validate(g: &Graph, cfg: &ExactConfig) -> Result<(), OracleError> {
    if g.scalar_kind() != ScalarKind::Exact {
        return Err(OracleError::FloatGraph);
    }
    if g.n() > cfg.size_cap {
        return Err(OracleError::SizeCap { n: g.n(), cap: cfg.size_cap });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    Ok(())
}

fn check_vertex(g: &Graph, v: VertexId) -> Result<(), OracleError> {
    if v >= g.n() {
        return Err(OracleError::InvalidVertex { vertex: v, n: g.n() });
    }
    Ok(())
}

fn zeros(rows: usize, cols: usize) -> RatMatrix {
    (0..rows).map(|_| vec![BigRational::zero(); cols]).collect()
}

/// Weighted Laplacian `D - A`.
pub fn laplacian(g: &Graph) -> Result<RatMatrix, OracleError> {
    let mut l = zeros(g.n(), g.n());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let c = g.conductance_exact(e).ok_or(OracleError::FloatGraph)?;
        l[u][u] += c;
        l[v][v] += c;
        l[u][v] -= c;
        l[v][u] -= c;
    }
    Ok(l)
}

/// Solves `A X = B` exactly. `a` is square, `b` has one row per equation.
pub fn solve_fraction_free(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<RatMatrix, OracleError> {
    let n = a.len();
    let k = b.first().map_or(0, Vec::len);
    // Clear denominators row by row; row scaling leaves the solution alone.
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(ar, br)| {
            let lcm = ar
                .iter()
                .chain(br)
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            ar.iter()
                .chain(br)
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    let width = n + k;
    let mut prev = BigInt::one();
    for p in 0..n {
        let pivot = (p..n).find(|&r| !m[r][p].is_zero()).ok_or(OracleError::Singular)?;
        m.swap(p, pivot);
        let (top, rest) = m.split_at_mut(p + 1);
        let prow = &top[p];
        for row in rest.iter_mut() {
            let factor = row[p].clone();
            for j in p + 1..width {
                let t = &prow[p] * &row[j] - &factor * &prow[j];
                row[j] = t / &prev;
            }
            row[p] = BigInt::zero();
        }
        prev = prow[p].clone();
    }
    let mut x = zeros(n, k);
    for i in (0..n).rev() {
        let diag = BigRational::from_integer(m[i][i].clone());
        for c in 0..k {
            let mut acc = BigRational::from_integer(m[i][n + c].clone());
            for j in i + 1..n {
                if !m[i][j].is_zero() {
                    acc -= BigRational::from_integer(m[i][j].clone()) * &x[j][c];
                }
            }
            x[i][c] = acc / &diag;
        }
    }
    Ok(x)
}

fn drop_index(l: &RatMatrix, skip: usize) -> RatMatrix {
    l.iter()
        .enumerate()
        .filter(|&(r, _)| r != skip)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c != skip)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Effective resistance between `i` and `j` via the Laplacian grounded at `j`.
pub fn exact_resistance(g: &Graph, i: VertexId, j: VertexId, cfg: &ExactConfig) -> Result<BigRational, OracleError> {
    check_vertex(g, i)?;
    check_vertex(g, j)?;
    validate(g, cfg)?;
    if i == j {
        return Ok(BigRational::zero());
    }
    let reduced = drop_index(&laplacian(g)?, j);
    let row = if i < j { i } else { i - 1 };
    let rhs: RatMatrix = (0..g.n() - 1)
        .map(|r| vec![if r == row { BigRational::one() } else { BigRational::zero() }])
        .collect();
    let x = solve_fraction_free(&reduced, &rhs)?;
    Ok(x[row][0].clone())
}

/// All-pairs effective resistances, symmetric with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactResistanceMatrix {
    values: RatMatrix,
}

impl ExactResistanceMatrix {
    pub fn get(&self, i: VertexId, j: VertexId) -> &BigRational {
        &self.values[i][j]
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn rows(&self) -> &RatMatrix {
        &self.values
    }
}

/// All pairs from one inverse of the Laplacian grounded at the last vertex:
/// `R_ij = G_ii + G_jj - 2 G_ij` with the grounded row and column zero.
pub fn exact_resistance_matrix(g: &Graph, cfg: &ExactConfig) -> Result<ExactResistanceMatrix, OracleError> {
    validate(g, cfg)?;
    let n = g.n();
    if n == 1 {
        return Ok(ExactResistanceMatrix { values: zeros(1, 1) });
    }
    let reduced = drop_index(&laplacian(g)?, n - 1);
    let identity: RatMatrix = (0..n - 1)
        .map(|r| {
            (0..n - 1)
                .map(|c| if r == c { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let green = solve_fraction_free(&reduced, &identity)?;
    let at = |i: usize, j: usize| -> BigRational {
        if i == n - 1 || j == n - 1 {
            BigRational::zero()
        } else {
            green[i][j].clone()
        }
    };
    let mut values = zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let r = at(i, i) + at(j, j) - at(i, j) * BigRational::from_integer(2.into());
            values[i][j] = r.clone();
            values[j][i] = r;
        }
    }
    Ok(ExactResistanceMatrix { values })
}

fn degrees(g: &Graph) -> Result<Vec<BigRational>, OracleError> {
    (0..g.n())
        .map(|v| g.degree_exact(v).ok_or(OracleError::FloatGraph))
        .collect()
}

/// Walk transition matrix `P_uv = C_uv / deg(u)`.
pub fn transition_matrix(g: &Graph) -> Result<RatMatrix, OracleError> {
    let deg = degrees(g)?;
    let mut p = zeros(g.n(), g.n());
    for (u, row) in p.iter_mut().enumerate() {
        for &(v, e) in g.neighbors(u) {
            let c = g.conductance_exact(e).ok_or(OracleError::FloatGraph)?;
            row[v] = c / &deg[u];
        }
    }
    Ok(p)
}

/// `E_i T_j`, the expected first-passage time from `i` to `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HittingTimeMatrix {
    values: RatMatrix,
}

impl HittingTimeMatrix {
    /// Expected steps to reach `target` starting from `start`.
    pub fn get(&self, start: VertexId, target: VertexId) -> &BigRational {
        &self.values[start][target]
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// For each target `j`, solves `(I - P) h = 1` on the vertices other than `j`.
pub fn exact_hitting_times(g: &Graph, cfg: &ExactConfig) -> Result<HittingTimeMatrix, OracleError> {
    validate(g, cfg)?;
    let n = g.n();
    let p = transition_matrix(g)?;
    let columns: Vec<Result<Vec<BigRational>, OracleError>> = par::map_indices(n, true, |j| {
        let mut col = vec![BigRational::zero(); n];
        if n == 1 {
            return Ok(col);
        }
        let a: RatMatrix = (0..n)
            .filter(|&u| u != j)
            .map(|u| {
                (0..n)
                    .filter(|&v| v != j)
                    .map(|v| {
                        let id = if u == v { BigRational::one() } else { BigRational::zero() };
                        id - &p[u][v]
                    })
                    .collect()
            })
            .collect();
        let ones: RatMatrix = (0..n - 1).map(|_| vec![BigRational::one()]).collect();
        let h = solve_fraction_free(&a, &ones)?;
        for (row, u) in (0..n).filter(|&u| u != j).enumerate() {
            col[u] = h[row][0].clone();
        }
        Ok(col)
    });
    let mut values = zeros(n, n);
    for (j, col) in columns.into_iter().enumerate() {
        for (i, h) in col?.into_iter().enumerate() {
            values[i][j] = h;
        }
    }
    Ok(HittingTimeMatrix { values })
}

/// `M · P`, exploiting the sparsity of `P` through the graph's adjacency.
fn times_transition(m: &RatMatrix, p: &RatMatrix, g: &Graph) -> RatMatrix {
    let n = g.n();
    m.iter()
        .map(|row| {
            let mut out = vec![BigRational::zero(); n];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for &(v, _) in g.neighbors(k) {
                    out[v] += x * &p[k][v];
                }
            }
            out
        })
        .collect()
}

/// `P^r` for the walk transition matrix.
pub fn transition_power(g: &Graph, r: usize, cfg: &ExactConfig) -> Result<RatMatrix, OracleError> {
    validate(g, cfg)?;
    let p = transition_matrix(g)?;
    let n = g.n();
    let mut acc: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for _ in 0..r {
        acc = times_transition(&acc, &p, g);
    }
    Ok(acc)
}

/// `[tr(P^0), …, tr(P^r_max)]`.
pub fn exact_trace_powers(g: &Graph, r_max: usize, cfg: &ExactConfig) -> Result<Vec<BigRational>, OracleError> {
    if g.scalar_kind() != ScalarKind::Exact {
        return Err(OracleError::FloatGraph);
    }
    if g.n() > cfg.size_cap {
        return Err(OracleError::SizeCap { n: g.n(), cap: cfg.size_cap });
    }
    let p = transition_matrix(g)?;
    let n = g.n();
    let mut acc: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let mut traces = Vec::with_capacity(r_max + 1);
    for s in 0..=r_max {
        if s > 0 {
            acc = times_transition(&acc, &p, g);
        }
        traces.push((0..n).fold(BigRational::zero(), |t, i| t + &acc[i][i]));
    }
    Ok(traces)
}

/// `π_v = deg(v) / Σ_u deg(u)`.
pub fn stationary_distribution(g: &Graph, cfg: &ExactConfig) -> Result<Vec<BigRational>, OracleError> {
    validate(g, cfg)?;
    let deg = degrees(g)?;
    let total = deg.iter().fold(BigRational::zero(), |a, d| a + d);
    Ok(deg.into_iter().map(|d| d / &total).collect())
}

/// Σ_v deg(v) as an exact rational.
pub fn total_degree(g: &Graph) -> Result<BigRational, OracleError> {
    g.total_degree().as_exact().cloned().ok_or(OracleError::FloatGraph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, Scalar};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    fn weighted_path() -> Graph {
        let mut b = GraphBuilder::new(3);
        b.add_weighted_edge(0, 1, Scalar::Exact(q(1, 1))).unwrap();
        b.add_weighted_edge(1, 2, Scalar::Exact(q(3, 1))).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn resistance_examples() {
        let cfg = ExactConfig::default();
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(exact_resistance(&p3, 0, 2, &cfg).unwrap(), q(2, 1));
        assert_eq!(exact_resistance(&cycle(4), 0, 1, &cfg).unwrap(), q(3, 4));
        assert_eq!(exact_resistance(&complete(4), 2, 3, &cfg).unwrap(), q(1, 2));
        assert_eq!(exact_resistance(&petersen(), 0, 1, &cfg).unwrap(), q(3, 5));
        assert_eq!(exact_resistance(&p3, 1, 1, &cfg).unwrap(), q(0, 1));
    }

    #[test]
    fn resistance_errors() {
        let cfg = ExactConfig::default();
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(exact_resistance(&split, 0, 3, &cfg), Err(OracleError::Disconnected)));
        let mut b = GraphBuilder::new(2);
        b.add_weighted_edge(0, 1, Scalar::Float(1.0)).unwrap();
        let fg = b.build().unwrap();
        assert!(matches!(exact_resistance(&fg, 0, 1, &cfg), Err(OracleError::FloatGraph)));
        let small = ExactConfig { size_cap: 3 };
        assert!(matches!(
            exact_resistance(&cycle(5), 0, 1, &small),
            Err(OracleError::SizeCap { n: 5, cap: 3 })
        ));
    }

    #[test]
    fn matrix_matches_single_queries() {
        let cfg = ExactConfig::default();
        let g = petersen();
        let m = exact_resistance_matrix(&g, &cfg).unwrap();
        for i in 0..g.n() {
            assert!(m.get(i, i).is_zero());
            for j in 0..g.n() {
                assert_eq!(m.get(i, j), m.get(j, i));
                if i < j && j < 4 {
                    assert_eq!(*m.get(i, j), exact_resistance(&g, i, j, &cfg).unwrap());
                }
            }
        }
    }

    #[test]
    fn weighted_series_and_parallel() {
        let cfg = ExactConfig::default();
        // 1 ohm in series with 1/3 ohm.
        assert_eq!(exact_resistance(&weighted_path(), 0, 2, &cfg).unwrap(), q(4, 3));
    }

    #[test]
    fn hitting_time_examples() {
        let cfg = ExactConfig::default();
        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(*exact_hitting_times(&edge, &cfg).unwrap().get(0, 1), q(1, 1));
        let h = exact_hitting_times(&cycle(3), &cfg).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { q(0, 1) } else { q(2, 1) };
                assert_eq!(*h.get(i, j), want);
            }
        }
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = exact_hitting_times(&p3, &cfg).unwrap();
        assert_eq!(*h.get(0, 1), q(1, 1));
        assert_eq!(*h.get(1, 0), q(3, 1));
    }

    #[test]
    fn trace_examples() {
        let cfg = ExactConfig::default();
        let t = exact_trace_powers(&complete(4), 2, &cfg).unwrap();
        assert_eq!(t, vec![q(4, 1), q(0, 1), q(4, 3)]);
        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(exact_trace_powers(&edge, 2, &cfg).unwrap()[2], q(2, 1));
        let pet = exact_trace_powers(&petersen(), 1, &cfg).unwrap();
        assert_eq!(pet, vec![q(10, 1), q(0, 1)]);
    }

    #[test]
    fn stationary_examples() {
        let cfg = ExactConfig::default();
        assert_eq!(stationary_distribution(&complete(4), &cfg).unwrap(), vec![q(1, 4); 4]);
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(stationary_distribution(&p3, &cfg).unwrap(), vec![q(1, 4), q(1, 2), q(1, 4)]);
        assert_eq!(
            stationary_distribution(&weighted_path(), &cfg).unwrap(),
            vec![q(1, 8), q(4, 8), q(3, 8)]
        );
    }

    #[test]
    fn reversibility() {
        let cfg = ExactConfig::default();
        let g = weighted_path();
        let pi = stationary_distribution(&g, &cfg).unwrap();
        let p = transition_matrix(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(&pi[i] * &p[i][j], &pi[j] * &p[j][i]);
            }
        }
    }

    #[test]
    fn bareiss_with_pivoting() {
        // Leading zero forces a row swap.
        let a = vec![vec![q(0, 1), q(1, 1)], vec![q(2, 3), q(1, 2)]];
        let b = vec![vec![q(5, 1)], vec![q(1, 1)]];
        let x = solve_fraction_free(&a, &b).unwrap();
        assert_eq!(x[1][0], q(5, 1));
        assert_eq!(x[0][0], (q(1, 1) - q(5, 2)) * q(3, 2));
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(matches!(solve_fraction_free(&singular, &b), Err(OracleError::Singular)));
    }
}
