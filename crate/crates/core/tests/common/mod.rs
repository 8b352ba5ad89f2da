//! Test-side oracles that share no code with the library's solvers.
#![allow(dead_code)]

use fosterlab::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    fosterlab::graph::ratio_to_f64(x)
}

fn conductance(g: &Graph, e: usize) -> Q {
    g.conductance_exact(e).expect("exact graph").clone()
}

fn degree(g: &Graph, v: usize) -> Q {
    g.neighbors(v).iter().fold(Q::zero(), |acc, &(_, e)| acc + conductance(g, e))
}

/// Gauss-Jordan inverse with first-nonzero pivoting.
pub fn inverse(mut a: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &p;
            inv[col][c] = &inv[col][c] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let (x, y) = (&a[col][c] * &f, &inv[col][c] * &f);
                    a[r][c] -= x;
                    inv[r][c] -= y;
                }
            }
        }
    }
    inv
}

/// All-pairs resistances from `(L + J)⁻¹`, `J` the all-ones matrix.
pub fn resistances(g: &Graph) -> Vec<Vec<Q>> {
    let n = g.n();
    let mut m: Vec<Vec<Q>> = (0..n).map(|_| vec![Q::one(); n]).collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let c = conductance(g, e);
        m[u][u] += &c;
        m[v][v] += &c;
        m[u][v] -= &c;
        m[v][u] -= &c;
    }
    let inv = inverse(m);
    (0..n)
        .map(|i| (0..n).map(|j| &inv[i][i] + &inv[j][j] - &inv[i][j] - &inv[j][i]).collect())
        .collect()
}

/// `E_i T_j = ½ Σ_k deg(k) (R_ij + R_jk - R_ik)`.
pub fn hitting_times(g: &Graph, r: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = g.n();
    let deg: Vec<Q> = (0..n).map(|v| degree(g, v)).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = (0..n).fold(Q::zero(), |acc, k| acc + &deg[k] * (&r[i][j] + &r[j][k] - &r[i][k]));
                    s / Q::from_integer(2.into())
                })
                .collect()
        })
        .collect()
}

pub fn total_degree(g: &Graph) -> Q {
    (0..g.n()).fold(Q::zero(), |acc, v| acc + degree(g, v))
}

/// Row `i` of `P^s`, by repeated vector-matrix steps.
pub fn transition_row(g: &Graph, i: usize, s: usize) -> Vec<Q> {
    let n = g.n();
    let deg: Vec<Q> = (0..n).map(|v| degree(g, v)).collect();
    let mut row = vec![Q::zero(); n];
    row[i] = Q::one();
    for _ in 0..s {
        let mut next = vec![Q::zero(); n];
        for x in 0..n {
            if row[x].is_zero() {
                continue;
            }
            for &(y, e) in g.neighbors(x) {
                next[y] += &row[x] * conductance(g, e) / &deg[x];
            }
        }
        row = next;
    }
    row
}

/// `Σ_{s<r} tr(P^s)`.
pub fn trace_sum(g: &Graph, r: usize) -> Q {
    let mut total = Q::zero();
    for v in 0..g.n() {
        for s in 0..r {
            total += &transition_row(g, v, s)[v];
        }
    }
    total
}

/// Sum over length-`r` walks from `i` of `C(walk) / (deg v_1 ⋯ deg v_{r-1})`,
/// grouped by endpoint.
pub fn walk_weights(g: &Graph, i: usize, r: usize) -> Vec<Q> {
    let n = g.n();
    let deg: Vec<Q> = (0..n).map(|v| degree(g, v)).collect();
    let mut w = vec![Q::zero(); n];
    w[i] = Q::one();
    for t in 0..r {
        let mut next = vec![Q::zero(); n];
        for x in 0..n {
            if w[x].is_zero() {
                continue;
            }
            let base = if t == 0 { w[x].clone() } else { &w[x] / &deg[x] };
            for &(y, e) in g.neighbors(x) {
                next[y] += &base * conductance(g, e);
            }
        }
        w = next;
    }
    w
}

/// Both sides of the finite Foster identity, computed here.
pub fn foster_sides(g: &Graph, res: &[Vec<Q>], r: usize) -> (Q, Q) {
    let mut lhs = Q::zero();
    for i in 0..g.n() {
        for (j, w) in walk_weights(g, i, r).iter().enumerate() {
            lhs += w * &res[i][j];
        }
    }
    let rhs = (trace_sum(g, r) - Q::from_integer(BigInt::from(r))) * Q::from_integer(2.into());
    (lhs, rhs)
}

/// Square-lattice ball of radius `m`: sizes and boundary count by formula.
pub fn square_ball_counts(m: usize) -> (usize, usize) {
    let n = 2 * m * m + 2 * m + 1;
    (n, 4 * m)
}
