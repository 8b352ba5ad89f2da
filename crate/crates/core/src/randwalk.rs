//! Monte Carlo hitting and commute times.
//!
//! Every replication draws from its own ChaCha8 stream, keyed by the seed,
//! the vertex pair and the replication index, and step counts are tallied in
//! integers. Results therefore do not depend on thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::exact::{self, ExactConfig};
use crate::graph::{ratio_to_f64, Graph, ScalarKind, VertexId};
use crate::par;
use crate::solver::{self, SolveConfig};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WalkSimConfig {
    pub seed: u64,
    pub replications: u64,
    /// Per-replication step limit.
    pub step_cap: u64,
    pub parallel: bool,
}

impl Default for WalkSimConfig {
    fn default() -> Self {
        WalkSimConfig { seed: 0, replications: 100_000, step_cap: 10_000_000, parallel: par::ENABLED }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitEstimate {
    pub start: VertexId,
    pub target: VertexId,
    pub mean: f64,
    pub std_err: f64,
    pub replications: u64,
    pub total_steps: u64,
}

/// Neighbor lists with cumulative conductances for weighted steps.
struct Stepper {
    nbrs: Vec<Vec<VertexId>>,
    cumulative: Vec<Vec<f64>>,
    unit: bool,
}

impl Stepper {
    fn new(g: &Graph) -> Self {
        let mut nbrs = Vec::with_capacity(g.n());
        let mut cumulative = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            let mut acc = 0.0;
            let mut ns = Vec::new();
            let mut cs = Vec::new();
            for &(u, e) in g.neighbors(v) {
                acc += g.conductance_f64(e);
                ns.push(u);
                cs.push(acc);
            }
            nbrs.push(ns);
            cumulative.push(cs);
        }
        Stepper { nbrs, cumulative, unit: g.is_unit() }
    }

    fn step(&self, v: VertexId, rng: &mut ChaCha8Rng) -> VertexId {
        let ns = &self.nbrs[v];
        if self.unit {
            return ns[rng.random_range(0..ns.len())];
        }
        let cs = &self.cumulative[v];
        let u = rng.random::<f64>() * cs[cs.len() - 1];
        let k = cs.partition_point(|&c| c <= u).min(ns.len() - 1);
        ns[k]
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_rng(seed: u64, a: VertexId, b: VertexId, stream: u64) -> ChaCha8Rng {
    let key = splitmix(splitmix(splitmix(seed) ^ a as u64) ^ b as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(stream);
    rng
}

fn check(g: &Graph, i: VertexId, j: VertexId, cfg: &WalkSimConfig) -> Result<(), SimError> {
    for v in [i, j] {
        if v >= g.n() {
            return Err(SimError::InvalidVertex { vertex: v, n: g.n() });
        }
    }
    if i == j {
        return Err(SimError::SamePair(i));
    }
    if cfg.replications == 0 {
        return Err(SimError::NoReplications);
    }
    if !g.is_connected() {
        return Err(SimError::Disconnected);
    }
    Ok(())
}

/// Estimates `E_i T_j` from independent walks started at `i`.
pub fn simulate_hitting_time(g: &Graph, i: VertexId, j: VertexId, cfg: &WalkSimConfig) -> Result<HitEstimate, SimError> {
    check(g, i, j, cfg)?;
    let stepper = Stepper::new(g);
    let run = |rep: usize| -> Option<u64> {
        let mut rng = stream_rng(cfg.seed, i, j, rep as u64);
        let mut v = i;
        let mut steps = 0u64;
        while v != j {
            if steps == cfg.step_cap {
                return None;
            }
            v = stepper.step(v, &mut rng);
            steps += 1;
        }
        Some(steps)
    };
    let samples = par::map_indices(cfg.replications as usize, cfg.parallel, run);
    let capped = samples.iter().filter(|s| s.is_none()).count() as u64;
    if capped > 0 {
        return Err(SimError::StepCap { count: capped, cap: cfg.step_cap });
    }
    let mut sum = 0u128;
    let mut sum_sq = 0u128;
    for s in samples.into_iter().flatten() {
        sum += s as u128;
        sum_sq += (s as u128) * (s as u128);
    }
    let n = cfg.replications as f64;
    let mean = sum as f64 / n;
    let var = if cfg.replications > 1 {
        ((sum_sq as f64) - n * mean * mean).max(0.0) / (n - 1.0)
    } else {
        0.0
    };
    Ok(HitEstimate {
        start: i,
        target: j,
        mean,
        std_err: (var / n).sqrt(),
        replications: cfg.replications,
        total_steps: sum as u64,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommuteReport {
    pub forward: HitEstimate,
    pub backward: HitEstimate,
    pub commute_mean: f64,
    pub commute_std_err: f64,
    /// `C · R_ij`, with `C` the total degree.
    pub expected: f64,
    pub z_score: f64,
}

impl CommuteReport {
    pub fn within(&self, z: f64) -> bool {
        self.z_score.abs() <= z
    }
}

/// `C · R_ij` exactly for exact graphs within the oracle cap, by CG otherwise.
pub fn expected_commute_time(g: &Graph, i: VertexId, j: VertexId) -> Result<f64, SimError> {
    let cfg = ExactConfig::default();
    if g.scalar_kind() == ScalarKind::Exact && g.n() <= cfg.size_cap {
        let r = exact::exact_resistance(g, i, j, &cfg)?;
        return Ok(ratio_to_f64(&(r * exact::total_degree(g)?)));
    }
    let r = solver::cg_resistance(g, i, j, &SolveConfig::default()).map_err(|_| SimError::Disconnected)?;
    Ok(r.value * g.total_degree().to_f64())
}

/// Simulated `E_i T_j + E_j T_i` against `C · R_ij`.
pub fn commute_check(g: &Graph, i: VertexId, j: VertexId, cfg: &WalkSimConfig) -> Result<CommuteReport, SimError> {
    let forward = simulate_hitting_time(g, i, j, cfg)?;
    let backward = simulate_hitting_time(g, j, i, cfg)?;
    let expected = expected_commute_time(g, i, j)?;
    let commute_mean = forward.mean + backward.mean;
    let commute_std_err = forward.std_err.hypot(backward.std_err);
    let z_score = if commute_std_err > 0.0 {
        (commute_mean - expected) / commute_std_err
    } else if commute_mean == expected {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(CommuteReport { forward, backward, commute_mean, commute_std_err, expected, z_score })
}

/// Visit frequencies of one walk of `steps` steps started at `start`.
pub fn empirical_occupation(g: &Graph, start: VertexId, steps: u64, seed: u64) -> Result<Vec<f64>, SimError> {
    if start >= g.n() {
        return Err(SimError::InvalidVertex { vertex: start, n: g.n() });
    }
    if !g.is_connected() {
        return Err(SimError::Disconnected);
    }
    let stepper = Stepper::new(g);
    let mut rng = stream_rng(seed, start, start, 0);
    let mut counts = vec![0u64; g.n()];
    let mut v = start;
    for _ in 0..steps {
        v = stepper.step(v, &mut rng);
        counts[v] += 1;
    }
    Ok(counts.into_iter().map(|c| c as f64 / steps as f64).collect())
}

/// `π_v = deg(v) / C` in floating point.
pub fn stationary_f64(g: &Graph) -> Vec<f64> {
    let total = g.total_degree().to_f64();
    (0..g.n()).map(|v| g.degree_f64(v) / total).collect()
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
