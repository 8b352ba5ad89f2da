mod common;

use fosterlab::exact::{self, ExactConfig};
use fosterlab::foster::{self, CheckMode};
use fosterlab::graph::{self, Graph};
use fosterlab::randwalk::{self, WalkSimConfig};
use fosterlab::solver::{self, ExtrapolationModel, SolveConfig};
use fosterlab::suite;
use fosterlab::walks;
use proptest::prelude::*;

fn random_graph(seed: u64, max_n: usize, weighted: bool) -> Graph {
    let g = suite::random_graphs(seed, 1, max_n).remove(0).graph;
    if weighted {
        suite::with_seeded_weights(&g, seed)
    } else {
        g
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn foster_identity_is_exact(seed in any::<u64>(), r in 1usize..=4, weighted in any::<bool>()) {
        let g = random_graph(seed, 9, weighted);
        let report = foster::finite_foster_check(&g, r, CheckMode::Exact, "random").unwrap();
        prop_assert!(report.holds(0.0), "{report:?}");
        let (lhs, rhs) = common::foster_sides(&g, &common::resistances(&g), r);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn library_resistances_match_oracle(seed in any::<u64>(), weighted in any::<bool>()) {
        let g = random_graph(seed, 10, weighted);
        let lib = exact::exact_resistance_matrix(&g, &ExactConfig::default()).unwrap();
        let oracle = common::resistances(&g);
        for i in 0..g.n() {
            for j in 0..g.n() {
                prop_assert_eq!(lib.get(i, j), &oracle[i][j]);
            }
        }
    }

    #[test]
    fn resistance_is_a_metric(seed in any::<u64>(), weighted in any::<bool>()) {
        let g = random_graph(seed, 10, weighted);
        let r = common::resistances(&g);
        let n = g.n();
        for i in 0..n {
            prop_assert!(num_traits::Zero::is_zero(&r[i][i]));
            for j in 0..n {
                prop_assert_eq!(&r[i][j], &r[j][i]);
                for k in 0..n {
                    prop_assert!(r[i][k] <= &r[i][j] + &r[j][k]);
                }
            }
        }
        if !weighted {
            for i in 0..n {
                let dist = g.distances_from(i);
                for j in 0..n {
                    prop_assert!(r[i][j] <= common::q(dist[j].unwrap() as i64, 1));
                }
            }
        }
    }

    #[test]
    fn deleting_an_edge_never_lowers_resistance(seed in any::<u64>(), pick in any::<usize>()) {
        let g = random_graph(seed, 9, true);
        let e = pick % g.m();
        let h = g.without_edge(e);
        prop_assume!(h.is_connected());
        let (rg, rh) = (common::resistances(&g), common::resistances(&h));
        for i in 0..g.n() {
            for j in 0..g.n() {
                prop_assert!(rh[i][j] >= rg[i][j]);
            }
        }
    }

    #[test]
    fn subdividing_doubles_original_resistances(seed in any::<u64>()) {
        let g = random_graph(seed, 8, false);
        let s = g.subdivide();
        let (rg, rs) = (common::resistances(&g), common::resistances(&s));
        for i in 0..g.n() {
            for j in 0..g.n() {
                prop_assert_eq!(&rs[i][j], &(&rg[i][j] * common::q(2, 1)));
            }
        }
    }

    #[test]
    fn commute_identity_holds(seed in any::<u64>(), weighted in any::<bool>()) {
        let g = random_graph(seed, 9, weighted);
        let h = exact::exact_hitting_times(&g, &ExactConfig::default()).unwrap();
        let r = common::resistances(&g);
        let c = common::total_degree(&g);
        for i in 0..g.n() {
            for j in 0..g.n() {
                if i != j {
                    prop_assert_eq!(h.get(i, j) + h.get(j, i), &c * &r[i][j]);
                }
            }
        }
    }

    #[test]
    fn cg_agrees_with_exact(seed in any::<u64>(), weighted in any::<bool>()) {
        let g = random_graph(seed, 14, weighted);
        let r = common::resistances(&g);
        for j in 1..g.n() {
            let cg = solver::cg_resistance(&g, 0, j, &SolveConfig::default()).unwrap();
            prop_assert!((cg.value - common::to_f64(&r[0][j])).abs() <= 1e-8);
        }
    }

    #[test]
    fn closed_walk_counts_agree(seed in any::<u64>(), s in 0usize..=6) {
        let g = random_graph(seed, 10, false);
        for v in 0..g.n() {
            prop_assert_eq!(walks::closed_walk_count(&g, v, s).unwrap(), walks::closed_walk_count_dfs(&g, v, s).unwrap());
        }
    }

    #[test]
    fn edge_list_round_trip(seed in any::<u64>(), weighted in any::<bool>()) {
        let g = random_graph(seed, 12, weighted);
        let back = graph::parse_edge_list(&graph::to_edge_list_string(&g)).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
        for e in 0..g.m() {
            prop_assert_eq!(back.conductance(e), g.conductance(e));
        }
    }

    #[test]
    fn extrapolation_recovers_quadratic_tails(
        limit in -5.0f64..5.0,
        a in -10.0f64..10.0,
        b in -10.0f64..10.0,
    ) {
        let sizes = [16.0, 32.0, 64.0];
        let values: Vec<f64> = sizes.iter().map(|l| limit + a / l + b / (l * l)).collect();
        for model in [ExtrapolationModel::InvPoly, ExtrapolationModel::Richardson] {
            let fit = solver::extrapolate(&sizes, &values, model).unwrap();
            prop_assert!((fit.limit - limit).abs() < 1e-10, "{model:?} {}", fit.limit);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>()) {
        let g = random_graph(seed, 8, true);
        let cfg = WalkSimConfig { seed, replications: 500, ..WalkSimConfig::default() };
        let a = randwalk::simulate_hitting_time(&g, 0, g.n() - 1, &cfg).unwrap();
        let b = randwalk::simulate_hitting_time(&g, 0, g.n() - 1, &WalkSimConfig { parallel: false, ..cfg }).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn hitting_estimates_cover_exact_values() {
    // Over 100 seeds, |simulated - exact| <= 3 SE for at least 99% of
    // (pair, seed) combinations.
    let graphs = [
        suite::cycle(3),
        suite::cycle(4),
        suite::complete(4),
        graph::parse_edge_list("0 1 1\n1 2 3\n").unwrap(),
    ];
    let mut total = 0;
    let mut within = 0;
    for g in &graphs {
        let h = common::hitting_times(g, &common::resistances(g));
        for seed in 0..100 {
            let cfg = WalkSimConfig { seed, replications: 2000, ..WalkSimConfig::default() };
            let est = randwalk::simulate_hitting_time(g, 0, g.n() - 1, &cfg).unwrap();
            total += 1;
            if (est.mean - common::to_f64(&h[0][g.n() - 1])).abs() <= 3.0 * est.std_err {
                within += 1;
            }
        }
    }
    assert!(within * 100 >= total * 99, "{within}/{total}");
}

#[test]
fn stationary_distribution_is_reached() {
    let p3 = suite::path(3);
    for g in [suite::complete(4), p3] {
        let occ = randwalk::empirical_occupation(&g, 0, 1_000_000, 9).unwrap();
        assert!(randwalk::total_variation(&occ, &randwalk::stationary_f64(&g)) <= 0.01);
    }
}
