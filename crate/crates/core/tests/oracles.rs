//! Property tests against independent oracles: trek enumeration, the matrix
//! form of the model, exhaustive trek search, and sampled ground truth.

use proptest::prelude::*;
use treeid::cycleq::build_quadratic;
use treeid::engine::{run_treeid, verify_report, Engine, EngineConfig, IdReport};
use treeid::graph::trek::trek_exists_exhaustive;
use treeid::graph::{enumerate_missing_cycles, TreeGraph};
use treeid::model::{
    compute_sigma, recover_omega, sample_model, sigma_by_matrix_formula, sigma_by_trek_enumeration,
};
use treeid::symexpr::{evaluate, EvalContext, QuadExtValue};

/// Random tree on `1..=max_n` non-root nodes (parent of `i` below `i`) with a
/// random bidirected pattern.
fn tree_graph(max_n: usize) -> impl Strategy<Value = TreeGraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<prop::sample::Index>(), n),
                proptest::collection::vec(any::<bool>(), n * (n + 1) / 2),
            )
                .prop_map(move |(parents, bits)| {
                    let directed: Vec<(usize, usize)> =
                        (1..=n).map(|i| (parents[i - 1].index(i), i)).collect();
                    let mut bidirected = Vec::new();
                    let mut k = 0;
                    for i in 0..=n {
                        for j in i + 1..=n {
                            if bits[k] {
                                bidirected.push((i, j));
                            }
                            k += 1;
                        }
                    }
                    TreeGraph::from_edges(n + 1, &directed, &bidirected).unwrap()
                })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_matches_trek_sum_and_matrix_form(g in tree_graph(6), seed in any::<u64>()) {
        let m = sample_model(&g, seed);
        let s = compute_sigma(&g, &m);
        prop_assert_eq!(&s, &sigma_by_matrix_formula(&g, &m));
        for i in 0..g.node_count() {
            for j in i..g.node_count() {
                prop_assert_eq!(s.get(i, j), &sigma_by_trek_enumeration(&g, &m, i, j).unwrap());
            }
        }
        prop_assert!(s.is_positive_definite());
    }

    #[test]
    fn omega_round_trips(g in tree_graph(7), seed in any::<u64>()) {
        let m = sample_model(&g, seed);
        prop_assert_eq!(recover_omega(&g, &compute_sigma(&g, &m), &m.lambda), m.omega);
    }

    #[test]
    fn trek_condition_matches_exhaustive_search(g in tree_graph(6)) {
        for i in 1..g.node_count() {
            for q in 0..g.node_count() {
                prop_assert_eq!(
                    Some(g.trek_exists_avoiding_parent_edge(i, q)),
                    trek_exists_exhaustive(&g, i, q),
                    "i={} q={}", i, q
                );
            }
        }
    }

    #[test]
    fn true_weight_solves_every_cycle_quadratic(g in tree_graph(6), seed in any::<u64>()) {
        for i in 1..g.node_count() {
            for c in enumerate_missing_cycles(&g, i, g.n(), 4).cycles {
                let q = build_quadratic(&g, &c);
                for k in 0..3 {
                    let m = sample_model(&g, seed.wrapping_add(k));
                    let mut ctx = EvalContext::new(compute_sigma(&g, &m));
                    let x = QuadExtValue::rational(m.lambda(c.start()).clone());
                    let a = evaluate(&q.a, &mut ctx).unwrap();
                    let b = evaluate(&q.b, &mut ctx).unwrap();
                    let cc = evaluate(&q.c, &mut ctx).unwrap();
                    let r = a.mul(&x).unwrap().mul(&x).unwrap().add(&b.mul(&x).unwrap()).unwrap().add(&cc).unwrap();
                    prop_assert!(r.is_zero(), "cycle {}", c);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reports_are_sound(g in tree_graph(5), seed in any::<u64>()) {
        let cfg = EngineConfig { seed, ..EngineConfig::default() };
        let r = run_treeid(&g, &cfg);
        let v = verify_report(&g, &r, 8, seed ^ 0x5a5a).unwrap();
        prop_assert!(v.is_sound(), "{}: {:?}", g.to_edge_list(), v.violations);
    }

    #[test]
    fn reports_are_deterministic_and_round_trip(g in tree_graph(5)) {
        let cfg = EngineConfig::default();
        let a = run_treeid(&g, &cfg);
        let text = a.to_json();
        prop_assert_eq!(&text, &run_treeid(&g, &cfg).to_json());
        prop_assert_eq!(IdReport::from_json(&text).unwrap(), a);
    }

    #[test]
    fn instrument_closure_is_exact(g in tree_graph(7)) {
        let mut e = Engine::new(&g, &EngineConfig::default());
        e.preliminary_identify();
        // Combinatorial closure: root instruments, then any node reachable by
        // a missing edge whose trek condition holds.
        let size = g.node_count();
        let mut known: Vec<bool> = (0..size).map(|i| i > 0 && !g.has_bidirected(0, i)).collect();
        loop {
            let mut grew = false;
            for i in 1..size {
                for j in 1..size {
                    if known[i] && !known[j] && i != j && !g.has_bidirected(i, j)
                        && g.trek_exists_avoiding_parent_edge(i, g.parent(j).unwrap())
                    {
                        known[j] = true;
                        grew = true;
                    }
                }
            }
            if !grew { break; }
        }
        for (i, &k) in known.iter().enumerate().skip(1) {
            prop_assert_eq!(e.table().size(i) == 1, k, "node {}", i);
        }
    }
}
