//! The worked examples: instrument chains, the cycle equations of the three
//! introductory graphs, the five hard trees and the special path graphs.

mod common;

use treeid::cycleq::build_quadratic;
use treeid::engine::{run_treeid, verify_report, EdgeStatus, EngineConfig, ProvenanceDoc, TraceAction};
use treeid::graph::{canonicalize_path_graph, enumerate_missing_cycles, MissingCycle, TreeGraph};
use treeid::model::{compute_sigma, rat, sample_model, ModelParams, Rational};
use treeid::symexpr::{discriminant, evaluate, is_zero, sigma, EvalContext, SigmaExpr};

fn value(e: &SigmaExpr, ctx: &mut EvalContext) -> Rational {
    evaluate(e, ctx).unwrap().as_rational().expect("radical-free").clone()
}

fn model_ctx(g: &TreeGraph, seed: u64) -> (ModelParams, EvalContext) {
    let m = sample_model(g, seed);
    let ctx = EvalContext::new(compute_sigma(g, &m));
    (m, ctx)
}

#[test]
fn g1_instrument_formulas() {
    let r = run_treeid(&common::g1(), &EngineConfig::default());
    assert_eq!(r.edges[0].pretty, ["σ01/σ00"]);
    assert_eq!(r.edges[1].pretty, ["σ02/σ01"]);
    assert!(r.edges.iter().all(|e| e.provenance == ProvenanceDoc::RootInstrument));
}

#[test]
fn g2_four_cycle_is_linear_with_printed_coefficients() {
    let g = common::g2();
    let q = build_quadratic(&g, &MissingCycle::new(&g, vec![1, 2, 3, 4]).unwrap());
    assert_eq!(is_zero(&q.a, &g, 3, 1), Ok(true));
    // Printed coefficients, shifted to zero-based symbols.
    let s = sigma;
    let b = (s(0, 1) * s(0, 2) - s(0, 0) * s(1, 2)) * (s(0, 4) * s(3, 3) - s(0, 3) * s(3, 4))
        - (s(0, 3) * s(1, 4) - s(0, 4) * s(1, 3)) * (s(0, 0) * s(2, 3) - s(0, 2) * s(0, 3));
    let c = (s(0, 1) * s(0, 2) - s(0, 0) * s(1, 2)) * (s(1, 3) * s(3, 4) - s(1, 4) * s(3, 3))
        - (s(0, 3) * s(1, 4) - s(0, 4) * s(1, 3)) * (s(0, 3) * s(1, 2) - s(0, 1) * s(2, 3));
    for seed in 0..20 {
        let (m, mut ctx) = model_ctx(&g, seed);
        let (bv, cv) = (value(&b, &mut ctx), value(&c, &mut ctx));
        assert_eq!(-cv / &bv, m.lambda(1).clone());
        // Same root as our equation: B·c − C·b = 0.
        let (qb, qc) = (value(&q.b, &mut ctx), value(&q.c, &mut ctx));
        assert_eq!(&qb * value(&c, &mut ctx), &qc * bv);
    }
}

#[test]
fn g2_three_cycles_give_two_roots_then_one() {
    let g = common::g2();
    let r = run_treeid(&g, &EngineConfig::default());
    assert!(r.all_unique());
    let q = build_quadratic(&g, &MissingCycle::new(&g, vec![1, 2, 3]).unwrap());
    assert_eq!(is_zero(&q.a, &g, 3, 2), Ok(false));
    assert_eq!(is_zero(&discriminant(&q.a, &q.b, &q.c), &g, 3, 2), Ok(false));
}

#[test]
fn g3_cycles_and_discriminant() {
    let g = common::g3();
    let cycles = enumerate_missing_cycles(&g, 1, 4, 64);
    let listed: Vec<Vec<usize>> = cycles.cycles.iter().map(|c| c.nodes().to_vec()).collect();
    assert_eq!(listed, [vec![1, 2, 3], vec![1, 3, 4], vec![1, 2, 3, 4]]);

    // The printed leading coefficient and the printed simplification of the
    // discriminant, (λ01·ω01 + ω11)(2·λ01·λ12·ω02 + ω22)·ω03, agree with our
    // quadratic up to a common scalar: disc·a_printed² = P²·a².
    let q = build_quadratic(&g, &MissingCycle::new(&g, vec![1, 2, 3]).unwrap());
    let s = sigma;
    let a_printed = s(0, 1) * s(0, 2) * s(2, 3) - s(0, 1) * s(0, 3) * s(2, 2) - s(0, 2) * s(0, 2) * s(1, 3)
        + s(0, 2) * s(0, 3) * s(1, 2);
    let disc = discriminant(&q.a, &q.b, &q.c);
    for seed in 0..20 {
        let (m, mut ctx) = model_ctx(&g, seed);
        let (l1, l2) = (m.lambda(1), m.lambda(2));
        let w = |i, j| m.omega.get(i, j).clone();
        let p = (l1 * w(0, 1) + w(1, 1)) * (rat(2, 1) * l1 * l2 * w(0, 2) + w(2, 2)) * w(0, 3);
        let (dv, av, apv) = (value(&disc, &mut ctx), value(&q.a, &mut ctx), value(&a_printed, &mut ctx));
        assert_ne!(av, rat(0, 1));
        assert_eq!(&dv * &apv * &apv, &p * &p * &av * &av);
    }
    let r = run_treeid(&g, &EngineConfig::default());
    assert!(r.all_unique());
}

#[test]
fn hard_trees_are_fully_identified() {
    for (name, g) in common::hard_trees() {
        let r = run_treeid(&g, &EngineConfig::default());
        assert!(r.all_unique(), "{name}: {:?}", r.edges.iter().map(|e| e.status).collect::<Vec<_>>());
        let v = verify_report(&g, &r, 25, 7).unwrap();
        assert!(v.is_sound(), "{name}: {:?}", v.violations);
    }
}

#[test]
fn tree_403_filters_the_three_cycle_pair() {
    let (_, g) = common::hard_trees().remove(0);
    let r = run_treeid(&g, &EngineConfig::default());
    let steps: Vec<(usize, Vec<usize>, TraceAction)> = r
        .trace
        .iter()
        .filter(|t| t.node == 1)
        .map(|t| (t.node, t.cycle.clone(), t.action))
        .collect();
    assert_eq!(
        steps,
        [
            (1, vec![1, 2, 4], TraceAction::TwoRoots),
            (1, vec![1, 2, 3, 4], TraceAction::FilterKeptOne),
        ]
    );
    assert_eq!(r.edges[0].provenance, ProvenanceDoc::CycleFilter { cycle: vec![1, 2, 3, 4] });
}

#[test]
fn special_path_graphs() {
    for (cycle, g, unique) in common::special_path_graphs() {
        let r = run_treeid(&g, &EngineConfig::default());
        for &v in &cycle {
            let want = if unique { EdgeStatus::Unique } else { EdgeStatus::Unidentified };
            assert_eq!(r.edges[v - 1].status, want, "cycle {cycle:?}, node {v}");
        }
        let c = MissingCycle::new(&g, cycle.clone()).unwrap();
        let rotations: Vec<bool> = (0..c.len())
            .map(|k| {
                let q = build_quadratic(&g, &c.rotated(k));
                is_zero(&q.a, &g, 3, 11).unwrap()
            })
            .collect();
        if unique {
            assert!(rotations.contains(&true), "{cycle:?}");
        } else {
            let q = build_quadratic(&g, &c);
            for e in [&q.a, &q.b, &q.c] {
                assert_eq!(is_zero(e, &g, 3, 11), Ok(true), "{cycle:?}");
            }
        }
    }
}

#[test]
fn special_path_graphs_are_canonical() {
    for (_, g, _) in common::special_path_graphs() {
        let c = canonicalize_path_graph(&g).unwrap();
        assert_eq!(c.graph, g);
        assert!(c.permutation.iter().enumerate().all(|(i, p)| *p == Some(i)));
    }
}
