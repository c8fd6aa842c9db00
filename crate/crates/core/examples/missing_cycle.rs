//! Cycle equations on a star where every child is confounded with the root.

use treeid::cycleq::build_quadratic;
use treeid::engine::{run_treeid, EngineConfig};
use treeid::graph::{enumerate_missing_cycles, parse_graph};
use treeid::symexpr::{discriminant, is_zero};

fn main() {
    let g = parse_graph("0->1 0->2 0->3 3->4 0<->1 0<->2 0<->3 0<->4").unwrap();
    let cfg = EngineConfig::default();

    let cycles = enumerate_missing_cycles(&g, 1, g.n(), cfg.max_cycles);
    for c in &cycles.cycles {
        let q = build_quadratic(&g, c);
        let linear = is_zero(&q.a, &g, cfg.pit_trials, cfg.seed).unwrap();
        let kind = if linear {
            "linear".to_string()
        } else {
            let d = discriminant(&q.a, &q.b, &q.c);
            let double = is_zero(&d, &g, cfg.pit_trials, cfg.seed).unwrap();
            format!("quadratic, {} root(s)", if double { 1 } else { 2 })
        };
        println!("cycle {c}: {kind}");
    }

    let report = run_treeid(&g, &cfg);
    println!("\ntrace:");
    for t in &report.trace {
        println!("  node {} {:?} {:?}", t.node, t.cycle, t.action);
    }
    println!();
    for e in &report.edges {
        println!("λ({}→{}) {:?}: {}", e.from, e.to, e.status, e.pretty.join(" | "));
    }
}
