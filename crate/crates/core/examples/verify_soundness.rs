//! Checks a report against the true weights of random models.

use treeid::engine::{run_treeid, verify_report, EngineConfig};
use treeid::graph::parse_graph;
use treeid::symexpr::{sigma, ExprDoc};

fn main() {
    let g = parse_graph("0->1 1->2 2->3 3->4 0<->1 0<->2 0<->3 0<->4 1<->3").unwrap();
    let mut report = run_treeid(&g, &EngineConfig::default());
    let summary = verify_report(&g, &report, 100, 1).unwrap();
    println!(
        "{} models, {} checks, {} violations",
        summary.models,
        summary.checks,
        summary.violations.len()
    );

    // Swap in a plausible but wrong formula for the last edge.
    let last = report.edges.len() - 1;
    report.edges[last].formulas = vec![ExprDoc::from_expr(&(sigma(0, 4) / sigma(0, 3)), &|v| v)];
    let summary = verify_report(&g, &report, 100, 1).unwrap();
    println!("after corruption: {} violations", summary.violations.len());
    if let Some(v) = summary.violations.first() {
        println!("  model seed {}: {}", v.model_seed, v.message);
    }
}
