//! Root instruments and propagation along missing bidirected edges.

use treeid::engine::{run_treeid, EngineConfig};
use treeid::graph::parse_graph;

fn main() {
    let cfg = EngineConfig::default();
    for text in [
        // 1 is unconfounded with the root, so 0 instruments both edges.
        "0->1 1->2 1<->2",
        // 2 is confounded with the root; 1 takes over once it is known.
        "0->1 1->2 0<->2",
        // Nothing to work with.
        "0->1 0->2 0<->1 0<->2 1<->2",
    ] {
        let g = parse_graph(text).unwrap();
        let report = run_treeid(&g, &cfg);
        println!("{text}");
        for e in &report.edges {
            match e.pretty.as_slice() {
                [] => println!("  λ({}→{}) unidentified", e.from, e.to),
                fs => println!("  λ({}→{}) = {}   [{:?}]", e.from, e.to, fs.join(" | "), e.provenance),
            }
        }
    }
}
