//! Compacting path graphs that differ only in irrelevant nodes.

use treeid::graph::{canonicalize_path_graph, parse_graph};

fn main() {
    // Path 0..5, everything confounded except the cycle 1-2-3.
    let g = parse_graph(
        "0->1 1->2 2->3 3->4 4->5 \
         0<->1 0<->2 0<->3 0<->4 0<->5 \
         1<->4 1<->5 2<->4 2<->5 3<->4 3<->5 4<->5",
    )
    .unwrap();
    let c = canonicalize_path_graph(&g).unwrap();
    println!("{}", c.graph.to_edge_list());
    for (label, image) in c.permutation.iter().enumerate() {
        match image {
            Some(new) => println!("  {label} -> {new}"),
            None => println!("  {label} dropped"),
        }
    }

    match canonicalize_path_graph(&parse_graph("0->1 0->2").unwrap()) {
        Ok(_) => unreachable!(),
        Err(e) => println!("star: {e}"),
    }
}
