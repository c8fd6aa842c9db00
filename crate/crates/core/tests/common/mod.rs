//! Fixture graphs shared by the integration suites.
#![allow(dead_code)]

use treeid::graph::{parse_graph, TreeGraph};

fn with_root_edges(directed: &str, n: usize, extra: &str) -> String {
    let root: Vec<String> = (1..=n).map(|i| format!("0<->{i}")).collect();
    format!("{directed} {} {extra}", root.join(" "))
}

fn path(n: usize) -> String {
    (1..=n).map(|i| format!("{}->{i}", i - 1)).collect::<Vec<_>>().join(" ")
}

/// Path `0 -> … -> n`, every node confounded with the root, and every pair of
/// non-root nodes confounded except consecutive nodes of `cycle`.
pub fn path_missing_cycle(n: usize, cycle: &[usize]) -> TreeGraph {
    let k = cycle.len();
    let missing: Vec<(usize, usize)> = (0..k)
        .map(|t| {
            let (a, b) = (cycle[t], cycle[(t + 1) % k]);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut extra = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if !missing.contains(&(i, j)) {
                extra.push(format!("{i}<->{j}"));
            }
        }
    }
    parse_graph(&with_root_edges(&path(n), n, &extra.join(" "))).unwrap()
}

pub fn g1() -> TreeGraph {
    parse_graph("0->1 1->2 1<->2").unwrap()
}

pub fn g2() -> TreeGraph {
    parse_graph(&with_root_edges("0->1 0->2 0->3 3->4", 4, "")).unwrap()
}

pub fn g3() -> TreeGraph {
    parse_graph(&with_root_edges(&path(4), 4, "2<->4")).unwrap()
}

/// The five hard trees, keyed by their index pair in the earlier census.
pub fn hard_trees() -> Vec<(&'static str, TreeGraph)> {
    let t = |d: &str, extra: &str| parse_graph(&with_root_edges(d, 4, extra)).unwrap();
    vec![
        ("(4680,403)", t(&path(4), "1<->3")),
        ("(4680,914)", g3()),
        ("(360,117)", t("0->1 0->2 2->3 3->4", "1<->3")),
        ("(360,369)", t("0->1 0->2 2->3 3->4", "2<->4")),
        ("(840,466)", t("0->1 1->3 0->2 2->4", "1<->4")),
    ]
}

/// Special path graphs: (cycle, number of non-root nodes, unique?).
pub const SPECIAL_CYCLES: [(&[usize], usize, bool); 6] = [
    (&[1, 3, 2, 4], 4, false),
    (&[1, 4, 2, 5], 5, false),
    (&[1, 2, 4, 3], 4, true),
    (&[1, 2, 5, 3], 5, true),
    (&[1, 3, 2, 5], 5, true),
    (&[1, 4, 2, 6], 6, true),
];

pub fn special_path_graphs() -> Vec<(Vec<usize>, TreeGraph, bool)> {
    SPECIAL_CYCLES
        .iter()
        .map(|(c, n, unique)| (c.to_vec(), path_missing_cycle(*n, c), *unique))
        .collect()
}

/// Every fixture graph with a name.
pub fn corpus() -> Vec<(String, TreeGraph)> {
    let mut v = vec![("G1".to_string(), g1()), ("G2".to_string(), g2()), ("G3".to_string(), g3())];
    v.extend(hard_trees().into_iter().map(|(n, g)| (n.to_string(), g)));
    v.extend(
        special_path_graphs()
            .into_iter()
            .map(|(c, g, _)| (format!("path cycle {c:?}"), g)),
    );
    v
}
