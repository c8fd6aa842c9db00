//! Compaction of path graphs with a root-confounded spine.
//!
//! On a path `0 -> 1 -> ... -> n` with `0 <-> i` for every `i`, only the
//! nodes touching a missing bidirected pair and their parents enter the
//! missing-edge equations. Everything else can be dropped, and maximal runs of
//! consecutive relevant nodes can be reordered as blocks without changing
//! identifiability.

use super::{GraphError, TreeGraph};

/// Largest block count for which every block order is tried.
const MAX_PERMUTED_BLOCKS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPathGraph {
    pub graph: TreeGraph,
    /// New index of every node of the input graph; `None` for dropped nodes.
    pub permutation: Vec<Option<usize>>,
    /// Relevant non-root nodes of the input graph.
    pub support: Vec<usize>,
}

fn check_path_graph(g: &TreeGraph) -> Result<(), GraphError> {
    for v in 1..g.node_count() {
        if g.parent(v) != Some(v - 1) {
            return Err(GraphError::NotPathGraph(format!(
                "node {} does not hang below node {}",
                g.label(v),
                g.label(v - 1)
            )));
        }
        if !g.has_bidirected(0, v) {
            return Err(GraphError::NotPathGraph(format!(
                "root bidirected edge to node {} is missing",
                g.label(v)
            )));
        }
    }
    Ok(())
}

fn has_missing_partner(g: &TreeGraph, i: usize) -> bool {
    (1..g.node_count()).any(|j| j != i && !g.has_bidirected(i, j))
}

/// Nodes `i > 0` such that `i` or `i + 1` lacks a bidirected edge to some
/// other non-root node.
pub fn path_graph_support(g: &TreeGraph) -> Result<Vec<usize>, GraphError> {
    check_path_graph(g)?;
    Ok((1..g.node_count())
        .filter(|&i| has_missing_partner(g, i) || (i < g.n() && has_missing_partner(g, i + 1)))
        .collect())
}

/// Drops irrelevant nodes and picks the block order whose sorted list of
/// missing pairs is lexicographically smallest.
pub fn canonicalize_path_graph(g: &TreeGraph) -> Result<CanonicalPathGraph, GraphError> {
    let support = path_graph_support(g)?;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &support {
        match blocks.last_mut() {
            Some(b) if *b.last().unwrap() + 1 == v => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let missing: Vec<(usize, usize)> = g.missing_pairs();

    let assign = |order: &[usize]| -> Vec<Option<usize>> {
        let mut perm = vec![None; g.node_count()];
        perm[0] = Some(0);
        let mut next = 1;
        for &b in order {
            for &v in &blocks[b] {
                perm[v] = Some(next);
                next += 1;
            }
        }
        perm
    };
    let key = |perm: &[Option<usize>]| -> Vec<(usize, usize)> {
        let mut k: Vec<(usize, usize)> = missing
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a].unwrap(), perm[b].unwrap());
                (x.min(y), x.max(y))
            })
            .collect();
        k.sort_unstable();
        k
    };

    let mut order: Vec<usize> = (0..blocks.len()).collect();
    let mut best = assign(&order);
    if blocks.len() <= MAX_PERMUTED_BLOCKS {
        let mut best_key = key(&best);
        while next_permutation(&mut order) {
            let perm = assign(&order);
            let k = key(&perm);
            if k < best_key {
                best_key = k;
                best = perm;
            }
        }
    }

    let size = support.len() + 1;
    let directed: Vec<(usize, usize)> = (1..size).map(|v| (v - 1, v)).collect();
    let mut absent = vec![vec![false; size]; size];
    for &(a, b) in &missing {
        let (x, y) = (best[a].unwrap(), best[b].unwrap());
        absent[x][y] = true;
        absent[y][x] = true;
    }
    let mut bidirected = Vec::new();
    for x in 0..size {
        for y in x + 1..size {
            if !absent[x][y] {
                bidirected.push((x, y));
            }
        }
    }
    let graph = TreeGraph::from_edges(size, &directed, &bidirected)?;
    Ok(CanonicalPathGraph {
        graph,
        permutation: best,
        support,
    })
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
