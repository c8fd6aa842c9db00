//! Brute-force trek enumeration over a mixed graph given as edge lists.
//!
//! This deliberately ignores the tree structure (no ancestor sets, no parent
//! map) so it can serve as an independent oracle for the closed forms used
//! elsewhere. It is exponential in general and capped at small graphs.

use super::TreeGraph;

/// Largest graph the enumerator accepts.
pub const MAX_TREK_NODES: usize = 10;

/// A trek from `i` to `j`: two directed paths ending at `i` and `j` whose
/// sources are either equal (`top`) or joined by a bidirected edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trek {
    /// Directed path from its source down to `i`.
    pub left: Vec<usize>,
    /// Directed path from its source down to `j`.
    pub right: Vec<usize>,
    /// Whether the two sources are joined by a bidirected edge.
    pub via_bidirected: bool,
}

impl Trek {
    pub fn left_source(&self) -> usize {
        self.left[0]
    }

    pub fn right_source(&self) -> usize {
        self.right[0]
    }
}

#[derive(Debug, Clone)]
pub struct EdgeListGraph {
    pub node_count: usize,
    pub directed: Vec<(usize, usize)>,
    pub bidirected: Vec<(usize, usize)>,
}

impl EdgeListGraph {
    pub fn from_tree(g: &TreeGraph) -> Self {
        EdgeListGraph {
            node_count: g.node_count(),
            directed: g.directed_edges(),
            bidirected: g.bidirected_edges(),
        }
    }

    /// Copy with one directed edge deleted.
    pub fn without_directed(&self, edge: (usize, usize)) -> Self {
        let mut out = self.clone();
        out.directed.retain(|&e| e != edge);
        out
    }

    /// All directed paths ending at `v`, each listed source first.
    pub fn paths_into(&self, v: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut rev = vec![v];
        self.walk_back(&mut rev, &mut out);
        out
    }

    fn walk_back(&self, rev: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let mut p: Vec<usize> = rev.clone();
        p.reverse();
        out.push(p);
        let head = *rev.last().unwrap();
        for &(a, b) in &self.directed {
            if b == head && !rev.contains(&a) {
                rev.push(a);
                self.walk_back(rev, out);
                rev.pop();
            }
        }
    }

    fn joined(&self, a: usize, b: usize) -> bool {
        self.bidirected
            .iter()
            .any(|&(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    /// Every trek between `i` and `j`.
    pub fn treks(&self, i: usize, j: usize) -> Option<Vec<Trek>> {
        if self.node_count > MAX_TREK_NODES {
            return None;
        }
        let left = self.paths_into(i);
        let right = self.paths_into(j);
        let mut out = Vec::new();
        for l in &left {
            for r in &right {
                let (s, t) = (l[0], r[0]);
                if s == t || self.joined(s, t) {
                    out.push(Trek {
                        left: l.clone(),
                        right: r.clone(),
                        via_bidirected: s != t,
                    });
                }
            }
        }
        Some(out)
    }
}

/// Exhaustive version of [`TreeGraph::trek_exists_avoiding_parent_edge`].
pub fn trek_exists_exhaustive(g: &TreeGraph, i: usize, q: usize) -> Option<bool> {
    let mut e = EdgeListGraph::from_tree(g);
    if let Some(p) = g.parent(i) {
        e = e.without_directed((p, i));
    }
    e.treks(i, q).map(|ts| !ts.is_empty())
}
