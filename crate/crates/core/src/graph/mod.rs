//! Tree-shaped mixed graphs.
//!
//! A [`TreeGraph`] is a rooted directed tree over nodes `0..=n` (root `0`)
//! together with an arbitrary set of bidirected edges. Construction relabels
//! nodes so that every parent carries a smaller label than its children.

mod canon;
mod cycles;
mod parse;
pub mod trek;

pub use canon::{canonicalize_path_graph, path_graph_support, CanonicalPathGraph};
pub use cycles::{enumerate_missing_cycles, CycleEnumeration, MissingCycle};
pub use parse::{parse_graph, parse_graph_doc, GraphDoc};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("node {node} has two parents ({first} and {second})")]
    TwoParents {
        node: usize,
        first: usize,
        second: usize,
    },
    #[error("directed edges contain a cycle through node {0}")]
    DirectedCycle(usize),
    #[error("directed component is not connected (roots {0:?})")]
    Disconnected(Vec<usize>),
    #[error("graph has no nodes")]
    Empty,
    #[error("node {node} out of range for a graph with {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("invalid graph document: {0}")]
    Document(String),
    #[error("not a path graph: {0}")]
    NotPathGraph(String),
    #[error("missing cycle is invalid: {0}")]
    InvalidCycle(String),
}

/// Directed tree plus bidirected edges, with nodes labeled topologically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGraph {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    bidirected: Vec<Vec<bool>>,
    labels: Vec<usize>,
}

impl TreeGraph {
    /// Builds a graph from edges over arbitrary nonnegative labels.
    ///
    /// The node set is every label mentioned by an edge. The unique node
    /// without a parent becomes node 0. Labels are kept as-is when they are
    /// already `0..=n` with parents smaller than children; otherwise nodes are
    /// renumbered breadth-first, visiting children in increasing label order.
    pub fn from_labeled_edges(
        directed: &[(usize, usize)],
        bidirected: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut nodes = BTreeSet::new();
        for &(a, b) in directed.iter().chain(bidirected) {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            nodes.insert(a);
            nodes.insert(b);
        }
        if nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        Self::build(nodes, directed, bidirected)
    }

    /// Builds a graph whose labels are exactly `0..node_count`.
    pub fn from_edges(
        node_count: usize,
        directed: &[(usize, usize)],
        bidirected: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        for &(a, b) in directed.iter().chain(bidirected) {
            for x in [a, b] {
                if x >= node_count {
                    return Err(GraphError::NodeOutOfRange {
                        node: x,
                        count: node_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
        }
        Self::build((0..node_count).collect(), directed, bidirected)
    }

    fn build(
        nodes: BTreeSet<usize>,
        directed: &[(usize, usize)],
        bidirected: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut parent_of: BTreeMap<usize, usize> = BTreeMap::new();
        for &(p, c) in directed {
            match parent_of.get(&c) {
                Some(&q) if q != p => {
                    return Err(GraphError::TwoParents {
                        node: c,
                        first: q.min(p),
                        second: q.max(p),
                    })
                }
                _ => {
                    parent_of.insert(c, p);
                }
            }
        }
        let roots: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|v| !parent_of.contains_key(v))
            .collect();
        if roots.is_empty() {
            let start = *nodes.iter().next().expect("nonempty");
            return Err(GraphError::DirectedCycle(find_cycle(&parent_of, start)));
        }
        if roots.len() > 1 {
            // A node cut off from every root either sits on a cycle or hangs
            // below a second root; report the cycle when there is one.
            for &v in &nodes {
                if let Some(c) = cycle_above(&parent_of, v) {
                    return Err(GraphError::DirectedCycle(c));
                }
            }
            return Err(GraphError::Disconnected(roots));
        }
        let root = roots[0];
        let mut kids: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&c, &p) in &parent_of {
            kids.entry(p).or_default().push(c);
        }
        let mut order = Vec::with_capacity(nodes.len());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            if let Some(cs) = kids.get(&v) {
                queue.extend(cs.iter().copied());
            }
        }
        if order.len() != nodes.len() {
            let reached: BTreeSet<usize> = order.iter().copied().collect();
            let stray = nodes.iter().copied().find(|v| !reached.contains(v)).unwrap();
            return Err(GraphError::DirectedCycle(find_cycle(&parent_of, stray)));
        }

        let already_topological = root == 0
            && nodes.iter().copied().eq(0..nodes.len())
            && parent_of.iter().all(|(&c, &p)| p < c);
        let labels: Vec<usize> = if already_topological {
            (0..nodes.len()).collect()
        } else {
            order
        };
        let index: BTreeMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();

        let size = labels.len();
        let mut parent = vec![None; size];
        for (&c, &p) in &parent_of {
            parent[index[&c]] = Some(index[&p]);
        }
        let mut bi = vec![vec![false; size]; size];
        for &(a, b) in bidirected {
            let (x, y) = (index[&a], index[&b]);
            bi[x][y] = true;
            bi[y][x] = true;
        }
        Ok(Self::assemble(parent, bi, labels))
    }

    fn assemble(parent: Vec<Option<usize>>, bidirected: Vec<Vec<bool>>, labels: Vec<usize>) -> Self {
        let size = parent.len();
        let mut children = vec![Vec::new(); size];
        let mut depth = vec![0; size];
        for v in 1..size {
            let p = parent[v].expect("non-root node has a parent");
            children[p].push(v);
            depth[v] = depth[p] + 1;
        }
        TreeGraph {
            parent,
            children,
            depth,
            bidirected,
            labels,
        }
    }

    /// Number of nodes, `n + 1`.
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Largest node index `n`.
    pub fn n(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn has_bidirected(&self, i: usize, j: usize) -> bool {
        self.bidirected[i][j]
    }

    /// True when `a` lies on the root path of `b` (every node is its own ancestor).
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut v = b;
        loop {
            if v == a {
                return true;
            }
            if self.depth[v] <= self.depth[a] {
                return false;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }

    /// Nodes on the root-to-`i` path, ordered from the root down to `i`.
    pub fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut path = vec![i];
        let mut v = i;
        while let Some(p) = self.parent[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    }

    /// Directed edges `(parent, child)` ordered by child.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        (1..self.node_count())
            .map(|c| (self.parent[c].unwrap(), c))
            .collect()
    }

    /// Bidirected edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn bidirected_edges(&self) -> Vec<(usize, usize)> {
        let size = self.node_count();
        let mut out = Vec::new();
        for i in 0..size {
            for j in i + 1..size {
                if self.bidirected[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Absent bidirected pairs `(i, j)` with `0 < i < j`.
    pub fn missing_pairs(&self) -> Vec<(usize, usize)> {
        let size = self.node_count();
        let mut out = Vec::new();
        for i in 1..size {
            for j in i + 1..size {
                if !self.bidirected[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Input label of internal node `i`.
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Internal index of an input label.
    pub fn node_of_label(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// True when input labels coincide with internal indices.
    pub fn has_identity_labels(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, &l)| i == l)
    }

    /// The same graph with labels reset to internal indices.
    pub fn with_identity_labels(&self) -> Self {
        let mut g = self.clone();
        g.labels = (0..g.node_count()).collect();
        g
    }

    /// Renders the graph in edge-list syntax using input labels.
    pub fn to_edge_list(&self) -> String {
        let mut toks: Vec<String> = self
            .directed_edges()
            .into_iter()
            .map(|(p, c)| format!("{}->{}", self.label(p), self.label(c)))
            .collect();
        toks.extend(
            self.bidirected_edges()
                .into_iter()
                .map(|(a, b)| format!("{}<->{}", self.label(a), self.label(b))),
        );
        toks.join(" ")
    }

    /// Propagation guard: is there a trek between `i` and `q` once the edge
    /// into `i` is deleted?
    ///
    /// Without its parent edge, `i` is a source, so a trek either descends
    /// from `i` straight to `q` or leaves `i` through a bidirected edge
    /// `i <-> v` and descends from `v` to `q`.
    pub fn trek_exists_avoiding_parent_edge(&self, i: usize, q: usize) -> bool {
        if self.is_ancestor(i, q) {
            return true;
        }
        (0..self.node_count()).any(|v| v != i && self.bidirected[i][v] && self.is_ancestor(v, q))
    }
}

fn cycle_above(parent_of: &BTreeMap<usize, usize>, start: usize) -> Option<usize> {
    let mut seen = BTreeSet::new();
    let mut v = start;
    while let Some(&p) = parent_of.get(&v) {
        if !seen.insert(v) {
            return Some(v);
        }
        v = p;
    }
    None
}

fn find_cycle(parent_of: &BTreeMap<usize, usize>, start: usize) -> usize {
    cycle_above(parent_of, start).unwrap_or(start)
}
