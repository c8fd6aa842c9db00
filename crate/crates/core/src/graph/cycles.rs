use super::{GraphError, TreeGraph};

/// A cyclic sequence of non-root nodes whose consecutive pairs all lack a
/// bidirected edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MissingCycle {
    nodes: Vec<usize>,
}

impl MissingCycle {
    pub fn new(g: &TreeGraph, nodes: Vec<usize>) -> Result<Self, GraphError> {
        if nodes.len() < 3 {
            return Err(GraphError::InvalidCycle(format!(
                "length {} is below 3",
                nodes.len()
            )));
        }
        for (k, &v) in nodes.iter().enumerate() {
            if v == 0 || v > g.n() {
                return Err(GraphError::InvalidCycle(format!("node {v} is not a non-root node")));
            }
            if nodes[..k].contains(&v) {
                return Err(GraphError::InvalidCycle(format!("node {v} repeats")));
            }
        }
        let k = nodes.len();
        for t in 0..k {
            let (a, b) = (nodes[t], nodes[(t + 1) % k]);
            if g.has_bidirected(a, b) {
                return Err(GraphError::InvalidCycle(format!("{a}<->{b} is present")));
            }
        }
        Ok(MissingCycle { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn start(&self) -> usize {
        self.nodes[0]
    }

    /// The same cycle read from position `k` onwards.
    pub fn rotated(&self, k: usize) -> MissingCycle {
        let mut nodes = self.nodes.clone();
        nodes.rotate_left(k % self.nodes.len());
        MissingCycle { nodes }
    }

    /// The same cycle traversed backwards from the same start.
    pub fn reversed(&self) -> MissingCycle {
        let mut nodes = vec![self.nodes[0]];
        nodes.extend(self.nodes[1..].iter().rev());
        MissingCycle { nodes }
    }

    /// Representative under rotation and reflection: smallest node first,
    /// then the smaller of the two neighbours second.
    pub fn normalized(&self) -> MissingCycle {
        let pos = (0..self.nodes.len())
            .min_by_key(|&k| self.nodes[k])
            .unwrap();
        let r = self.rotated(pos);
        let last = *r.nodes.last().unwrap();
        if last < r.nodes[1] {
            r.reversed()
        } else {
            r
        }
    }
}

impl std::fmt::Display for MissingCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("<->"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleEnumeration {
    pub cycles: Vec<MissingCycle>,
    /// Set when more cycles exist beyond `max_cycles`.
    pub truncated: bool,
}

/// Missing cycles through `i`, shortest first and lexicographic within a
/// length, each reported once up to rotation and reflection and rotated to
/// start at `i`.
pub fn enumerate_missing_cycles(
    g: &TreeGraph,
    i: usize,
    max_len: usize,
    max_cycles: usize,
) -> CycleEnumeration {
    let mut out = CycleEnumeration {
        cycles: Vec::new(),
        truncated: false,
    };
    if i == 0 || i > g.n() {
        return out;
    }
    let nbrs: Vec<Vec<usize>> = (0..g.node_count())
        .map(|v| {
            if v == 0 {
                return Vec::new();
            }
            (1..g.node_count())
                .filter(|&w| w != v && !g.has_bidirected(v, w))
                .collect()
        })
        .collect();
    let max_len = max_len.min(g.n());
    let mut on_path = vec![false; g.node_count()];
    on_path[i] = true;
    let mut path = vec![i];
    for len in 3..=max_len {
        let mut search = Search {
            nbrs: &nbrs,
            target_len: len,
            cap: max_cycles,
            out: &mut out,
        };
        if !search.extend(&mut path, &mut on_path) {
            break;
        }
    }
    out
}

struct Search<'a> {
    nbrs: &'a [Vec<usize>],
    target_len: usize,
    cap: usize,
    out: &'a mut CycleEnumeration,
}

impl Search<'_> {
    /// Returns false once the cap is exceeded.
    fn extend(&mut self, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
        let last = *path.last().unwrap();
        let start = path[0];
        if path.len() == self.target_len {
            // Closing edge must be missing too; the reflection filter keeps
            // one of the two traversal directions.
            if path[1] < last && self.nbrs[last].contains(&start) {
                if self.out.cycles.len() == self.cap {
                    self.out.truncated = true;
                    return false;
                }
                self.out.cycles.push(MissingCycle {
                    nodes: path.clone(),
                });
            }
            return true;
        }
        for &w in &self.nbrs[last] {
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            path.push(w);
            let go_on = self.extend(path, on_path);
            path.pop();
            on_path[w] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}
