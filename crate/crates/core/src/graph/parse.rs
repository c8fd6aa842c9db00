use super::{GraphError, TreeGraph};
use serde::{Deserialize, Serialize};

/// Parses whitespace-separated `a->b` and `a<->b` tokens.
///
/// Text after `#` on a line is ignored. Commas and semicolons are accepted as
/// separators too.
pub fn parse_graph(text: &str) -> Result<TreeGraph, GraphError> {
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',' || c == ';') {
            if tok.is_empty() {
                continue;
            }
            if let Some((a, b)) = tok.split_once("<->") {
                bidirected.push((label(a, tok)?, label(b, tok)?));
            } else if let Some((a, b)) = tok.split_once("->") {
                directed.push((label(a, tok)?, label(b, tok)?));
            } else {
                return Err(GraphError::MalformedToken(tok.to_string()));
            }
        }
    }
    TreeGraph::from_labeled_edges(&directed, &bidirected)
}

fn label(s: &str, tok: &str) -> Result<usize, GraphError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(GraphError::MalformedToken(tok.to_string()));
    }
    s.parse()
        .map_err(|_| GraphError::MalformedToken(tok.to_string()))
}

/// Structured graph document: `{"nodes": n+1, "directed": [[i,j],..], "bidirected": [[i,j],..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub nodes: usize,
    #[serde(default)]
    pub directed: Vec<[usize; 2]>,
    #[serde(default)]
    pub bidirected: Vec<[usize; 2]>,
}

impl GraphDoc {
    pub fn from_graph(g: &TreeGraph) -> Self {
        GraphDoc {
            nodes: g.node_count(),
            directed: g.directed_edges().into_iter().map(|(a, b)| [a, b]).collect(),
            bidirected: g.bidirected_edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<TreeGraph, GraphError> {
        let d: Vec<_> = self.directed.iter().map(|e| (e[0], e[1])).collect();
        let b: Vec<_> = self.bidirected.iter().map(|e| (e[0], e[1])).collect();
        TreeGraph::from_edges(self.nodes, &d, &b)
    }
}

/// Parses the structured document form.
pub fn parse_graph_doc(text: &str) -> Result<TreeGraph, GraphError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| GraphError::Document(e.to_string()))?;
    doc.to_graph()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iv_model() {
        let g = parse_graph("0->1 1->2 1<->2").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.parent(2), Some(1));
        assert_eq!(g.bidirected_edges(), vec![(1, 2)]);
    }

    #[test]
    fn minimal_tree() {
        let g = parse_graph("0->1").unwrap();
        assert_eq!(g.directed_edges(), vec![(0, 1)]);
        assert!(g.bidirected_edges().is_empty());
    }

    #[test]
    fn malformed_tokens() {
        for bad in ["0-1", "a->b", "0->", "->1", "0<>1", "-1->2", "0->1->2"] {
            assert!(
                matches!(parse_graph(bad), Err(GraphError::MalformedToken(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn comments_and_separators() {
        let g = parse_graph("# iv\n0->1, 1->2 ; 1<->2 # confounded\n").unwrap();
        assert_eq!(g.bidirected_edges(), vec![(1, 2)]);
    }

    #[test]
    fn duplicates_collapse() {
        let g = parse_graph("0->1 0->1 1->2 1<->2 2<->1").unwrap();
        assert_eq!(g.bidirected_edges(), vec![(1, 2)]);
    }

    #[test]
    fn doc_round_trip() {
        let g = parse_graph("0->1 0->2 0->3 3->4 0<->1 0<->2 0<->3 0<->4").unwrap();
        let doc = GraphDoc::from_graph(&g);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_graph_doc(&text).unwrap(), g);
    }

    #[test]
    fn doc_errors() {
        assert!(parse_graph_doc(r#"{"nodes": 2, "directed": [[0, 2]]}"#).is_err());
        assert!(parse_graph_doc(r#"{"nodes": 3, "directed": [[0, 1]]}"#).is_err());
        assert!(parse_graph_doc("[1,2]").is_err());
    }
}
