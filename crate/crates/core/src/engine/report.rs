//! Serializable identification results.
//!
//! Node numbers, formulas and pretty strings in a report all use the input
//! labels of the graph, so a report can be read without the relabeling.

use super::{Engine, Provenance, Status};
use crate::graph::TreeGraph;
use crate::symexpr::{pretty_with, resolve_shared, sigma, DocError, DocWriter, ExprDoc, SigmaExpr};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Formulas whose printed tree would exceed this many nodes are summarized
/// instead of printed.
pub const MAX_PRETTY_NODES: usize = 600;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid report document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge {from}->{to}: {source}")]
    Formula {
        from: usize,
        to: usize,
        source: DocError,
    },
    #[error("edge {0}->{1} is not in the graph")]
    UnknownEdge(usize, usize),
    #[error("shared subterms: {0}")]
    Shared(DocError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeStatus {
    Unidentified,
    Unique,
    #[serde(rename = "two")]
    TwoCandidates,
    /// Zero testing failed for this edge, so no decision was made.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum ProvenanceDoc {
    None,
    RootInstrument,
    Propagation { from: usize },
    CycleLinear { cycle: Vec<usize> },
    CycleSingleRoot { cycle: Vec<usize> },
    CycleQuadratic { cycle: Vec<usize> },
    CycleFilter { cycle: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub from: usize,
    pub to: usize,
    pub status: EdgeStatus,
    /// One formula when unique, two (`+√` branch first) for candidates.
    pub formulas: Vec<ExprDoc>,
    /// Infix forms of `formulas`; other uniquely identified weights appear
    /// by name, e.g. `λ01`. Very large formulas are summarized.
    pub pretty: Vec<String>,
    pub provenance: ProvenanceDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaEntry {
    pub i: usize,
    pub j: usize,
    pub formula: ExprDoc,
    pub pretty: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub pit_trials: usize,
    pub seed: u64,
    pub max_cycle_len: usize,
    pub max_cycles: usize,
    /// Bound on the probability that some zero test answered wrongly.
    pub pit_failure_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceAction {
    RootInstrument,
    Propagated,
    Vanishing,
    Linear,
    SingleRoot,
    TwoRoots,
    FilterKeptBoth,
    FilterKeptOne,
    FilterInconclusive,
    PitError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub node: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycle: Vec<usize>,
    pub action: TraceAction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdReport {
    /// One entry per directed edge, ordered by child.
    pub edges: Vec<EdgeReport>,
    pub config: ReportConfig,
    pub truncated_cycles: bool,
    /// Error covariances, present once every edge weight is unique.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<OmegaEntry>>,
    pub diagnostics: Vec<String>,
    pub trace: Vec<TraceEvent>,
    /// Large repeated subterms of the formulas, referenced by `ref` nodes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shared: Vec<ExprDoc>,
}

fn lambda_name(p: usize, i: usize) -> String {
    if p < 10 && i < 10 {
        format!("λ{p}{i}")
    } else {
        format!("λ{p},{i}")
    }
}

fn provenance_doc(g: &TreeGraph, p: &Provenance) -> ProvenanceDoc {
    let labels = |c: &[usize]| c.iter().map(|&v| g.label(v)).collect::<Vec<_>>();
    match p {
        Provenance::None => ProvenanceDoc::None,
        Provenance::RootInstrument => ProvenanceDoc::RootInstrument,
        Provenance::Propagation { from } => ProvenanceDoc::Propagation { from: g.label(*from) },
        Provenance::CycleLinear { cycle } => ProvenanceDoc::CycleLinear { cycle: labels(cycle) },
        Provenance::CycleSingleRoot { cycle } => ProvenanceDoc::CycleSingleRoot { cycle: labels(cycle) },
        Provenance::CycleQuadratic { cycle } => ProvenanceDoc::CycleQuadratic { cycle: labels(cycle) },
        Provenance::CycleFilter { cycle } => ProvenanceDoc::CycleFilter { cycle: labels(cycle) },
    }
}

/// `ω_ij` from Σ and edge weights; root terms are dropped.
pub(crate) fn omega_formula(g: &TreeGraph, lambda: &[Option<SigmaExpr>], i: usize, j: usize) -> SigmaExpr {
    let mut w = sigma(i, j);
    let pi = g.parent(i).map(|p| (p, lambda[i].clone().expect("edge weight")));
    let pj = g.parent(j).map(|q| (q, lambda[j].clone().expect("edge weight")));
    if let Some((p, li)) = &pi {
        w = w - li * sigma(*p, j);
    }
    if let Some((q, lj)) = &pj {
        w = w - lj * sigma(i, *q);
    }
    if let (Some((p, li)), Some((q, lj))) = (&pi, &pj) {
        w = w + li * lj * sigma(*p, *q);
    }
    w
}

fn render(f: &SigmaExpr, label: &dyn Fn(usize) -> usize, names: &HashMap<u64, String>) -> String {
    // A formula never refers to itself by name.
    let mut names = names.clone();
    names.remove(&f.id());
    let size = f.tree_size(&|e| names.contains_key(&e.id()));
    if size > MAX_PRETTY_NODES {
        format!("<{} distinct subterms; see formulas>", f.dag_size())
    } else {
        pretty_with(f, label, &names)
    }
}

pub(super) fn build_report(e: Engine<'_>) -> IdReport {
    let g = e.g;
    let label = |v: usize| g.label(v);
    let mut names = HashMap::new();
    for i in 1..g.node_count() {
        if let Some(f) = e.table.status(i).unique() {
            names.insert(f.id(), lambda_name(label(g.parent(i).unwrap()), label(i)));
        }
    }

    let mut per_edge: Vec<(EdgeStatus, Vec<SigmaExpr>)> = Vec::new();
    for i in 1..g.node_count() {
        per_edge.push(match e.table.status(i) {
            Status::Unique(f) => (EdgeStatus::Unique, vec![f.clone()]),
            Status::Two(pair) => (EdgeStatus::TwoCandidates, vec![pair.plus.clone(), pair.minus.clone()]),
            Status::Unidentified if e.pit_failed[i] => (EdgeStatus::Unknown, vec![]),
            Status::Unidentified => (EdgeStatus::Unidentified, vec![]),
        });
    }
    let omega_formulas: Option<Vec<(usize, usize, SigmaExpr)>> =
        per_edge.iter().all(|(s, _)| *s == EdgeStatus::Unique).then(|| {
            let lambda: Vec<Option<SigmaExpr>> = (0..g.node_count())
                .map(|i| e.table.status(i).unique().cloned())
                .collect();
            let mut pairs: Vec<(usize, usize)> = (0..g.node_count()).map(|i| (i, i)).collect();
            pairs.extend(g.bidirected_edges());
            pairs.sort_unstable();
            pairs
                .into_iter()
                .map(|(i, j)| (i, j, omega_formula(g, &lambda, i, j)))
                .collect()
        });

    let mut roots: Vec<&SigmaExpr> = per_edge.iter().flat_map(|(_, fs)| fs.iter()).collect();
    if let Some(om) = &omega_formulas {
        roots.extend(om.iter().map(|(_, _, f)| f));
    }
    let mut writer = DocWriter::new(&label, &roots);

    let edges = per_edge
        .iter()
        .enumerate()
        .map(|(k, (status, fs))| {
            let i = k + 1;
            EdgeReport {
                from: label(g.parent(i).unwrap()),
                to: label(i),
                status: *status,
                formulas: fs.iter().map(|f| writer.write(f)).collect(),
                pretty: fs.iter().map(|f| render(f, &label, &names)).collect(),
                provenance: provenance_doc(g, e.table.provenance(i)),
            }
        })
        .collect();
    let omega = omega_formulas.map(|om| {
        om.iter()
            .map(|(i, j, f)| OmegaEntry {
                i: label(*i),
                j: label(*j),
                formula: writer.write(f),
                pretty: render(f, &label, &names),
            })
            .collect()
    });

    IdReport {
        edges,
        config: ReportConfig {
            pit_trials: e.cfg.pit_trials.max(1),
            seed: e.cfg.seed,
            max_cycle_len: e.cfg.max_cycle_len.unwrap_or(g.n()),
            max_cycles: e.cfg.max_cycles,
            pit_failure_bound: e.pit.failure_bound(),
        },
        truncated_cycles: e.truncated,
        omega,
        diagnostics: e.diagnostics,
        trace: e.trace,
        shared: writer.into_shared(),
    }
}

impl IdReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Parses a report; formula nesting depth is not limited.
    pub fn from_json(s: &str) -> Result<IdReport, ReportError> {
        let mut de = serde_json::Deserializer::from_str(s);
        de.disable_recursion_limit();
        let r = IdReport::deserialize(&mut de)?;
        de.end()?;
        Ok(r)
    }

    pub fn edge(&self, to: usize) -> Option<&EdgeReport> {
        self.edges.iter().find(|e| e.to == to)
    }

    pub fn unique_count(&self) -> usize {
        self.edges.iter().filter(|e| e.status == EdgeStatus::Unique).count()
    }

    pub fn all_unique(&self) -> bool {
        self.unique_count() == self.edges.len()
    }

    /// Formulas of every edge as expressions over the graph's internal nodes,
    /// keyed by child node.
    pub fn formulas(&self, g: &TreeGraph) -> Result<Vec<(usize, Vec<SigmaExpr>)>, ReportError> {
        let node = |l: usize| g.node_of_label(l);
        let shared = self.shared_table(g)?;
        self.edges
            .iter()
            .map(|r| {
                let child = node(r.to)
                    .filter(|&c| g.parent(c).map(|p| g.label(p)) == Some(r.from))
                    .ok_or(ReportError::UnknownEdge(r.from, r.to))?;
                let fs = r
                    .formulas
                    .iter()
                    .map(|d| d.to_expr_shared(&node, &shared))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|source| ReportError::Formula {
                        from: r.from,
                        to: r.to,
                        source,
                    })?;
                Ok((child, fs))
            })
            .collect()
    }

    /// The shared-subterm table as expressions over internal nodes.
    pub fn shared_table(&self, g: &TreeGraph) -> Result<Vec<SigmaExpr>, ReportError> {
        resolve_shared(&self.shared, &|l| g.node_of_label(l)).map_err(ReportError::Shared)
    }
}
