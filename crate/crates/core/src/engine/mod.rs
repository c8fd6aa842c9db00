//! The identification loop.
//!
//! 1. Every node without a root bidirected edge is identified by the root
//!    instrument `λ_i = σ_0i / σ_0p`, and each new identification spreads
//!    to neighbours along missing bidirected edges (propagation).
//! 2. Every node still lacking a unique formula walks its missing cycles.
//!    A cycle quadratic that is linear gives a unique formula; a genuine
//!    quadratic gives two candidates, and later cycles filter them.
//! 3. Cycles are retried from every rotation for nodes that remain
//!    ambiguous, because the reduction can introduce a spurious second root
//!    for one start node but not for another.
//!
//! Two candidate roots `(−b ± √s) / 2a` are not a stable labelling: which
//! one is the true weight depends on the sign of `a` at each sample point.
//! Filtering therefore counts, sample by sample, how many of the two roots
//! satisfy the new equation, and a surviving root is replaced by the
//! radical-free common root of the two quadratics.

mod report;
mod verify;

pub use report::{
    EdgeReport, EdgeStatus, IdReport, OmegaEntry, ProvenanceDoc, ReportConfig, ReportError,
    MAX_PRETTY_NODES,
    TraceAction, TraceEvent,
};
pub use verify::{verify_report, VerifySummary, Violation};

use crate::cycleq::{build_quadratic, Quadratic};
use crate::graph::{enumerate_missing_cycles, MissingCycle, TreeGraph};
use crate::symexpr::{
    quadratic_residual, sigma, solve_quadratic, Pit, PitError, QuadSolution, RootPair, SigmaExpr,
};
use std::collections::{HashMap, HashSet};

/// Seed used when none is given, so runs are reproducible by default.
pub const DEFAULT_SEED: u64 = 20_240_229;
pub const DEFAULT_PIT_TRIALS: usize = 3;
pub const DEFAULT_MAX_CYCLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub pit_trials: usize,
    pub seed: u64,
    /// Longest cycle considered; `None` means `n`.
    pub max_cycle_len: Option<usize>,
    /// Cycles enumerated per node.
    pub max_cycles: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            pit_trials: DEFAULT_PIT_TRIALS,
            seed: DEFAULT_SEED,
            max_cycle_len: None,
            max_cycles: DEFAULT_MAX_CYCLES,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Status {
    Unidentified,
    Unique(SigmaExpr),
    Two(RootPair),
}

impl Status {
    /// Number of candidate formulas.
    pub fn size(&self) -> usize {
        match self {
            Status::Unidentified => 0,
            Status::Unique(_) => 1,
            Status::Two(_) => 2,
        }
    }

    pub fn unique(&self) -> Option<&SigmaExpr> {
        match self {
            Status::Unique(e) => Some(e),
            _ => None,
        }
    }
}

/// Which rule produced a node's current formulas. Node indices are internal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    None,
    RootInstrument,
    Propagation { from: usize },
    CycleLinear { cycle: Vec<usize> },
    CycleSingleRoot { cycle: Vec<usize> },
    CycleQuadratic { cycle: Vec<usize> },
    CycleFilter { cycle: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub status: Status,
    pub provenance: Provenance,
}

/// Current formulas per node; index 0 (the root) is unused.
#[derive(Debug, Clone)]
pub struct IdTable {
    entries: Vec<Entry>,
}

impl IdTable {
    pub fn new(node_count: usize) -> Self {
        IdTable {
            entries: vec![
                Entry {
                    status: Status::Unidentified,
                    provenance: Provenance::None,
                };
                node_count
            ],
        }
    }

    pub fn status(&self, i: usize) -> &Status {
        &self.entries[i].status
    }

    pub fn provenance(&self, i: usize) -> &Provenance {
        &self.entries[i].provenance
    }

    pub fn size(&self, i: usize) -> usize {
        self.entries[i].status.size()
    }

    fn set(&mut self, i: usize, status: Status, provenance: Provenance) {
        self.entries[i] = Entry { status, provenance };
    }
}

/// Outcome of checking a candidate pair against a further quadratic.
#[derive(Debug, Clone)]
pub enum FilterOutcome {
    /// Both roots satisfy the new equation at every sample.
    Both,
    /// Exactly one root survives at every sample; carries the common root of
    /// the two quadratics as a radical-free formula.
    One(SigmaExpr),
    /// No root survives anywhere, which contradicts the model.
    Neither,
    /// The number of survivors differs between samples.
    Inconclusive,
}

fn survivors(rows: &[Vec<crate::symexpr::QuadExtValue>]) -> Result<Vec<usize>, PitError> {
    rows.iter()
        .map(|r| {
            let (a, b, c) = (&r[2], &r[3], &r[4]);
            let mut n = 0;
            for x in &r[..2] {
                let v = a
                    .mul(x)
                    .and_then(|t| t.mul(x))
                    .and_then(|t| t.add(&b.mul(x)?))
                    .and_then(|t| t.add(c))
                    .map_err(|_| PitError::UnsupportedExpression)?;
                if v.is_zero() {
                    n += 1;
                }
            }
            Ok(n)
        })
        .collect()
}

/// Common root of two quadratics that share exactly one root:
/// `x = (A1·C2 − A2·C1) / (A2·B1 − A1·B2)`.
pub fn common_root(q1: (&SigmaExpr, &SigmaExpr, &SigmaExpr), q2: &Quadratic) -> SigmaExpr {
    let (a1, b1, c1) = q1;
    (a1 * &q2.c - &q2.a * c1) / (&q2.a * b1 - a1 * &q2.b)
}

/// Tests which of the two candidates also solve `q`, sample by sample.
pub fn filter_root_pair(pit: &mut Pit, pair: &RootPair, q: &Quadratic) -> Result<FilterOutcome, PitError> {
    let rows = pit.eval_all(&[&pair.plus, &pair.minus, &q.a, &q.b, &q.c])?;
    let counts = survivors(&rows)?;
    if counts.iter().all(|&n| n == 2) {
        return Ok(FilterOutcome::Both);
    }
    if counts.iter().all(|&n| n == 0) {
        return Ok(FilterOutcome::Neither);
    }
    if !counts.iter().all(|&n| n == 1) {
        return Ok(FilterOutcome::Inconclusive);
    }
    let x = common_root((&pair.a, &pair.b, &pair.c), q);
    // Re-check on the same (possibly refreshed) samples that the common root
    // is the surviving candidate.
    let rows = pit.eval_all(&[&pair.plus, &pair.minus, &q.a, &q.b, &q.c, &x])?;
    let counts = survivors(&rows)?;
    let consistent = rows.iter().zip(&counts).all(|(r, &n)| {
        n == 1 && {
            let (a, b, c, xv) = (&r[2], &r[3], &r[4], &r[5]);
            let sat = |v: &crate::symexpr::QuadExtValue| {
                a.mul(v)
                    .and_then(|t| t.mul(v))
                    .and_then(|t| t.add(&b.mul(v)?))
                    .and_then(|t| t.add(c))
                    .is_ok_and(|t| t.is_zero())
            };
            let survivor = if sat(&r[0]) { &r[0] } else { &r[1] };
            survivor == xv
        }
    });
    Ok(if consistent {
        FilterOutcome::One(x)
    } else {
        FilterOutcome::Inconclusive
    })
}

/// Runs identification phases over one graph.
pub struct Engine<'g> {
    g: &'g TreeGraph,
    cfg: EngineConfig,
    pit: Pit,
    table: IdTable,
    trace: Vec<TraceEvent>,
    diagnostics: Vec<String>,
    pit_failed: Vec<bool>,
    truncated: bool,
    quadratics: HashMap<Vec<usize>, Quadratic>,
    attempted: HashSet<Vec<usize>>,
    cycles: HashMap<usize, Vec<MissingCycle>>,
}

impl<'g> Engine<'g> {
    pub fn new(g: &'g TreeGraph, cfg: &EngineConfig) -> Self {
        Engine {
            g,
            cfg: cfg.clone(),
            pit: Pit::new(g, cfg.pit_trials.max(1), cfg.seed),
            table: IdTable::new(g.node_count()),
            trace: Vec::new(),
            diagnostics: Vec::new(),
            pit_failed: vec![false; g.node_count()],
            truncated: false,
            quadratics: HashMap::new(),
            attempted: HashSet::new(),
            cycles: HashMap::new(),
        }
    }

    pub fn table(&self) -> &IdTable {
        &self.table
    }

    pub fn pit(&mut self) -> &mut Pit {
        &mut self.pit
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    fn event(&mut self, node: usize, cycle: &[usize], action: TraceAction, from: Option<usize>) {
        self.trace.push(TraceEvent {
            node: self.g.label(node),
            cycle: cycle.iter().map(|&v| self.g.label(v)).collect(),
            action,
            from: from.map(|f| self.g.label(f)),
        });
    }

    fn pit_error(&mut self, node: usize, cycle: &[usize], what: &str, e: PitError) {
        self.pit_failed[node] = true;
        self.diagnostics.push(format!(
            "node {}: {what}: {e}",
            self.g.label(node)
        ));
        self.event(node, cycle, TraceAction::PitError, None);
    }

    /// Root-instrument phase.
    pub fn preliminary_identify(&mut self) {
        for i in 1..self.g.node_count() {
            if !self.g.has_bidirected(0, i) {
                let p = self.g.parent(i).unwrap();
                self.table.set(
                    i,
                    Status::Unique(sigma(0, i) / sigma(0, p)),
                    Provenance::RootInstrument,
                );
                self.event(i, &[], TraceAction::RootInstrument, None);
                self.propagate(i);
            }
        }
    }

    /// Spreads the formulas of `i` to every `j` with `i <-> j` missing.
    pub fn propagate(&mut self, i: usize) {
        let p = self.g.parent(i).expect("non-root");
        for j in 1..self.g.node_count() {
            if j == i || self.g.has_bidirected(i, j) {
                continue;
            }
            let (si, sj) = (self.table.size(i), self.table.size(j));
            if si == 0 || (sj > 0 && sj <= si) {
                continue;
            }
            let q = self.g.parent(j).unwrap();
            if !self.g.trek_exists_avoiding_parent_edge(i, q) {
                continue;
            }
            let step = |l: &SigmaExpr| -> (SigmaExpr, SigmaExpr) {
                (l * sigma(p, j) - sigma(i, j), l * sigma(p, q) - sigma(i, q))
            };
            let outcome: Result<Option<Status>, PitError> = match self.table.status(i).clone() {
                Status::Unidentified => Ok(None),
                Status::Unique(l) => {
                    let (num, den) = step(&l);
                    self.pit
                        .is_zero(&den)
                        .map(|z| (!z).then(|| Status::Unique(num / den)))
                }
                Status::Two(pair) => self.propagate_pair(&pair, i, j),
            };
            match outcome {
                Ok(Some(status)) => {
                    self.table.set(j, status, Provenance::Propagation { from: i });
                    self.event(j, &[], TraceAction::Propagated, Some(i));
                    self.propagate(j);
                }
                Ok(None) => {}
                Err(e) => self.pit_error(j, &[], "propagation", e),
            }
        }
    }

    fn propagate_pair(&mut self, pair: &RootPair, i: usize, j: usize) -> Result<Option<Status>, PitError> {
        let (p, q) = (self.g.parent(i).unwrap(), self.g.parent(j).unwrap());
        let den = |l: &SigmaExpr| l * sigma(p, q) - sigma(i, q);
        let num = |l: &SigmaExpr| l * sigma(p, j) - sigma(i, j);
        let (d_plus, d_minus) = (den(&pair.plus), den(&pair.minus));
        // The product is symmetric in the two roots, so it is a genuine
        // function of Σ and zero exactly when one branch's denominator is.
        if self.pit.is_zero(&(&d_plus * &d_minus))? {
            return Ok(None);
        }
        let plus = num(&pair.plus) / d_plus;
        let minus = num(&pair.minus) / d_minus;
        if self.pit.is_zero(&(&plus - &minus))? {
            return Ok(Some(Status::Unique(plus)));
        }
        // The weight of i in terms of the weight y of j is
        // (α + β·y) / (γ + δ·y); substituting it into i's quadratic and
        // clearing the denominator gives j's quadratic.
        let (al, be, ga, de) = (-sigma(i, j), sigma(i, q), -sigma(p, j), sigma(p, q));
        let two = SigmaExpr::int(2);
        let (a, b, c) = (&pair.a, &pair.b, &pair.c);
        let na = a * be.square() + b * &be * &de + c * de.square();
        let nb = &two * a * &al * &be + b * (&al * &de + &be * &ga) + &two * c * &ga * &de;
        let nc = a * al.square() + b * &al * &ga + c * ga.square();
        Ok(Some(Status::Two(RootPair {
            a: na,
            b: nb,
            c: nc,
            plus,
            minus,
        })))
    }

    fn quadratic_for(&mut self, cyc: &MissingCycle) -> Quadratic {
        let g = self.g;
        self.quadratics
            .entry(cyc.nodes().to_vec())
            .or_insert_with(|| build_quadratic(g, cyc))
            .clone()
    }

    /// Applies one cycle's equation to its start node.
    pub fn process_cycle(&mut self, cyc: &MissingCycle) {
        let i = cyc.start();
        self.attempted.insert(cyc.nodes().to_vec());
        if self.table.size(i) == 1 {
            return;
        }
        let nodes = cyc.nodes().to_vec();
        if let Err(e) = self.try_cycle(i, cyc, &nodes) {
            self.pit_error(i, &nodes, "cycle equation", e);
        }
    }

    fn try_cycle(&mut self, i: usize, cyc: &MissingCycle, nodes: &[usize]) -> Result<(), PitError> {
        let q = self.quadratic_for(cyc);
        if self.pit.is_zero(&q.a)? {
            if self.pit.is_zero(&q.b)? {
                self.event(i, nodes, TraceAction::Vanishing, None);
                return Ok(());
            }
            self.table.set(
                i,
                Status::Unique(-&q.c / &q.b),
                Provenance::CycleLinear {
                    cycle: nodes.to_vec(),
                },
            );
            self.event(i, nodes, TraceAction::Linear, None);
            return Ok(());
        }
        match self.table.status(i).clone() {
            Status::Unidentified => match solve_quadratic(&mut self.pit, &q.a, &q.b, &q.c)? {
                QuadSolution::Single(r) => {
                    self.table.set(
                        i,
                        Status::Unique(r),
                        Provenance::CycleSingleRoot {
                            cycle: nodes.to_vec(),
                        },
                    );
                    self.event(i, nodes, TraceAction::SingleRoot, None);
                }
                QuadSolution::Pair(pair) => {
                    self.table.set(
                        i,
                        Status::Two(pair),
                        Provenance::CycleQuadratic {
                            cycle: nodes.to_vec(),
                        },
                    );
                    self.event(i, nodes, TraceAction::TwoRoots, None);
                }
            },
            Status::Two(pair) => match filter_root_pair(&mut self.pit, &pair, &q)? {
                FilterOutcome::Both => self.event(i, nodes, TraceAction::FilterKeptBoth, None),
                FilterOutcome::One(x) => {
                    self.table.set(
                        i,
                        Status::Unique(x),
                        Provenance::CycleFilter {
                            cycle: nodes.to_vec(),
                        },
                    );
                    self.event(i, nodes, TraceAction::FilterKeptOne, None);
                }
                FilterOutcome::Neither | FilterOutcome::Inconclusive => {
                    self.diagnostics.push(format!(
                        "node {}: candidates disagree with cycle {:?}; kept both",
                        self.g.label(i),
                        nodes.iter().map(|&v| self.g.label(v)).collect::<Vec<_>>()
                    ));
                    self.event(i, nodes, TraceAction::FilterInconclusive, None);
                }
            },
            Status::Unique(_) => {}
        }
        Ok(())
    }

    fn cycles_of(&mut self, i: usize) -> Vec<MissingCycle> {
        if let Some(c) = self.cycles.get(&i) {
            return c.clone();
        }
        let max_len = self.cfg.max_cycle_len.unwrap_or(self.g.n());
        let e = enumerate_missing_cycles(self.g, i, max_len, self.cfg.max_cycles);
        if e.truncated {
            self.truncated = true;
            self.diagnostics.push(format!(
                "node {}: cycle enumeration stopped at {} cycles",
                self.g.label(i),
                self.cfg.max_cycles
            ));
        }
        self.cycles.insert(i, e.cycles.clone());
        e.cycles
    }

    /// Walks the missing cycles of every node without a unique formula.
    pub fn main_loop(&mut self) {
        for i in 1..self.g.node_count() {
            if self.table.size(i) == 1 {
                continue;
            }
            for cyc in self.cycles_of(i) {
                self.process_cycle(&cyc);
                if self.table.size(i) == 1 {
                    break;
                }
            }
            if self.table.size(i) > 0 {
                self.propagate(i);
            }
        }
    }

    /// Retries cycles of unresolved nodes from every other start node.
    pub fn rotation_fallback(&mut self) {
        loop {
            let mut changed = false;
            for i in 1..self.g.node_count() {
                if self.table.size(i) == 1 {
                    continue;
                }
                for cyc in self.cycles_of(i) {
                    for r in 1..cyc.len() {
                        let rot = cyc.rotated(r);
                        let v = rot.start();
                        if self.table.size(v) == 1 || self.attempted.contains(rot.nodes()) {
                            continue;
                        }
                        let before = self.table.size(v);
                        self.process_cycle(&rot);
                        if self.table.size(v) != before {
                            changed = true;
                            self.propagate(v);
                        }
                    }
                    if self.table.size(i) == 1 {
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn into_report(self) -> IdReport {
        report::build_report(self)
    }
}

/// Full identification run.
pub fn run_treeid(g: &TreeGraph, cfg: &EngineConfig) -> IdReport {
    let mut e = Engine::new(g, cfg);
    e.preliminary_identify();
    e.main_loop();
    e.rotation_fallback();
    e.into_report()
}

/// `a·λ² + b·λ + c` for a candidate, re-exported for callers that want the
/// strict single-expression check.
pub fn cycle_residual(lam: &SigmaExpr, q: &Quadratic) -> SigmaExpr {
    quadratic_residual(lam, &q.a, &q.b, &q.c)
}
