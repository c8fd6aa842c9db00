//! Checks a report against freshly sampled models with known parameters.

use super::report::{EdgeStatus, IdReport, ReportError};
use crate::graph::TreeGraph;
use crate::model::{compute_sigma, sample_model};
use crate::symexpr::{evaluate, EvalContext, EvalError, QuadExtValue, SigmaExpr};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Model seeds come from their own stream so they never coincide with the
/// zero-testing samples drawn from the same seed.
const VERIFY_STREAM: u64 = 2;

/// Extra models drawn in total to replace ones where a formula divides by
/// zero.
const DEGENERATE_BUDGET: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub model_seed: u64,
    /// Edge `(from, to)` in input labels, or `None` for an error covariance.
    pub edge: Option<(usize, usize)>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub models: usize,
    /// Models at which every claim held exactly.
    pub exact_models: usize,
    /// Individual formula checks performed.
    pub checks: usize,
    /// Models skipped because some formula divided by zero there.
    pub degenerate_models: usize,
    pub violations: Vec<Violation>,
}

impl VerifySummary {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

enum Claim {
    Unique(SigmaExpr),
    OneOf(Vec<SigmaExpr>),
}

/// Samples `n_models` models and checks every unique formula equals the true
/// weight, at least one of every candidate pair does, and every error
/// covariance formula equals the true entry.
///
/// Formulas are generic: they may divide by zero on a measure-zero set of
/// models. A model where that happens is replaced by a fresh one, up to a
/// fixed budget; running out of budget is reported as a violation.
pub fn verify_report(
    g: &TreeGraph,
    report: &IdReport,
    n_models: usize,
    seed: u64,
) -> Result<VerifySummary, ReportError> {
    let mut claims = Vec::new();
    for ((child, fs), r) in report.formulas(g)?.into_iter().zip(&report.edges) {
        let claim = match r.status {
            EdgeStatus::Unique if fs.len() == 1 => Claim::Unique(fs[0].clone()),
            EdgeStatus::TwoCandidates if !fs.is_empty() => Claim::OneOf(fs),
            _ => continue,
        };
        claims.push((child, (r.from, r.to), claim));
    }
    let node = |l: usize| g.node_of_label(l);
    let shared = report.shared_table(g)?;
    let mut omega = Vec::new();
    if let Some(entries) = &report.omega {
        for e in entries {
            let f = e.formula.to_expr_shared(&node, &shared).map_err(|source| ReportError::Formula {
                from: e.i,
                to: e.j,
                source,
            })?;
            let (i, j) = (
                node(e.i).ok_or(ReportError::UnknownEdge(e.i, e.j))?,
                node(e.j).ok_or(ReportError::UnknownEdge(e.i, e.j))?,
            );
            omega.push((i, j, f));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(VERIFY_STREAM);
    let mut summary = VerifySummary {
        models: n_models,
        exact_models: 0,
        checks: 0,
        degenerate_models: 0,
        violations: Vec::new(),
    };
    let mut checked = 0;
    while checked < n_models {
        let model_seed = rng.next_u64();
        let m = sample_model(g, model_seed);
        let mut ctx = EvalContext::new(compute_sigma(g, &m));
        let mut values = Vec::with_capacity(claims.len());
        let mut degenerate = false;
        for (_, _, claim) in &claims {
            let fs: &[SigmaExpr] = match claim {
                Claim::Unique(f) => std::slice::from_ref(f),
                Claim::OneOf(fs) => fs,
            };
            let vs: Vec<_> = fs.iter().map(|f| evaluate(f, &mut ctx)).collect();
            degenerate |= vs.iter().any(|v| *v == Err(EvalError::DegenerateEvaluation));
            values.push(vs);
        }
        let omega_values: Vec<_> = omega.iter().map(|(_, _, f)| evaluate(f, &mut ctx)).collect();
        degenerate |= omega_values.iter().any(|v| *v == Err(EvalError::DegenerateEvaluation));
        if degenerate {
            summary.degenerate_models += 1;
            if summary.degenerate_models > DEGENERATE_BUDGET {
                summary.violations.push(Violation {
                    model_seed,
                    edge: None,
                    message: format!("formulas divided by zero at {DEGENERATE_BUDGET} sampled models"),
                });
                break;
            }
            continue;
        }
        checked += 1;
        let before = summary.violations.len();
        for ((child, edge, _), vs) in claims.iter().zip(values) {
            let truth = QuadExtValue::rational(m.lambda(*child).clone());
            summary.checks += vs.len();
            let mut hit = false;
            let mut failure = None;
            for v in vs {
                match v {
                    Ok(v) if v == truth => hit = true,
                    Ok(v) => failure = Some(format!("evaluates to {v}, true weight is {truth}")),
                    Err(e) => failure = Some(format!("evaluation failed: {e}")),
                }
            }
            if !hit {
                summary.violations.push(Violation {
                    model_seed,
                    edge: Some(*edge),
                    message: failure.unwrap_or_default(),
                });
            }
        }
        for ((i, j, _), v) in omega.iter().zip(omega_values) {
            summary.checks += 1;
            let truth = QuadExtValue::rational(m.omega.get(*i, *j).clone());
            let (li, lj) = (g.label(*i), g.label(*j));
            let message = match v {
                Ok(v) if v == truth => continue,
                Ok(v) => format!("ω({li},{lj}) evaluates to {v}, true value is {truth}"),
                Err(e) => format!("ω({li},{lj}) evaluation failed: {e}"),
            };
            summary.violations.push(Violation {
                model_seed,
                edge: None,
                message,
            });
        }
        if summary.violations.len() == before {
            summary.exact_models += 1;
        }
    }
    Ok(summary)
}

