//! Randomized zero testing by exact evaluation at sampled models.
//!
//! A [`Pit`] owns a small set of evaluation contexts, each the exact Σ of a
//! freshly sampled valid model. An expression is declared identically zero
//! when it vanishes at every context. A nonzero value is a certificate; a
//! "zero" answer can be wrong only if every sampled point lands on the zero
//! set of a nonzero polynomial.

use super::eval::{evaluate, EvalContext, EvalError};
use super::expr::SigmaExpr;
use super::quadext::QuadExtValue;
use crate::graph::TreeGraph;
use crate::model::{compute_sigma, sample_model, SLACK_RANGE};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Replacement contexts tried per query before giving up.
pub const DEFAULT_MAX_RETRIES: usize = 8;

const PRIMARY_STREAM: u64 = 0;
const SPARE_STREAM: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PitError {
    #[error("denominator vanished at {0} consecutive sample points; it is identically zero")]
    DenominatorIdenticallyZero(usize),
    #[error("negative radicand at a valid model point")]
    InvalidModelPoint,
    #[error("expression needs nested or incompatible radicals")]
    UnsupportedExpression,
    #[error("symbol σ({0},{1}) is outside the graph")]
    MissingSymbol(usize, usize),
}

/// Zero-testing driver with persistent evaluation contexts.
#[derive(Debug, Clone)]
pub struct Pit {
    graph: TreeGraph,
    contexts: Vec<EvalContext>,
    spares: ChaCha8Rng,
    max_retries: usize,
    replaced: usize,
    max_degree: u32,
}

fn context_for(g: &TreeGraph, model_seed: u64) -> EvalContext {
    EvalContext::new(compute_sigma(g, &sample_model(g, model_seed)))
}

impl Pit {
    pub fn new(g: &TreeGraph, trials: usize, seed: u64) -> Self {
        assert!(trials >= 1, "at least one trial is required");
        let mut primary = ChaCha8Rng::seed_from_u64(seed);
        primary.set_stream(PRIMARY_STREAM);
        let contexts = (0..trials).map(|_| context_for(g, primary.next_u64())).collect();
        let mut spares = ChaCha8Rng::seed_from_u64(seed);
        spares.set_stream(SPARE_STREAM);
        Pit {
            graph: g.clone(),
            contexts,
            spares,
            max_retries: DEFAULT_MAX_RETRIES,
            replaced: 0,
            max_degree: 0,
        }
    }

    pub fn with_max_retries(mut self, retries: usize) -> Self {
        self.max_retries = retries;
        self
    }

    pub fn trials(&self) -> usize {
        self.contexts.len()
    }

    /// Contexts swapped out so far because an expression was undefined there.
    pub fn replaced_contexts(&self) -> usize {
        self.replaced
    }

    /// Values of every expression at every context, as `out[context][expr]`.
    ///
    /// A context where some expression divides by zero is replaced by a
    /// fresh one, so all returned rows come from points where every
    /// expression is defined.
    pub fn eval_all(&mut self, exprs: &[&SigmaExpr]) -> Result<Vec<Vec<QuadExtValue>>, PitError> {
        let mut out = Vec::with_capacity(self.contexts.len());
        let mut retries = 0;
        for k in 0..self.contexts.len() {
            loop {
                let row: Result<Vec<_>, _> = exprs
                    .iter()
                    .map(|e| evaluate(e, &mut self.contexts[k]))
                    .collect();
                match row {
                    Ok(r) => {
                        out.push(r);
                        break;
                    }
                    Err(EvalError::DegenerateEvaluation) => {
                        retries += 1;
                        if retries > self.max_retries {
                            return Err(PitError::DenominatorIdenticallyZero(retries));
                        }
                        let s = self.spares.next_u64();
                        self.contexts[k] = context_for(&self.graph, s);
                        self.replaced += 1;
                    }
                    Err(EvalError::InvalidModelPoint) => return Err(PitError::InvalidModelPoint),
                    Err(EvalError::UnsupportedExpression) => {
                        return Err(PitError::UnsupportedExpression)
                    }
                    Err(EvalError::MissingSymbol(i, j)) => return Err(PitError::MissingSymbol(i, j)),
                }
            }
        }
        Ok(out)
    }

    /// Decides `e ≡ 0` on the model variety.
    pub fn is_zero(&mut self, e: &SigmaExpr) -> Result<bool, PitError> {
        self.max_degree = self.max_degree.max(e.zero_test_degree());
        let rows = self.eval_all(&[e])?;
        Ok(rows.iter().all(|r| r[0].is_zero()))
    }

    /// Largest zero-test degree (in σ) seen so far.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Upper bound on the chance that a nonzero expression of the largest
    /// degree seen so far was reported as zero.
    ///
    /// Each σ is a polynomial of degree at most `2·depth + 1` in the model
    /// parameters, every parameter is drawn from a set of at least 65 values,
    /// and the trials are independent.
    pub fn failure_bound(&self) -> f64 {
        let param_degree = u64::from(self.max_degree) * (2 * self.graph.max_depth() as u64 + 1);
        let per_trial = (param_degree as f64 / (SLACK_RANGE + 1) as f64).min(1.0);
        per_trial.powi(self.contexts.len() as i32)
    }
}

/// One-shot zero test with a fresh driver.
pub fn is_zero(e: &SigmaExpr, g: &TreeGraph, trials: usize, seed: u64) -> Result<bool, PitError> {
    Pit::new(g, trials, seed).is_zero(e)
}

/// Two roots of `a·x² + b·x + c = 0`; `plus` takes the `+√` branch.
#[derive(Debug, Clone)]
pub struct RootPair {
    pub a: SigmaExpr,
    pub b: SigmaExpr,
    pub c: SigmaExpr,
    pub plus: SigmaExpr,
    pub minus: SigmaExpr,
}

impl RootPair {
    pub fn discriminant(&self) -> SigmaExpr {
        discriminant(&self.a, &self.b, &self.c)
    }

    pub fn roots(&self) -> [&SigmaExpr; 2] {
        [&self.plus, &self.minus]
    }
}

#[derive(Debug, Clone)]
pub enum QuadSolution {
    Single(SigmaExpr),
    Pair(RootPair),
}

pub fn discriminant(a: &SigmaExpr, b: &SigmaExpr, c: &SigmaExpr) -> SigmaExpr {
    b.square() - SigmaExpr::int(4) * a * c
}

/// Closed-form roots of a quadratic with `a ≢ 0`.
pub fn solve_quadratic(
    pit: &mut Pit,
    a: &SigmaExpr,
    b: &SigmaExpr,
    c: &SigmaExpr,
) -> Result<QuadSolution, PitError> {
    let disc = discriminant(a, b, c);
    let two_a = SigmaExpr::int(2) * a;
    if pit.is_zero(&disc)? {
        return Ok(QuadSolution::Single(-b / &two_a));
    }
    let s = disc.sqrt();
    let minus_b = -b;
    Ok(QuadSolution::Pair(RootPair {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        plus: (&minus_b + &s) / &two_a,
        minus: (&minus_b - &s) / &two_a,
    }))
}

/// `a·λ² + b·λ + c` as an expression.
pub fn quadratic_residual(lam: &SigmaExpr, a: &SigmaExpr, b: &SigmaExpr, c: &SigmaExpr) -> SigmaExpr {
    a * lam.square() + b * lam + c
}

/// Decides whether `lam` solves `a·λ² + b·λ + c = 0` identically.
pub fn satisfies_equation(
    pit: &mut Pit,
    lam: &SigmaExpr,
    a: &SigmaExpr,
    b: &SigmaExpr,
    c: &SigmaExpr,
) -> Result<bool, PitError> {
    pit.is_zero(&quadratic_residual(lam, a, b, c))
}
