use super::expr::{ExprKind, SigmaExpr};
use super::quadext::{QuadExtError, QuadExtValue};
use crate::model::CovMatrix;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("division by an exact zero")]
    DegenerateEvaluation,
    #[error("negative radicand; the point is not a valid covariance model")]
    InvalidModelPoint,
    #[error("expression needs nested or incompatible radicals")]
    UnsupportedExpression,
    #[error("symbol σ({0},{1}) is outside the covariance matrix")]
    MissingSymbol(usize, usize),
}

impl From<QuadExtError> for EvalError {
    fn from(e: QuadExtError) -> Self {
        match e {
            QuadExtError::DivisionByZero => EvalError::DegenerateEvaluation,
            QuadExtError::NegativeRadicand => EvalError::InvalidModelPoint,
            QuadExtError::IncompatibleRadicands | QuadExtError::NestedRadical => {
                EvalError::UnsupportedExpression
            }
        }
    }
}

/// One evaluation point: an exact Σ plus a memo of values already computed
/// at it, keyed by node identity.
#[derive(Debug, Clone)]
pub struct EvalContext {
    sigma: CovMatrix,
    memo: HashMap<u64, QuadExtValue>,
}

impl EvalContext {
    pub fn new(sigma: CovMatrix) -> Self {
        EvalContext {
            sigma,
            memo: HashMap::new(),
        }
    }

    pub fn sigma(&self) -> &CovMatrix {
        &self.sigma
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// Exact value of `e` at the context's Σ; square roots take the
/// non-negative branch.
pub fn evaluate(e: &SigmaExpr, ctx: &mut EvalContext) -> Result<QuadExtValue, EvalError> {
    if let Some(v) = ctx.memo.get(&e.id()) {
        return Ok(v.clone());
    }
    let v = match e.kind() {
        ExprKind::Sym(i, j) => {
            let n = ctx.sigma.size();
            if *i >= n || *j >= n {
                return Err(EvalError::MissingSymbol(*i, *j));
            }
            QuadExtValue::rational(ctx.sigma.get(*i, *j).clone())
        }
        ExprKind::Const(c) => QuadExtValue::rational(c.clone()),
        ExprKind::Add(a, b) => evaluate(a, ctx)?.add(&evaluate(b, ctx)?)?,
        ExprKind::Sub(a, b) => evaluate(a, ctx)?.sub(&evaluate(b, ctx)?)?,
        ExprKind::Mul(a, b) => evaluate(a, ctx)?.mul(&evaluate(b, ctx)?)?,
        ExprKind::Div(a, b) => evaluate(a, ctx)?.div(&evaluate(b, ctx)?)?,
        ExprKind::Sqrt(a) => evaluate(a, ctx)?.sqrt()?,
    };
    ctx.memo.insert(e.id(), v.clone());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::model::{compute_sigma, rat, sample_model, Rational};
    use crate::symexpr::sigma;
    use num_traits::One;

    #[test]
    fn iv_ratio_recovers_edge_weight() {
        let g = parse_graph("0->1 1->2 1<->2").unwrap();
        let mut m = sample_model(&g, 4);
        m.omega.set(0, 0, Rational::one());
        let mut ctx = EvalContext::new(compute_sigma(&g, &m));
        let v = evaluate(&(sigma(0, 1) / sigma(0, 0)), &mut ctx).unwrap();
        assert_eq!(v.as_rational(), Some(m.lambda(1)));
    }

    #[test]
    fn constant_and_square_root_of_square() {
        let g = parse_graph("0->1").unwrap();
        let mut ctx = EvalContext::new(compute_sigma(&g, &sample_model(&g, 1)));
        assert!(evaluate(&SigmaExpr::zero(), &mut ctx).unwrap().is_zero());
        let s00 = ctx.sigma().get(0, 0).clone();
        let v = evaluate(&sigma(0, 0).square().sqrt(), &mut ctx).unwrap();
        assert_eq!(v, QuadExtValue::rational(s00.clone()));
        let neg = evaluate(&(-sigma(0, 0)).square().sqrt(), &mut ctx).unwrap();
        assert_eq!(neg, QuadExtValue::rational(s00));
    }

    #[test]
    fn errors_are_classified() {
        let g = parse_graph("0->1").unwrap();
        let mut ctx = EvalContext::new(compute_sigma(&g, &sample_model(&g, 1)));
        let zero = sigma(0, 1) - sigma(0, 1);
        assert_eq!(evaluate(&(sigma(0, 0) / zero), &mut ctx), Err(EvalError::DegenerateEvaluation));
        assert_eq!(evaluate(&(-sigma(0, 0)).sqrt(), &mut ctx), Err(EvalError::InvalidModelPoint));
        let nested = (SigmaExpr::int(2).sqrt() + SigmaExpr::one()).sqrt();
        assert_eq!(evaluate(&nested, &mut ctx), Err(EvalError::UnsupportedExpression));
        assert_eq!(evaluate(&sigma(0, 5), &mut ctx), Err(EvalError::MissingSymbol(0, 5)));
        let mixed = SigmaExpr::int(2).sqrt() + SigmaExpr::int(3).sqrt();
        assert_eq!(evaluate(&mixed, &mut ctx), Err(EvalError::UnsupportedExpression));
        let compatible = SigmaExpr::int(2).sqrt() + SigmaExpr::constant(rat(8, 1)).sqrt();
        assert!(evaluate(&compatible, &mut ctx).is_ok());
    }

    #[test]
    fn memo_reuses_shared_nodes() {
        let g = parse_graph("0->1").unwrap();
        let mut ctx = EvalContext::new(compute_sigma(&g, &sample_model(&g, 1)));
        let a = sigma(0, 1) * sigma(1, 1);
        let b = &a + &a;
        evaluate(&b, &mut ctx).unwrap();
        assert_eq!(ctx.memo_len(), 4);
    }
}
