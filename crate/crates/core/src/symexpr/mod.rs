//! Covariance expressions and randomized identity testing.
//!
//! Formulas are immutable DAGs over symbols `σ_ij` built with `+ − × ÷ √`.
//! They are never expanded; instead they are evaluated exactly in `Q(√d)` at
//! covariance matrices of sampled models, and an expression is treated as
//! identically zero when it vanishes at every sample.

mod doc;
mod eval;
mod expr;
mod pit;
mod pretty;
mod quadext;

pub use doc::{resolve_shared, DocError, DocWriter, ExprDoc, SHARE_MIN_SIZE};
pub use eval::{evaluate, EvalContext, EvalError};
pub use expr::{sigma, Degree, ExprKind, SigmaExpr};
pub use pit::{
    discriminant, is_zero, quadratic_residual, satisfies_equation, solve_quadratic, Pit, PitError,
    QuadSolution, RootPair, DEFAULT_MAX_RETRIES,
};
pub use pretty::{pretty, pretty_with, symbol_name};
pub use quadext::{rational_sqrt, QuadExtError, QuadExtValue};
