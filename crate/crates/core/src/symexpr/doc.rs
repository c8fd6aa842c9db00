//! Tree-shaped document form of expressions.
//!
//! `{"op":"sym","i":0,"j":1}`, `{"op":"const","value":"3/4"}` and
//! `{"op":"add"|"sub"|"mul"|"div"|"sqrt","args":[...]}`.
//!
//! [`ExprDoc::from_expr`] writes shared subterms out in full, which is
//! exponential for deeply nested formulas. A [`DocWriter`] instead moves large
//! repeated subterms into a side table and points at them with
//! `{"op":"ref","id":k}`; entry `k` of the table may only refer to earlier
//! entries.

use super::expr::{ExprKind, SigmaExpr};
use crate::model::{format_rational, parse_rational};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Repeated subterms with at least this many expanded nodes are shared.
pub const SHARE_MIN_SIZE: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("`{op}` takes {expected} argument(s), got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("bad constant `{0}`")]
    Constant(String),
    #[error("unknown node label {0}")]
    UnknownLabel(usize),
    #[error("reference {0} does not name an earlier shared subterm")]
    UnknownRef(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ExprDoc {
    Sym { i: usize, j: usize },
    Const { value: String },
    Add { args: Vec<ExprDoc> },
    Sub { args: Vec<ExprDoc> },
    Mul { args: Vec<ExprDoc> },
    Div { args: Vec<ExprDoc> },
    Sqrt { args: Vec<ExprDoc> },
    Ref { id: usize },
}

impl ExprDoc {
    /// Document form, with symbol indices passed through `label`.
    pub fn from_expr(e: &SigmaExpr, label: &dyn Fn(usize) -> usize) -> ExprDoc {
        let bin = |a: &SigmaExpr, b: &SigmaExpr| {
            vec![ExprDoc::from_expr(a, label), ExprDoc::from_expr(b, label)]
        };
        match e.kind() {
            ExprKind::Sym(i, j) => {
                let (a, b) = (label(*i), label(*j));
                ExprDoc::Sym {
                    i: a.min(b),
                    j: a.max(b),
                }
            }
            ExprKind::Const(c) => ExprDoc::Const {
                value: format_rational(c),
            },
            ExprKind::Add(a, b) => ExprDoc::Add { args: bin(a, b) },
            ExprKind::Sub(a, b) => ExprDoc::Sub { args: bin(a, b) },
            ExprKind::Mul(a, b) => ExprDoc::Mul { args: bin(a, b) },
            ExprKind::Div(a, b) => ExprDoc::Div { args: bin(a, b) },
            ExprKind::Sqrt(a) => ExprDoc::Sqrt {
                args: vec![ExprDoc::from_expr(a, label)],
            },
        }
    }

    /// Rebuilds an expression, mapping document labels back to node indices.
    pub fn to_expr(&self, node: &dyn Fn(usize) -> Option<usize>) -> Result<SigmaExpr, DocError> {
        self.to_expr_shared(node, &[])
    }

    /// As [`ExprDoc::to_expr`], resolving references into `shared`.
    pub fn to_expr_shared(
        &self,
        node: &dyn Fn(usize) -> Option<usize>,
        shared: &[SigmaExpr],
    ) -> Result<SigmaExpr, DocError> {
        let two = |op: &'static str, args: &[ExprDoc]| -> Result<(SigmaExpr, SigmaExpr), DocError> {
            if args.len() != 2 {
                return Err(DocError::Arity {
                    op,
                    expected: 2,
                    got: args.len(),
                });
            }
            Ok((args[0].to_expr_shared(node, shared)?, args[1].to_expr_shared(node, shared)?))
        };
        Ok(match self {
            ExprDoc::Sym { i, j } => {
                let a = node(*i).ok_or(DocError::UnknownLabel(*i))?;
                let b = node(*j).ok_or(DocError::UnknownLabel(*j))?;
                SigmaExpr::sym(a, b)
            }
            ExprDoc::Const { value } => SigmaExpr::constant(
                parse_rational(value).map_err(|_| DocError::Constant(value.clone()))?,
            ),
            // Built through the raw constructors so constant-only subtrees keep
            // their shape on a round trip.
            ExprDoc::Add { args } => {
                let (a, b) = two("add", args)?;
                super::expr::raw(ExprKind::Add(a, b))
            }
            ExprDoc::Sub { args } => {
                let (a, b) = two("sub", args)?;
                super::expr::raw(ExprKind::Sub(a, b))
            }
            ExprDoc::Mul { args } => {
                let (a, b) = two("mul", args)?;
                super::expr::raw(ExprKind::Mul(a, b))
            }
            ExprDoc::Div { args } => {
                let (a, b) = two("div", args)?;
                super::expr::raw(ExprKind::Div(a, b))
            }
            ExprDoc::Sqrt { args } => {
                if args.len() != 1 {
                    return Err(DocError::Arity {
                        op: "sqrt",
                        expected: 1,
                        got: args.len(),
                    });
                }
                args[0].to_expr_shared(node, shared)?.sqrt()
            }
            ExprDoc::Ref { id } => shared.get(*id).cloned().ok_or(DocError::UnknownRef(*id))?,
        })
    }
}

/// Rebuilds a shared-subterm table written by a [`DocWriter`].
pub fn resolve_shared(
    docs: &[ExprDoc],
    node: &dyn Fn(usize) -> Option<usize>,
) -> Result<Vec<SigmaExpr>, DocError> {
    let mut out = Vec::with_capacity(docs.len());
    for d in docs {
        let e = d.to_expr_shared(node, &out)?;
        out.push(e);
    }
    Ok(out)
}

/// Writes several expressions with one table of shared subterms.
pub struct DocWriter<'a> {
    label: &'a dyn Fn(usize) -> usize,
    uses: HashMap<u64, usize>,
    sizes: HashMap<u64, usize>,
    refs: HashMap<u64, usize>,
    shared: Vec<ExprDoc>,
}

impl<'a> DocWriter<'a> {
    /// `roots` are every expression that will be written.
    pub fn new(label: &'a dyn Fn(usize) -> usize, roots: &[&SigmaExpr]) -> Self {
        let mut uses: HashMap<u64, usize> = HashMap::new();
        let mut stack: Vec<SigmaExpr> = Vec::new();
        for r in roots {
            *uses.entry(r.id()).or_default() += 1;
            stack.push((*r).clone());
        }
        let mut seen = std::collections::HashSet::new();
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            for c in e.children() {
                *uses.entry(c.id()).or_default() += 1;
                stack.push(c.clone());
            }
        }
        DocWriter {
            label,
            uses,
            sizes: HashMap::new(),
            refs: HashMap::new(),
            shared: Vec::new(),
        }
    }

    fn size(&mut self, e: &SigmaExpr) -> usize {
        if let Some(&n) = self.sizes.get(&e.id()) {
            return n;
        }
        let n = e
            .children()
            .into_iter()
            .fold(1usize, |acc, c| acc.saturating_add(self.size(c)));
        self.sizes.insert(e.id(), n);
        n
    }

    pub fn write(&mut self, e: &SigmaExpr) -> ExprDoc {
        if let Some(&id) = self.refs.get(&e.id()) {
            return ExprDoc::Ref { id };
        }
        let mut bin = |a: &SigmaExpr, b: &SigmaExpr| vec![self.write(a), self.write(b)];
        let doc = match e.kind() {
            ExprKind::Sym(..) | ExprKind::Const(_) => return ExprDoc::from_expr(e, self.label),
            ExprKind::Add(a, b) => ExprDoc::Add { args: bin(a, b) },
            ExprKind::Sub(a, b) => ExprDoc::Sub { args: bin(a, b) },
            ExprKind::Mul(a, b) => ExprDoc::Mul { args: bin(a, b) },
            ExprKind::Div(a, b) => ExprDoc::Div { args: bin(a, b) },
            ExprKind::Sqrt(a) => ExprDoc::Sqrt {
                args: vec![self.write(a)],
            },
        };
        if self.uses.get(&e.id()).copied().unwrap_or(0) > 1 && self.size(e) >= SHARE_MIN_SIZE {
            let id = self.shared.len();
            self.shared.push(doc);
            self.refs.insert(e.id(), id);
            ExprDoc::Ref { id }
        } else {
            doc
        }
    }

    pub fn into_shared(self) -> Vec<ExprDoc> {
        self.shared
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::sigma;

    fn ident(i: usize) -> usize {
        i
    }

    #[test]
    fn json_shape() {
        let e = sigma(0, 1) / sigma(0, 0);
        let text = serde_json::to_string(&ExprDoc::from_expr(&e, &ident)).unwrap();
        assert_eq!(
            text,
            r#"{"op":"div","args":[{"op":"sym","i":0,"j":1},{"op":"sym","i":0,"j":0}]}"#
        );
    }

    #[test]
    fn round_trip_with_constants_and_roots() {
        let e = (-(sigma(1, 2) * SigmaExpr::constant(crate::model::rat(3, 4)))
            + (sigma(0, 0).square() - sigma(1, 1)).sqrt())
            / (SigmaExpr::int(2) * sigma(0, 2));
        let doc = ExprDoc::from_expr(&e, &ident);
        let back = doc.to_expr(&|l| Some(l)).unwrap();
        assert_eq!(back, e);
        let text = serde_json::to_string(&doc).unwrap();
        let parsed: ExprDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, doc);
    }

    #[test]
    fn labels_are_mapped_both_ways() {
        let e = sigma(1, 2);
        let doc = ExprDoc::from_expr(&e, &|i| [5, 9, 3][i]);
        assert_eq!(doc, ExprDoc::Sym { i: 3, j: 9 });
        let back = doc.to_expr(&|l| [5, 9, 3].iter().position(|&x| x == l)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn malformed_documents() {
        let bad: ExprDoc = serde_json::from_str(r#"{"op":"add","args":[{"op":"sym","i":0,"j":0}]}"#).unwrap();
        assert!(matches!(bad.to_expr(&|l| Some(l)), Err(DocError::Arity { .. })));
        let c: ExprDoc = serde_json::from_str(r#"{"op":"const","value":"x"}"#).unwrap();
        assert!(c.to_expr(&|l| Some(l)).is_err());
        assert!(serde_json::from_str::<ExprDoc>(r#"{"op":"pow","args":[]}"#).is_err());
        assert_eq!(ExprDoc::Ref { id: 0 }.to_expr(&|l| Some(l)), Err(DocError::UnknownRef(0)));
        let unknown = ExprDoc::Sym { i: 0, j: 7 };
        assert_eq!(unknown.to_expr(&|l| (l < 3).then_some(l)), Err(DocError::UnknownLabel(7)));
    }

    #[test]
    fn shared_subterms_are_written_once() {
        // A chain where each level uses the previous one twice.
        let mut e = sigma(0, 1) / sigma(0, 0);
        for _ in 0..30 {
            e = &e * sigma(0, 2) - &e * sigma(1, 2);
        }
        assert!(e.tree_size(&|_| false) > 1 << 30);
        let mut w = DocWriter::new(&ident, &[&e]);
        let doc = w.write(&e);
        let shared = w.into_shared();
        assert!(!shared.is_empty());
        let text = serde_json::to_string(&(&doc, &shared)).unwrap();
        assert!(text.len() < 100_000);
        let table = resolve_shared(&shared, &|l| Some(l)).unwrap();
        assert_eq!(doc.to_expr_shared(&|l| Some(l), &table).unwrap(), e);
    }

    #[test]
    fn small_repeats_stay_inline() {
        let lam = sigma(0, 1) / sigma(0, 0);
        let e = &lam * sigma(0, 2) - &lam * sigma(1, 2);
        let mut w = DocWriter::new(&ident, &[&lam, &e]);
        assert_eq!(w.write(&e), ExprDoc::from_expr(&e, &ident));
        assert!(w.into_shared().is_empty());
    }
}
