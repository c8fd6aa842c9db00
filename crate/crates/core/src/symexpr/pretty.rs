//! Infix rendering: `σ01/σ00`, `σ12*σ03 - σ02*σ13`, `√(…)`.
//!
//! Symbols print as `σ{i}{j}`, or `σ{i},{j}` once a label has two digits.
//! `0 - x` prints as `-x`.

use super::expr::{ExprKind, SigmaExpr};
use std::collections::HashMap;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 4;

pub fn symbol_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("σ{i}{j}")
    } else {
        format!("σ{i},{j}")
    }
}

/// Renders with node indices as labels.
pub fn pretty(e: &SigmaExpr) -> String {
    pretty_with(e, &|i| i, &HashMap::new())
}

/// Renders with relabeled symbols; any subexpression whose id is a key of
/// `names` prints as that name instead.
pub fn pretty_with(
    e: &SigmaExpr,
    label: &dyn Fn(usize) -> usize,
    names: &HashMap<u64, String>,
) -> String {
    Printer { label, names }.render(e, 0)
}

struct Printer<'a> {
    label: &'a dyn Fn(usize) -> usize,
    names: &'a HashMap<u64, String>,
}

impl Printer<'_> {
    fn precedence(&self, e: &SigmaExpr) -> u8 {
        if self.names.contains_key(&e.id()) {
            return ATOM;
        }
        if e.as_neg().is_some() {
            return UNARY;
        }
        match e.kind() {
            ExprKind::Sym(..) | ExprKind::Sqrt(_) => ATOM,
            ExprKind::Const(c) if c < &num_traits::Zero::zero() => UNARY,
            ExprKind::Const(_) => ATOM,
            ExprKind::Add(..) | ExprKind::Sub(..) => SUM,
            ExprKind::Mul(..) | ExprKind::Div(..) => PRODUCT,
        }
    }

    fn right(&self, e: &SigmaExpr) -> String {
        let s = self.render(e, PRODUCT);
        if s.starts_with('-') {
            format!("({s})")
        } else {
            s
        }
    }

    fn render(&self, e: &SigmaExpr, min_prec: u8) -> String {
        let s = self.bare(e);
        if self.precedence(e) < min_prec {
            format!("({s})")
        } else {
            s
        }
    }

    fn bare(&self, e: &SigmaExpr) -> String {
        if let Some(n) = self.names.get(&e.id()) {
            return n.clone();
        }
        if let Some(x) = e.as_neg() {
            return format!("-{}", self.render(x, UNARY));
        }
        match e.kind() {
            ExprKind::Sym(i, j) => {
                let (a, b) = ((self.label)(*i), (self.label)(*j));
                symbol_name(a.min(b), a.max(b))
            }
            ExprKind::Const(c) => {
                if c.is_integer() {
                    c.to_string()
                } else {
                    format!("({}/{})", c.numer(), c.denom())
                }
            }
            // A right operand never starts with a sign: `a - (-b)`, `a*(-b)`.
            ExprKind::Add(a, b) => format!("{} + {}", self.render(a, SUM), self.right(b)),
            ExprKind::Sub(a, b) => format!("{} - {}", self.render(a, SUM), self.right(b)),
            ExprKind::Mul(a, b) => format!("{}*{}", self.render(a, PRODUCT), self.render(b, ATOM)),
            ExprKind::Div(a, b) => format!("{}/{}", self.render(a, PRODUCT), self.render(b, ATOM)),
            ExprKind::Sqrt(a) => format!("√({})", self.render(a, 0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::sigma;

    #[test]
    fn instrument_ratios() {
        assert_eq!(pretty(&(sigma(0, 1) / sigma(0, 0))), "σ01/σ00");
        assert_eq!(pretty(&(sigma(2, 0) / sigma(1, 0))), "σ02/σ01");
    }

    #[test]
    fn precedence_and_grouping() {
        let e = (sigma(1, 2) * sigma(0, 3) - sigma(0, 2) * sigma(1, 3)) / (sigma(0, 0) + sigma(1, 1));
        assert_eq!(pretty(&e), "(σ12*σ03 - σ02*σ13)/(σ00 + σ11)");
        let f = sigma(0, 1) - (sigma(0, 2) - sigma(1, 2));
        assert_eq!(pretty(&f), "σ01 - (σ02 - σ12)");
        let g = sigma(0, 1) / (sigma(0, 2) * sigma(1, 2));
        assert_eq!(pretty(&g), "σ01/(σ02*σ12)");
    }

    #[test]
    fn negation_roots_and_constants() {
        assert_eq!(pretty(&-sigma(0, 2)), "-σ02");
        assert_eq!(pretty(&-(sigma(0, 2) * sigma(1, 1))), "-(σ02*σ11)");
        let r = (-sigma(1, 2) + (sigma(1, 2).square() - SigmaExpr::int(4) * sigma(0, 0)).sqrt())
            / (SigmaExpr::int(2) * sigma(1, 1));
        assert_eq!(pretty(&r), "(-σ12 + √(σ12*σ12 - 4*σ00))/(2*σ11)");
        assert_eq!(pretty(&(SigmaExpr::constant(crate::model::rat(-3, 4)) * sigma(0, 0))), "(-3/4)*σ00");
        assert_eq!(pretty(&(sigma(0, 0) * -sigma(0, 2))), "σ00*(-σ02)");
        assert_eq!(pretty(&(sigma(0, 0) - -sigma(0, 2))), "σ00 - (-σ02)");
        assert_eq!(pretty(&(-sigma(0, 1) * sigma(0, 2))), "-σ01*σ02");
        assert_eq!(pretty(&(sigma(0, 0) - -sigma(0, 1) * sigma(0, 2))), "σ00 - (-σ01*σ02)");
    }

    #[test]
    fn wide_labels_and_names() {
        assert_eq!(pretty_with(&sigma(0, 1), &|i| i * 11, &HashMap::new()), "σ0,11");
        let lam = sigma(0, 1) / sigma(0, 0);
        let e = &lam * sigma(0, 2) - sigma(1, 2);
        let names = HashMap::from([(lam.id(), "λ01".to_string())]);
        assert_eq!(pretty_with(&e, &|i| i, &names), "λ01*σ02 - σ12");
    }
}
