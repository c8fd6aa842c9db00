use crate::model::Rational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Syntactic degree bound of an expression viewed as `N / D` in the σ
/// symbols. A square root is charged the full degree of its argument on both
/// sides, which stays valid after rationalising `u + v√s` for a zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Degree {
    pub num: u32,
    pub den: u32,
}

#[derive(Clone)]
pub enum ExprKind {
    Sym(usize, usize),
    Const(Rational),
    Add(SigmaExpr, SigmaExpr),
    Sub(SigmaExpr, SigmaExpr),
    Mul(SigmaExpr, SigmaExpr),
    Div(SigmaExpr, SigmaExpr),
    Sqrt(SigmaExpr),
}

struct Node {
    id: u64,
    kind: ExprKind,
    degree: Degree,
    has_sqrt: bool,
}

/// Immutable, shareable expression DAG over covariance symbols `σ_ij`.
#[derive(Clone)]
pub struct SigmaExpr(Arc<Node>);

impl SigmaExpr {
    fn make(kind: ExprKind) -> Self {
        let (degree, has_sqrt) = match &kind {
            ExprKind::Sym(..) => (Degree { num: 1, den: 0 }, false),
            ExprKind::Const(_) => (Degree::default(), false),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                let (x, y) = (a.degree(), b.degree());
                (
                    Degree {
                        num: (x.num + y.den).max(y.num + x.den),
                        den: x.den + y.den,
                    },
                    a.has_sqrt() || b.has_sqrt(),
                )
            }
            ExprKind::Mul(a, b) => {
                let (x, y) = (a.degree(), b.degree());
                (
                    Degree {
                        num: x.num + y.num,
                        den: x.den + y.den,
                    },
                    a.has_sqrt() || b.has_sqrt(),
                )
            }
            ExprKind::Div(a, b) => {
                let (x, y) = (a.degree(), b.degree());
                (
                    Degree {
                        num: x.num + y.den,
                        den: x.den + y.num,
                    },
                    a.has_sqrt() || b.has_sqrt(),
                )
            }
            ExprKind::Sqrt(a) => {
                let x = a.degree();
                let m = x.num.max(x.den);
                (Degree { num: m, den: m }, true)
            }
        };
        SigmaExpr(Arc::new(Node {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            kind,
            degree,
            has_sqrt,
        }))
    }

    /// The symbol `σ_ij`, stored with `i <= j`.
    pub fn sym(i: usize, j: usize) -> Self {
        Self::make(ExprKind::Sym(i.min(j), i.max(j)))
    }

    pub fn constant(c: Rational) -> Self {
        Self::make(ExprKind::Const(c))
    }

    pub fn int(k: i64) -> Self {
        Self::constant(Rational::from_integer(k.into()))
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn sqrt(&self) -> Self {
        Self::make(ExprKind::Sqrt(self.clone()))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    /// Identity of this node; unique for the lifetime of the process.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn degree(&self) -> Degree {
        self.0.degree
    }

    pub fn has_sqrt(&self) -> bool {
        self.0.has_sqrt
    }

    /// Degree bound of the polynomial whose vanishing decides `self ≡ 0`.
    pub fn zero_test_degree(&self) -> u32 {
        if self.has_sqrt() {
            2 * self.0.degree.num
        } else {
            self.0.degree.num
        }
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.kind() {
            ExprKind::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Matches the `0 - x` encoding of negation.
    pub fn as_neg(&self) -> Option<&SigmaExpr> {
        match self.kind() {
            ExprKind::Sub(z, x) if z.as_const().is_some_and(Zero::is_zero) => Some(x),
            _ => None,
        }
    }

    pub fn ptr_eq(&self, other: &SigmaExpr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Number of distinct nodes in the DAG.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            stack.extend(e.children().into_iter().cloned());
        }
        seen.len()
    }

    /// Node count of the fully expanded tree, saturating at `usize::MAX`.
    /// Subterms for which `leaf` holds count as one node.
    pub fn tree_size(&self, leaf: &dyn Fn(&SigmaExpr) -> bool) -> usize {
        fn go(
            e: &SigmaExpr,
            leaf: &dyn Fn(&SigmaExpr) -> bool,
            memo: &mut std::collections::HashMap<u64, usize>,
        ) -> usize {
            if leaf(e) {
                return 1;
            }
            if let Some(&n) = memo.get(&e.id()) {
                return n;
            }
            let n = e
                .children()
                .into_iter()
                .fold(1usize, |acc, c| acc.saturating_add(go(c, leaf, memo)));
            memo.insert(e.id(), n);
            n
        }
        go(self, leaf, &mut std::collections::HashMap::new())
    }

    pub fn children(&self) -> Vec<&SigmaExpr> {
        match self.kind() {
            ExprKind::Sym(..) | ExprKind::Const(_) => vec![],
            ExprKind::Sqrt(a) => vec![a],
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Rewrites every symbol through `f`.
    pub fn map_symbols(&self, f: &dyn Fn(usize, usize) -> (usize, usize)) -> SigmaExpr {
        let mut memo = std::collections::HashMap::new();
        self.map_inner(f, &mut memo)
    }

    fn map_inner(
        &self,
        f: &dyn Fn(usize, usize) -> (usize, usize),
        memo: &mut std::collections::HashMap<u64, SigmaExpr>,
    ) -> SigmaExpr {
        if let Some(e) = memo.get(&self.id()) {
            return e.clone();
        }
        let out = match self.kind() {
            ExprKind::Sym(i, j) => {
                let (a, b) = f(*i, *j);
                SigmaExpr::sym(a, b)
            }
            ExprKind::Const(_) => self.clone(),
            ExprKind::Add(a, b) => Self::make(ExprKind::Add(a.map_inner(f, memo), b.map_inner(f, memo))),
            ExprKind::Sub(a, b) => Self::make(ExprKind::Sub(a.map_inner(f, memo), b.map_inner(f, memo))),
            ExprKind::Mul(a, b) => Self::make(ExprKind::Mul(a.map_inner(f, memo), b.map_inner(f, memo))),
            ExprKind::Div(a, b) => Self::make(ExprKind::Div(a.map_inner(f, memo), b.map_inner(f, memo))),
            ExprKind::Sqrt(a) => Self::make(ExprKind::Sqrt(a.map_inner(f, memo))),
        };
        memo.insert(self.id(), out.clone());
        out
    }

    fn fold(a: &SigmaExpr, b: &SigmaExpr, op: fn(&Rational, &Rational) -> Option<Rational>) -> Option<SigmaExpr> {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => op(x, y).map(SigmaExpr::constant),
            _ => None,
        }
    }

    fn add_expr(a: &SigmaExpr, b: &SigmaExpr) -> SigmaExpr {
        Self::fold(a, b, |x, y| Some(x + y)).unwrap_or_else(|| Self::make(ExprKind::Add(a.clone(), b.clone())))
    }

    fn sub_expr(a: &SigmaExpr, b: &SigmaExpr) -> SigmaExpr {
        Self::fold(a, b, |x, y| Some(x - y)).unwrap_or_else(|| Self::make(ExprKind::Sub(a.clone(), b.clone())))
    }

    fn mul_expr(a: &SigmaExpr, b: &SigmaExpr) -> SigmaExpr {
        Self::fold(a, b, |x, y| Some(x * y)).unwrap_or_else(|| Self::make(ExprKind::Mul(a.clone(), b.clone())))
    }

    fn div_expr(a: &SigmaExpr, b: &SigmaExpr) -> SigmaExpr {
        Self::fold(a, b, |x, y| (!y.is_zero()).then(|| x / y))
            .unwrap_or_else(|| Self::make(ExprKind::Div(a.clone(), b.clone())))
    }

    fn neg_expr(a: &SigmaExpr) -> SigmaExpr {
        match a.as_const() {
            Some(c) => SigmaExpr::constant(-c),
            None => Self::make(ExprKind::Sub(SigmaExpr::zero(), a.clone())),
        }
    }

    /// Structural equality, treating shared nodes as equal without descending.
    pub fn same_structure(&self, other: &SigmaExpr) -> bool {
        fn go(x: &SigmaExpr, y: &SigmaExpr, equal: &mut std::collections::HashSet<(u64, u64)>) -> bool {
            if x.ptr_eq(y) || equal.contains(&(x.id(), y.id())) {
                return true;
            }
            let same = match (x.kind(), y.kind()) {
                (ExprKind::Sym(a, b), ExprKind::Sym(c, d)) => a == c && b == d,
                (ExprKind::Const(a), ExprKind::Const(b)) => a == b,
                (ExprKind::Sqrt(a), ExprKind::Sqrt(b)) => go(a, b, equal),
                (ExprKind::Add(a, b), ExprKind::Add(c, d))
                | (ExprKind::Sub(a, b), ExprKind::Sub(c, d))
                | (ExprKind::Mul(a, b), ExprKind::Mul(c, d))
                | (ExprKind::Div(a, b), ExprKind::Div(c, d)) => go(a, c, equal) && go(b, d, equal),
                _ => false,
            };
            if same {
                equal.insert((x.id(), y.id()));
            }
            same
        }
        go(self, other, &mut std::collections::HashSet::new())
    }
}

impl PartialEq for SigmaExpr {
    fn eq(&self, other: &Self) -> bool {
        self.same_structure(other)
    }
}

impl fmt::Debug for SigmaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::pretty::pretty(self))
    }
}

impl fmt::Display for SigmaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::pretty::pretty(self))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $build:ident) => {
        impl $tr<&SigmaExpr> for &SigmaExpr {
            type Output = SigmaExpr;
            fn $method(self, rhs: &SigmaExpr) -> SigmaExpr {
                SigmaExpr::$build(self, rhs)
            }
        }
        impl $tr<SigmaExpr> for SigmaExpr {
            type Output = SigmaExpr;
            fn $method(self, rhs: SigmaExpr) -> SigmaExpr {
                SigmaExpr::$build(&self, &rhs)
            }
        }
        impl $tr<&SigmaExpr> for SigmaExpr {
            type Output = SigmaExpr;
            fn $method(self, rhs: &SigmaExpr) -> SigmaExpr {
                SigmaExpr::$build(&self, rhs)
            }
        }
        impl $tr<SigmaExpr> for &SigmaExpr {
            type Output = SigmaExpr;
            fn $method(self, rhs: SigmaExpr) -> SigmaExpr {
                SigmaExpr::$build(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_expr);
binop!(Sub, sub, sub_expr);
binop!(Mul, mul, mul_expr);
binop!(Div, div, div_expr);

impl Neg for &SigmaExpr {
    type Output = SigmaExpr;
    fn neg(self) -> SigmaExpr {
        SigmaExpr::neg_expr(self)
    }
}

impl Neg for SigmaExpr {
    type Output = SigmaExpr;
    fn neg(self) -> SigmaExpr {
        SigmaExpr::neg_expr(&self)
    }
}

/// Node built exactly as given, without constant folding.
pub(crate) fn raw(kind: ExprKind) -> SigmaExpr {
    SigmaExpr::make(kind)
}

/// Shorthand for `σ_ij`.
pub fn sigma(i: usize, j: usize) -> SigmaExpr {
    SigmaExpr::sym(i, j)
}
