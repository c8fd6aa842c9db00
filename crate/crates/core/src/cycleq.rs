//! The quadratic equation attached to a missing cycle.
//!
//! Each absent edge `v_i <-> v_{i+1}` of the cycle gives a bilinear equation
//!
//! ```text
//! a·x_i·x_{i+1} + b·x_i + c·x_{i+1} + d = 0
//! a = σ(p_i, p_{i+1})   b = −σ(p_i, v_{i+1})   c = −σ(v_i, p_{i+1})   d = σ(v_i, v_{i+1})
//! ```
//!
//! in the edge weights `x_i = λ_{v_i}` (where `p_i` is the parent of `v_i`).
//! Eliminating the shared unknown of two neighbouring equations gives another
//! equation of the same shape, so pairwise reduction collapses the whole
//! cycle in logarithmically many rounds to one equation linking `x_1` with
//! itself: `A·x_1² + (B + C)·x_1 + D = 0`.

use crate::graph::{MissingCycle, TreeGraph};
use crate::symexpr::{sigma, SigmaExpr};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleqError {
    #[error("reduction needs at least two equations, got {0}")]
    TooFew(usize),
}

/// Coefficients of `a·x·y + b·x + c·y + d = 0`.
#[derive(Debug, Clone)]
pub struct CoeffQuadruple {
    pub a: SigmaExpr,
    pub b: SigmaExpr,
    pub c: SigmaExpr,
    pub d: SigmaExpr,
}

/// `A·x² + B·x + C = 0` in the weight of the cycle's first node.
#[derive(Debug, Clone)]
pub struct Quadratic {
    pub a: SigmaExpr,
    pub b: SigmaExpr,
    pub c: SigmaExpr,
}

/// One equation per cyclic edge, in cycle order.
pub fn base_coefficients(g: &TreeGraph, cyc: &MissingCycle) -> Vec<CoeffQuadruple> {
    let v = cyc.nodes();
    let k = v.len();
    (0..k)
        .map(|t| {
            let (vi, vj) = (v[t], v[(t + 1) % k]);
            let pi = g.parent(vi).expect("cycle nodes are non-root");
            let pj = g.parent(vj).expect("cycle nodes are non-root");
            CoeffQuadruple {
                a: sigma(pi, pj),
                b: -sigma(pi, vj),
                c: -sigma(vi, pj),
                d: sigma(vi, vj),
            }
        })
        .collect()
}

/// Merges the equations pairwise, eliminating each pair's shared unknown; an
/// odd last equation is carried over unchanged.
pub fn reduce_once(level: &[CoeffQuadruple]) -> Result<Vec<CoeffQuadruple>, CycleqError> {
    if level.len() < 2 {
        return Err(CycleqError::TooFew(level.len()));
    }
    let mut out: Vec<CoeffQuadruple> = level
        .chunks_exact(2)
        .map(|pair| {
            let (e1, e2) = (&pair[0], &pair[1]);
            CoeffQuadruple {
                a: &e1.a * &e2.c - &e2.a * &e1.b,
                b: &e1.a * &e2.d - &e1.b * &e2.b,
                c: &e1.c * &e2.c - &e2.a * &e1.d,
                d: &e1.c * &e2.d - &e2.b * &e1.d,
            }
        })
        .collect();
    if level.len() % 2 == 1 {
        out.push(level[level.len() - 1].clone());
    }
    Ok(out)
}

/// Reduces the cycle's equations to a single quadratic in `λ` of its first node.
pub fn build_quadratic(g: &TreeGraph, cyc: &MissingCycle) -> Quadratic {
    let mut level = base_coefficients(g, cyc);
    while level.len() > 1 {
        level = reduce_once(&level).expect("length checked");
    }
    let q = level.pop().expect("cycles have at least three edges");
    Quadratic {
        a: q.a,
        b: &q.b + &q.c,
        c: q.d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::model::{compute_sigma, sample_model};
    use crate::symexpr::{evaluate, pretty, EvalContext};

    #[test]
    fn base_quadruples_follow_parents() {
        let g = parse_graph("0->1 0->2 0->3 3->4 0<->1 0<->2 0<->3 0<->4").unwrap();
        let c = MissingCycle::new(&g, vec![1, 2, 3, 4]).unwrap();
        let qs = base_coefficients(&g, &c);
        assert_eq!(qs.len(), 4);
        let first: Vec<String> = [&qs[0].a, &qs[0].b, &qs[0].c, &qs[0].d].iter().map(|e| pretty(e)).collect();
        assert_eq!(first, ["σ00", "-σ02", "-σ01", "σ12"]);
        assert_eq!(pretty(&qs[3].a), "σ03");
        assert_eq!(pretty(&qs[3].b), "-σ13");
    }

    #[test]
    fn path_three_cycle_first_edge() {
        let g = parse_graph("0->1 1->2 2->3").unwrap();
        let c = MissingCycle::new(&g, vec![1, 2, 3]).unwrap();
        let q = &base_coefficients(&g, &c)[0];
        let got: Vec<String> = [&q.a, &q.b, &q.c, &q.d].iter().map(|e| pretty(e)).collect();
        assert_eq!(got, ["σ01", "-σ02", "-σ11", "σ12"]);
    }

    #[test]
    fn reduction_shapes() {
        let g = parse_graph("0->1 0->2 0->3").unwrap();
        let c = MissingCycle::new(&g, vec![1, 2, 3]).unwrap();
        let base = base_coefficients(&g, &c);
        assert_eq!(reduce_once(&base).unwrap().len(), 2);
        assert_eq!(reduce_once(&base[..2]).unwrap().len(), 1);
        assert_eq!(reduce_once(&base[..1]).unwrap_err(), CycleqError::TooFew(1));
        let merged = &reduce_once(&base[..2]).unwrap()[0];
        let (e1, e2) = (&base[0], &base[1]);
        assert_eq!(merged.a, &e1.a * &e2.c - &e2.a * &e1.b);
        assert_eq!(merged.d, &e1.c * &e2.d - &e2.b * &e1.d);
    }

    #[test]
    fn true_weight_is_a_root() {
        let g = parse_graph("0->1 1->2 0->3 3->4 0<->1 0<->2 0<->3 0<->4 2<->4").unwrap();
        for nodes in [vec![1, 2, 3], vec![1, 3, 4], vec![1, 2, 3, 4], vec![3, 1, 4]] {
            let c = MissingCycle::new(&g, nodes).unwrap();
            let q = build_quadratic(&g, &c);
            for seed in 0..5 {
                let m = sample_model(&g, seed);
                let mut ctx = EvalContext::new(compute_sigma(&g, &m));
                let lam = crate::symexpr::QuadExtValue::rational(m.lambda(c.start()).clone());
                let a = evaluate(&q.a, &mut ctx).unwrap();
                let b = evaluate(&q.b, &mut ctx).unwrap();
                let cc = evaluate(&q.c, &mut ctx).unwrap();
                let r = a.mul(&lam).unwrap().mul(&lam).unwrap().add(&b.mul(&lam).unwrap()).unwrap().add(&cc).unwrap();
                assert!(r.is_zero());
            }
        }
    }
}
