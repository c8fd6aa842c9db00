//! Exact model parameters, covariance matrices and their ground-truth
//! relationships.
//!
//! Covariances are computed with the ancestor double sum
//! `σ_ij = Σ_{s ∈ An(i)} Σ_{t ∈ An(j)} ω_st L(s,i) L(t,j)`, where `L(s,i)` is
//! the product of edge weights along the directed path from `s` to `i`.

use crate::graph::trek::{EdgeListGraph, MAX_TREK_NODES};
use crate::graph::TreeGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

/// Common denominator of every sampled parameter.
pub const SAMPLE_DENOMINATOR: i64 = 64;
/// Edge weights are `k/64` with `k` in `[-128, 128] \ {0}`.
pub const LAMBDA_RANGE: i64 = 128;
/// Off-diagonal error covariances are `k/64` with `k` in `[-64, 64] \ {0}`.
pub const OMEGA_RANGE: i64 = 64;
/// Diagonal slack is `k/64` with `k` in `[0, 64]`.
pub const SLACK_RANGE: i64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("graph has {0} nodes; exhaustive trek enumeration is limited to {MAX_TREK_NODES}")]
    TooLarge(usize),
    #[error("invalid rational `{0}`")]
    BadRational(String),
    #[error("matrix document is not square")]
    NotSquare,
    #[error("matrix document is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q` in lowest terms, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a plain integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ModelError> {
    let bad = || ModelError::BadRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Dense symmetric matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    size: usize,
    data: Vec<Rational>,
}

/// Observable covariance matrix Σ.
pub type CovMatrix = SymMatrix;

impl SymMatrix {
    pub fn zeros(size: usize) -> Self {
        SymMatrix {
            size,
            data: vec![Rational::zero(); size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.size + j] = v.clone();
        self.data[j * self.size + i] = v;
    }

    /// Pivots of the exact LDLᵀ factorization, or `None` when a zero pivot
    /// stops the elimination.
    pub fn ldl_pivots(&self) -> Option<Vec<Rational>> {
        let n = self.size;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let p = a[k][k].clone();
            if p.is_zero() {
                return None;
            }
            for i in k + 1..n {
                let f = &a[i][k] / &p;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let delta = &f * &a[k][j];
                    a[i][j] -= delta;
                }
            }
            pivots.push(p);
        }
        Some(pivots)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.ldl_pivots()
            .is_some_and(|ps| ps.iter().all(|p| p.is_positive()))
    }

    pub fn is_diagonally_dominant(&self) -> bool {
        (0..self.size).all(|i| {
            let off: Rational = (0..self.size)
                .filter(|&j| j != i)
                .map(|j| self.get(i, j).abs())
                .sum();
            *self.get(i, i) > off
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    size: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.size)
            .map(|i| (0..self.size).map(|j| format_rational(self.get(i, j))).collect())
            .collect();
        MatrixDoc {
            size: self.size,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = MatrixDoc::deserialize(d)?;
        if doc.entries.len() != doc.size || doc.entries.iter().any(|r| r.len() != doc.size) {
            return Err(D::Error::custom(ModelError::NotSquare));
        }
        let mut m = SymMatrix::zeros(doc.size);
        for i in 0..doc.size {
            for j in 0..doc.size {
                m.data[i * doc.size + j] =
                    parse_rational(&doc.entries[i][j]).map_err(D::Error::custom)?;
            }
        }
        for i in 0..doc.size {
            for j in i + 1..doc.size {
                if m.get(i, j) != m.get(j, i) {
                    return Err(D::Error::custom(ModelError::NotSymmetric(i, j)));
                }
            }
        }
        Ok(m)
    }
}

/// Edge weights and error covariances matching a graph's sparsity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    /// `lambda[i]` is the weight of the edge into `i`; `None` for the root.
    pub lambda: Vec<Option<Rational>>,
    pub omega: SymMatrix,
}

impl ModelParams {
    pub fn lambda(&self, i: usize) -> &Rational {
        self.lambda[i].as_ref().expect("root has no incoming edge")
    }
}

fn nonzero_numerator(rng: &mut ChaCha8Rng, range: i64) -> i64 {
    let k = rng.gen_range(0..2 * range);
    if k < range {
        k - range
    } else {
        k - range + 1
    }
}

/// Samples a valid model deterministically from `seed`.
///
/// Ω is strictly diagonally dominant with a positive diagonal, hence
/// positive definite.
pub fn sample_model(g: &TreeGraph, seed: u64) -> ModelParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = g.node_count();
    let mut lambda = vec![None; size];
    for slot in lambda.iter_mut().skip(1) {
        *slot = Some(rat(nonzero_numerator(&mut rng, LAMBDA_RANGE), SAMPLE_DENOMINATOR));
    }
    let mut omega = SymMatrix::zeros(size);
    for (a, b) in g.bidirected_edges() {
        omega.set(a, b, rat(nonzero_numerator(&mut rng, OMEGA_RANGE), SAMPLE_DENOMINATOR));
    }
    for i in 0..size {
        let off: Rational = (0..size)
            .filter(|&j| j != i)
            .map(|j| omega.get(i, j).abs())
            .sum();
        let slack = rat(rng.gen_range(0..=SLACK_RANGE), SAMPLE_DENOMINATOR);
        omega.set(i, i, Rational::one() + off + slack);
    }
    ModelParams { lambda, omega }
}

/// `L(s, i)` for every ancestor `s` of `i`, in root-to-`i` order.
fn path_products(g: &TreeGraph, m: &ModelParams, i: usize) -> Vec<(usize, Rational)> {
    let anc = g.ancestors(i);
    let mut out = vec![(i, Rational::one())];
    let mut acc = Rational::one();
    for w in anc.windows(2).rev() {
        acc *= m.lambda(w[1]);
        out.push((w[0], acc.clone()));
    }
    out.reverse();
    out
}

/// Exact Σ by the ancestor double sum.
pub fn compute_sigma(g: &TreeGraph, m: &ModelParams) -> CovMatrix {
    let size = g.node_count();
    let paths: Vec<Vec<(usize, Rational)>> = (0..size).map(|i| path_products(g, m, i)).collect();
    let mut sigma = SymMatrix::zeros(size);
    for i in 0..size {
        for j in i..size {
            let mut acc = Rational::zero();
            for (s, ls) in &paths[i] {
                for (t, lt) in &paths[j] {
                    let w = m.omega.get(*s, *t);
                    if !w.is_zero() {
                        acc += w * ls * lt;
                    }
                }
            }
            sigma.set(i, j, acc);
        }
    }
    sigma
}

/// One covariance entry by summing the monomial of every trek.
///
/// Exponential; intended as an oracle for small graphs only.
pub fn sigma_by_trek_enumeration(
    g: &TreeGraph,
    m: &ModelParams,
    i: usize,
    j: usize,
) -> Result<Rational, ModelError> {
    let e = EdgeListGraph::from_tree(g);
    let treks = e.treks(i, j).ok_or(ModelError::TooLarge(g.node_count()))?;
    let weight = |path: &[usize]| -> Rational {
        path.windows(2)
            .map(|w| {
                debug_assert_eq!(g.parent(w[1]), Some(w[0]));
                m.lambda(w[1]).clone()
            })
            .product()
    };
    Ok(treks
        .iter()
        .map(|t| m.omega.get(t.left_source(), t.right_source()) * weight(&t.left) * weight(&t.right))
        .sum())
}

/// Edge-weight matrix with `Λ[parent][child] = λ`.
pub fn lambda_matrix(g: &TreeGraph, m: &ModelParams) -> Vec<Vec<Rational>> {
    let size = g.node_count();
    let mut l = vec![vec![Rational::zero(); size]; size];
    for (p, c) in g.directed_edges() {
        l[p][c] = m.lambda(c).clone();
    }
    l
}

/// Σ from the matrix form. With `Λ[parent][child]` the structural equations
/// read `V = ΛᵀV + ε`, so `Σ = (I − Λ)^{-T} Ω (I − Λ)^{-1}`; the inverse is
/// the finite Neumann series `I + Λ + Λ² + …` because Λ is nilpotent.
pub fn sigma_by_matrix_formula(g: &TreeGraph, m: &ModelParams) -> CovMatrix {
    let size = g.node_count();
    let l = lambda_matrix(g, m);
    let mut inv = identity(size);
    let mut power = identity(size);
    for _ in 0..size {
        power = matmul(&power, &l);
        if power.iter().all(|r| r.iter().all(Zero::is_zero)) {
            break;
        }
        for (a, b) in inv.iter_mut().zip(&power) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }
    let omega: Vec<Vec<Rational>> = (0..size)
        .map(|i| (0..size).map(|j| m.omega.get(i, j).clone()).collect())
        .collect();
    let full = matmul(&matmul(&transpose(&inv), &omega), &inv);
    let mut out = SymMatrix::zeros(size);
    for i in 0..size {
        for j in 0..size {
            out.data[i * size + j] = full[i][j].clone();
        }
    }
    out
}

pub(crate) fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub(crate) fn transpose(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

pub(crate) fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Recovers Ω from Σ and a full set of edge weights:
/// `ω_ij = σ_ij − λ_i σ_{p_i j} − λ_j σ_{i p_j} + λ_i λ_j σ_{p_i p_j}`,
/// where terms involving the root's missing parent are dropped.
pub fn recover_omega(g: &TreeGraph, sigma: &CovMatrix, lambda: &[Option<Rational>]) -> SymMatrix {
    let size = g.node_count();
    let mut omega = SymMatrix::zeros(size);
    for i in 0..size {
        for j in i..size {
            let mut w = sigma.get(i, j).clone();
            let pi = g.parent(i).map(|p| (p, lambda[i].as_ref().expect("edge weight")));
            let pj = g.parent(j).map(|q| (q, lambda[j].as_ref().expect("edge weight")));
            if let Some((p, li)) = pi {
                w -= li * sigma.get(p, j);
            }
            if let Some((q, lj)) = pj {
                w -= lj * sigma.get(i, q);
            }
            if let (Some((p, li)), Some((q, lj))) = (pi, pj) {
                w += li * lj * sigma.get(p, q);
            }
            omega.set(i, j, w);
        }
    }
    omega
}
