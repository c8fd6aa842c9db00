//! Generic identification of direct effects in tree-shaped linear structural
//! causal models.
//!
//! A model is a directed tree rooted at node `0` plus arbitrary bidirected
//! (confounding) edges. For every edge `p -> i` the [`engine`] decides whether
//! the weight `λ_i` is a function of the observable covariance matrix Σ and,
//! when it is, returns closed-form formulas in the entries `σ_ij`.
//!
//! Formulas stay symbolic ([`symexpr::SigmaExpr`]); all algebraic decisions
//! are made by exact evaluation at covariance matrices of randomly sampled
//! models ([`model`]), so no polynomial is ever expanded.
//!
//! ```
//! use treeid::engine::{run_treeid, EngineConfig};
//! use treeid::graph::parse_graph;
//!
//! let g = parse_graph("0->1 1->2 1<->2").unwrap();
//! let report = run_treeid(&g, &EngineConfig::default());
//! assert_eq!(report.edges[1].pretty, vec!["σ02/σ01".to_string()]);
//! ```
//!
//! The `examples/` directory has one runnable program per capability:
//!
//! - `cargo run --example instrumental_variable`
//! - `cargo run --example missing_cycle`
//! - `cargo run --example zero_testing`
//! - `cargo run --example verify_soundness`
//! - `cargo run --example path_graph_canon`
//! - `cargo run --example trek_oracle`

pub mod cli;
pub mod cycleq;
pub mod engine;
pub mod graph;
pub mod model;
pub mod symexpr;
