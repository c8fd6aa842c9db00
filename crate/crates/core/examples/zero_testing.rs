//! Randomized zero testing by exact evaluation at sampled models.

use treeid::graph::parse_graph;
use treeid::model::{compute_sigma, format_rational, sample_model};
use treeid::symexpr::{evaluate, pretty, sigma, EvalContext, Pit};

fn main() {
    let g = parse_graph("0->1 1->2 0<->2").unwrap();
    // Root instrument for 1, then propagation through the missing edge 1-2.
    let l1 = sigma(0, 1) / sigma(0, 0);
    let l2 = (l1.clone() * sigma(0, 2) - sigma(1, 2)) / (l1.clone() * sigma(0, 1) - sigma(1, 1));

    // ω12 written in σ: zero on every model because 1<->2 is absent.
    let zero = sigma(1, 2) - l2.clone() * sigma(1, 1) - l1.clone() * sigma(0, 2) + l1 * l2.clone() * sigma(0, 1);
    // λ2·σ01 - σ02 equals -ω02, which is not identically zero.
    let nonzero = l2 * sigma(0, 1) - sigma(0, 2);

    let mut pit = Pit::new(&g, 3, 7);
    for e in [&zero, &nonzero] {
        println!("{} ≡ 0 ? {}", pretty(e), pit.is_zero(e).unwrap());
    }
    println!("false-zero bound after 3 trials: {:.3e}", pit.failure_bound());

    let m = sample_model(&g, 11);
    let v = evaluate(&nonzero, &mut EvalContext::new(compute_sigma(&g, &m))).unwrap();
    let v = v.as_rational().expect("no radicals here");
    println!("at one model: {}, ω02 = {}", format_rational(v), format_rational(m.omega.get(0, 2)));
}
