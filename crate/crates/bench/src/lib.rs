//! Fixed inputs shared by the criterion benches.

use forestlab::{LabelledGraph, WeightVector};

/// A deterministic graph on `n` vertices: a long cycle with chords and pendant paths.
pub fn ladder_graph(n: usize) -> LabelledGraph {
    let half = n / 2;
    let mut pairs = Vec::new();
    for v in 1..half {
        pairs.push((v, v + 1));
    }
    if half >= 3 {
        pairs.push((1, half));
    }
    for v in (1..half).step_by(3) {
        if v + 2 <= half {
            pairs.push((v, v + 2));
        }
    }
    for v in half + 1..=n {
        pairs.push((v - 1, v));
    }
    LabelledGraph::new(n, pairs).expect("valid ladder")
}

pub fn weights(w: &[u64]) -> WeightVector {
    WeightVector::new(w.to_vec()).expect("positive weights")
}
