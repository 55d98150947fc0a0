//! Brute-force oracles that share no code with the library.
#![allow(dead_code)]

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect()
}

/// Component count by breadth-first search over an edge list.
pub fn count_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n + 1];
    let mut count = 0;
    for s in 1..=n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = vec![s];
        while let Some(x) = queue.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
    }
    count
}

/// Bridges as edges whose removal raises the component count.
pub fn bridges_by_recount(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let base = count_components(n, edges);
    let mut out: Vec<_> = (0..edges.len())
        .filter(|&i| {
            let rest: Vec<_> = edges
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &e)| e)
                .collect();
            count_components(n, &rest) > base
        })
        .map(|i| edges[i])
        .collect();
    out.sort_unstable();
    out
}

/// Every acyclic edge subset of `K_n`, found by backtracking with a
/// union-find that is copied at each branch.
pub struct ForestOracle {
    /// Index `i` holds the number of forests with `i` components.
    pub counts: Vec<u64>,
    /// Index `i` holds the summed mass of forests with `i` components.
    pub masses: Vec<BigUint>,
    /// Edge lists and masses of the spanning trees.
    pub trees: Vec<(Vec<(usize, usize)>, BigUint)>,
}

impl ForestOracle {
    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn partition_function(&self) -> BigUint {
        self.masses.iter().sum()
    }
}

pub fn forest_oracle(w: &[u64]) -> ForestOracle {
    let n = w.len();
    let pairs = all_pairs(n);
    let mut out = ForestOracle {
        counts: vec![0; n + 1],
        masses: vec![BigUint::default(); n + 1],
        trees: Vec::new(),
    };
    let parent: Vec<usize> = (0..=n).collect();
    let mut chosen = Vec::new();
    walk(w, &pairs, 0, parent, &mut chosen, &mut out);
    out
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn walk(
    w: &[u64],
    pairs: &[(usize, usize)],
    at: usize,
    parent: Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut ForestOracle,
) {
    if at == pairs.len() {
        let n = w.len();
        let mut m = BigUint::from(1u32);
        for &(u, v) in chosen.iter() {
            m *= w[u - 1] * w[v - 1];
        }
        let kappa = n - chosen.len();
        out.counts[kappa] += 1;
        out.masses[kappa] += &m;
        if kappa == 1 {
            out.trees.push((chosen.clone(), m));
        }
        return;
    }
    walk(w, pairs, at + 1, parent.clone(), chosen, out);
    let (u, v) = pairs[at];
    let (ru, rv) = (find(&parent, u), find(&parent, v));
    if ru != rv {
        let mut joined = parent;
        joined[ru] = rv;
        chosen.push((u, v));
        walk(w, pairs, at + 1, joined, chosen, out);
        chosen.pop();
    }
}

/// Seeded weight vectors on `n_min..=n_max` vertices with total at most `max_total`.
pub fn random_weights(
    seed: u64,
    count: usize,
    n_min: usize,
    n_max: usize,
    max_total: u64,
) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(n_min..=n_max);
            let mut w = vec![1u64; n];
            let extra = rng.random_range(0..=max_total - n as u64);
            for _ in 0..extra {
                w[rng.random_range(0..n)] += 1;
            }
            w
        })
        .collect()
}
