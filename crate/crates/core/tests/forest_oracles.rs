mod common;

use std::collections::HashSet;

use forestlab::exact::{self, ratio};
use forestlab::forest::tree_partition_closed_form;
use forestlab::prufer::{decode, encode, enumerate_trees, tree_law};
use forestlab::{enumerate_forests, mass, mass_distribution, Forest, PrueferCode, WeightVector};
use num_bigint::BigUint;
use proptest::prelude::*;

fn wv(w: &[u64]) -> WeightVector {
    WeightVector::new(w.to_vec()).unwrap()
}

#[test]
fn forest_counts_match_edge_subsets() {
    let expected = [1u64, 2, 7, 38, 291, 2932, 36961];
    for n in 1..=7 {
        let oracle = common::forest_oracle(&vec![1; n]);
        assert_eq!(oracle.total_count(), expected[n - 1]);
        assert_eq!(
            enumerate_forests(n).unwrap().count() as u64,
            oracle.total_count()
        );
        let dist = mass_distribution(&WeightVector::unit(n).unwrap()).unwrap();
        for i in 1..=n {
            assert_eq!(
                dist.forest_count_with(i),
                oracle.counts[i],
                "n = {n}, i = {i}"
            );
        }
    }
}

#[test]
fn enumerated_forests_are_distinct_and_valid() {
    let seen: HashSet<_> = enumerate_forests(5)
        .unwrap()
        .map(|f| {
            assert_eq!(f.edges().len() + f.component_count(), 5);
            f.graph().to_mask()
        })
        .collect();
    assert_eq!(seen.len(), 291);
}

#[test]
fn layer_masses_match_edge_subsets() {
    for w in common::random_weights(3, 40, 1, 6, 14) {
        let oracle = common::forest_oracle(&w);
        let dist = mass_distribution(&wv(&w)).unwrap();
        assert_eq!(
            dist.partition_function(),
            &oracle.partition_function(),
            "{w:?}"
        );
        for i in 1..=w.len() {
            assert_eq!(dist.component_mass(i), oracle.masses[i], "{w:?} i = {i}");
        }
    }
}

#[test]
fn prufer_is_a_bijection_up_to_six() {
    for n in 2..=6 {
        let total = (n as u64).pow(n as u32 - 2);
        let mut trees = HashSet::new();
        for index in 0..total {
            let code = PrueferCode::from_index(n, index).unwrap();
            assert_eq!(code.index(), index);
            let t = decode(&code);
            assert!(t.is_tree());
            for v in 1..=n {
                assert_eq!(t.degree(v), code.occurrences(v) + 1);
            }
            assert_eq!(encode(&t).unwrap(), code);
            trees.insert(t.graph().to_mask());
        }
        let oracle = common::forest_oracle(&vec![1; n]);
        assert_eq!(trees.len(), oracle.trees.len());
        for (edges, _) in &oracle.trees {
            let t = Forest::from_edges(n, edges.iter().copied()).unwrap();
            assert!(trees.contains(&t.graph().to_mask()));
        }
    }
}

#[test]
fn tree_law_matches_oracle_masses() {
    for w in [vec![1, 1, 1, 1], vec![2, 1, 1], vec![3, 1, 2, 1, 1]] {
        let oracle = common::forest_oracle(&w);
        let k_tree: BigUint = oracle.trees.iter().map(|(_, m)| m).sum();
        let law = tree_law(&wv(&w)).unwrap();
        for (edges, m) in &oracle.trees {
            let t = Forest::from_edges(w.len(), edges.iter().copied()).unwrap();
            let idx = encode(&t).unwrap().index() as usize;
            assert_eq!(law[idx], exact::from_uint(m) / exact::from_uint(&k_tree));
        }
    }
}

#[test]
fn small_connectivity_probabilities() {
    let p = |n| {
        mass_distribution(&WeightVector::unit(n).unwrap())
            .unwrap()
            .p_connected()
    };
    assert_eq!(p(3), ratio(3, 7));
    assert_eq!(p(4), ratio(16, 38));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weighted_cayley(w in proptest::collection::vec(1u64..6, 1..=6)) {
        let w = wv(&w);
        let n = w.len();
        let direct: BigUint = if n == 1 {
            BigUint::from(1u32)
        } else {
            enumerate_trees(n).unwrap().map(|t| mass(&t, &w).unwrap()).sum()
        };
        prop_assert_eq!(&direct, &tree_partition_closed_form(&w));
        let expected = if n == 1 {
            BigUint::from(1u32)
        } else {
            w.product() * BigUint::from(w.total()).pow(n as u32 - 2)
        };
        prop_assert_eq!(direct, expected);
    }

    #[test]
    fn masses_scale_with_edge_count(w in proptest::collection::vec(1u64..5, 2..=5), c in 2u64..4) {
        let base = mass_distribution(&wv(&w)).unwrap();
        let scaled = mass_distribution(&wv(&w).scaled(c).unwrap()).unwrap();
        let n = w.len();
        for i in 1..=n {
            let edges = (n - i) as u32;
            prop_assert_eq!(scaled.component_mass(i), base.component_mass(i) * BigUint::from(c).pow(2 * edges));
        }
    }

    #[test]
    fn prufer_round_trip(n in 2usize..40, seed in any::<u64>()) {
        let mut x = seed;
        let seq: Vec<usize> = (0..n - 2)
            .map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (x >> 33) as usize % n + 1
            })
            .collect();
        let code = PrueferCode::new(n, seq).unwrap();
        let t = decode(&code);
        prop_assert!(t.is_tree());
        prop_assert_eq!(encode(&t).unwrap(), code);
    }
}
