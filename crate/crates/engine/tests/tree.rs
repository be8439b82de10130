//! The subproduct search against exhaustive enumeration of tuples.

use std::collections::BTreeSet;

use bm_arith::f2::F2Vec;
use bm_engine::{subproduct_intersect, survivor_count, survivor_tuples, EngineError, Functional};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every tuple of `∏ I_v` on which every functional sums to zero.
fn naive(images: &[Vec<F2Vec>], phis: &[Functional]) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; images.len()];
    if images.iter().any(|im| im.is_empty()) {
        return out;
    }
    loop {
        let ok = phis.iter().all(|phi| {
            let mut s = false;
            for (v, &i) in idx.iter().enumerate() {
                s ^= phi.support[v] && phi.values[v].dot(&images[v][i]);
            }
            !s
        });
        if ok {
            out.insert(idx.clone());
        }
        let mut v = 0;
        loop {
            if v == idx.len() {
                return out;
            }
            idx[v] += 1;
            if idx[v] < images[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> F2Vec {
    F2Vec::from_bits(&(0..dim).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
}

fn random_functional(rng: &mut ChaCha8Rng, dims: &[usize]) -> Functional {
    let support: Vec<bool> = dims.iter().map(|_| rng.gen_bool(0.7)).collect();
    let values = dims
        .iter()
        .zip(&support)
        .map(|(&d, &s)| if s { random_vec(rng, d) } else { F2Vec::zeros(d) })
        .collect();
    Functional { values, support }
}

fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<Vec<F2Vec>>, Vec<Functional>) {
    let places = rng.gen_range(1..=4);
    let dims: Vec<usize> = (0..places).map(|_| rng.gen_range(0..=3)).collect();
    let images: Vec<Vec<F2Vec>> = dims
        .iter()
        .map(|&d| {
            let size = rng.gen_range(0..=6.min(1 << d));
            let all: Vec<u64> = (0..(1u64 << d)).collect();
            let mut chosen: Vec<u64> = all.choose_multiple(rng, size).copied().collect();
            chosen.sort_unstable();
            chosen.into_iter().map(|x| F2Vec::from_u64(x, d)).collect()
        })
        .collect();
    let n = rng.gen_range(0..=3);
    let phis = (0..n).map(|_| random_functional(rng, &dims)).collect();
    (dims, images, phis)
}

#[test]
fn tree_matches_naive_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..300 {
        let (_, images, phis) = random_instance(&mut rng);
        let (leaves, _) = subproduct_intersect(&images, &phis, 1_000_000).unwrap();
        assert_eq!(survivor_tuples(&leaves), naive(&images, &phis));
        // leaves are disjoint
        assert_eq!(survivor_count(&leaves), survivor_tuples(&leaves).len() as u128);
        assert!(leaves.iter().all(|l| !l.is_empty() && l.depth == phis.len()));
    }
}

#[test]
fn no_functionals_returns_the_root() {
    let images = vec![vec![F2Vec::from_u64(1, 2), F2Vec::from_u64(2, 2)], vec![F2Vec::zeros(1)]];
    let (leaves, nodes) = subproduct_intersect(&images, &[], 10).unwrap();
    assert_eq!(nodes, 1);
    assert_eq!(leaves.len(), 1);
    assert_eq!(leaves[0].sets, vec![vec![0, 1], vec![0]]);
}

#[test]
fn empty_image_gives_empty_result() {
    let images = vec![vec![F2Vec::zeros(1)], vec![]];
    let phi = Functional { values: vec![F2Vec::zeros(1), F2Vec::zeros(0)], support: vec![true, true] };
    let (leaves, _) = subproduct_intersect(&images, &[phi], 10).unwrap();
    assert!(leaves.is_empty());
}

#[test]
fn budget_is_enforced() {
    // ten places with both halves nonempty: 2^9 children at the first level
    let images: Vec<Vec<F2Vec>> = (0..10).map(|_| vec![F2Vec::from_u64(0, 1), F2Vec::from_u64(1, 1)]).collect();
    let phi = Functional { values: vec![F2Vec::from_u64(1, 1); 10], support: vec![true; 10] };
    assert_eq!(subproduct_intersect(&images, &[phi], 100), Err(EngineError::NodeBudget(100)));
}

proptest! {
    #[test]
    fn appending_a_functional_never_enlarges(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (dims, images, mut phis) = random_instance(&mut rng);
        let (before, _) = subproduct_intersect(&images, &phis, 1_000_000).unwrap();
        phis.push(random_functional(&mut rng, &dims));
        let (after, _) = subproduct_intersect(&images, &phis, 1_000_000).unwrap();
        prop_assert!(survivor_tuples(&after).is_subset(&survivor_tuples(&before)));
    }

    #[test]
    fn order_of_functionals_is_irrelevant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, images, phis) = random_instance(&mut rng);
        let mut shuffled = phis.clone();
        shuffled.shuffle(&mut rng);
        let (a, _) = subproduct_intersect(&images, &phis, 1_000_000).unwrap();
        let (b, _) = subproduct_intersect(&images, &shuffled, 1_000_000).unwrap();
        prop_assert_eq!(survivor_tuples(&a), survivor_tuples(&b));
    }
}
