#![allow(dead_code)]

use std::collections::BTreeSet;

use liegrade::{ExponentVector, RelationSet, Triple};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("g{i}")).collect()
}

/// A random relation set on at most `max_labels` labels with at most
/// `max_relations` relations, one target per unordered pair.
pub fn random_relations(
    rng: &mut impl Rng,
    max_labels: usize,
    max_relations: usize,
) -> RelationSet {
    let n = rng.gen_range(1..=max_labels);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let count = rng.gen_range(0..=max_relations.min(pairs.len()));
    let triples: BTreeSet<Triple> = pairs[..count]
        .iter()
        .map(|&(left, right)| Triple {
            left,
            right,
            target: rng.gen_range(0..n),
        })
        .collect();
    RelationSet::from_indices(labels(n), triples.into_iter().collect()).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, n: usize, max_degree: u32) -> ExponentVector {
    let degree = rng.gen_range(1..=max_degree);
    let mut counts = vec![0u32; n];
    for _ in 0..degree {
        counts[rng.gen_range(0..n)] += 1;
    }
    ExponentVector::from_counts(counts).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
