//! Randomized evaluation harnesses shared by the test suites: instance
//! generators for the label-independence criterion, the uniform-rank
//! chi-square check, and a supply of randomly generated
//! consistency-respecting schemes.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::Result;
use crate::graph::{LabeledGraph, Namespace, Obfuscation, Permutation, VertexLabel};
use crate::iso;
use crate::rng::RngState;
use crate::schemes::{check_consistency_criterion, RandomBaselineScheme, Scheme};

/// Critical value of the chi-square distribution with 5 degrees of freedom
/// at significance 0.001 (checked against a reference implementation in the
/// test suite).
pub const CHI2_DF5_P999: f64 = 20.515005653372926;

/// One randomized instance for the label-independence criterion.
pub struct ConsistencyInstance {
    pub g1: LabeledGraph,
    pub g2: LabeledGraph,
    pub v_star: VertexLabel,
    pub o1: Obfuscation,
    pub o2: Obfuscation,
}

/// Draw a random instance with `n, m` within the given bounds; every third
/// instance carries vertex features on both graphs.
pub fn random_instance(rng: &mut ChaCha12Rng, index: usize, max_n: usize, square: bool) -> ConsistencyInstance {
    let n = rng.gen_range(4..=max_n);
    let m = if square { n } else { rng.gen_range(4..=max_n) };
    let mut g1 = crate::models::sample_er(n, 0.5, Namespace::V1, rng).expect("valid p");
    let mut g2 = crate::models::sample_er(m, 0.5, Namespace::V2, rng).expect("valid p");
    if index % 3 == 2 {
        let palette = [-1.0, 1.0];
        let draw = |rng: &mut ChaCha12Rng, count: usize| -> Vec<Vec<f64>> {
            (0..count).map(|_| vec![palette[rng.gen_range(0..palette.len())]]).collect()
        };
        let f1 = draw(rng, n);
        let f2 = draw(rng, m);
        g1 = g1.with_features(f1).expect("shape checked");
        g2 = g2.with_features(f2).expect("shape checked");
    }
    let v_star = VertexLabel::new(Namespace::V1, rng.gen_range(1..=n as u32));
    let o1 = Obfuscation::random(m, rng);
    let o2 = Obfuscation::random(m, rng);
    ConsistencyInstance { g1, g2, v_star, o1, o2 }
}

/// Run `count` randomized criterion checks against a scheme; returns the
/// number of failures (zero for a label-independent scheme).
pub fn consistency_failures(
    scheme: &dyn Scheme,
    seed: RngState,
    count: usize,
    max_n: usize,
    square: bool,
) -> Result<usize> {
    let mut rng = seed.rng();
    let mut failures = 0usize;
    for index in 0..count {
        let inst = random_instance(&mut rng, index, max_n, square);
        let ok = check_consistency_criterion(
            scheme, &inst.g1, &inst.g2, inst.v_star, &inst.o1, &inst.o2,
        )?;
        if !ok {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Rank counts of the obfuscated vertex of interest over uniformly random
/// relabelings of an asymmetric `g2`; consistent schemes make this uniform.
pub fn rank_counts_under_relabeling(
    scheme: &dyn Scheme,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    v_star: VertexLabel,
    draws: usize,
    seed: RngState,
) -> Result<Vec<usize>> {
    let m = g2.n();
    let o = Obfuscation::standard(m);
    // The correspondence is by label: whatever structure the relabeling puts
    // at the vertex labeled like v*, that vertex is the true match.
    let target = o
        .image(v_star.in_namespace(Namespace::V2))
        .ok_or_else(|| crate::error::Error::invalid("vertex of interest missing from g2"))?;
    let mut rng = seed.rng();
    let mut counts = vec![0usize; m];
    for _ in 0..draws {
        let sigma = Permutation::random(m, &mut rng);
        let relabeled = g2.permuted(&sigma)?;
        let list = scheme.nominate(g1, &o.apply(&relabeled)?, v_star)?;
        let rank = list
            .rank_of(target)
            .ok_or_else(|| crate::error::Error::invalid("target missing from the list"))?;
        counts[rank - 1] += 1;
    }
    Ok(counts)
}

/// Pearson chi-square statistic against the uniform distribution.
pub fn chi_square_uniform(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// A family of distinct randomly generated consistency-respecting schemes.
pub fn random_consistent_schemes(count: usize, seed: u64) -> Vec<RandomBaselineScheme> {
    (0..count)
        .map(|i| RandomBaselineScheme::new(seed.wrapping_mul(0x9e37_79b9).wrapping_add(i as u64)))
        .collect()
}

/// The standard six-vertex asymmetric test pair.
pub fn asymmetric_test_pair() -> (LabeledGraph, LabeledGraph, VertexLabel) {
    let g1 = iso::asymmetric_graph(6, Namespace::V1).expect("six vertices suffice");
    let g2 = iso::asymmetric_graph(6, Namespace::V2).expect("six vertices suffice");
    (g1, g2, VertexLabel::new(Namespace::V1, 1))
}
