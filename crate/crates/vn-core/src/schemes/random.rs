//! The random baseline: a seed-keyed but structure-determined ordering.
//!
//! The output is a fixed shuffle of the canonical positions of the observed
//! graph, keyed by a hash of its canonical adjacency and the scheme seed, so
//! the scheme is deterministic and label-independent while different seeds
//! give unrelated orderings. A family of these schemes with distinct seeds
//! doubles as a supply of randomly generated consistency-respecting schemes
//! for optimality comparisons.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::{canon_view, ensure_inputs, list_by_keys, NominationList, Scheme, CANONICAL_PIPELINE_CAP};
use crate::error::Result;
use crate::graph::{LabeledGraph, Permutation, VertexLabel};

/// FNV-1a over 64-bit words; stable across platforms and releases, which the
/// golden-value regressions rely on.
pub(crate) fn fnv1a(words: impl IntoIterator<Item = u64>, seed: u64) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for word in words {
        for byte in word.to_le_bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}

#[derive(Debug, Clone)]
pub struct RandomBaselineScheme {
    pub seed: u64,
}

impl RandomBaselineScheme {
    pub fn new(seed: u64) -> Self {
        RandomBaselineScheme { seed }
    }
}

impl Scheme for RandomBaselineScheme {
    fn name(&self) -> String {
        format!("random-baseline[{}]", self.seed)
    }

    fn nominate(
        &self,
        g1: &LabeledGraph,
        og2: &LabeledGraph,
        v_star: VertexLabel,
    ) -> Result<NominationList> {
        ensure_inputs(g1, og2, v_star)?;
        let m = og2.n();
        if m <= CANONICAL_PIPELINE_CAP {
            let view = canon_view(og2);
            let digest = fnv1a(view.canon.adjacency().words().iter().copied(), self.seed);
            let mut rng = ChaCha12Rng::seed_from_u64(digest);
            let shuffle = Permutation::random(m, &mut rng);
            // Vertex at canonical position c receives rank shuffle(c) + 1.
            let keys: Vec<usize> = (0..m).map(|p| shuffle.image(view.witness.image(p))).collect();
            Ok(list_by_keys(og2, keys))
        } else {
            // Beyond the canonical cap, key each vertex by a hash of its
            // refined structural color. Color classes are unions of orbits;
            // on graphs this size they are almost surely discrete.
            let colors = crate::iso::refined_structural_colors(og2);
            let keys: Vec<(u64, u32)> = (0..m)
                .map(|p| (fnv1a([colors[p] as u64], self.seed), og2.ids()[p]))
                .collect();
            Ok(list_by_keys(og2, keys))
        }
    }
}
