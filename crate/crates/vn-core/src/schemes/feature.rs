//! Feature-aware nomination.
//!
//! Candidates are ranked primarily by the distance between their feature
//! vector and the feature vector of the vertex of interest. Within the
//! canonical pipeline cap, ties break by feature value and then by
//! feature-colored canonical position, which keeps the feature-refined orbit
//! rank sets obfuscation-independent. Above the cap, equal-distance
//! candidates follow the density-aligned spectral order, so the scheme
//! degrades to "filter by features, then match structure".

use super::matching::OrdF64;
use super::spectral::density_alignment_scores;
use super::{canon_view, ensure_inputs, list_by_keys, NominationList, Scheme, CANONICAL_PIPELINE_CAP};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, VertexLabel};

#[derive(Debug, Clone)]
pub struct FeatureScheme {
    /// Embedding dimension of the structural fallback above the cap.
    pub dim: usize,
    pub clusters: usize,
    pub anti: bool,
}

impl Default for FeatureScheme {
    fn default() -> Self {
        FeatureScheme { dim: 2, clusters: 2, anti: false }
    }
}

fn feature_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid("feature dimensions differ across the two graphs"));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

impl Scheme for FeatureScheme {
    fn name(&self) -> String {
        "feature-nearest".into()
    }

    fn nominate(
        &self,
        g1: &LabeledGraph,
        og2: &LabeledGraph,
        v_star: VertexLabel,
    ) -> Result<NominationList> {
        let pv = ensure_inputs(g1, og2, v_star)?;
        let m = og2.n();

        // With features absent on either side the distance term vanishes and
        // the structural tie-break carries the whole ranking.
        let target: Option<&Vec<f64>> = g1.features().map(|rows| &rows[pv]);
        let candidate = |w: usize| -> Option<&Vec<f64>> { og2.features().map(|rows| &rows[w]) };
        let dist = |w: usize| -> Result<f64> {
            match (target, candidate(w)) {
                (Some(t), Some(c)) => feature_distance(t, c),
                _ => Ok(0.0),
            }
        };

        if m <= CANONICAL_PIPELINE_CAP {
            let view = canon_view(og2);
            let mut keys = Vec::with_capacity(m);
            for p in 0..m {
                let feat_bits: Vec<u64> = candidate(p)
                    .map(|row| row.iter().map(|x| x.to_bits()).collect())
                    .unwrap_or_default();
                keys.push((OrdF64(dist(p)?), feat_bits, view.witness.image(p)));
            }
            Ok(list_by_keys(og2, keys))
        } else {
            let scores =
                density_alignment_scores(g1, og2, pv, self.dim, self.clusters, self.anti)?;
            let mut keys = Vec::with_capacity(m);
            for p in 0..m {
                keys.push((OrdF64(dist(p)?), scores[p].0, scores[p].1, og2.ids()[p]));
            }
            Ok(list_by_keys(og2, keys))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Namespace, Obfuscation};
    use crate::iso::ASYMMETRIC_6;

    #[test]
    fn nearest_feature_wins() {
        let g1 = LabeledGraph::from_edges(6, &ASYMMETRIC_6, Namespace::V1)
            .unwrap()
            .with_features(vec![vec![0.9], vec![0.0], vec![0.0], vec![0.0], vec![0.0], vec![0.0]])
            .unwrap();
        let g2 = LabeledGraph::from_edges(6, &ASYMMETRIC_6, Namespace::V2)
            .unwrap()
            .with_features(vec![vec![0.0], vec![0.0], vec![1.0], vec![0.0], vec![0.0], vec![0.0]])
            .unwrap();
        let og2 = Obfuscation::standard(6).apply(&g2).unwrap();
        let scheme = FeatureScheme::default();
        let list = scheme
            .nominate(&g1, &og2, VertexLabel::new(Namespace::V1, 1))
            .unwrap();
        // v*'s feature is 0.9; the only candidate near it carries 1.0 (u3 -> w3).
        assert_eq!(list.rank_of(VertexLabel::new(Namespace::W, 3)), Some(1));
    }

    #[test]
    fn featureless_inputs_fall_back_to_structure() {
        let g1 = LabeledGraph::from_edges(6, &ASYMMETRIC_6, Namespace::V1).unwrap();
        let g2 = LabeledGraph::from_edges(6, &ASYMMETRIC_6, Namespace::V2).unwrap();
        let og2 = Obfuscation::standard(6).apply(&g2).unwrap();
        let scheme = FeatureScheme::default();
        let list = scheme
            .nominate(&g1, &og2, VertexLabel::new(Namespace::V1, 1))
            .unwrap();
        assert_eq!(list.len(), 6);
    }
}
