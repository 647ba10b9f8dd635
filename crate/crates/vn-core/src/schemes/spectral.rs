//! Adjacency spectral embedding schemes.
//!
//! Both graphs are embedded by their top-`d` eigenpairs (by eigenvalue
//! magnitude, rows scaled by the square root of the magnitude). Candidates
//! are ranked by embedding distance after one of three alignments:
//!
//! * `Density`: cluster both embeddings, order clusters by within-cluster
//!   edge density, and map the cluster of `v*` onto the equally-ranked
//!   cluster of the observed graph;
//! * `AntiDensity`: the same with the density order reversed;
//! * `SeedlessProcrustes`: sign-canonicalize both embeddings and compare
//!   candidate rows to the embedded `v*` directly.

use nalgebra::{DMatrix, SymmetricEigen};

use super::matching::OrdF64;
use super::{canon_view, ensure_inputs, list_by_keys, NominationList, Scheme, CANONICAL_PIPELINE_CAP};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, VertexLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alignment {
    Density,
    AntiDensity,
    SeedlessProcrustes,
}

#[derive(Debug, Clone)]
pub struct SpectralScheme {
    pub dim: usize,
    pub clusters: usize,
    pub align: Alignment,
}

impl SpectralScheme {
    pub fn new(dim: usize, align: Alignment) -> Self {
        SpectralScheme { dim, clusters: 2, align }
    }
}

/// Top-`d` adjacency spectral embedding with deterministic eigenvector signs.
pub(crate) fn embed(g: &LabeledGraph, dim: usize) -> Result<Vec<Vec<f64>>> {
    let n = g.n();
    if dim == 0 || dim > n {
        return Err(Error::invalid(format!(
            "embedding dimension {dim} must lie in 1..={n}"
        )));
    }
    let a = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i != j && g.adjacency().has(i, j) {
            1.0
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        let ax = eig.eigenvalues[x].abs();
        let ay = eig.eigenvalues[y].abs();
        ay.total_cmp(&ax)
            .then(eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]))
            .then(x.cmp(&y))
    });
    let mut rows = vec![vec![0.0f64; dim]; n];
    for (col, &idx) in order.iter().take(dim).enumerate() {
        let lambda = eig.eigenvalues[idx];
        let scale = lambda.abs().sqrt();
        let vector = eig.eigenvectors.column(idx);
        // Fix the sign so the entry of largest magnitude is positive.
        let mut pivot = 0usize;
        for i in 1..n {
            if vector[i].abs() > vector[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if vector[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            rows[i][col] = sign * vector[i] * scale;
        }
    }
    Ok(rows)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Deterministic k-means: farthest-point initialization, ties by index.
pub(crate) fn kmeans(rows: &[Vec<f64>], k: usize) -> Vec<usize> {
    let n = rows.len();
    if k <= 1 || n <= k {
        return (0..n).map(|i| if n <= k { i.min(k - 1) } else { 0 }).collect();
    }
    let norm = |i: usize| rows[i].iter().map(|x| x * x).sum::<f64>();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut first = 0usize;
    for i in 1..n {
        if norm(i) > norm(first) {
            first = i;
        }
    }
    centers.push(rows[first].clone());
    while centers.len() < k {
        let mut far = 0usize;
        let mut far_d = -1.0f64;
        for (i, row) in rows.iter().enumerate() {
            let d = centers.iter().map(|c| distance(row, c)).fold(f64::INFINITY, f64::min);
            if d > far_d {
                far_d = d;
                far = i;
            }
        }
        centers.push(rows[far].clone());
    }
    let mut assign = vec![0usize; n];
    for _ in 0..100 {
        let mut next = vec![0usize; n];
        for (i, row) in rows.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = distance(row, center);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            next[i] = best;
        }
        // Re-seed any emptied cluster with the point farthest from its center.
        for c in 0..k {
            if !next.contains(&c) {
                let mut far = 0usize;
                let mut far_d = -1.0f64;
                for (i, row) in rows.iter().enumerate() {
                    let d = distance(row, &centers[next[i]]);
                    if d > far_d {
                        far_d = d;
                        far = i;
                    }
                }
                next[far] = c;
            }
        }
        let stable = next == assign;
        assign = next;
        let dim = rows[0].len();
        for c in 0..k {
            let members: Vec<usize> = (0..n).filter(|&i| assign[i] == c).collect();
            if members.is_empty() {
                continue;
            }
            let mut center = vec![0.0f64; dim];
            for &i in &members {
                for (s, x) in center.iter_mut().zip(rows[i].iter()) {
                    *s += x;
                }
            }
            for s in &mut center {
                *s /= members.len() as f64;
            }
            centers[c] = center;
        }
        if stable {
            break;
        }
    }
    assign
}

fn within_density(g: &LabeledGraph, members: &[usize]) -> f64 {
    if members.len() < 2 {
        return 0.0;
    }
    let mut edges = 0usize;
    for (a, &i) in members.iter().enumerate() {
        for &j in members.iter().skip(a + 1) {
            if g.adjacency().has(i, j) {
                edges += 1;
            }
        }
    }
    edges as f64 / (members.len() * (members.len() - 1) / 2) as f64
}

/// Cluster ids ordered from densest to sparsest, with deterministic ties.
fn density_ranks(g: &LabeledGraph, assign: &[usize], k: usize) -> Vec<usize> {
    let mut clusters: Vec<(usize, f64, usize)> = (0..k)
        .map(|c| {
            let members: Vec<usize> = (0..g.n()).filter(|&i| assign[i] == c).collect();
            let min_pos = members.first().copied().unwrap_or(usize::MAX);
            (c, within_density(g, &members), min_pos)
        })
        .collect();
    clusters.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.2.cmp(&b.2)));
    clusters.into_iter().map(|(c, _, _)| c).collect()
}

/// Per-vertex `(wrong-cluster flag, distance to the target centroid)` scores
/// for the density-aligned family.
pub(crate) fn density_alignment_scores(
    g1: &LabeledGraph,
    work: &LabeledGraph,
    pv: usize,
    dim: usize,
    clusters: usize,
    anti: bool,
) -> Result<Vec<(u8, OrdF64)>> {
    let emb1 = embed(g1, dim.min(g1.n()))?;
    let emb2 = embed(work, dim.min(work.n()))?;
    let assign1 = kmeans(&emb1, clusters);
    let assign2 = kmeans(&emb2, clusters);
    let ranks1 = density_ranks(g1, &assign1, clusters);
    let ranks2 = density_ranks(work, &assign2, clusters);
    let v_cluster = assign1[pv];
    let v_rank = ranks1.iter().position(|&c| c == v_cluster).expect("cluster present");
    let target_rank = if anti { clusters - 1 - v_rank } else { v_rank };
    let target = ranks2[target_rank];
    let members: Vec<usize> = (0..work.n()).filter(|&i| assign2[i] == target).collect();
    let dim2 = emb2[0].len();
    let mut centroid = vec![0.0f64; dim2];
    for &i in &members {
        for (s, x) in centroid.iter_mut().zip(emb2[i].iter()) {
            *s += x;
        }
    }
    if !members.is_empty() {
        for s in &mut centroid {
            *s /= members.len() as f64;
        }
    }
    Ok((0..work.n())
        .map(|w| ((assign2[w] != target) as u8, OrdF64(distance(&emb2[w], &centroid))))
        .collect())
}

fn procrustes_scores(
    g1: &LabeledGraph,
    work: &LabeledGraph,
    pv: usize,
    dim: usize,
) -> Result<Vec<OrdF64>> {
    let d = dim.min(g1.n()).min(work.n());
    let emb1 = embed(g1, d)?;
    let emb2 = embed(work, d)?;
    Ok((0..work.n()).map(|w| OrdF64(distance(&emb2[w], &emb1[pv]))).collect())
}

impl Scheme for SpectralScheme {
    fn name(&self) -> String {
        match self.align {
            Alignment::Density => format!("spectral-density[d={}]", self.dim),
            Alignment::AntiDensity => format!("spectral-anti[d={}]", self.dim),
            Alignment::SeedlessProcrustes => format!("spectral-procrustes[d={}]", self.dim),
        }
    }

    fn nominate(
        &self,
        g1: &LabeledGraph,
        og2: &LabeledGraph,
        v_star: VertexLabel,
    ) -> Result<NominationList> {
        let pv = ensure_inputs(g1, og2, v_star)?;
        let m = og2.n();
        if self.dim == 0 || self.dim > m || self.dim > g1.n() {
            return Err(Error::invalid(format!(
                "embedding dimension {} exceeds a graph order",
                self.dim
            )));
        }

        if m <= CANONICAL_PIPELINE_CAP {
            let view = canon_view(og2);
            match self.align {
                Alignment::SeedlessProcrustes => {
                    let scores = procrustes_scores(g1, &view.canon, pv, self.dim)?;
                    let keys: Vec<(OrdF64, usize)> = (0..m)
                        .map(|p| {
                            let cw = view.witness.image(p);
                            (scores[cw], cw)
                        })
                        .collect();
                    Ok(list_by_keys(og2, keys))
                }
                Alignment::Density | Alignment::AntiDensity => {
                    let anti = self.align == Alignment::AntiDensity;
                    let scores =
                        density_alignment_scores(g1, &view.canon, pv, self.dim, self.clusters, anti)?;
                    let keys: Vec<(u8, OrdF64, usize)> = (0..m)
                        .map(|p| {
                            let cw = view.witness.image(p);
                            (scores[cw].0, scores[cw].1, cw)
                        })
                        .collect();
                    Ok(list_by_keys(og2, keys))
                }
            }
        } else {
            match self.align {
                Alignment::SeedlessProcrustes => {
                    let scores = procrustes_scores(g1, og2, pv, self.dim)?;
                    let keys: Vec<(OrdF64, u32)> =
                        (0..m).map(|p| (scores[p], og2.ids()[p])).collect();
                    Ok(list_by_keys(og2, keys))
                }
                Alignment::Density | Alignment::AntiDensity => {
                    let anti = self.align == Alignment::AntiDensity;
                    let scores =
                        density_alignment_scores(g1, og2, pv, self.dim, self.clusters, anti)?;
                    let keys: Vec<(u8, OrdF64, u32)> =
                        (0..m).map(|p| (scores[p].0, scores[p].1, og2.ids()[p])).collect();
                    Ok(list_by_keys(og2, keys))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Namespace, Obfuscation};
    use crate::iso::ASYMMETRIC_6;
    use crate::models::{sample_sbm, SbmParams};
    use crate::rng::RngState;

    #[test]
    fn identical_graphs_rank_target_first() {
        let g1 = LabeledGraph::from_edges(6, &ASYMMETRIC_6, Namespace::V1).unwrap();
        let g2 = g1.clone().with_namespace(Namespace::V2);
        let og2 = Obfuscation::standard(6).apply(&g2).unwrap();
        let scheme = SpectralScheme::new(6, Alignment::SeedlessProcrustes);
        for id in 1..=6u32 {
            let list = scheme
                .nominate(&g1, &og2, VertexLabel::new(Namespace::V1, id))
                .unwrap();
            assert_eq!(list.rank_of(VertexLabel::new(Namespace::W, id)), Some(1));
        }
    }

    #[test]
    fn rejects_oversized_dimension() {
        let g1 = LabeledGraph::from_edges(4, &[(1, 2)], Namespace::V1).unwrap();
        let g2 = LabeledGraph::from_edges(4, &[(1, 2)], Namespace::V2).unwrap();
        let og2 = Obfuscation::standard(4).apply(&g2).unwrap();
        let scheme = SpectralScheme::new(5, Alignment::SeedlessProcrustes);
        assert!(scheme
            .nominate(&g1, &og2, VertexLabel::new(Namespace::V1, 1))
            .is_err());
    }

    #[test]
    fn density_alignment_finds_the_matching_block() {
        // Two-block graphs with one dense and one sparse block; the density
        // alignment should put the dense-block candidates first when v* is
        // in the dense block of the first graph.
        let n = 60;
        let b = vec![vec![0.8, 0.05], vec![0.05, 0.3]];
        let memberships: Vec<usize> = (0..n).map(|i| if i < n / 2 { 1 } else { 2 }).collect();
        let params = SbmParams::new(2, b, memberships).unwrap();
        let mut rng = RngState::new(40).rng();
        let g1 = sample_sbm(&params, Namespace::V1, &mut rng);
        let g2 = sample_sbm(&params, Namespace::V2, &mut rng);
        let og2 = Obfuscation::standard(n).apply(&g2).unwrap();
        let scheme = SpectralScheme::new(2, Alignment::Density);
        let list = scheme
            .nominate(&g1, &og2, VertexLabel::new(Namespace::V1, 1))
            .unwrap();
        // Vertices 1..=30 are the dense block in both graphs.
        let top: Vec<u32> = list.order()[..n / 2].iter().map(|l| l.id).collect();
        let dense_in_top = top.iter().filter(|&&id| id <= n as u32 / 2).count();
        assert!(
            dense_in_top >= 28,
            "density alignment should surface the dense block, got {dense_in_top}/30"
        );

        let anti = SpectralScheme::new(2, Alignment::AntiDensity);
        let list = anti
            .nominate(&g1, &og2, VertexLabel::new(Namespace::V1, 1))
            .unwrap();
        let top: Vec<u32> = list.order()[..n / 2].iter().map(|l| l.id).collect();
        let dense_in_top = top.iter().filter(|&&id| id <= n as u32 / 2).count();
        assert!(dense_in_top <= 2, "anti alignment should bury the dense block");
    }

    #[test]
    fn kmeans_separates_obvious_clusters() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![0.0, 0.1],
            vec![5.0, 5.0],
            vec![5.1, 5.0],
        ];
        let assign = kmeans(&rows, 2);
        assert_eq!(assign[0], assign[1]);
        assert_eq!(assign[0], assign[2]);
        assert_eq!(assign[3], assign[4]);
        assert_ne!(assign[0], assign[3]);
    }
}
