//! Random-graph samplers and explicit finite-support pair distributions.
//!
//! Samplers draw edge indicators in storage order from a caller-supplied
//! generator, so a fixed [`crate::rng::RngState`] reproduces samples exactly.
//! Finite-support distributions hold exact rational masses; evaluation code
//! built on them can check optimality claims by equality instead of
//! tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, LabeledGraph, Namespace, NominatablePair, VertexLabel};
use crate::iso::{self, ENUMERATION_CAP};

/// Stochastic block model parameters `(K, B, b)`.
#[derive(Debug, Clone)]
pub struct SbmParams {
    /// Number of blocks.
    pub k: usize,
    /// Symmetric `K x K` matrix of within/between block edge probabilities.
    pub b: Vec<Vec<f64>>,
    /// Block membership of each vertex, entries in `1..=K`.
    pub memberships: Vec<usize>,
}

impl SbmParams {
    pub fn new(k: usize, b: Vec<Vec<f64>>, memberships: Vec<usize>) -> Result<Self> {
        if b.len() != k || b.iter().any(|row| row.len() != k) {
            return Err(Error::invalid("block matrix must be K x K"));
        }
        for i in 0..k {
            for j in 0..k {
                let p = b[i][j];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid("block probabilities must lie in [0, 1]"));
                }
                if (b[i][j] - b[j][i]).abs() != 0.0 {
                    return Err(Error::invalid("block matrix must be symmetric"));
                }
            }
        }
        if memberships.iter().any(|&m| m == 0 || m > k) {
            return Err(Error::invalid("memberships must lie in 1..=K"));
        }
        Ok(SbmParams { k, b, memberships })
    }

    pub fn n(&self) -> usize {
        self.memberships.len()
    }

    fn edge_probability(&self, i: usize, j: usize) -> f64 {
        self.b[self.memberships[i] - 1][self.memberships[j] - 1]
    }
}

/// Latent positions for a random dot product graph.
#[derive(Debug, Clone)]
pub struct LatentPositions {
    pub x: Vec<Vec<f64>>,
}

impl LatentPositions {
    pub fn new(x: Vec<Vec<f64>>) -> Result<Self> {
        let d = x.first().map_or(0, Vec::len);
        if x.iter().any(|row| row.len() != d) {
            return Err(Error::invalid("latent position rows have mixed dimensions"));
        }
        for (i, a) in x.iter().enumerate() {
            for b in x.iter().skip(i + 1) {
                let dot: f64 = a.iter().zip(b.iter()).map(|(p, q)| p * q).sum();
                if !(0.0..=1.0).contains(&dot) {
                    return Err(Error::invalid("pairwise dot products must lie in [0, 1]"));
                }
            }
        }
        Ok(LatentPositions { x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Edge probability and edgewise correlation matrices for a correlated pair.
#[derive(Debug, Clone)]
pub struct CorrelatedErParams {
    pub p: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
}

impl CorrelatedErParams {
    pub fn new(p: Vec<Vec<f64>>, r: Vec<Vec<f64>>) -> Result<Self> {
        let n = p.len();
        if r.len() != n || p.iter().any(|row| row.len() != n) || r.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("probability and correlation matrices must be n x n"));
        }
        for i in 0..n {
            for j in 0..n {
                if p[i][j] != p[j][i] || r[i][j] != r[j][i] {
                    return Err(Error::invalid("matrices must be symmetric"));
                }
                if !(0.0..=1.0).contains(&p[i][j]) {
                    return Err(Error::invalid("edge probabilities must lie in [0, 1]"));
                }
                if i != j && !correlation_feasible(p[i][j], r[i][j]) {
                    return Err(Error::invalid(format!(
                        "correlation {} infeasible for probability {} at pair ({}, {})",
                        r[i][j], p[i][j], i + 1, j + 1
                    )));
                }
            }
        }
        Ok(CorrelatedErParams { p, r })
    }

    /// Constant-probability, constant-correlation parameters.
    pub fn constant(n: usize, p: f64, rho: f64) -> Result<Self> {
        let pm = vec![vec![p; n]; n];
        let rm = vec![vec![rho; n]; n];
        CorrelatedErParams::new(pm, rm)
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }
}

/// The joint Bernoulli pair with marginal `p` and correlation `r` exists iff
/// `r >= max(-p/(1-p), -(1-p)/p)` and `r <= 1`.
pub fn correlation_feasible(p: f64, r: f64) -> bool {
    if !(0.0..=1.0).contains(&p) || r > 1.0 {
        return false;
    }
    if p == 0.0 || p == 1.0 {
        // Degenerate marginals: the pair is deterministic for any r.
        return true;
    }
    let lower = (-p / (1.0 - p)).max(-(1.0 - p) / p);
    r >= lower
}

fn graph_from_bernoulli(
    n: usize,
    ns: Namespace,
    mut prob: impl FnMut(usize, usize) -> f64,
    rng: &mut impl Rng,
) -> LabeledGraph {
    let mut adj = Adjacency::empty(n);
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(prob(i, j)) {
                adj.set(i, j, true);
            }
        }
    }
    LabeledGraph::from_parts(ns, (1..=n as u32).collect(), adj, None)
        .expect("fresh labels are unique")
}

/// Erdos-Renyi graph: each of the `C(n, 2)` edges present with probability `p`.
pub fn sample_er(n: usize, p: f64, ns: Namespace, rng: &mut impl Rng) -> Result<LabeledGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("edge probability must lie in [0, 1]"));
    }
    Ok(graph_from_bernoulli(n, ns, |_, _| p, rng))
}

/// Edge-independent graph with per-pair probabilities `P`.
pub fn sample_er_matrix(p: &[Vec<f64>], ns: Namespace, rng: &mut impl Rng) -> Result<LabeledGraph> {
    let n = p.len();
    for i in 0..n {
        if p[i].len() != n {
            return Err(Error::invalid("probability matrix must be square"));
        }
        for j in 0..n {
            if p[i][j] != p[j][i] {
                return Err(Error::invalid("probability matrix must be symmetric"));
            }
            if !(0.0..=1.0).contains(&p[i][j]) {
                return Err(Error::invalid("edge probabilities must lie in [0, 1]"));
            }
        }
    }
    Ok(graph_from_bernoulli(n, ns, |i, j| p[i][j], rng))
}

/// Stochastic block model draw.
pub fn sample_sbm(params: &SbmParams, ns: Namespace, rng: &mut impl Rng) -> LabeledGraph {
    graph_from_bernoulli(params.n(), ns, |i, j| params.edge_probability(i, j), rng)
}

/// Stochastic block model conditioned on asymmetry, by rejection.
pub fn sample_sbm_asymmetric(params: &SbmParams, ns: Namespace, rng: &mut impl Rng) -> LabeledGraph {
    loop {
        let g = sample_sbm(params, ns, rng);
        if g.n() > 64 || iso::is_asymmetric(&g) {
            // Beyond the exact-iso range the draw is asymmetric outside a
            // vanishing exception set; accept it.
            return g;
        }
    }
}

/// Random dot product graph: edge `{i, j}` present with probability `(XX^T)_{ij}`.
pub fn sample_rdpg(x: &LatentPositions, ns: Namespace, rng: &mut impl Rng) -> LabeledGraph {
    graph_from_bernoulli(x.n(), ns, |i, j| {
        x.x[i].iter().zip(x.x[j].iter()).map(|(p, q)| p * q).sum()
    }, rng)
}

/// A correlated pair: marginally `ER(P)` each; for every pair of vertices the
/// two edge indicators have correlation `R`. The second indicator is drawn
/// conditionally: `B ~ Bern(p + r(1-p))` when `A = 1`, else `B ~ Bern(p(1-r))`.
pub fn sample_correlated_er(
    params: &CorrelatedErParams,
    rng: &mut impl Rng,
) -> (LabeledGraph, LabeledGraph) {
    let n = params.n();
    let mut a = Adjacency::empty(n);
    let mut b = Adjacency::empty(n);
    for j in 1..n {
        for i in 0..j {
            let p = params.p[i][j];
            let r = params.r[i][j];
            let first = rng.gen_bool(p);
            let cond = if first { p + r * (1.0 - p) } else { p * (1.0 - r) };
            let second = rng.gen_bool(cond.clamp(0.0, 1.0));
            if first {
                a.set(i, j, true);
            }
            if second {
                b.set(i, j, true);
            }
        }
    }
    let ids: Vec<u32> = (1..=n as u32).collect();
    let g1 = LabeledGraph::from_parts(Namespace::V1, ids.clone(), a, None).unwrap();
    let g2 = LabeledGraph::from_parts(Namespace::V2, ids, b, None).unwrap();
    (g1, g2)
}

/// One weighted support point of a finite-support pair distribution.
#[derive(Debug, Clone)]
pub struct Atom {
    pub pair: NominatablePair,
    pub mass: BigRational,
}

/// An explicit finite-support probability measure over graph pairs, together
/// with the core vertex of interest. Masses are exact rationals and must sum
/// to one exactly; all atoms share graph orders, core size and label sets.
#[derive(Debug, Clone)]
pub struct FiniteDistribution {
    atoms: Vec<Atom>,
    v_star: VertexLabel,
}

impl FiniteDistribution {
    pub fn new(atoms: Vec<Atom>, v_star: VertexLabel) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("a distribution needs at least one atom"));
        }
        let mut total = BigRational::zero();
        for atom in &atoms {
            if atom.mass.is_negative() {
                return Err(Error::invalid("atom masses must be nonnegative"));
            }
            total += &atom.mass;
        }
        if total != BigRational::one() {
            return Err(Error::invalid(format!("atom masses sum to {total}, not 1")));
        }
        let first = &atoms[0].pair;
        let (n, m, c) = (first.g1().n(), first.g2().n(), first.core_size());
        let ids1 = first.g1().ids().to_vec();
        let ids2 = first.g2().ids().to_vec();
        for atom in &atoms {
            let p = &atom.pair;
            if p.g1().n() != n || p.g2().n() != m || p.core_size() != c {
                return Err(Error::invalid("atoms must share graph orders and core size"));
            }
            if p.g1().ids() != ids1.as_slice() || p.g2().ids() != ids2.as_slice() {
                return Err(Error::invalid("atoms must share label sets"));
            }
        }
        if v_star.ns != Namespace::V1 {
            return Err(Error::invalid("the vertex of interest is a V1 label"));
        }
        let core_pos = atoms[0]
            .pair
            .g1()
            .position_of(v_star)
            .ok_or_else(|| Error::invalid("vertex of interest missing from the first graph"))?;
        if core_pos >= c {
            return Err(Error::invalid("vertex of interest must be a core vertex"));
        }
        Ok(FiniteDistribution { atoms, v_star })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn v_star(&self) -> VertexLabel {
        self.v_star
    }

    /// The vertex of interest as a second-graph label.
    pub fn v_star_v2(&self) -> VertexLabel {
        self.v_star.in_namespace(Namespace::V2)
    }

    pub fn n(&self) -> usize {
        self.atoms[0].pair.g1().n()
    }

    pub fn m(&self) -> usize {
        self.atoms[0].pair.g2().n()
    }

    pub fn core_size(&self) -> usize {
        self.atoms[0].pair.core_size()
    }
}

/// Exact rational `1 / d`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Normalized, validated distribution from raw weighted pairs.
pub fn make_finite_support(
    pairs: Vec<(NominatablePair, BigRational)>,
    v_star: VertexLabel,
) -> Result<FiniteDistribution> {
    let atoms = pairs.into_iter().map(|(pair, mass)| Atom { pair, mass }).collect();
    FiniteDistribution::new(atoms, v_star)
}

/// The uniform measure over `{(g1, h) : h isomorphic to g2}`, with `g2`
/// within the enumeration cap.
pub fn uniform_iso_class_distribution(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    v_star: VertexLabel,
) -> Result<FiniteDistribution> {
    let class = iso::enumerate_iso_class_capped(g2, ENUMERATION_CAP)?;
    let mass = BigRational::new(BigInt::one(), BigInt::from(class.len() as u64));
    let c = g1.n().min(g2.n());
    let atoms = class
        .into_iter()
        .map(|(h, _)| {
            Ok(Atom {
                pair: NominatablePair::new(g1.clone(), h, c, "uniform-iso-class")?,
                mass: mass.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteDistribution::new(atoms, v_star)
}

/// Encode a one-graph nomination instance with block seeds as a two-graph
/// pair: the first graph gains one label vertex per block, adjacent to that
/// block's seeds; the second graph is the subgraph induced by nonseeds, which
/// form the core.
pub fn encode_one_graph_instance(
    g: &LabeledGraph,
    seeds_per_block: &[Vec<VertexLabel>],
) -> Result<NominatablePair> {
    let k = seeds_per_block.len();
    let mut seen = std::collections::BTreeSet::new();
    for block in seeds_per_block {
        for &s in block {
            let pos = g
                .position_of(s)
                .ok_or_else(|| Error::invalid(format!("seed {s} not in the graph")))?;
            if !seen.insert(pos) {
                return Err(Error::invalid(format!("seed {s} appears in two blocks")));
            }
        }
    }
    let n = g.n();
    let seed_positions: Vec<usize> = (0..n).filter(|p| seen.contains(p)).collect();
    let nonseed_positions: Vec<usize> = (0..n).filter(|p| !seen.contains(p)).collect();
    let c = nonseed_positions.len();

    // Core-first relabeling: nonseeds take ids 1..=c in both graphs, seeds
    // follow, label vertices come last in the first graph.
    let mut new_id = vec![0u32; n];
    for (rank, &p) in nonseed_positions.iter().enumerate() {
        new_id[p] = rank as u32 + 1;
    }
    for (rank, &p) in seed_positions.iter().enumerate() {
        new_id[p] = (c + rank) as u32 + 1;
    }

    let n1 = n + k;
    let mut adj1 = Adjacency::empty(n1);
    for (i, j) in g.adjacency().edges() {
        adj1.set(new_id[i] as usize - 1, new_id[j] as usize - 1, true);
    }
    for (block_idx, block) in seeds_per_block.iter().enumerate() {
        let label_vertex = n + block_idx;
        for &s in block {
            let pos = g.position_of(s).unwrap();
            adj1.set(new_id[pos] as usize - 1, label_vertex, true);
        }
    }
    let g1 = LabeledGraph::from_parts(
        Namespace::V1,
        (1..=n1 as u32).collect(),
        adj1,
        None,
    )?;

    let mut adj2 = Adjacency::empty(c);
    for (a, &pa) in nonseed_positions.iter().enumerate() {
        for (b, &pb) in nonseed_positions.iter().enumerate().skip(a + 1) {
            if g.adjacency().has(pa, pb) {
                adj2.set(a, b, true);
            }
        }
    }
    let g2 = LabeledGraph::from_parts(Namespace::V2, (1..=c as u32).collect(), adj2, None)?;
    NominatablePair::new(g1, g2, c, "one-graph-encoding")
}

/// A reusable pair-sampling rule for Monte Carlo evaluation.
pub trait PairSampler: Send + Sync {
    fn sample_pair(&self, rng: &mut rand_chacha::ChaCha12Rng) -> (LabeledGraph, LabeledGraph);
    /// Orders of the two sampled graphs.
    fn sizes(&self) -> (usize, usize);
    fn core_size(&self) -> usize;
    /// Closed-form reference error at level k, where the model admits one.
    fn bayes_reference(&self, _k: usize) -> Option<f64> {
        None
    }
}

/// Independent `ER(n, p)` pair with fully overlapping cores.
#[derive(Debug, Clone)]
pub struct IndependentErPair {
    pub n: usize,
    pub p: f64,
}

impl PairSampler for IndependentErPair {
    fn sample_pair(&self, rng: &mut rand_chacha::ChaCha12Rng) -> (LabeledGraph, LabeledGraph) {
        let g1 = sample_er(self.n, self.p, Namespace::V1, rng).expect("validated p");
        let g2 = sample_er(self.n, self.p, Namespace::V2, rng).expect("validated p");
        (g1, g2)
    }

    fn sizes(&self) -> (usize, usize) {
        (self.n, self.n)
    }

    fn core_size(&self) -> usize {
        self.n
    }

    fn bayes_reference(&self, k: usize) -> Option<f64> {
        Some(1.0 - k as f64 / self.n as f64)
    }
}

/// Constant-parameter correlated pair.
#[derive(Debug, Clone)]
pub struct CorrelatedErPair {
    pub params: CorrelatedErParams,
}

impl PairSampler for CorrelatedErPair {
    fn sample_pair(&self, rng: &mut rand_chacha::ChaCha12Rng) -> (LabeledGraph, LabeledGraph) {
        sample_correlated_er(&self.params, rng)
    }

    fn sizes(&self) -> (usize, usize) {
        (self.params.n(), self.params.n())
    }

    fn core_size(&self) -> usize {
        self.params.n()
    }
}

/// Independent SBM pair (possibly with different block matrices), identity
/// correspondence, full core.
#[derive(Debug, Clone)]
pub struct SbmPair {
    pub first: SbmParams,
    pub second: SbmParams,
    /// Reject draws with symmetries (only meaningful within the exact-iso range).
    pub asymmetric_only: bool,
    /// Attach the two-block closed-form reference `max(0, 1 - 2k/n)`.
    pub two_block_reference: bool,
}

impl PairSampler for SbmPair {
    fn sample_pair(&self, rng: &mut rand_chacha::ChaCha12Rng) -> (LabeledGraph, LabeledGraph) {
        let g1 = if self.asymmetric_only {
            sample_sbm_asymmetric(&self.first, Namespace::V1, rng)
        } else {
            sample_sbm(&self.first, Namespace::V1, rng)
        };
        let g2 = if self.asymmetric_only {
            sample_sbm_asymmetric(&self.second, Namespace::V2, rng)
        } else {
            sample_sbm(&self.second, Namespace::V2, rng)
        };
        (g1, g2)
    }

    fn sizes(&self) -> (usize, usize) {
        (self.first.n(), self.second.n())
    }

    fn core_size(&self) -> usize {
        self.first.n().min(self.second.n())
    }

    fn bayes_reference(&self, k: usize) -> Option<f64> {
        if self.two_block_reference {
            Some((1.0 - 2.0 * k as f64 / self.first.n() as f64).max(0.0))
        } else {
            None
        }
    }
}
