//! Labeled hollow undirected graphs, relabelings, obfuscation, and the
//! on-disk edge-list format.
//!
//! A graph stores an ordered list of vertex labels plus a packed
//! upper-triangle bit matrix; vertices are addressed by position internally
//! and by [`VertexLabel`] at the API boundary. Labels are opaque integers
//! tagged with a namespace so the disjointness requirements between the two
//! graphs of a pair and the obfuscating set are checkable rather than
//! conventions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Which label universe a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Namespace {
    /// Vertices of the first graph.
    V1,
    /// Vertices of the second graph.
    V2,
    /// The obfuscating set hiding the labels of the second graph.
    W,
}

impl Namespace {
    fn prefix(self) -> char {
        match self {
            Namespace::V1 => 'v',
            Namespace::V2 => 'u',
            Namespace::W => 'w',
        }
    }
}

/// An opaque integer label plus its namespace.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    pub ns: Namespace,
    pub id: u32,
}

impl VertexLabel {
    pub fn new(ns: Namespace, id: u32) -> Self {
        VertexLabel { ns, id }
    }

    /// The label with the same id in another namespace.
    pub fn in_namespace(self, ns: Namespace) -> Self {
        VertexLabel { ns, id: self.id }
    }
}

impl fmt::Debug for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ns.prefix(), self.id)
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ns.prefix(), self.id)
    }
}

/// Packed upper-triangle adjacency bits of a hollow symmetric matrix.
///
/// The pair `(i, j)` with `i < j` lives at sequence index `j(j-1)/2 + i`,
/// i.e. pairs are ordered `(0,1), (0,2), (1,2), (0,3), ...`. Lexicographic
/// comparison of two adjacency values compares this bit sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Adjacency {
    n: usize,
    bits: Vec<u64>,
}

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        let npairs = n * (n - 1) / 2;
        Adjacency { n, bits: vec![0u64; npairs.div_ceil(64)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    #[inline]
    pub fn has(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let idx = pair_index(a, b);
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, present: bool) {
        assert_ne!(i, j, "self-edges are not representable");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let idx = pair_index(a, b);
        if present {
            self.bits[idx / 64] |= 1 << (idx % 64);
        } else {
            self.bits[idx / 64] &= !(1 << (idx % 64));
        }
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| j != i && self.has(i, j)).count()
    }

    /// Edges as `(i, j)` position pairs with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Adjacency conjugated by `perm`: the result has an edge
    /// `{perm(i), perm(j)}` exactly when `self` has `{i, j}`.
    pub fn permuted(&self, perm: &Permutation) -> Adjacency {
        assert_eq!(perm.len(), self.n);
        let mut out = Adjacency::empty(self.n);
        for j in 1..self.n {
            for i in 0..j {
                if self.has(i, j) {
                    out.set(perm.image(i), perm.image(j), true);
                }
            }
        }
        out
    }

    /// Neighbor bitmask rows; only supported for `n <= 64`.
    pub(crate) fn rows64(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitmask rows require n <= 64");
        let mut rows = vec![0u64; self.n];
        for j in 1..self.n {
            for i in 0..j {
                if self.has(i, j) {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
        }
        rows
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }
}

impl PartialOrd for Adjacency {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Adjacency {
    /// Lexicographic order on the packed bit sequence (0 sorts before 1).
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.n, other.n, "adjacency comparison requires equal order");
        for (a, b) in self.bits.iter().zip(other.bits.iter()) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if a >> bit & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for Adjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Adjacency(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A bijection on `[n]`, acting on vertex positions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    /// Build from an image vector; `map[i]` is the image of `i`.
    pub fn from_mapping(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::invalid("mapping is not a bijection"));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { map: other.map.iter().map(|&v| self.map[v]).collect() }
    }

    /// Uniformly random permutation via Fisher-Yates.
    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Permutation {
        let mut map: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            map.swap(i, j);
        }
        Permutation { map }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.map)
    }
}

/// Optional per-vertex feature vectors with a common dimension.
pub type Features = Vec<Vec<f64>>;

/// A labeled, hollow, undirected graph, with optional vertex features.
#[derive(Clone, PartialEq)]
pub struct LabeledGraph {
    ns: Namespace,
    ids: Vec<u32>,
    adj: Adjacency,
    features: Option<Features>,
}

impl LabeledGraph {
    /// Build a graph on vertices `1..=n` from 1-based edge pairs.
    /// Duplicate pairs collapse to a single edge; self-loops and endpoints
    /// outside `[1, n]` are rejected.
    pub fn from_edges(n: usize, edges: &[(u32, u32)], ns: Namespace) -> Result<Self> {
        let mut adj = Adjacency::empty(n);
        for &(u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u as usize > n || v as usize > n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            adj.set(u as usize - 1, v as usize - 1, true);
        }
        Ok(LabeledGraph { ns, ids: (1..=n as u32).collect(), adj, features: None })
    }

    /// Assemble a graph from parts, validating label uniqueness and feature shape.
    pub fn from_parts(
        ns: Namespace,
        ids: Vec<u32>,
        adj: Adjacency,
        features: Option<Features>,
    ) -> Result<Self> {
        if ids.len() != adj.n() {
            return Err(Error::invalid("label count does not match adjacency order"));
        }
        let distinct: BTreeSet<u32> = ids.iter().copied().collect();
        if distinct.len() != ids.len() {
            return Err(Error::invalid("duplicate vertex labels"));
        }
        if let Some(rows) = &features {
            if rows.len() != ids.len() {
                return Err(Error::invalid("feature row count does not match vertex count"));
            }
            if let Some(first) = rows.first() {
                let d = first.len();
                if rows.iter().any(|r| r.len() != d) {
                    return Err(Error::invalid("feature rows have mixed dimensions"));
                }
            }
        }
        Ok(LabeledGraph { ns, ids, adj, features })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn namespace(&self) -> Namespace {
        self.ns
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adj
    }

    pub fn features(&self) -> Option<&Features> {
        self.features.as_ref()
    }

    pub fn with_features(mut self, features: Features) -> Result<Self> {
        if features.len() != self.n() {
            return Err(Error::invalid("feature row count does not match vertex count"));
        }
        if let Some(first) = features.first() {
            let d = first.len();
            if features.iter().any(|r| r.len() != d) {
                return Err(Error::invalid("feature rows have mixed dimensions"));
            }
        }
        self.features = Some(features);
        Ok(self)
    }

    /// Reinterpret the same structure under a different namespace.
    pub fn with_namespace(mut self, ns: Namespace) -> Self {
        self.ns = ns;
        self
    }

    pub fn label_at(&self, pos: usize) -> VertexLabel {
        VertexLabel { ns: self.ns, id: self.ids[pos] }
    }

    pub fn labels(&self) -> impl Iterator<Item = VertexLabel> + '_ {
        self.ids.iter().map(|&id| VertexLabel { ns: self.ns, id })
    }

    pub fn position_of(&self, label: VertexLabel) -> Option<usize> {
        if label.ns != self.ns {
            return None;
        }
        self.ids.iter().position(|&id| id == label.id)
    }

    pub fn has_edge(&self, a: VertexLabel, b: VertexLabel) -> bool {
        match (self.position_of(a), self.position_of(b)) {
            (Some(i), Some(j)) if i != j => self.adj.has(i, j),
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.edge_count()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.adj.degree(i)).collect()
    }

    /// The subgraph induced by a set of labels, preserving label order.
    pub fn induced_subgraph(&self, keep: &[VertexLabel]) -> Result<LabeledGraph> {
        let mut positions = Vec::with_capacity(keep.len());
        let mut wanted = BTreeSet::new();
        for &label in keep {
            let pos = self
                .position_of(label)
                .ok_or_else(|| Error::invalid(format!("unknown label {label}")))?;
            if !wanted.insert(pos) {
                return Err(Error::invalid(format!("duplicate label {label}")));
            }
            positions.push(pos);
        }
        positions.sort_unstable();
        let mut adj = Adjacency::empty(positions.len());
        for (a, &pa) in positions.iter().enumerate() {
            for (b, &pb) in positions.iter().enumerate().skip(a + 1) {
                if self.adj.has(pa, pb) {
                    adj.set(a, b, true);
                }
            }
        }
        let ids = positions.iter().map(|&p| self.ids[p]).collect();
        let features = self
            .features
            .as_ref()
            .map(|rows| positions.iter().map(|&p| rows[p].clone()).collect());
        LabeledGraph::from_parts(self.ns, ids, adj, features)
    }

    /// Relabel by a permutation of positions: the vertex at position `i`
    /// (with its features) moves to position `perm(i)`; the label list stays
    /// fixed. `permuted(identity)` is the graph itself.
    pub fn permuted(&self, perm: &Permutation) -> Result<LabeledGraph> {
        if perm.len() != self.n() {
            return Err(Error::invalid(format!(
                "permutation acts on {} vertices but graph has {}",
                perm.len(),
                self.n()
            )));
        }
        let adj = self.adj.permuted(perm);
        let features = self.features.as_ref().map(|rows| {
            let mut out = vec![Vec::new(); rows.len()];
            for (i, row) in rows.iter().enumerate() {
                out[perm.image(i)] = row.clone();
            }
            out
        });
        Ok(LabeledGraph { ns: self.ns, ids: self.ids.clone(), adj, features })
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(VertexLabel, VertexLabel)> = self
            .adj
            .edges()
            .into_iter()
            .map(|(i, j)| (self.label_at(i), self.label_at(j)))
            .collect();
        write!(f, "LabeledGraph(n={}, edges={:?})", self.n(), edges)
    }
}

/// A bijection from the labels of the second graph onto an obfuscating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obfuscation {
    forward: BTreeMap<u32, u32>,
    inverse: BTreeMap<u32, u32>,
}

impl Obfuscation {
    /// Build from `(v2_id, w_id)` pairs; must be a bijection.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for &(u, w) in pairs {
            if forward.insert(u, w).is_some() {
                return Err(Error::invalid(format!("duplicate source label u{u}")));
            }
            if inverse.insert(w, u).is_some() {
                return Err(Error::invalid(format!("duplicate target label w{w}")));
            }
        }
        Ok(Obfuscation { forward, inverse })
    }

    /// The obfuscation sending `u_i` to `w_i` for `i` in `1..=m`.
    pub fn standard(m: usize) -> Self {
        let pairs: Vec<(u32, u32)> = (1..=m as u32).map(|i| (i, i)).collect();
        Obfuscation::from_pairs(&pairs).expect("standard map is a bijection")
    }

    /// A uniformly random bijection from `u_1..u_m` onto `w_1..w_m`.
    pub fn random(m: usize, rng: &mut impl rand::Rng) -> Self {
        let perm = Permutation::random(m, rng);
        let pairs: Vec<(u32, u32)> =
            (0..m).map(|i| (i as u32 + 1, perm.image(i) as u32 + 1)).collect();
        Obfuscation::from_pairs(&pairs).expect("permutation is a bijection")
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward_id(&self, v2_id: u32) -> Option<u32> {
        self.forward.get(&v2_id).copied()
    }

    pub fn inverse_id(&self, w_id: u32) -> Option<u32> {
        self.inverse.get(&w_id).copied()
    }

    /// The obfuscated label of a second-graph vertex.
    pub fn image(&self, label: VertexLabel) -> Option<VertexLabel> {
        if label.ns != Namespace::V2 {
            return None;
        }
        self.forward_id(label.id).map(|w| VertexLabel::new(Namespace::W, w))
    }

    /// Relabel a second graph into the obfuscating set. The result is
    /// presented with labels in ascending order, so vertex positions carry
    /// no information about the original labeling.
    pub fn apply(&self, g: &LabeledGraph) -> Result<LabeledGraph> {
        if g.namespace() != Namespace::V2 {
            return Err(Error::invalid("obfuscation applies to graphs labeled in V2"));
        }
        self.relabel(g, |id| self.forward_id(id), Namespace::W)
    }

    /// Undo the obfuscation of a `W`-labeled graph.
    pub fn apply_inverse(&self, g: &LabeledGraph) -> Result<LabeledGraph> {
        if g.namespace() != Namespace::W {
            return Err(Error::invalid("inverse obfuscation applies to graphs labeled in W"));
        }
        self.relabel(g, |id| self.inverse_id(id), Namespace::V2)
    }

    fn relabel(
        &self,
        g: &LabeledGraph,
        map: impl Fn(u32) -> Option<u32>,
        ns: Namespace,
    ) -> Result<LabeledGraph> {
        if g.n() != self.len() {
            return Err(Error::invalid("obfuscation domain does not match graph labels"));
        }
        let mut new_ids = Vec::with_capacity(g.n());
        for &id in g.ids() {
            let mapped = map(id)
                .ok_or_else(|| Error::invalid(format!("label {id} outside obfuscation domain")))?;
            new_ids.push(mapped);
        }
        // Sort the relabeled vertices so the output ordering depends only on
        // the new labels, then move structure and features along.
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(|&p| new_ids[p]);
        let mut perm = vec![0usize; g.n()];
        for (new_pos, &old_pos) in order.iter().enumerate() {
            perm[old_pos] = new_pos;
        }
        let perm = Permutation::from_mapping(perm).expect("sorting yields a bijection");
        let relabeled = g.permuted(&perm)?;
        let mut ids_sorted: Vec<u32> = new_ids;
        ids_sorted.sort_unstable();
        LabeledGraph::from_parts(ns, ids_sorted, relabeled.adj, relabeled.features)
    }
}

/// A `(G1, G2)` pair with `c` shared core labels and graph-specific junk.
///
/// Core correspondence is by id: the first `c` ids of either graph name the
/// same underlying vertices. Junk labels live in different namespaces and are
/// disjoint by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct NominatablePair {
    g1: LabeledGraph,
    g2: LabeledGraph,
    core_size: usize,
    theta: String,
}

impl NominatablePair {
    pub fn new(g1: LabeledGraph, g2: LabeledGraph, core_size: usize, theta: impl Into<String>) -> Result<Self> {
        if g1.namespace() != Namespace::V1 || g2.namespace() != Namespace::V2 {
            return Err(Error::invalid("pair graphs must be labeled in V1 and V2"));
        }
        if core_size > g1.n().min(g2.n()) {
            return Err(Error::invalid("core size exceeds a graph order"));
        }
        if g1.ids()[..core_size] != g2.ids()[..core_size] {
            return Err(Error::invalid("the first c labels of the two graphs must coincide"));
        }
        Ok(NominatablePair { g1, g2, core_size, theta: theta.into() })
    }

    pub fn g1(&self) -> &LabeledGraph {
        &self.g1
    }

    pub fn g2(&self) -> &LabeledGraph {
        &self.g2
    }

    pub fn core_size(&self) -> usize {
        self.core_size
    }

    pub fn theta(&self) -> &str {
        &self.theta
    }

    /// Core labels, as seen from the first graph.
    pub fn core(&self) -> Vec<VertexLabel> {
        self.g1.ids()[..self.core_size]
            .iter()
            .map(|&id| VertexLabel::new(Namespace::V1, id))
            .collect()
    }

    /// Junk labels of the first (resp. second) graph.
    pub fn junk1(&self) -> Vec<VertexLabel> {
        self.g1.ids()[self.core_size..]
            .iter()
            .map(|&id| VertexLabel::new(Namespace::V1, id))
            .collect()
    }

    pub fn junk2(&self) -> Vec<VertexLabel> {
        self.g2.ids()[self.core_size..]
            .iter()
            .map(|&id| VertexLabel::new(Namespace::V2, id))
            .collect()
    }
}

/// Read a graph from the edge-list text format: a header `n e` followed by
/// `e` lines `u v` with `1 <= u < v <= n`.
pub fn read_edgelist(path: impl AsRef<Path>, ns: Namespace) -> Result<LabeledGraph> {
    let text = fs::read_to_string(path)?;
    parse_edgelist(&text, ns)
}

pub fn parse_edgelist(text: &str, ns: Namespace) -> Result<LabeledGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_field(parts.next(), 1, "vertex count")?;
    let e: usize = parse_field(parts.next(), 1, "edge count")?;
    if parts.next().is_some() {
        return Err(Error::Parse { line: 1, message: "trailing tokens after header".into() });
    }
    let mut edges = Vec::with_capacity(e);
    for _ in 0..e {
        let (idx, line) = lines
            .next()
            .ok_or(Error::Parse { line: e + 1, message: "fewer edge lines than header declares".into() })?;
        let lineno = idx + 1;
        let mut parts = line.split_whitespace();
        let u: u32 = parse_field(parts.next(), lineno, "edge endpoint")?;
        let v: u32 = parse_field(parts.next(), lineno, "edge endpoint")?;
        if parts.next().is_some() {
            return Err(Error::Parse { line: lineno, message: "trailing tokens after edge".into() });
        }
        if u == v {
            return Err(Error::Parse { line: lineno, message: format!("self-loop {u} {v}") });
        }
        if u == 0 || v == 0 || u as usize > n || v as usize > n {
            return Err(Error::Parse { line: lineno, message: format!("endpoint out of range in {u} {v}") });
        }
        edges.push((u, v));
    }
    if let Some((idx, line)) = lines.next() {
        if !line.trim().is_empty() {
            return Err(Error::Parse { line: idx + 1, message: "unexpected content after edges".into() });
        }
    }
    LabeledGraph::from_edges(n, &edges, ns)
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or(Error::Parse { line, message: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, message: format!("invalid {what}: {tok:?}") })
}

/// Write the edge-list format with canonically sorted edges; `read` of the
/// output reproduces the graph exactly.
pub fn write_edgelist(g: &LabeledGraph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_edgelist(g)).map_err(Error::from)
}

pub fn format_edgelist(g: &LabeledGraph) -> String {
    // The format addresses vertices 1..=n by position in label order.
    let mut edges = g.adjacency().edges();
    edges.sort_unstable();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (i, j) in edges {
        out.push_str(&format!("{} {}\n", i + 1, j + 1));
    }
    out
}

/// Read the optional feature sidecar: a header `n d` followed by `n` rows of
/// `d` decimal reals.
pub fn read_features(path: impl AsRef<Path>) -> Result<Features> {
    let text = fs::read_to_string(path)?;
    parse_features(&text)
}

pub fn parse_features(text: &str) -> Result<Features> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_field(parts.next(), 1, "vertex count")?;
    let d: usize = parse_field(parts.next(), 1, "feature dimension")?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (idx, line) = lines
            .next()
            .ok_or(Error::Parse { line: n + 1, message: "fewer feature rows than header declares".into() })?;
        let lineno = idx + 1;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::Parse { line: lineno, message: format!("invalid real: {tok:?}") })
            })
            .collect::<Result<_>>()?;
        if row.len() != d {
            return Err(Error::Parse { line: lineno, message: format!("expected {d} values, found {}", row.len()) });
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_features(features: &Features, path: impl AsRef<Path>) -> Result<()> {
    let d = features.first().map_or(0, Vec::len);
    let mut out = format!("{} {}\n", features.len(), d);
    for row in features {
        let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    fs::write(path, out).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> LabeledGraph {
        LabeledGraph::from_edges(3, &[(1, 2), (2, 3)], Namespace::V2).unwrap()
    }

    #[test]
    fn make_graph_examples() {
        let g = path3();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(g.label_at(0), g.label_at(1)));
        assert!(!g.has_edge(g.label_at(0), g.label_at(2)));

        let empty = LabeledGraph::from_edges(4, &[], Namespace::V1).unwrap();
        assert_eq!(empty.edge_count(), 0);

        let dup = LabeledGraph::from_edges(4, &[(1, 2), (2, 1)], Namespace::V1).unwrap();
        assert_eq!(dup.edge_count(), 1);

        assert!(LabeledGraph::from_edges(3, &[(2, 2)], Namespace::V1).is_err());
        assert!(LabeledGraph::from_edges(3, &[(1, 4)], Namespace::V1).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let tri = LabeledGraph::from_edges(3, &[(1, 2), (1, 3), (2, 3)], Namespace::V1).unwrap();
        let sub = tri.induced_subgraph(&[tri.label_at(0), tri.label_at(1)]).unwrap();
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.edge_count(), 1);

        let g = path3();
        let all: Vec<VertexLabel> = g.labels().collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);

        let ends = g.induced_subgraph(&[g.label_at(0), g.label_at(2)]).unwrap();
        assert_eq!(ends.edge_count(), 0);

        assert!(g.induced_subgraph(&[VertexLabel::new(Namespace::V2, 9)]).is_err());
    }

    #[test]
    fn permute_examples() {
        let g = path3();
        let swap_ends = Permutation::from_mapping(vec![2, 1, 0]).unwrap();
        let h = g.permuted(&swap_ends).unwrap();
        // The path through the middle vertex is preserved under this swap.
        assert_eq!(h, g);

        let star = LabeledGraph::from_edges(4, &[(1, 2), (1, 3), (1, 4)], Namespace::V1).unwrap();
        let move_center = Permutation::from_mapping(vec![1, 0, 2, 3]).unwrap();
        let moved = star.permuted(&move_center).unwrap();
        assert_eq!(moved.degree_sequence(), vec![1, 3, 1, 1]);

        let sigma = Permutation::from_mapping(vec![1, 2, 0]).unwrap();
        let roundtrip = g.permuted(&sigma).unwrap().permuted(&sigma.inverse()).unwrap();
        assert_eq!(roundtrip, g);
    }

    #[test]
    fn group_action_law() {
        let g = LabeledGraph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (1, 3)], Namespace::V1)
            .unwrap();
        let sigma = Permutation::from_mapping(vec![2, 0, 3, 4, 1]).unwrap();
        let tau = Permutation::from_mapping(vec![4, 3, 2, 1, 0]).unwrap();
        let lhs = g.permuted(&sigma.compose(&tau)).unwrap();
        let rhs = g.permuted(&tau).unwrap().permuted(&sigma).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn obfuscation_examples() {
        let g = LabeledGraph::from_edges(2, &[(1, 2)], Namespace::V2).unwrap();
        let o = Obfuscation::from_pairs(&[(1, 7), (2, 3)]).unwrap();
        let og = o.apply(&g).unwrap();
        assert_eq!(og.namespace(), Namespace::W);
        assert_eq!(og.ids(), &[3, 7]);
        assert!(og.has_edge(VertexLabel::new(Namespace::W, 7), VertexLabel::new(Namespace::W, 3)));

        let empty = LabeledGraph::from_edges(3, &[], Namespace::V2).unwrap();
        let o3 = Obfuscation::standard(3);
        assert_eq!(o3.apply(&empty).unwrap().edge_count(), 0);

        let g = path3();
        let mut rng = crate::rng::RngState::new(5).rng();
        let o = Obfuscation::random(3, &mut rng);
        let back = o.apply_inverse(&o.apply(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn obfuscation_preserves_structure() {
        let g = LabeledGraph::from_edges(5, &[(1, 2), (1, 3), (2, 3), (4, 5)], Namespace::V2).unwrap();
        let mut rng = crate::rng::RngState::new(11).rng();
        let o = Obfuscation::random(5, &mut rng);
        let og = o.apply(&g).unwrap();
        assert_eq!(og.edge_count(), g.edge_count());
        let mut d1 = g.degree_sequence();
        let mut d2 = og.degree_sequence();
        d1.sort_unstable();
        d2.sort_unstable();
        assert_eq!(d1, d2);
    }

    #[test]
    fn obfuscation_carries_features() {
        let g = path3()
            .with_features(vec![vec![1.0], vec![2.0], vec![3.0]])
            .unwrap();
        // Reverse the label order: u1 -> w3, u2 -> w2, u3 -> w1.
        let o = Obfuscation::from_pairs(&[(1, 3), (2, 2), (3, 1)]).unwrap();
        let og = o.apply(&g).unwrap();
        // w1 is the old u3 and must carry its feature.
        assert_eq!(og.features().unwrap()[0], vec![3.0]);
        assert_eq!(og.features().unwrap()[2], vec![1.0]);
    }

    #[test]
    fn pair_invariants() {
        let g1 = LabeledGraph::from_edges(4, &[(1, 2)], Namespace::V1).unwrap();
        let g2 = LabeledGraph::from_edges(3, &[(1, 3)], Namespace::V2).unwrap();
        let pair = NominatablePair::new(g1.clone(), g2.clone(), 3, "demo").unwrap();
        assert_eq!(pair.core().len(), 3);
        assert_eq!(pair.junk1().len(), 1);
        assert!(pair.junk2().is_empty());
        assert!(NominatablePair::new(g1, g2, 4, "demo").is_err());
    }

    #[test]
    fn edgelist_round_trip() {
        let g = parse_edgelist("3 2\n1 2\n2 3\n", Namespace::V1).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        let text = format_edgelist(&g);
        assert_eq!(text, "3 2\n1 2\n2 3\n");
        assert_eq!(parse_edgelist(&text, Namespace::V1).unwrap(), g);
    }

    #[test]
    fn edgelist_rejects_self_loop_with_line() {
        let err = parse_edgelist("3 1\n2 2\n", Namespace::V1).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn features_round_trip() {
        let parsed = parse_features("2 3\n0.5 1 -2\n3 4 5\n").unwrap();
        assert_eq!(parsed, vec![vec![0.5, 1.0, -2.0], vec![3.0, 4.0, 5.0]]);
        assert!(parse_features("2 2\n1 2\n3\n").is_err());
    }
}
