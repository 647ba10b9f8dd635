//! Graph isomorphism, automorphism orbits, asymmetry testing and canonical
//! forms.
//!
//! All routines here are exact backtracking searches with degree and
//! neighborhood refinement. They are meant for the small graphs on which the
//! exact machinery operates (enumeration cap of 8 vertices, matching cap of
//! 10); large-graph code paths never call them.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, LabeledGraph, Namespace, Permutation, VertexLabel};

/// Default cap for isomorphism-class enumeration (8! = 40320 labelings).
pub const ENUMERATION_CAP: usize = 8;

/// Iso routines use single-word neighbor masks internally.
const MASK_CAP: usize = 64;

/// The partition of vertices into automorphism orbits.
///
/// Two vertices share a class exactly when some automorphism maps one to the
/// other; every vertex is in its own orbit via the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    fn from_union_find(mut parent: Vec<usize>) -> Self {
        fn root(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let n = parent.len();
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..n {
            let r = root(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut orbits: Vec<Vec<usize>> = groups.into_values().collect();
        for orbit in &mut orbits {
            orbit.sort_unstable();
        }
        orbits.sort_by_key(|o| o[0]);
        OrbitPartition { orbits }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, pos: usize) -> &[usize] {
        self.orbits
            .iter()
            .find(|o| o.contains(&pos))
            .map(Vec::as_slice)
            .expect("position outside partition")
    }

    pub fn is_discrete(&self) -> bool {
        self.orbits.iter().all(|o| o.len() == 1)
    }

    /// Orbit classes expressed as label sets of `g`.
    pub fn label_classes(&self, g: &LabeledGraph) -> Vec<Vec<VertexLabel>> {
        self.orbits
            .iter()
            .map(|o| o.iter().map(|&p| g.label_at(p)).collect())
            .collect()
    }
}

/// A canonical relabeling: `input.permuted(witness)` equals the canonical
/// graph, and two graphs share a canonical adjacency exactly when isomorphic.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub canonical_graph: LabeledGraph,
    pub witness: Permutation,
}

fn assert_mask_cap(n: usize) {
    assert!(n <= MASK_CAP, "iso routines support at most {MASK_CAP} vertices, got {n}");
}

/// Iterated neighbor-color refinement; the result is a relabeling-equivariant
/// coloring. Color ids follow sorted signature order, so corresponding
/// vertices of isomorphic graphs receive equal ids.
fn refine_colors_by(
    n: usize,
    neighbors: impl Fn(usize) -> Vec<usize>,
    init: &[u32],
) -> Vec<u32> {
    let mut colors: Vec<u32> = init.to_vec();
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut neigh: Vec<u32> = neighbors(v).into_iter().map(|u| colors[u]).collect();
                neigh.sort_unstable();
                (colors[v], neigh)
            })
            .collect();
        let mut sorted: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let index: HashMap<&(u32, Vec<u32>), u32> =
            sorted.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let next: Vec<u32> = sigs.iter().map(|s| index[s]).collect();
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

fn refine_colors(rows: &[u64], init: &[u32]) -> Vec<u32> {
    let n = rows.len();
    refine_colors_by(n, |v| (0..n).filter(|&u| rows[v] >> u & 1 == 1).collect(), init)
}

/// Refined structural vertex colors of a graph of any order. Classes are
/// unions of automorphism orbits.
pub fn refined_structural_colors(g: &LabeledGraph) -> Vec<u32> {
    let n = g.n();
    let adj = g.adjacency();
    refine_colors_by(
        n,
        |v| (0..n).filter(|&u| u != v && adj.has(v, u)).collect(),
        &vec![0; n],
    )
}

/// Enumerate automorphisms of the graph described by `rows`, restricted to
/// maps preserving `colors`. Calls `visit` for each; return `false` from
/// `visit` to stop early.
fn for_each_automorphism(rows: &[u64], colors: &[u32], visit: &mut impl FnMut(&[usize]) -> bool) {
    let n = rows.len();
    let refined = refine_colors(rows, colors);
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn rec(
        rows: &[u64],
        refined: &[u32],
        mapping: &mut Vec<usize>,
        used: &mut Vec<bool>,
        depth: usize,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = rows.len();
        if depth == n {
            return visit(mapping);
        }
        for target in 0..n {
            if used[target] || refined[target] != refined[depth] {
                continue;
            }
            let mut ok = true;
            for prev in 0..depth {
                if (rows[depth] >> prev & 1) != (rows[target] >> mapping[prev] & 1) {
                    ok = false;
                    break;
                }
            }
            if ok {
                mapping[depth] = target;
                used[target] = true;
                let keep_going = rec(rows, refined, mapping, used, depth + 1, visit);
                used[target] = false;
                mapping[depth] = usize::MAX;
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }

    rec(rows, &refined, &mut mapping, &mut used, 0, visit);
}

/// The orbit partition of the automorphism group action.
pub fn automorphism_orbits(g: &LabeledGraph) -> OrbitPartition {
    let n = g.n();
    assert_mask_cap(n);
    let rows = g.adjacency().rows64();
    let colors = vec![0u32; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for_each_automorphism(&rows, &colors, &mut |mapping| {
        for (v, &img) in mapping.iter().enumerate() {
            let (a, b) = (root(&mut parent, v), root(&mut parent, img));
            if a != b {
                parent[a] = b;
            }
        }
        true
    });
    OrbitPartition::from_union_find(parent)
}

/// True when the automorphism group is trivial.
pub fn is_asymmetric(g: &LabeledGraph) -> bool {
    let n = g.n();
    assert_mask_cap(n);
    if n == 1 {
        return true;
    }
    let rows = g.adjacency().rows64();
    let colors = vec![0u32; n];
    let mut nontrivial = false;
    for_each_automorphism(&rows, &colors, &mut |mapping| {
        if mapping.iter().enumerate().any(|(i, &v)| i != v) {
            nontrivial = true;
            return false;
        }
        true
    });
    !nontrivial
}

/// A permutation `sigma` with `permute(g, sigma) = h`, when one exists.
pub fn find_isomorphism(g: &LabeledGraph, h: &LabeledGraph) -> Option<Permutation> {
    if g.n() != h.n() {
        return None;
    }
    let n = g.n();
    assert_mask_cap(n);
    if n == 0 {
        return Some(Permutation::identity(0));
    }
    let rows_g = g.adjacency().rows64();
    let rows_h = h.adjacency().rows64();
    let cg = refine_colors(&rows_g, &vec![0; n]);
    let ch = refine_colors(&rows_h, &vec![0; n]);
    let mut sig_g: Vec<u32> = cg.clone();
    let mut sig_h: Vec<u32> = ch.clone();
    sig_g.sort_unstable();
    sig_h.sort_unstable();
    if sig_g != sig_h {
        return None;
    }

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        rows_g: &[u64],
        rows_h: &[u64],
        cg: &[u32],
        ch: &[u32],
        mapping: &mut Vec<usize>,
        used: &mut Vec<bool>,
        depth: usize,
    ) -> bool {
        let n = rows_g.len();
        if depth == n {
            return true;
        }
        for target in 0..n {
            if used[target] || cg[depth] != ch[target] {
                continue;
            }
            let mut ok = true;
            for prev in 0..depth {
                if (rows_g[depth] >> prev & 1) != (rows_h[target] >> mapping[prev] & 1) {
                    ok = false;
                    break;
                }
            }
            if ok {
                mapping[depth] = target;
                used[target] = true;
                if rec(rows_g, rows_h, cg, ch, mapping, used, depth + 1) {
                    return true;
                }
                used[target] = false;
                mapping[depth] = usize::MAX;
            }
        }
        false
    }
    if rec(&rows_g, &rows_h, &cg, &ch, &mut mapping, &mut used, 0) {
        Some(Permutation::from_mapping(mapping).expect("search yields a bijection"))
    } else {
        None
    }
}

/// Key for the canonical-form memo: structure plus the color sequence.
#[derive(PartialEq, Eq, Hash)]
struct CanonKey {
    n: usize,
    words: Vec<u64>,
    colors: Vec<u32>,
}

struct CanonData {
    adj: Adjacency,
    witness: Permutation,
}

fn canon_cache() -> &'static Mutex<HashMap<CanonKey, Arc<CanonData>>> {
    static CACHE: OnceLock<Mutex<HashMap<CanonKey, Arc<CanonData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Lexicographically minimal adjacency bit sequence over all permutations
/// that also respect `colors` (canonical positions are filled in
/// nondecreasing color order). The plain canonical form uses uniform colors.
fn canonical_search(adj: &Adjacency, colors: &[u32]) -> (Adjacency, Permutation) {
    let n = adj.n();
    assert_mask_cap(n);
    if n == 0 {
        return (adj.clone(), Permutation::identity(0));
    }
    let rows = adj.rows64();

    // Position color requirements: sorted color sequence.
    let mut position_colors: Vec<u32> = colors.to_vec();
    position_colors.sort_unstable();

    // Minimal-extension DFS: appending a vertex at position `depth`
    // contributes the bits of its adjacency to the occupants of positions
    // 0..depth, earlier positions more significant. Only candidates achieving
    // the minimal extension can begin the lexicographically smallest
    // completion; several may tie and diverge later, so all non-twin ties are
    // explored and completed strings compared at the leaves.
    struct Search<'a> {
        rows: &'a [u64],
        colors: &'a [u32],
        position_colors: Vec<u32>,
        occupant: Vec<usize>,
        used: u64,
        best_bits: Option<Vec<u64>>,
        best_occupant: Vec<usize>,
    }

    impl Search<'_> {
        fn extension(&self, v: usize, depth: usize) -> u64 {
            let mut ext = 0u64;
            for p in 0..depth {
                ext = ext << 1 | (self.rows[v] >> self.occupant[p] & 1);
            }
            ext
        }

        /// Swapping twin vertices is an automorphism, so exploring both as
        /// the next occupant would duplicate entire subtrees.
        fn twins(&self, u: usize, v: usize) -> bool {
            let clear = !((1u64 << u) | (1u64 << v));
            self.rows[u] & clear == self.rows[v] & clear
        }

        fn full_bits(&self) -> Vec<u64> {
            let n = self.rows.len();
            let npairs = n * (n - 1) / 2;
            let mut bits = vec![0u64; npairs.div_ceil(64)];
            let mut idx = 0usize;
            for j in 1..n {
                for i in 0..j {
                    if self.rows[self.occupant[j]] >> self.occupant[i] & 1 == 1 {
                        bits[idx / 64] |= 1 << (idx % 64);
                    }
                    idx += 1;
                }
            }
            bits
        }

        fn rec(&mut self, depth: usize) {
            let n = self.rows.len();
            if depth == n {
                let bits = self.full_bits();
                let better = match &self.best_bits {
                    None => true,
                    Some(cur) => bits_less(&bits, cur),
                };
                if better {
                    self.best_bits = Some(bits);
                    self.best_occupant = self.occupant.clone();
                }
                return;
            }
            let want = self.position_colors[depth];
            let mut min_ext = u64::MAX;
            let mut picks: Vec<usize> = Vec::new();
            for v in 0..n {
                if self.used >> v & 1 == 1 || self.colors[v] != want {
                    continue;
                }
                let ext = self.extension(v, depth);
                if ext < min_ext {
                    min_ext = ext;
                    picks.clear();
                    picks.push(v);
                } else if ext == min_ext && !picks.iter().any(|&u| self.twins(u, v)) {
                    picks.push(v);
                }
            }
            for v in picks {
                self.occupant.push(v);
                self.used |= 1 << v;
                self.rec(depth + 1);
                self.used &= !(1 << v);
                self.occupant.pop();
            }
        }
    }

    fn bits_less(a: &[u64], b: &[u64]) -> bool {
        for (x, y) in a.iter().zip(b.iter()) {
            let diff = x ^ y;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return x >> bit & 1 == 0;
            }
        }
        false
    }

    let mut search = Search {
        rows: &rows,
        colors,
        position_colors,
        occupant: Vec::with_capacity(n),
        used: 0,
        best_bits: None,
        best_occupant: Vec::new(),
    };
    search.rec(0);

    let occupant = search.best_occupant;
    // occupant[p] = original vertex at canonical position p, so the witness
    // maps original position to canonical position.
    let mut witness = vec![0usize; n];
    for (p, &v) in occupant.iter().enumerate() {
        witness[v] = p;
    }
    let witness = Permutation::from_mapping(witness).expect("occupants form a bijection");
    (adj.permuted(&witness), witness)
}

fn canonical_cached(adj: &Adjacency, colors: &[u32]) -> Arc<CanonData> {
    let key = CanonKey { n: adj.n(), words: adj.words().to_vec(), colors: colors.to_vec() };
    if let Some(hit) = canon_cache().lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let (canon, witness) = canonical_search(adj, colors);
    let data = Arc::new(CanonData { adj: canon, witness });
    canon_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&data))
        .clone()
}

/// Color classes induced by exact feature equality, numbered in
/// lexicographic feature order so the numbering is label-independent.
pub fn feature_colors(g: &LabeledGraph) -> Vec<u32> {
    match g.features() {
        None => vec![0; g.n()],
        Some(rows) => {
            let mut distinct: Vec<&Vec<f64>> = rows.iter().collect();
            distinct.sort_by(|a, b| {
                a.iter()
                    .map(|x| x.to_bits())
                    .cmp(b.iter().map(|x| x.to_bits()))
            });
            distinct.dedup();
            rows.iter()
                .map(|r| {
                    distinct
                        .iter()
                        .position(|d| {
                            d.len() == r.len()
                                && d.iter().zip(r.iter()).all(|(a, b)| a.to_bits() == b.to_bits())
                        })
                        .unwrap() as u32
                })
                .collect()
        }
    }
}

/// Canonical form of the graph structure alone.
pub fn canonical_form(g: &LabeledGraph) -> CanonicalForm {
    canonical_form_colored(g, &vec![0; g.n()])
}

/// Canonical form constrained to respect a vertex coloring; the coloring must
/// itself be label-independent for the result to be so.
pub fn canonical_form_colored(g: &LabeledGraph, colors: &[u32]) -> CanonicalForm {
    assert_eq!(colors.len(), g.n());
    let data = canonical_cached(g.adjacency(), colors);
    let canonical_graph = g.permuted(&data.witness).expect("witness acts on the graph");
    // Rebuild with the cached canonical adjacency to keep the eq-by-adjacency
    // contract independent of the permutation round trip.
    debug_assert_eq!(canonical_graph.adjacency(), &data.adj);
    CanonicalForm { canonical_graph, witness: data.witness.clone() }
}

/// All distinct labeled graphs isomorphic to `g` on the same label set,
/// each with one relabeling that produces it. Refuses graphs larger than
/// `cap` vertices.
pub fn enumerate_iso_class_capped(
    g: &LabeledGraph,
    cap: usize,
) -> Result<Vec<(LabeledGraph, Permutation)>> {
    let n = g.n();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "iso-class enumeration over {n} vertices exceeds the cap of {cap}"
        )));
    }
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut out: Vec<(LabeledGraph, Permutation)> = Vec::new();
    let mut map: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        g: &LabeledGraph,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        seen: &mut BTreeSet<Vec<u64>>,
        out: &mut Vec<(LabeledGraph, Permutation)>,
    ) {
        let n = g.n();
        if map.len() == n {
            let perm = Permutation::from_mapping(map.clone()).unwrap();
            let h = g.permuted(&perm).unwrap();
            if seen.insert(h.adjacency().words().to_vec()) {
                out.push((h, perm));
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                map.push(v);
                rec(g, map, used, seen, out);
                map.pop();
                used[v] = false;
            }
        }
    }
    rec(g, &mut map, &mut used, &mut seen, &mut out);
    out.sort_by(|a, b| a.0.adjacency().cmp(b.0.adjacency()));
    Ok(out)
}

/// As [`enumerate_iso_class_capped`] with the default cap, returning graphs only.
pub fn enumerate_iso_class(g: &LabeledGraph) -> Result<Vec<LabeledGraph>> {
    Ok(enumerate_iso_class_capped(g, ENUMERATION_CAP)?
        .into_iter()
        .map(|(h, _)| h)
        .collect())
}

/// The edge list of a smallest asymmetric graph (six vertices, six edges):
/// a triangle with a pendant path of length two on one corner and a pendant
/// vertex on another.
pub const ASYMMETRIC_6: [(u32, u32); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 5), (4, 6)];

/// A deterministic asymmetric graph on `n >= 6` vertices labeled `1..=n`.
///
/// Built by growing the six-vertex asymmetric graph one vertex at a time,
/// attaching each new vertex to the lexicographically first neighbor set that
/// keeps the graph asymmetric; the construction is nested, so the graph on
/// `n` vertices is an induced subgraph of the one on `n + 1`.
pub fn asymmetric_graph(n: usize, ns: Namespace) -> Result<LabeledGraph> {
    if n < 6 {
        return Err(Error::invalid("asymmetric graphs require at least 6 vertices"));
    }
    assert_mask_cap(n);
    let mut edges: Vec<(u32, u32)> = ASYMMETRIC_6.to_vec();
    for k in 7..=n {
        let mut found = false;
        // Subsets in increasing popcount-then-value order keep the graph sparse.
        let mut subsets: Vec<u64> = (1..(1u64 << (k - 1))).collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        for subset in subsets {
            let mut trial = edges.clone();
            for v in 0..(k - 1) {
                if subset >> v & 1 == 1 {
                    trial.push((v as u32 + 1, k as u32));
                }
            }
            let g = LabeledGraph::from_edges(k, &trial, ns)?;
            if is_asymmetric(&g) {
                edges = trial;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::invalid(format!("no asymmetric extension found at {k} vertices")));
        }
    }
    LabeledGraph::from_edges(n, &edges, ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Namespace;

    fn graph(n: usize, edges: &[(u32, u32)]) -> LabeledGraph {
        LabeledGraph::from_edges(n, edges, Namespace::V2).unwrap()
    }

    #[test]
    fn path_orbits() {
        let g = graph(3, &[(1, 2), (2, 3)]);
        let orbits = automorphism_orbits(&g);
        assert_eq!(orbits.classes(), &[vec![0, 2], vec![1]]);
        assert!(!orbits.is_discrete());
    }

    #[test]
    fn complete_graph_single_orbit() {
        let g = graph(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        let orbits = automorphism_orbits(&g);
        assert_eq!(orbits.classes(), &[vec![0, 1, 2, 3]]);
        assert!(!is_asymmetric(&g));
    }

    #[test]
    fn smallest_asymmetric_graph() {
        let g = graph(6, &ASYMMETRIC_6);
        assert!(is_asymmetric(&g));
        let orbits = automorphism_orbits(&g);
        assert!(orbits.is_discrete());
    }

    #[test]
    fn identity_in_every_orbit() {
        let g = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        let orbits = automorphism_orbits(&g);
        for v in 0..5 {
            assert!(orbits.orbit_of(v).contains(&v));
        }
    }

    #[test]
    fn find_isomorphism_examples() {
        let g = graph(3, &[(1, 2), (2, 3)]);
        let h = graph(3, &[(2, 1), (1, 3)]);
        let sigma = find_isomorphism(&g, &h).expect("paths are isomorphic");
        assert_eq!(g.permuted(&sigma).unwrap().adjacency(), h.adjacency());

        let tri = graph(3, &[(1, 2), (1, 3), (2, 3)]);
        assert!(find_isomorphism(&tri, &g).is_none());

        let auto = find_isomorphism(&g, &g).expect("identity works");
        assert_eq!(g.permuted(&auto).unwrap().adjacency(), g.adjacency());
    }

    #[test]
    fn canonical_form_contract() {
        let g = graph(6, &ASYMMETRIC_6);
        let sigma = Permutation::from_mapping(vec![3, 5, 0, 1, 4, 2]).unwrap();
        let h = g.permuted(&sigma).unwrap();
        let cg = canonical_form(&g);
        let ch = canonical_form(&h);
        assert_eq!(cg.canonical_graph.adjacency(), ch.canonical_graph.adjacency());
        assert_eq!(g.permuted(&cg.witness).unwrap().adjacency(), cg.canonical_graph.adjacency());

        let tri = graph(3, &[(1, 2), (1, 3), (2, 3)]);
        let path = graph(3, &[(1, 2), (2, 3)]);
        assert_ne!(
            canonical_form(&tri).canonical_graph.adjacency(),
            canonical_form(&path).canonical_graph.adjacency()
        );

        let idem = canonical_form(&cg.canonical_graph);
        assert_eq!(idem.canonical_graph.adjacency(), cg.canonical_graph.adjacency());
    }

    #[test]
    fn orbits_commute_with_relabeling() {
        let g = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]);
        let sigma = Permutation::from_mapping(vec![2, 4, 0, 1, 3]).unwrap();
        let h = g.permuted(&sigma).unwrap();
        let mut mapped: Vec<Vec<usize>> = automorphism_orbits(&g)
            .classes()
            .iter()
            .map(|o| {
                let mut c: Vec<usize> = o.iter().map(|&v| sigma.image(v)).collect();
                c.sort_unstable();
                c
            })
            .collect();
        mapped.sort();
        let mut direct: Vec<Vec<usize>> = automorphism_orbits(&h).classes().to_vec();
        direct.sort();
        assert_eq!(mapped, direct);
    }

    #[test]
    fn enumerate_small_classes() {
        let tri = graph(3, &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(enumerate_iso_class(&tri).unwrap().len(), 1);

        let path = graph(3, &[(1, 2), (2, 3)]);
        let class = enumerate_iso_class(&path).unwrap();
        assert_eq!(class.len(), 3);
        for member in &class {
            assert!(find_isomorphism(&path, member).is_some());
        }

        let big = graph(9, &[]);
        assert!(matches!(enumerate_iso_class(&big), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn enumerate_class_witnesses() {
        let g = graph(4, &[(1, 2), (2, 3), (3, 4)]);
        for (member, sigma) in enumerate_iso_class_capped(&g, 8).unwrap() {
            assert_eq!(g.permuted(&sigma).unwrap().adjacency(), member.adjacency());
        }
    }

    #[test]
    fn asymmetric_growth_is_nested() {
        let g8 = asymmetric_graph(8, Namespace::V2).unwrap();
        assert!(is_asymmetric(&g8));
        let g7 = asymmetric_graph(7, Namespace::V2).unwrap();
        let keep: Vec<VertexLabel> = g7.labels().collect();
        assert_eq!(g8.induced_subgraph(&keep).unwrap().adjacency(), g7.adjacency());
    }

    #[test]
    fn colored_canonical_separates_colorings() {
        let path = graph(3, &[(1, 2), (2, 3)]);
        let plain = canonical_form(&path);
        // End vertices get distinct colors: the witness must respect them.
        let colored = canonical_form_colored(&path, &[0, 1, 1]);
        assert_eq!(
            plain.canonical_graph.adjacency().edge_count(),
            colored.canonical_graph.adjacency().edge_count()
        );
        assert_eq!(colored.witness.image(0), 0);
    }
}
