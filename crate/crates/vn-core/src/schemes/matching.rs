//! Graph matching: the `||AQ - QB||_F` objective, a certified
//! branch-and-bound matcher for small graphs, a Frank-Wolfe relaxation over
//! the doubly-stochastic polytope for larger ones, and the nomination scheme
//! built on either matcher.

use nalgebra::DMatrix;

use super::{canon_view, ensure_inputs, list_by_keys, NominationList, Scheme, CANONICAL_PIPELINE_CAP};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Permutation, VertexLabel};

/// Exact matching is offered up to this many vertices (10! assignments,
/// heavily pruned).
pub const EXACT_MATCH_CAP: usize = 10;

/// Total order on f64 sort keys.
#[derive(PartialEq, Clone, Copy, Debug)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// The result of a matching solve. The permutation maps positions of the
/// obfuscated graph onto positions of the first graph.
#[derive(Debug, Clone)]
pub struct MatchResult {
    pub permutation: Permutation,
    /// `||AQ - QB||_F` of the returned permutation.
    pub objective: f64,
    /// True when the solver certifies a global optimum.
    pub certificate: bool,
    /// Whether the optimum is unique (exact solver only).
    pub unique_optimum: Option<bool>,
    /// False when the relaxation stopped at the iteration cap without
    /// meeting its tolerance.
    pub converged: bool,
}

/// `||AQ - QB||_F` for the permutation `q` mapping positions of `b` to
/// positions of `a`; equals `sqrt(2 x edge disagreements)`.
pub fn gm_delta(a: &LabeledGraph, b: &LabeledGraph, q: &Permutation) -> Result<f64> {
    if a.n() != b.n() || q.len() != a.n() {
        return Err(Error::invalid("matching requires equal vertex counts"));
    }
    let mut mismatches = 0usize;
    for w in 0..b.n() {
        for w2 in (w + 1)..b.n() {
            if b.adjacency().has(w, w2) != a.adjacency().has(q.image(w), q.image(w2)) {
                mismatches += 1;
            }
        }
    }
    Ok((2.0 * mismatches as f64).sqrt())
}

/// Branch and bound over assignments of `b`-vertices to `a`-vertices in
/// index order, with a row-wise disagreement lower bound. Returns the
/// lexicographically smallest optimal assignment, its mismatch count, and
/// whether it is the unique optimum.
fn branch_and_bound(
    a_rows: &[u64],
    b_rows: &[u64],
    forced: Option<(usize, usize)>,
) -> (Vec<usize>, usize, bool) {
    let n = a_rows.len();

    struct Bb<'a> {
        a_rows: &'a [u64],
        b_rows: &'a [u64],
        forced: Option<(usize, usize)>,
        assign: Vec<usize>,
        used: u64,
        best: Vec<usize>,
        best_cost: usize,
        optima_seen: usize,
    }

    impl Bb<'_> {
        /// Disagreements of mapping `w -> a` against already assigned vertices.
        fn row_cost(&self, w: usize, a: usize, depth: usize) -> usize {
            let mut c = 0;
            for prev in 0..depth {
                if (self.b_rows[w] >> prev & 1) != (self.a_rows[a] >> self.assign[prev] & 1) {
                    c += 1;
                }
            }
            c
        }

        fn allowed(&self, w: usize, a: usize) -> bool {
            match self.forced {
                Some((fw, fa)) => {
                    if w == fw {
                        a == fa
                    } else {
                        a != fa
                    }
                }
                None => true,
            }
        }

        /// Admissible bound: cost so far plus, for every unassigned vertex,
        /// the cheapest row cost over still-available targets.
        fn lower_bound(&self, depth: usize, partial: usize) -> usize {
            let n = self.a_rows.len();
            let mut bound = partial;
            for w in depth..n {
                let mut cheapest = usize::MAX;
                for a in 0..n {
                    if self.used >> a & 1 == 0 && self.allowed(w, a) {
                        cheapest = cheapest.min(self.row_cost(w, a, depth));
                        if cheapest == 0 {
                            break;
                        }
                    }
                }
                if cheapest == usize::MAX {
                    return usize::MAX;
                }
                bound += cheapest;
            }
            bound
        }

        fn rec(&mut self, depth: usize, partial: usize) {
            let n = self.a_rows.len();
            if depth == n {
                if partial < self.best_cost {
                    self.best_cost = partial;
                    self.best = self.assign.clone();
                    self.optima_seen = 1;
                } else if partial == self.best_cost {
                    self.optima_seen = (self.optima_seen + 1).min(2);
                }
                return;
            }
            for a in 0..n {
                if self.used >> a & 1 == 1 || !self.allowed(depth, a) {
                    continue;
                }
                let step = self.row_cost(depth, a, depth);
                let partial_next = partial + step;
                self.assign.push(a);
                self.used |= 1 << a;
                let bound = self.lower_bound(depth + 1, partial_next);
                // Equal-bound branches must stay alive until a second
                // optimum has been seen: they decide the uniqueness flag
                // and the lexicographic tie-break. Afterwards only strict
                // improvements matter.
                let prune = if self.optima_seen >= 2 {
                    bound >= self.best_cost
                } else {
                    bound > self.best_cost
                };
                if !prune {
                    self.rec(depth + 1, partial_next);
                }
                self.used &= !(1 << a);
                self.assign.pop();
            }
        }
    }

    let mut bb = Bb {
        a_rows,
        b_rows,
        forced,
        assign: Vec::with_capacity(n),
        used: 0,
        best: (0..n).collect(),
        best_cost: usize::MAX,
        optima_seen: 0,
    };
    bb.rec(0, 0);
    (bb.best, bb.best_cost, bb.optima_seen == 1)
}

fn check_match_sizes(g1: &LabeledGraph, og2: &LabeledGraph) -> Result<usize> {
    if g1.n() != og2.n() {
        return Err(Error::invalid("matching requires equal vertex counts"));
    }
    Ok(g1.n())
}

/// Certified global minimizer of the matching objective, with a
/// deterministic lexicographic tie-break among minimizers.
pub fn exact_match(g1: &LabeledGraph, og2: &LabeledGraph) -> Result<MatchResult> {
    let n = check_match_sizes(g1, og2)?;
    if n > EXACT_MATCH_CAP {
        return Err(Error::CapExceeded(format!(
            "exact matching over {n} vertices exceeds the cap of {EXACT_MATCH_CAP}; use relaxed_match"
        )));
    }
    let a_rows = g1.adjacency().rows64();
    let b_rows = og2.adjacency().rows64();
    let (assign, cost, unique) = branch_and_bound(&a_rows, &b_rows, None);
    Ok(MatchResult {
        permutation: Permutation::from_mapping(assign)?,
        objective: (2.0 * cost as f64).sqrt(),
        certificate: true,
        unique_optimum: Some(unique),
        converged: true,
    })
}

/// Exact matching with one assignment pinned: the `b`-vertex at `w_pos`
/// must map to the `a`-vertex at `a_pos`.
pub fn exact_match_forced(
    g1: &LabeledGraph,
    og2: &LabeledGraph,
    w_pos: usize,
    a_pos: usize,
) -> Result<MatchResult> {
    let n = check_match_sizes(g1, og2)?;
    if n > EXACT_MATCH_CAP {
        return Err(Error::CapExceeded(format!(
            "exact matching over {n} vertices exceeds the cap of {EXACT_MATCH_CAP}"
        )));
    }
    let a_rows = g1.adjacency().rows64();
    let b_rows = og2.adjacency().rows64();
    let (assign, cost, unique) = branch_and_bound(&a_rows, &b_rows, Some((w_pos, a_pos)));
    Ok(MatchResult {
        permutation: Permutation::from_mapping(assign)?,
        objective: (2.0 * cost as f64).sqrt(),
        certificate: true,
        unique_optimum: Some(unique),
        converged: true,
    })
}

/// Minimum-cost linear assignment by shortest augmenting paths with dual
/// potentials. Returns the row-to-column assignment and its total cost.
pub(crate) fn lap_min(cost: &DMatrix<f64>) -> (Vec<usize>, f64) {
    let n = cost.nrows();
    assert_eq!(n, cost.ncols());
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut col_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        col_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_row[j0] = col_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    let mut total = 0.0;
    for j in 1..=n {
        assign[col_row[j] - 1] = j - 1;
        total += cost[(col_row[j] - 1, j - 1)];
    }
    (assign, total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// Flat doubly-stochastic start `J/n`.
    Barycenter,
    Identity,
}

#[derive(Debug, Clone, Copy)]
pub struct RelaxConfig {
    pub max_iters: usize,
    pub tol: f64,
    pub init: InitKind,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        RelaxConfig { max_iters: 100, tol: 1e-6, init: InitKind::Barycenter }
    }
}

fn adjacency_matrix(g: &LabeledGraph) -> DMatrix<f64> {
    let n = g.n();
    DMatrix::from_fn(n, n, |i, j| if i != j && g.adjacency().has(i, j) { 1.0 } else { 0.0 })
}

/// Frank-Wolfe on `||AD - DB||_F^2` over the doubly-stochastic polytope:
/// linearize, solve a linear assignment for the step direction, take the
/// exact quadratic line-search step. Returns the final iterate and whether
/// the relative-improvement tolerance was met.
fn frank_wolfe(a: &DMatrix<f64>, b: &DMatrix<f64>, cfg: &RelaxConfig) -> (DMatrix<f64>, bool) {
    let n = a.nrows();
    let mut d = match cfg.init {
        InitKind::Barycenter => DMatrix::from_element(n, n, 1.0 / n as f64),
        InitKind::Identity => DMatrix::identity(n, n),
    };
    let residual = |d: &DMatrix<f64>| a * d - d * b;
    let mut r = residual(&d);
    let mut f_cur = r.norm_squared();
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        // grad f = 2 (A R - R B) with A, B symmetric.
        let grad = (a * &r - &r * b) * 2.0;
        let (assign, _) = lap_min(&grad);
        let mut step = DMatrix::zeros(n, n);
        for (i, &j) in assign.iter().enumerate() {
            step[(i, j)] = 1.0;
        }
        let delta = step - &d;
        let r_delta = a * &delta - &delta * b;
        let den = r_delta.norm_squared();
        if den == 0.0 {
            converged = true;
            break;
        }
        let num = -r.dot(&r_delta);
        let gamma = (num / den).clamp(0.0, 1.0);
        if gamma == 0.0 {
            converged = true;
            break;
        }
        d += delta * gamma;
        r = residual(&d);
        let f_next = r.norm_squared();
        let improvement = (f_cur - f_next) / f_cur.max(f64::MIN_POSITIVE);
        f_cur = f_next;
        if improvement < cfg.tol {
            converged = true;
            break;
        }
    }
    (d, converged)
}

/// Round a doubly-stochastic iterate to the permutation maximizing the
/// linear overlap, via an exact assignment solve.
fn round_to_permutation(d: &DMatrix<f64>) -> Permutation {
    let neg = -d;
    let (assign, _) = lap_min(&neg);
    Permutation::from_mapping(assign).expect("assignment is a bijection")
}

/// Frank-Wolfe relaxation of the matching objective, rounded to a
/// permutation. No optimality certificate; `converged = false` flags an
/// iteration-capped run.
pub fn relaxed_match(g1: &LabeledGraph, og2: &LabeledGraph, cfg: &RelaxConfig) -> Result<MatchResult> {
    check_match_sizes(g1, og2)?;
    let a = adjacency_matrix(g1);
    let b = adjacency_matrix(og2);
    let (d, converged) = frank_wolfe(&a, &b, cfg);
    // d rows are g1 positions, columns og2 positions; the match permutation
    // maps og2 positions onto g1 positions.
    let row_to_col = round_to_permutation(&d);
    let q = row_to_col.inverse();
    let objective = gm_delta(g1, og2, &q)?;
    Ok(MatchResult {
        permutation: q,
        objective,
        certificate: false,
        unique_optimum: None,
        converged,
    })
}

#[derive(Debug, Clone)]
pub enum GmMode {
    Exact,
    Relaxed(RelaxConfig),
}

/// The graph-matching nomination scheme. Rank 1 goes to the vertex the
/// optimal matching sends to `v*`'s position. In exact mode the remaining
/// ranks order candidates by the objective of the best matching forced to
/// send each candidate to `v*`; in relaxed mode they follow the `v*` row of
/// the doubly-stochastic iterate.
#[derive(Debug, Clone)]
pub struct GmScheme {
    pub mode: GmMode,
}

impl GmScheme {
    pub fn exact() -> Self {
        GmScheme { mode: GmMode::Exact }
    }

    pub fn relaxed(cfg: RelaxConfig) -> Self {
        GmScheme { mode: GmMode::Relaxed(cfg) }
    }
}

impl Scheme for GmScheme {
    fn name(&self) -> String {
        match self.mode {
            GmMode::Exact => "gm-exact".into(),
            GmMode::Relaxed(_) => "gm-relaxed".into(),
        }
    }

    fn nominate(
        &self,
        g1: &LabeledGraph,
        og2: &LabeledGraph,
        v_star: VertexLabel,
    ) -> Result<NominationList> {
        let pv = ensure_inputs(g1, og2, v_star)?;
        let n = check_match_sizes(g1, og2)?;

        if n <= CANONICAL_PIPELINE_CAP {
            let view = canon_view(og2);
            match &self.mode {
                GmMode::Exact => {
                    // Forced re-solves per candidate; the global optimum's
                    // candidate attains the smallest value, so it lands first.
                    let mut cost = vec![0usize; n];
                    for w in 0..n {
                        let result = exact_match_forced(g1, &view.canon, w, pv)?;
                        cost[w] = (result.objective * result.objective / 2.0).round() as usize;
                    }
                    let keys: Vec<(usize, usize)> = (0..n)
                        .map(|p| {
                            let cw = view.witness.image(p);
                            (cost[cw], cw)
                        })
                        .collect();
                    Ok(list_by_keys(og2, keys))
                }
                GmMode::Relaxed(cfg) => {
                    let a = adjacency_matrix(g1);
                    let b = adjacency_matrix(&view.canon);
                    let (d, _) = frank_wolfe(&a, &b, cfg);
                    let row_to_col = round_to_permutation(&d);
                    let w0 = row_to_col.image(pv);
                    let keys: Vec<(u8, OrdF64, usize)> = (0..n)
                        .map(|p| {
                            let cw = view.witness.image(p);
                            ((cw != w0) as u8, OrdF64(-d[(pv, cw)]), cw)
                        })
                        .collect();
                    Ok(list_by_keys(og2, keys))
                }
            }
        } else {
            match &self.mode {
                GmMode::Exact => Err(Error::CapExceeded(format!(
                    "exact matching over {n} vertices exceeds the cap of {EXACT_MATCH_CAP}; use the relaxed mode"
                ))),
                GmMode::Relaxed(cfg) => {
                    let a = adjacency_matrix(g1);
                    let b = adjacency_matrix(og2);
                    let (d, _) = frank_wolfe(&a, &b, cfg);
                    let row_to_col = round_to_permutation(&d);
                    let w0 = row_to_col.image(pv);
                    let keys: Vec<(u8, OrdF64, u32)> = (0..n)
                        .map(|p| ((p != w0) as u8, OrdF64(-d[(pv, p)]), og2.ids()[p]))
                        .collect();
                    Ok(list_by_keys(og2, keys))
                }
            }
        }
    }
}
