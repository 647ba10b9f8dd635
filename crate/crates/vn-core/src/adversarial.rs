//! The adversarial construction: given any scheme, build a nominatable
//! distribution over a single isomorphism class on which that scheme's
//! level-k error equals `1 - eps_k` while the reversed scheme achieves
//! `eps_{m-k}`, squeezing the optimal error below chance. Iterating the
//! construction along growing graph sizes demonstrates that no scheme is
//! consistent for every nominatable sequence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::graph::{LabeledGraph, Namespace, NominatablePair, Obfuscation, VertexLabel};
use crate::iso;
use crate::models::{Atom, FiniteDistribution};
use crate::schemes::Scheme;

/// A strictly increasing error-target sequence `eps_1 < ... < eps_m` with
/// `eps_i` in `(0, i/m)`, and its mass vector `xi_i = eps_i - eps_{i-1}`,
/// `xi_m = 1 - eps_{m-1}`.
#[derive(Debug, Clone)]
pub struct EpsilonSequence {
    eps: Vec<BigRational>,
}

impl EpsilonSequence {
    pub fn new(eps: Vec<BigRational>) -> Result<Self> {
        let m = eps.len();
        if m < 2 {
            return Err(Error::invalid("the sequence needs at least two entries"));
        }
        for (i, value) in eps.iter().enumerate() {
            let upper = BigRational::new(BigInt::from(i as i64 + 1), BigInt::from(m as i64));
            if !value.is_positive() || *value >= upper {
                return Err(Error::invalid(format!(
                    "eps_{} = {} must lie strictly inside (0, {}/{})",
                    i + 1,
                    value,
                    i + 1,
                    m
                )));
            }
        }
        if eps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("the sequence must be strictly increasing"));
        }
        Ok(EpsilonSequence { eps })
    }

    /// The default sequence `eps_i = i / (2m)`; all masses have denominator
    /// dividing `2m^2`, keeping every downstream check exact.
    pub fn default_for(m: usize) -> Self {
        let eps = (1..=m as i64)
            .map(|i| BigRational::new(BigInt::from(i), BigInt::from(2 * m as i64)))
            .collect();
        EpsilonSequence::new(eps).expect("i/(2m) satisfies the constraints")
    }

    /// A sequence with `eps_{m-k} = target` exactly and tiny early entries,
    /// used to pin the optimal-error bound while the target scheme's error
    /// stays near one.
    pub fn targeted(m: usize, k: usize, target: &BigRational) -> Result<Self> {
        if k == 0 || k >= m {
            return Err(Error::invalid("k must lie in 1..m"));
        }
        let bound = BigRational::new(BigInt::from((m - k) as i64), BigInt::from(m as i64));
        if !target.is_positive() || *target >= bound {
            return Err(Error::invalid(format!(
                "target must lie in (0, {}/{})",
                m - k,
                m
            )));
        }
        let pivot = m - k;
        let mut eps = Vec::with_capacity(m);
        // Early entries: target * i / (100 * pivot), far below their i/m caps.
        for i in 1..pivot {
            eps.push(target * BigRational::new(BigInt::from(i as i64), BigInt::from(100 * pivot as i64)));
        }
        eps.push(target.clone());
        // Late entries: climb from the target toward 1 in small equal steps.
        let gap = (BigRational::one() - target) / BigRational::from(BigInt::from(2 * (k + 1) as i64));
        for j in 1..=k {
            eps.push(target + &gap * BigRational::from(BigInt::from(j as i64)));
        }
        EpsilonSequence::new(eps)
    }

    pub fn m(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self) -> &[BigRational] {
        &self.eps
    }

    /// `xi_i = eps_i - eps_{i-1}` with `eps_0 = 0` and `xi_m = 1 - eps_{m-1}`;
    /// nonnegative and summing to one exactly.
    pub fn xi(&self) -> Vec<BigRational> {
        let m = self.eps.len();
        let mut xi = Vec::with_capacity(m);
        let mut prev = BigRational::zero();
        for value in &self.eps[..m - 1] {
            xi.push(value - &prev);
            prev = value.clone();
        }
        xi.push(BigRational::one() - &self.eps[m - 2]);
        debug_assert_eq!(xi.iter().sum::<BigRational>(), BigRational::one());
        xi
    }
}

/// The members of one isomorphism class grouped by the rank the scheme
/// assigns to the obfuscated vertex of interest.
#[derive(Debug, Clone)]
pub struct RankFiber {
    pub rank: usize,
    /// Indices into the enumerated class.
    pub members: Vec<usize>,
}

/// Enumerate the class of `g2` and split it into rank fibers under the
/// scheme, evaluated with the obfuscation `o`.
pub fn classify_fibers(
    scheme: &dyn Scheme,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    o: &Obfuscation,
    v_star: VertexLabel,
    exec: &Executor,
) -> Result<(Vec<LabeledGraph>, Vec<RankFiber>)> {
    let m = g2.n();
    let class: Vec<LabeledGraph> = iso::enumerate_iso_class(g2)?;
    let target = o
        .image(v_star.in_namespace(Namespace::V2))
        .ok_or_else(|| Error::invalid("vertex of interest outside the obfuscation domain"))?;
    let ranks: Vec<Result<usize>> = exec.run(class.len(), |idx| {
        let list = scheme.nominate(g1, &o.apply(&class[idx])?, v_star)?;
        list.rank_of(target)
            .ok_or_else(|| Error::invalid("target missing from the nomination list"))
    });
    let mut fibers: Vec<RankFiber> = (1..=m).map(|rank| RankFiber { rank, members: Vec::new() }).collect();
    for (idx, rank) in ranks.into_iter().enumerate() {
        fibers[rank? - 1].members.push(idx);
    }
    Ok((class, fibers))
}

/// Build the adversarial distribution against `scheme`: support is the iso
/// class of `g2` paired with `g1`, fiber `k` carries mass `xi_k` spread
/// uniformly over its members.
pub fn build_adversarial(
    scheme: &dyn Scheme,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    o: &Obfuscation,
    v_star: VertexLabel,
    eps: &EpsilonSequence,
    exec: &Executor,
) -> Result<FiniteDistribution> {
    let m = g2.n();
    if eps.m() != m {
        return Err(Error::invalid("sequence length must match the graph order"));
    }
    if !iso::is_asymmetric(g1) || !iso::is_asymmetric(g2) {
        return Err(Error::invalid("the construction requires asymmetric graphs"));
    }
    let (class, fibers) = classify_fibers(scheme, g1, g2, o, v_star, exec)?;
    // Asymmetric class: every rank fiber has exactly (m-1)! members.
    let expect = (1..m).product::<usize>();
    for fiber in &fibers {
        debug_assert_eq!(fiber.members.len(), expect, "fiber {} has the wrong size", fiber.rank);
        if fiber.members.is_empty() {
            return Err(Error::invalid(format!(
                "rank fiber {} is empty but carries positive mass",
                fiber.rank
            )));
        }
    }
    let xi = eps.xi();
    let c = g1.n().min(m);
    let mut atoms = vec![None; class.len()];
    for fiber in &fibers {
        let each = &xi[fiber.rank - 1] / BigRational::from(BigInt::from(fiber.members.len() as u64));
        for &idx in &fiber.members {
            atoms[idx] = Some(Atom {
                pair: NominatablePair::new(g1.clone(), class[idx].clone(), c, "adversarial")?,
                mass: each.clone(),
            });
        }
    }
    let atoms: Vec<Atom> = atoms.into_iter().map(|a| a.expect("fibers partition the class")).collect();
    FiniteDistribution::new(atoms, v_star)
}

/// The error level of chance performance, `1 - k/m`.
pub fn chance_line(m: usize, k: usize) -> f64 {
    1.0 - k as f64 / m as f64
}

/// Rejection-sample one member of the rank-k fiber: draw uniform relabelings
/// of `g2` until the scheme puts the obfuscated vertex of interest at rank
/// `k`. Returns the member and the number of attempts.
pub fn sample_fiber(
    scheme: &dyn Scheme,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    o: &Obfuscation,
    v_star: VertexLabel,
    k: usize,
    rng: &mut impl Rng,
) -> Result<(LabeledGraph, usize)> {
    let m = g2.n();
    if k == 0 || k > m {
        return Err(Error::invalid("rank outside 1..=m"));
    }
    if !iso::is_asymmetric(g2) {
        return Err(Error::invalid("fiber sampling requires an asymmetric graph"));
    }
    let target = o
        .image(v_star.in_namespace(Namespace::V2))
        .ok_or_else(|| Error::invalid("vertex of interest outside the obfuscation domain"))?;
    let mut attempts = 0usize;
    loop {
        attempts += 1;
        let sigma = crate::graph::Permutation::random(m, rng);
        let member = g2.permuted(&sigma)?;
        let list = scheme.nominate(g1, &o.apply(&member)?, v_star)?;
        if list.rank_of(target) == Some(k) {
            return Ok((member, attempts));
        }
    }
}

/// One row of the inconsistency demonstration.
#[derive(Debug, Clone)]
pub struct InconsistencyRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// Exact level-k error of the target scheme (equals `1 - eps_k`).
    pub scheme_error: BigRational,
    /// Exact level-k error of the reversed scheme (equals `eps_{m-k}`).
    pub reversal_error: BigRational,
    /// The certified bound on the optimal error, `eps_{m-k}`.
    pub optimal_bound: BigRational,
    /// Exact optimal error from the majorization oracle.
    pub oracle_error: BigRational,
    pub chance: BigRational,
}

#[derive(Debug, Clone)]
pub struct InconsistencyReport {
    pub scheme_name: String,
    pub rows: Vec<InconsistencyRow>,
}

/// Run the construction against `scheme_rule` at each size, with the
/// sequence chosen so the optimal-error bound sits at `eps_target` while the
/// scheme's own error climbs toward one. Graphs are grown with nested cores.
pub fn universal_inconsistency_sequence(
    scheme_rule: &dyn Fn(usize, usize) -> Box<dyn Scheme>,
    n_values: &[usize],
    eps_target: &BigRational,
    k_rule: &dyn Fn(usize) -> usize,
    exec: &Executor,
) -> Result<InconsistencyReport> {
    let mut rows = Vec::with_capacity(n_values.len());
    let mut scheme_name = String::new();
    for &n in n_values {
        let m = n;
        let k = k_rule(n);
        if k == 0 || k >= m {
            return Err(Error::invalid("k rule must produce k in 1..m"));
        }
        let g1 = iso::asymmetric_graph(n, Namespace::V1)?;
        let g2 = iso::asymmetric_graph(m, Namespace::V2)?;
        let v_star = VertexLabel::new(Namespace::V1, 1);
        let o = Obfuscation::standard(m);
        let scheme = scheme_rule(n, m);
        scheme_name = scheme.name();
        let eps = EpsilonSequence::targeted(m, k, eps_target)?;
        let dist = build_adversarial(scheme.as_ref(), &g1, &g2, &o, v_star, &eps, exec)?;
        let scheme_error = crate::eval::exact_error(&scheme, &dist, k)?;
        let reversal = crate::schemes::ReversalScheme::new(scheme);
        let reversal_error = crate::eval::exact_error(&reversal, &dist, k)?;
        let oracle_error = crate::eval::bayes_error_oracle(&dist, k)?;
        rows.push(InconsistencyRow {
            n,
            m,
            k,
            scheme_error,
            reversal_error,
            optimal_bound: eps.eps()[m - k - 1].clone(),
            oracle_error,
            chance: crate::eval::chance_error(m, k),
        });
    }
    Ok(InconsistencyReport { scheme_name, rows })
}
