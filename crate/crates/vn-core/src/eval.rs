//! Level-k losses and errors: exact on finite-support distributions, Monte
//! Carlo elsewhere, plus the majorization oracle for the Bayes error and
//! consistency-curve experiments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::graph::{LabeledGraph, Obfuscation, VertexLabel};
use crate::iso;
use crate::models::{FiniteDistribution, PairSampler};
use crate::rng::RngState;
use crate::schemes::Scheme;

/// Two-sided z value for 95% intervals.
pub const Z_95: f64 = 1.959963984540054;
/// Two-sided z value for 99.9% intervals.
pub const Z_999: f64 = 3.2905267314919255;

/// A Monte Carlo error estimate with its binomial interval.
#[derive(Debug, Clone, Copy)]
pub struct ErrorEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: usize,
    pub seed: RngState,
}

/// Wilson score interval for `successes / trials` at the given z.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// The 0/1 level-k nomination loss: 1 exactly when the obfuscated vertex of
/// interest falls outside the scheme's top k.
pub fn level_k_loss(
    scheme: &dyn Scheme,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    o: &Obfuscation,
    v_star: VertexLabel,
    k: usize,
) -> Result<u8> {
    let m = g2.n();
    if k == 0 || k >= m {
        return Err(Error::invalid(format!("level k = {k} must lie in 1..={}", m - 1)));
    }
    let target = o
        .image(v_star.in_namespace(crate::graph::Namespace::V2))
        .ok_or_else(|| Error::invalid("vertex of interest outside the obfuscation domain"))?;
    let list = scheme.nominate(g1, &o.apply(g2)?, v_star)?;
    let rank = list
        .rank_of(target)
        .ok_or_else(|| Error::invalid("target missing from the nomination list"))?;
    Ok(u8::from(rank >= k + 1))
}

/// Exact mass assigned by the scheme to each rank of the obfuscated vertex
/// of interest: `profile[r-1]` is the probability that it lands at rank `r`.
/// Consistent schemes give the same profile for every obfuscation.
pub fn rank_mass_profile(scheme: &dyn Scheme, dist: &FiniteDistribution) -> Result<Vec<BigRational>> {
    rank_mass_profile_with(scheme, dist, &Obfuscation::standard(dist.m()))
}

pub fn rank_mass_profile_with(
    scheme: &dyn Scheme,
    dist: &FiniteDistribution,
    o: &Obfuscation,
) -> Result<Vec<BigRational>> {
    let m = dist.m();
    let target = o
        .image(dist.v_star_v2())
        .ok_or_else(|| Error::invalid("vertex of interest outside the obfuscation domain"))?;
    let mut profile = vec![BigRational::zero(); m];
    for atom in dist.atoms() {
        let list = scheme.nominate(atom.pair.g1(), &o.apply(atom.pair.g2())?, dist.v_star())?;
        let rank = list
            .rank_of(target)
            .ok_or_else(|| Error::invalid("target missing from the nomination list"))?;
        profile[rank - 1] += &atom.mass;
    }
    Ok(profile)
}

/// Exact level-k error by summation over the support.
pub fn exact_error(scheme: &dyn Scheme, dist: &FiniteDistribution, k: usize) -> Result<BigRational> {
    let profile = exact_error_profile(scheme, dist)?;
    profile
        .get(k - 1)
        .cloned()
        .ok_or_else(|| Error::invalid(format!("level k = {k} must lie in 1..={}", dist.m() - 1)))
}

/// Exact level-k errors for every k in `1..=m-1`, as one pass over the support.
pub fn exact_error_profile(
    scheme: &dyn Scheme,
    dist: &FiniteDistribution,
) -> Result<Vec<BigRational>> {
    let ranks = rank_mass_profile(scheme, dist)?;
    let m = dist.m();
    // L_k = P[rank >= k + 1] = sum of rank masses beyond k.
    let mut errors = Vec::with_capacity(m - 1);
    let mut tail: BigRational = ranks.iter().skip(1).sum();
    for k in 1..m {
        errors.push(tail.clone());
        if k < m - 1 {
            tail -= &ranks[k];
        }
    }
    Ok(errors)
}

/// Monte Carlo level-k error over independent trials with per-trial random
/// obfuscations; reproducible from the seed and identical for any job count.
pub fn mc_error(
    scheme: &dyn Scheme,
    sampler: &dyn PairSampler,
    v_star: VertexLabel,
    k: usize,
    trials: usize,
    seed: RngState,
    exec: &Executor,
) -> Result<ErrorEstimate> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let losses: Vec<Result<u8>> = exec.run(trials, |t| {
        let mut rng = seed.with_stream(t as u64).rng();
        let (g1, g2) = sampler.sample_pair(&mut rng);
        let o = Obfuscation::random(g2.n(), &mut rng);
        level_k_loss(scheme, &g1, &g2, &o, v_star, k)
    });
    let mut failures = 0usize;
    for loss in &losses {
        if let Ok(1) = loss {
            failures += 1;
        } else if loss.is_err() {
            return Err(Error::invalid(format!(
                "trial failed: {}",
                losses.iter().find_map(|l| l.as_ref().err()).unwrap()
            )));
        }
    }
    let (lo, hi) = wilson_interval(failures, trials, Z_95);
    Ok(ErrorEstimate {
        point: failures as f64 / trials as f64,
        ci_low: lo,
        ci_high: hi,
        trials,
        seed,
    })
}

/// The exact level-k Bayes error of a finite-support distribution, computed
/// by the majorization route: within each support cell, sort the orbit-level
/// conditional masses descending; the optimal top-k coverage is the sum of
/// the k largest, weighted by cell mass. This never constructs a nomination
/// list, so it is an independent check on the Bayes scheme's evaluated error.
pub fn bayes_error_oracle(dist: &FiniteDistribution, k: usize) -> Result<BigRational> {
    let profile = bayes_error_oracle_profile(dist)?;
    profile
        .get(k - 1)
        .cloned()
        .ok_or_else(|| Error::invalid(format!("level k = {k} must lie in 1..={}", dist.m() - 1)))
}

pub fn bayes_error_oracle_profile(dist: &FiniteDistribution) -> Result<Vec<BigRational>> {
    let m = dist.m();
    if m > iso::ENUMERATION_CAP {
        return Err(Error::CapExceeded(format!(
            "oracle requires support graphs within the enumeration cap of {}",
            iso::ENUMERATION_CAP
        )));
    }
    let vpos2 = dist.atoms()[0]
        .pair
        .g2()
        .position_of(dist.v_star_v2())
        .ok_or_else(|| Error::invalid("vertex of interest missing from the second graph"))?;

    // Cells: exact first graph plus iso class of the second.
    use std::collections::HashMap;
    let mut cells: HashMap<(Vec<u32>, Vec<u64>, Vec<u64>), Vec<usize>> = HashMap::new();
    for (idx, atom) in dist.atoms().iter().enumerate() {
        let canon = iso::canonical_form(atom.pair.g2());
        let key = (
            atom.pair.g1().ids().to_vec(),
            atom.pair.g1().adjacency().words().to_vec(),
            canon.canonical_graph.adjacency().words().to_vec(),
        );
        cells.entry(key).or_default().push(idx);
    }

    // Per cell: credit each atom's mass to the orbit of the vertex its
    // isomorphism from the reference sends to v*; the per-rank masses of the
    // optimal scheme are these orbit masses sorted descending.
    let mut per_rank_total = vec![BigRational::zero(); m];
    for members in cells.values() {
        let ref_g2 = dist.atoms()[members[0]].pair.g2();
        let orbits = iso::automorphism_orbits(ref_g2);
        let mut orbit_mass = vec![BigRational::zero(); orbits.classes().len()];
        for &idx in members {
            let atom = &dist.atoms()[idx];
            let tau = iso::find_isomorphism(ref_g2, atom.pair.g2())
                .expect("atoms in one cell are isomorphic");
            let u = tau.inverse().image(vpos2);
            let orbit_idx = orbits
                .classes()
                .iter()
                .position(|orbit| orbit.contains(&u))
                .expect("every vertex lies in an orbit");
            orbit_mass[orbit_idx] += &atom.mass;
        }
        orbit_mass.sort_by(|a, b| b.cmp(a));
        for (rank, mass) in orbit_mass.into_iter().enumerate() {
            per_rank_total[rank] += mass;
        }
    }

    let mut errors = Vec::with_capacity(m - 1);
    let mut covered = per_rank_total[0].clone();
    for k in 1..m {
        errors.push(BigRational::one() - &covered);
        if k < m - 1 {
            covered += &per_rank_total[k];
        }
    }
    Ok(errors)
}

/// How the list-depth budget k grows with the problem size.
#[derive(Debug, Clone, Copy)]
pub enum KRule {
    Const(usize),
    /// `k = max(1, round(fraction * n))`, capped at `m - 1`.
    Fraction(f64),
}

impl KRule {
    pub fn k_for(&self, n: usize, m: usize) -> usize {
        let k = match self {
            KRule::Const(k) => *k,
            KRule::Fraction(f) => (f * n as f64).round() as usize,
        };
        k.clamp(1, m.saturating_sub(1).max(1))
    }
}

/// One point of a consistency curve.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub estimate: ErrorEstimate,
    pub bayes_reference: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ConsistencyCurve {
    pub scheme_name: String,
    pub points: Vec<CurvePoint>,
}

/// Monte Carlo errors for a scheme rule along a nested family of models,
/// with the closed-form optimal reference attached where the model family
/// supplies one.
pub fn consistency_curve(
    scheme_rule: &dyn Fn(usize, usize) -> Box<dyn Scheme>,
    model_rule: &dyn Fn(usize) -> Box<dyn PairSampler>,
    k_rule: KRule,
    n_values: &[usize],
    trials: usize,
    seed: RngState,
    exec: &Executor,
) -> Result<ConsistencyCurve> {
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("curve sizes must be strictly increasing"));
    }
    let mut points = Vec::with_capacity(n_values.len());
    let mut scheme_name = String::new();
    for (idx, &n) in n_values.iter().enumerate() {
        let sampler = model_rule(n);
        let (n1, m) = sampler.sizes();
        let scheme = scheme_rule(n1, m);
        scheme_name = scheme.name();
        let k = k_rule.k_for(n1, m);
        let v_star = VertexLabel::new(crate::graph::Namespace::V1, 1);
        let estimate = mc_error(
            &scheme,
            sampler.as_ref(),
            v_star,
            k,
            trials,
            seed.with_stream((idx as u64) << 32),
            exec,
        )?;
        points.push(CurvePoint { n: n1, m, k, estimate, bayes_reference: sampler.bayes_reference(k) });
    }
    Ok(ConsistencyCurve { scheme_name, points })
}

/// Convenience: exact rational to f64 for reporting.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational `1 - k/m`, the chance error level.
pub fn chance_error(m: usize, k: usize) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::from(k), BigInt::from(m))
}
