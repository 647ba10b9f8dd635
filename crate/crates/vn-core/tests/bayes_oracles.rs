//! Independent oracles for the Bayes-optimal scheme: conditional masses by
//! literal reveal-set enumeration, the orbit-level example with hand-frozen
//! errors, and optimality against the evaluated error of other schemes.

use num_rational::BigRational;
use num_traits::One;

use vn_core::eval::{bayes_error_oracle_profile, exact_error_profile, rank_mass_profile_with};
use vn_core::graph::{LabeledGraph, Namespace, NominatablePair, Obfuscation, Permutation, VertexLabel};
use vn_core::iso::{self, ASYMMETRIC_6};
use vn_core::models::{make_finite_support, ratio, FiniteDistribution};
use vn_core::schemes::{BayesScheme, RandomBaselineScheme, RepresentativePick, Scheme, TieBreak};

fn all_permutations(n: usize) -> Vec<Permutation> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation::from_mapping(cur.clone()).unwrap());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Conditional masses straight from the definition: for the observed
/// obfuscated graph `h`, candidate `w` collects the mass of every atom whose
/// obfuscated second graph is `sigma(h)` for some relabeling `sigma` sending
/// `w` to the obfuscated vertex of interest.
fn brute_force_conditionals(
    dist: &FiniteDistribution,
    g1: &LabeledGraph,
    h: &LabeledGraph,
    o: &Obfuscation,
) -> (Vec<BigRational>, BigRational) {
    let m = h.n();
    let target = o.image(dist.v_star_v2()).unwrap();
    let target_pos = h.position_of(target).unwrap();
    let perms = all_permutations(m);
    let mut masses = vec![BigRational::from_integer(0.into()); m];
    let mut total = BigRational::from_integer(0.into());
    for atom in dist.atoms() {
        if atom.pair.g1() != g1 {
            continue;
        }
        let obfuscated_atom = o.apply(atom.pair.g2()).unwrap();
        // An atom belongs to the reveal set of w when some relabeling maps
        // the observed graph onto it while sending w to the target; it
        // contributes its mass at most once per candidate.
        let mut credited = vec![false; m];
        let mut in_cell = false;
        for sigma in &perms {
            if h.permuted(sigma).unwrap().adjacency() == obfuscated_atom.adjacency() {
                in_cell = true;
                for w in 0..m {
                    if sigma.image(w) == target_pos {
                        credited[w] = true;
                    }
                }
            }
        }
        if in_cell {
            total += &atom.mass;
            for w in 0..m {
                if credited[w] {
                    masses[w] += &atom.mass;
                }
            }
        }
    }
    (masses, total)
}

fn asymmetric_pairing() -> (LabeledGraph, LabeledGraph, VertexLabel) {
    let g1 = LabeledGraph::from_edges(6, &[(1, 2), (2, 3), (4, 5)], Namespace::V1).unwrap();
    let g2 = LabeledGraph::from_edges(6, &ASYMMETRIC_6, Namespace::V2).unwrap();
    (g1, g2, VertexLabel::new(Namespace::V1, 1))
}

#[test]
fn hand_built_three_atom_distribution_matches_brute_force() {
    let (g1, g2, v_star) = asymmetric_pairing();
    let class = iso::enumerate_iso_class(&g2).unwrap();
    assert_eq!(class.len(), 720);
    let picks = [0usize, 247, 601];
    let masses = [ratio(1, 2), ratio(1, 3), ratio(1, 6)];
    let atoms: Vec<_> = picks
        .iter()
        .zip(masses.iter())
        .map(|(&idx, mass)| {
            (
                NominatablePair::new(g1.clone(), class[idx].clone(), 6, "three-atom").unwrap(),
                mass.clone(),
            )
        })
        .collect();
    let dist = make_finite_support(atoms, v_star).unwrap();
    let scheme = BayesScheme::flat(dist.clone()).unwrap();

    let o = Obfuscation::standard(6);
    // Observe each atom in turn and compare conditionals against the oracle.
    for &idx in &picks {
        let h = o.apply(&class[idx]).unwrap();
        let (oracle_masses, oracle_total) = brute_force_conditionals(&dist, &g1, &h, &o);
        let (scheme_masses, scheme_total) = scheme.conditional_masses(&g1, &h).unwrap();
        assert_eq!(scheme_total, oracle_total);
        for (pos, mass) in oracle_masses.iter().enumerate() {
            let label = h.label_at(pos);
            let found = scheme_masses.iter().find(|(l, _)| *l == label).unwrap();
            assert_eq!(&found.1, mass, "conditional mass at {label}");
        }
    }
}

#[test]
fn bayes_error_equals_oracle_on_assorted_distributions() {
    let (g1, g2, v_star) = asymmetric_pairing();
    let class = iso::enumerate_iso_class(&g2).unwrap();
    let total: i64 = (1..=720).sum();
    let linear: Vec<_> = class
        .iter()
        .enumerate()
        .map(|(i, h)| {
            (
                NominatablePair::new(g1.clone(), h.clone(), 6, "linear").unwrap(),
                ratio(i as i64 + 1, total),
            )
        })
        .collect();
    let uniform: Vec<_> = class
        .iter()
        .map(|h| {
            (
                NominatablePair::new(g1.clone(), h.clone(), 6, "uniform").unwrap(),
                ratio(1, 720),
            )
        })
        .collect();
    for pairs in [linear, uniform] {
        let dist = make_finite_support(pairs, v_star).unwrap();
        let scheme = BayesScheme::flat(dist.clone()).unwrap();
        let evaluated = exact_error_profile(&scheme, &dist).unwrap();
        let oracle = bayes_error_oracle_profile(&dist).unwrap();
        assert_eq!(evaluated, oracle);
    }
}

#[test]
fn bayes_error_is_invariant_to_the_obfuscation() {
    let (g1, g2, v_star) = asymmetric_pairing();
    let dist = vn_core::models::uniform_iso_class_distribution(&g1, &g2, v_star).unwrap();
    let scheme = BayesScheme::flat(dist.clone()).unwrap();
    let reference = rank_mass_profile_with(&scheme, &dist, &Obfuscation::standard(6)).unwrap();
    let mut rng = vn_core::RngState::new(9).rng();
    for _ in 0..5 {
        let o = Obfuscation::random(6, &mut rng);
        let profile = rank_mass_profile_with(&scheme, &dist, &o).unwrap();
        assert_eq!(profile, reference);
    }
}

#[test]
fn majorization_beats_random_consistent_schemes() {
    let (g1, g2, v_star) = asymmetric_pairing();
    let class = iso::enumerate_iso_class(&g2).unwrap();
    // Concentrated masses: a few heavy atoms, the rest a light tail.
    let heavy = 100i64;
    let denom = 3 * heavy + 717;
    let pairs: Vec<_> = class
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let mass = if i < 3 { ratio(heavy, denom) } else { ratio(1, denom) };
            (NominatablePair::new(g1.clone(), h.clone(), 6, "concentrated").unwrap(), mass)
        })
        .collect();
    let dist = make_finite_support(pairs, v_star).unwrap();
    let bayes = BayesScheme::flat(dist.clone()).unwrap();
    let bayes_profile = exact_error_profile(&bayes, &dist).unwrap();
    let oracle = bayes_error_oracle_profile(&dist).unwrap();
    assert_eq!(bayes_profile, oracle);
    for scheme in vn_core::harness::random_consistent_schemes(20, 5) {
        let profile = exact_error_profile(&scheme, &dist).unwrap();
        for k in 0..5 {
            assert!(
                bayes_profile[k] <= profile[k],
                "scheme {} beats the optimum at k = {}",
                scheme.name(),
                k + 1
            );
        }
    }
}

#[test]
fn representative_choice_leaves_errors_unchanged() {
    let (g1, g2, v_star) = asymmetric_pairing();
    let class = iso::enumerate_iso_class(&g2).unwrap();
    let total: i64 = (1..=720).sum();
    let pairs: Vec<_> = class
        .iter()
        .enumerate()
        .map(|(i, h)| {
            (
                NominatablePair::new(g1.clone(), h.clone(), 6, "linear").unwrap(),
                ratio(i as i64 + 1, total),
            )
        })
        .collect();
    let dist = make_finite_support(pairs, v_star).unwrap();
    let profiles: Vec<_> = [
        RepresentativePick::First,
        RepresentativePick::Last,
        RepresentativePick::Seeded(1234),
    ]
    .into_iter()
    .map(|pick| {
        let scheme = BayesScheme::build(dist.clone(), false, TieBreak::Canonical, pick).unwrap();
        exact_error_profile(&scheme, &dist).unwrap()
    })
    .collect();
    assert_eq!(profiles[0], profiles[1]);
    assert_eq!(profiles[0], profiles[2]);
}

#[test]
fn orbit_scheme_matches_flat_scheme_on_asymmetric_support() {
    let (g1, g2, v_star) = asymmetric_pairing();
    let dist = vn_core::models::uniform_iso_class_distribution(&g1, &g2, v_star).unwrap();
    let flat = BayesScheme::flat(dist.clone()).unwrap();
    let orbit = BayesScheme::orbit(dist.clone()).unwrap();
    let o = Obfuscation::standard(6);
    for atom in dist.atoms().iter().step_by(71) {
        let h = o.apply(atom.pair.g2()).unwrap();
        assert_eq!(
            flat.nominate(&g1, &h, v_star).unwrap(),
            orbit.nominate(&g1, &h, v_star).unwrap()
        );
    }
}

#[test]
fn orbit_scheme_on_the_path_hits_the_frozen_optimum() {
    // Two three-vertex paths: one where the vertex of interest sits at an
    // end (mass 3/4) and one where it is the center (mass 1/4).
    let g1 = LabeledGraph::from_edges(3, &[(1, 2)], Namespace::V1).unwrap();
    let v_star = VertexLabel::new(Namespace::V1, 1);
    let end_atom = LabeledGraph::from_edges(3, &[(1, 2), (2, 3)], Namespace::V2).unwrap();
    let center_atom = LabeledGraph::from_edges(3, &[(1, 2), (1, 3)], Namespace::V2).unwrap();
    let pairs = vec![
        (NominatablePair::new(g1.clone(), end_atom, 3, "path").unwrap(), ratio(3, 4)),
        (NominatablePair::new(g1.clone(), center_atom, 3, "path").unwrap(), ratio(1, 4)),
    ];
    let dist = make_finite_support(pairs, v_star).unwrap();

    // The tie order puts the obfuscated vertex of interest first, the
    // hypothesis under which the orbit scheme is optimal.
    let tie = TieBreak::Fixed(vec![
        VertexLabel::new(Namespace::W, 1),
        VertexLabel::new(Namespace::W, 2),
        VertexLabel::new(Namespace::W, 3),
    ]);
    let scheme = BayesScheme::orbit(dist.clone()).unwrap().with_tie_break(tie);
    let profile = exact_error_profile(&scheme, &dist).unwrap();
    assert_eq!(profile, vec![ratio(1, 4), ratio(0, 1)]);
    assert_eq!(profile, bayes_error_oracle_profile(&dist).unwrap());

    // Exhaustively, a consistent scheme assigns the end orbit a pair of
    // ranks and the center the remaining one; with the favorable tie order
    // the achievable error profiles are:
    //   ends {1,2}, center {3} -> (1/4, 1/4)
    //   ends {1,3}, center {2} -> (1/4, 0)    <- round-robin interleaving
    //   ends {2,3}, center {1} -> (3/4, 0)
    // The orbit scheme attains the pointwise minimum.
    let alternatives = [
        vec![ratio(1, 4), ratio(1, 4)],
        vec![ratio(1, 4), ratio(0, 1)],
        vec![ratio(3, 4), ratio(0, 1)],
    ];
    for alternative in &alternatives {
        for k in 0..2 {
            assert!(profile[k] <= alternative[k]);
        }
    }
    // The orbit with the larger conditional mass is ranked first.
    let o = Obfuscation::standard(3);
    let end_obs = o
        .apply(&LabeledGraph::from_edges(3, &[(1, 2), (2, 3)], Namespace::V2).unwrap())
        .unwrap();
    let list = scheme.nominate(&g1, &end_obs, v_star).unwrap();
    // In the observed path w1 - w2 - w3 the end orbit {w1, w3} carries mass
    // 3/4, so an end leads the list and the rank set of the ends is {1, 3}.
    assert_eq!(list.rank_of(VertexLabel::new(Namespace::W, 1)), Some(1));
    assert_eq!(list.rank_of(VertexLabel::new(Namespace::W, 2)), Some(2));
    assert_eq!(list.rank_of(VertexLabel::new(Namespace::W, 3)), Some(3));
}

#[test]
fn error_chain_is_monotone_everywhere() {
    let (g1, g2, v_star) = asymmetric_pairing();
    let dist = vn_core::models::uniform_iso_class_distribution(&g1, &g2, v_star).unwrap();
    let schemes: Vec<Box<dyn Scheme>> = vec![
        Box::new(BayesScheme::flat(dist.clone()).unwrap()),
        Box::new(RandomBaselineScheme::new(3)),
        Box::new(vn_core::schemes::GmScheme::exact()),
    ];
    for scheme in &schemes {
        let profile = exact_error_profile(scheme.as_ref(), &dist).unwrap();
        for window in profile.windows(2) {
            assert!(window[0] >= window[1], "{}", scheme.name());
        }
        // The deepest level equals the mass ranked last.
        let ranks = vn_core::eval::rank_mass_profile(scheme.as_ref(), &dist).unwrap();
        assert_eq!(profile[4], ranks[5]);
        let total: BigRational = ranks.iter().sum();
        assert_eq!(total, BigRational::one());
    }
}
