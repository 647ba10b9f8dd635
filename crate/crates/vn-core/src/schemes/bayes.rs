//! The Bayes-optimal nomination scheme for finite-support distributions.
//!
//! The support splits into cells: atoms sharing the first graph exactly and
//! the second graph up to isomorphism. Within the cell of an observed pair,
//! each candidate vertex `w` is scored by the total mass of atoms whose
//! unique isomorphism from the observed graph sends `w` to the vertex of
//! interest; candidates are ranked by descending score. The flat variant
//! requires asymmetric support graphs (unique isomorphisms); the orbit-aware
//! variant scores whole automorphism orbits and interleaves their members
//! round-robin under the tie-break order.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{canon_view, ensure_inputs, NominationList, Scheme, TieBreak};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, VertexLabel};
use crate::iso::{self, ENUMERATION_CAP};
use crate::models::FiniteDistribution;

/// How each support cell picks the reference atom its isomorphisms are
/// precomputed against. The ranking is provably independent of this choice;
/// exposing it lets tests check that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentativePick {
    First,
    Last,
    Seeded(u64),
}

struct Cell {
    g1: LabeledGraph,
    ref_g2: LabeledGraph,
    ref_canon_words: Vec<u64>,
    /// Mass credited to each reference position: the total mass of atoms
    /// whose isomorphism from the reference sends that position to `v*`.
    mass_at_ref_pos: Vec<BigRational>,
    total: BigRational,
    ref_orbits: Vec<Vec<usize>>,
}

pub struct BayesScheme {
    dist: FiniteDistribution,
    orbit_aware: bool,
    tie: TieBreak,
    cells: Vec<Cell>,
}

impl BayesScheme {
    /// The flat scheme of the asymmetric-support setting.
    pub fn flat(dist: FiniteDistribution) -> Result<Self> {
        Self::build(dist, false, TieBreak::Canonical, RepresentativePick::First)
    }

    /// The orbit-level scheme; symmetric support graphs are permitted.
    pub fn orbit(dist: FiniteDistribution) -> Result<Self> {
        Self::build(dist, true, TieBreak::Canonical, RepresentativePick::First)
    }

    pub fn with_tie_break(mut self, tie: TieBreak) -> Self {
        self.tie = tie;
        self
    }

    pub fn build(
        dist: FiniteDistribution,
        orbit_aware: bool,
        tie: TieBreak,
        pick: RepresentativePick,
    ) -> Result<Self> {
        let m = dist.m();
        if m > ENUMERATION_CAP {
            return Err(Error::CapExceeded(format!(
                "support graphs have {m} vertices, above the enumeration cap of {ENUMERATION_CAP}"
            )));
        }
        let vpos2 = dist.atoms()[0]
            .pair
            .g2()
            .position_of(dist.v_star_v2())
            .ok_or_else(|| Error::invalid("vertex of interest missing from the second graph"))?;

        // Group atoms into cells keyed by the exact first graph and the
        // isomorphism class of the second.
        let mut groups: HashMap<(Vec<u32>, Vec<u64>, Vec<u64>), Vec<usize>> = HashMap::new();
        let mut order: Vec<(Vec<u32>, Vec<u64>, Vec<u64>)> = Vec::new();
        for (idx, atom) in dist.atoms().iter().enumerate() {
            let canon = iso::canonical_form(atom.pair.g2());
            let key = (
                atom.pair.g1().ids().to_vec(),
                atom.pair.g1().adjacency().words().to_vec(),
                canon.canonical_graph.adjacency().words().to_vec(),
            );
            match groups.get_mut(&key) {
                Some(list) => list.push(idx),
                None => {
                    groups.insert(key.clone(), vec![idx]);
                    order.push(key);
                }
            }
        }

        let mut cells = Vec::with_capacity(order.len());
        for key in order {
            let members = groups.remove(&key).expect("key recorded");
            let pick_idx = match pick {
                RepresentativePick::First => 0,
                RepresentativePick::Last => members.len() - 1,
                RepresentativePick::Seeded(seed) => {
                    (super::random::fnv1a(key.2.iter().copied(), seed) % members.len() as u64)
                        as usize
                }
            };
            let ref_atom = &dist.atoms()[members[pick_idx]];
            let ref_g2 = ref_atom.pair.g2().clone();
            if !orbit_aware && !iso::is_asymmetric(&ref_g2) {
                return Err(Error::invalid(
                    "the flat scheme requires asymmetric support graphs; use the orbit-aware variant",
                ));
            }
            let mut mass_at_ref_pos = vec![BigRational::zero(); m];
            let mut total = BigRational::zero();
            for &idx in &members {
                let atom = &dist.atoms()[idx];
                let tau = iso::find_isomorphism(&ref_g2, atom.pair.g2())
                    .expect("atoms in one cell are isomorphic");
                let u = tau.inverse().image(vpos2);
                mass_at_ref_pos[u] += &atom.mass;
                total += &atom.mass;
            }
            let ref_orbits = iso::automorphism_orbits(&ref_g2).classes().to_vec();
            cells.push(Cell {
                g1: ref_atom.pair.g1().clone(),
                ref_canon_words: key.2,
                ref_g2,
                mass_at_ref_pos,
                total,
                ref_orbits,
            });
        }
        Ok(BayesScheme { dist, orbit_aware, tie, cells })
    }

    pub fn distribution(&self) -> &FiniteDistribution {
        &self.dist
    }

    fn find_cell(&self, g1: &LabeledGraph, og2: &LabeledGraph) -> Result<&Cell> {
        let canon = iso::canonical_form(og2);
        let words = canon.canonical_graph.adjacency().words();
        self.cells
            .iter()
            .find(|cell| {
                cell.g1.ids() == g1.ids()
                    && cell.g1.adjacency() == g1.adjacency()
                    && cell.ref_canon_words.as_slice() == words
            })
            .ok_or(Error::OutsideSupport)
    }

    /// Per-candidate conditional masses `P[w corresponds to v* | cell]`,
    /// as (label, numerator-mass, cell-mass) with exact rationals.
    pub fn conditional_masses(
        &self,
        g1: &LabeledGraph,
        og2: &LabeledGraph,
    ) -> Result<(Vec<(VertexLabel, BigRational)>, BigRational)> {
        let cell = self.find_cell(g1, og2)?;
        let rho = iso::find_isomorphism(og2, &cell.ref_g2)
            .expect("cell members are isomorphic to the reference");
        let masses = (0..og2.n())
            .map(|w| (og2.label_at(w), cell.mass_at_ref_pos[rho.image(w)].clone()))
            .collect();
        Ok((masses, cell.total.clone()))
    }
}

impl Scheme for BayesScheme {
    fn name(&self) -> String {
        if self.orbit_aware {
            "bayes-orbit".into()
        } else {
            "bayes-optimal".into()
        }
    }

    fn nominate(
        &self,
        g1: &LabeledGraph,
        og2: &LabeledGraph,
        v_star: VertexLabel,
    ) -> Result<NominationList> {
        ensure_inputs(g1, og2, v_star)?;
        if v_star != self.dist.v_star() {
            return Err(Error::invalid(
                "the scheme is built for a specific vertex of interest",
            ));
        }
        let m = og2.n();
        if m != self.dist.m() {
            return Err(Error::OutsideSupport);
        }
        let cell = self.find_cell(g1, og2)?;
        let rho = iso::find_isomorphism(og2, &cell.ref_g2)
            .expect("cell members are isomorphic to the reference");

        // Tie keys are canonical positions (or a fixed order when supplied).
        let view = canon_view(og2);
        let tie_key =
            |p: usize| -> usize { self.tie.key(og2, p, view.witness.image(p)) };

        if !self.orbit_aware {
            let mut positions: Vec<usize> = (0..m).collect();
            positions.sort_by(|&a, &b| {
                let ma = &cell.mass_at_ref_pos[rho.image(a)];
                let mb = &cell.mass_at_ref_pos[rho.image(b)];
                mb.cmp(ma).then_with(|| tie_key(a).cmp(&tie_key(b)))
            });
            return NominationList::new(positions.into_iter().map(|p| og2.label_at(p)).collect());
        }

        // Orbit-aware: orbits of the observed graph are the preimages of the
        // reference orbits; score each orbit by its total credited mass.
        let rho_inv = rho.inverse();
        let mut orbit_sets: Vec<(BigRational, usize, Vec<usize>)> = cell
            .ref_orbits
            .iter()
            .map(|orbit| {
                let mass: BigRational =
                    orbit.iter().map(|&u| cell.mass_at_ref_pos[u].clone()).sum();
                let mut members: Vec<usize> = orbit.iter().map(|&u| rho_inv.image(u)).collect();
                members.sort_by_key(|&p| tie_key(p));
                let min_key = tie_key(members[0]);
                (mass, min_key, members)
            })
            .collect();
        orbit_sets.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        // Round-robin from the ranked orbit sets, taking the tie-break-first
        // remaining element of each nonempty set per pass.
        let mut queues: Vec<std::collections::VecDeque<usize>> =
            orbit_sets.into_iter().map(|(_, _, members)| members.into()).collect();
        let mut order = Vec::with_capacity(m);
        while order.len() < m {
            for queue in &mut queues {
                if let Some(p) = queue.pop_front() {
                    order.push(og2.label_at(p));
                }
            }
        }
        NominationList::new(order)
    }
}
