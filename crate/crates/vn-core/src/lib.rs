//! Vertex nomination on graph pairs.
//!
//! Given a vertex of interest `v*` in a graph `G1`, a nomination scheme ranks
//! the vertices of a second, label-obfuscated graph `G2` by how likely each is
//! to correspond to `v*`. This crate provides:
//!
//! * labeled hollow undirected graphs, relabelings and obfuscations ([`graph`]);
//! * isomorphism, automorphism orbits and canonical forms ([`iso`]);
//! * random-graph samplers and explicit finite-support pair distributions
//!   ([`models`]);
//! * nomination schemes: random baseline, spectral, graph matching and the
//!   Bayes-optimal scheme ([`schemes`]);
//! * exact and Monte Carlo level-k error evaluation ([`eval`]);
//! * the adversarial distribution construction that defeats any fixed scheme
//!   ([`adversarial`]).
//!
//! Monte Carlo loops are data-parallel via `rayon` when the default
//! `parallel` feature is enabled; a sequential fallback is always available
//! and produces bit-identical results.

pub mod adversarial;
pub mod error;
pub mod eval;
pub mod exec;
pub mod graph;
pub mod harness;
pub mod iso;
pub mod models;
pub mod rng;
pub mod schemes;

pub use error::{Error, Result};
pub use graph::{LabeledGraph, Namespace, NominatablePair, Obfuscation, Permutation, VertexLabel};
pub use rng::RngState;
