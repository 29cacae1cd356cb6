//! Sunflower-free hypergraphs: search, constructions, and set systems.
//!
//! A sunflower with kernel size t and k petals, written S(r,t,k) for
//! r-uniform hypergraphs, is a family of k distinct edges whose pairwise
//! intersections all equal one common t-element kernel. This crate bundles
//! the machinery for working with hypergraphs that avoid a given sunflower:
//!
//! - [`hypergraph`]: the core r-uniform hypergraph type, link graphs, and the
//!   `.hg` text format;
//! - [`sunsearch`]: exact and greedy sunflower detection, the
//!   matching-or-cover dichotomy on link graphs, and link-size bound checks;
//! - [`constructions`]: deterministic and randomized builders of
//!   sunflower-free hypergraphs with many edges;
//! - [`setsystems`]: intersection-closed set systems with coverage and size
//!   constraints, their nonexistence machinery, and the Frankl-Katona
//!   intersection witness;
//! - [`reduction`]: cover maps, edge types, extending sequences, and the
//!   dichotomy that converts type functions into set systems;
//! - [`turan`]: exact maximum edge counts among S(r,t,k)-free hypergraphs on
//!   small ground sets, greedy lower bounds, and growth-rate envelopes.
//!
//! Randomized routines take an explicit 64-bit seed and use the ChaCha8
//! generator, so identical seeds reproduce identical output on every
//! platform.

pub mod combin;
pub mod constructions;
pub mod error;
pub mod hypergraph;
pub mod reduction;
pub mod setsystems;
pub mod sunsearch;
pub mod turan;
pub mod vertexset;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use vertexset::VertexSet;
