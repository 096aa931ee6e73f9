//! Loose Hamiltonian cycles in k-uniform hypergraphs.
//!
//! The crate bundles an exact toolbox for small instances: hypergraph
//! storage and degree queries, ℓ-path and ℓ-cycle validation, an exact cycle
//! solver, absorbers, connecting gadgets, fractional cherry tilings with an
//! LP optimiser, regularity bookkeeping, an end-to-end pipeline and a
//! threshold sweep harness.
//!
//! Weights, densities and tolerances are generic over [`Scalar`], which is
//! implemented for `f32`, `f64`, [`Rational`] and [`BigRational`].

pub mod absorb;
pub mod bits;
pub mod connect;
pub mod error;
pub mod gen;
pub mod hgraph;
pub mod io;
pub mod lp;
pub mod pipeline;
pub mod regular;
pub mod scalar;
pub mod solver;
pub mod sweep;
pub mod tiling;
pub mod walks;

pub use error::{Error, Result};
pub use hgraph::{Hypergraph, UniformHypergraph, Vertex, VertexSet};
pub use scalar::Scalar;
pub use walks::{EllWalk, WalkEnds, WalkKind};

pub use num_rational::BigRational;

/// Exact rational with 64-bit numerator and denominator.
pub type Rational = num_rational::Rational64;

