//! Exact-arithmetic toolkit for Monge polytopes.
//!
//! A matrix is Monge when `c[i][j] + c[I][J] <= c[i][J] + c[I][j]` for all
//! `i < I`, `j < J`. Intersecting the cone of nonnegative Monge matrices with
//! the probability simplex gives the Monge polytope; this crate covers the
//! generic `p × q` polytope and its hollow-symmetric and symmetric variants:
//!
//! * [`generators`]: the block matrices spanning the cones.
//! * [`symmetric`]: unique decomposition over the symmetric simplices, metric face.
//! * [`generic`]: vertices, facets, edges, face lattice, f-vector of `M(p×q)`.
//! * [`volume`]: exact normalized volumes by memoized pulling triangulation.
//! * [`counting`]: graded lattice-point counts and their generating functions.
//! * [`stanley`]: the canonical form for `2 × p` integer Monge matrices.
//! * [`optimize`]: northwest-corner transportation and pyramidal TSP with
//!   brute-force oracles.
//!
//! No floating point is used anywhere; every scalar is a [`Scalar`].

pub mod counting;
pub mod error;
pub mod generators;
pub mod generic;
pub mod linalg;
pub mod matrix;
pub mod optimize;
pub mod sample;
pub mod scalar;
pub mod stanley;
pub mod symmetric;
pub mod vertex_set;
pub mod volume;

pub use error::{Error, Result};
pub use generators::{generator, Block, VertexLabel};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use vertex_set::VertexSet;
