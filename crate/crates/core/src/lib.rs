//! Exact solver for the even-subgraph generating polynomial and the Ising
//! partition function of a multigraph embedded in an orientable surface.
//!
//! A graph comes with a rotation system (cyclic half-edge order per vertex),
//! which determines an embedding of genus `g`. The solver expands every even
//! edge set / partition function as a signed rational combination of `4^g`
//! Pfaffians of an orientation-twisted adjacency matrix of the blown-up graph,
//! fits the signs from a small number of reference matchings, and certifies
//! the result against independent brute-force oracles.
//!
//! Layering, bottom up:
//! * [`gf2`] — dense bit vectors and linear algebra over GF(2)
//! * [`graph`] — multigraphs, edge subsets, cycle bases, brute-force oracles
//! * [`surface`] — face tracing, genus, and GF(2) homology with a symplectic basis
//! * [`fisher`] — the degree gadget blow-up turning even sets into perfect matchings
//! * [`signfit`] — matching signs, quadratic forms, and the Pfaffian family
//! * [`pfaffian`] — scalar-generic skew matrices and Pfaffian evaluation
//! * [`engine`] — end-to-end pipelines, verification, and certificates
//! * [`format`] / [`fixtures`] — the text graph format and pinned test graphs

pub mod engine;
pub mod error;
pub mod fisher;
pub mod fixtures;
pub mod format;
pub mod gf2;
pub mod graph;
pub mod pfaffian;
pub mod signfit;
pub mod surface;

/// Exact scalar used throughout the default pipelines.
pub type Rational = num_rational::BigRational;

pub use error::Error;
pub use pfaffian::Scalar;

pub type Result<T> = std::result::Result<T, Error>;
