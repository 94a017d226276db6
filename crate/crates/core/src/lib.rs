//! Cospectral, parallel and strongly cospectral vertices in graphs.
//!
//! Every decision is made twice: once with exact integer-polynomial
//! arithmetic (characteristic polynomials of vertex-deleted subgraphs,
//! gcds, square-free parts, exact Krylov solves) and once numerically from
//! the grouped spectral decomposition `A = Σ θ_r E_r`. The exact route is
//! authoritative; the numeric route is a cross-check and powers the
//! continuous quantum walk `U(t) = exp(itA)` used for orbit distances and
//! closeness certificates.
//!
//! Module map:
//! - [`graph`]: graphs, graph6/edgelist I/O, constructions, automorphisms,
//!   equitable partitions.
//! - [`algebra`]: big-integer polynomials, rational functions, exact
//!   matrices, characteristic and minimal polynomials.
//! - [`spectral`]: Jacobi eigensolver, spectral idempotents, supports, walk
//!   matrices, densities, commutant projection, average mixing matrix.
//! - [`cospectral`]: the pair decision procedures and graph-level invariants.
//! - [`walk`]: transfer amplitudes, scans and certificates.
//! - [`catalog`]: named graphs, exhaustive connected-graph enumeration and
//!   random graphs.
//! - [`crosscheck`]: the exact-versus-numeric agreement suites.

pub mod algebra;
pub mod catalog;
pub mod cospectral;
pub mod crosscheck;
pub mod error;
pub mod graph;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Graph, Partition, Permutation};
