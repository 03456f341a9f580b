//! Curvature verification for complexes glued from dihedral Artin building blocks.
//!
//! A piecewise Euclidean complex is locally CAT(0) exactly when every vertex
//! link is CAT(1), and a metric *graph* is CAT(1) exactly when its shortest
//! embedded circle (systole) has length at least `2π`. This crate models the
//! vertex links of glued dihedral building blocks as metric graphs and decides
//! the link condition computationally.
//!
//! The pieces:
//!
//! * [`dihedral`] — spherical trigonometry of a single building block's link:
//!   the angles θ, α, β as functions of the relator index `m` and the metric
//!   parameter δ, and the symmetric α = β solution.
//! * [`graph`] — the metric-graph engine: shortest paths, systole with an
//!   explicit cycle witness, exact diameter including edge-interior points,
//!   and a brute-force systole oracle for testing.
//! * [`link`] — constructors for the graphs of interest: single-block links,
//!   combined links of a defining graph with a δ-assignment, and the
//!   two-circle "L-graph" family.
//! * [`verdict`] — CAT(1) verdicts, the triples reduction, threshold and
//!   excluded-triple enumeration, and a δ-feasibility solver.
//! * [`coxeter`] — geometric reflection representations of Coxeter groups and
//!   numeric order certification of words (finite order, or infinite with a
//!   spectral or growth certificate).

pub mod angle;
pub mod coxeter;
pub mod dihedral;
mod error;
pub mod graph;
pub mod link;
pub mod verdict;

pub use angle::Angle;
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Default verdict tolerance: a cycle of length `2π - DEFAULT_TOL` or more
/// passes the link condition, so boundary cycles of length exactly `2π` pass.
pub const DEFAULT_TOL: f64 = 1e-9;
