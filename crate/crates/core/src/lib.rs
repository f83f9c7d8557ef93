//! Decomposition of contingency probability tables under Aitchison
//! geometry.
//!
//! A strictly positive `I x J` probability table is a point of the simplex,
//! which perturbation and powering turn into a Euclidean vector space via
//! the centered log-ratio transform. On that space this crate computes the
//! orthogonal decompositions of a square table into independent and
//! interaction parts, symmetric and skew-symmetric parts, and their four
//! intersections; the closest quasi-symmetric and geometric-marginal-
//! homogeneous tables; and the scalar departure measures (simplicial
//! deviance, skewness, quasi-skewness, marginal heterogeneity) together
//! with their signed cell-contribution arrays.
//!
//! The [`oracle`] module verifies the closed forms independently: it
//! builds orthonormal bases of every subspace, measures their dimensions,
//! projects through the bases coordinate-wise, and cross-checks the
//! generative representation of quasi-symmetric tables.

pub mod decompose;
pub mod error;
pub mod measures;
pub mod oracle;
pub mod table;

pub use decompose::{DecompositionBundle, OddsRatioMatrix};
pub use error::TableError;
pub use measures::{ArrayKind, ContributionArray, MeasureReport};
pub use oracle::{CheckOutcome, QsGeneratorParams, SubspaceKind};
pub use table::{ClrTable, CountTable, Dims, ProbabilityTable};
