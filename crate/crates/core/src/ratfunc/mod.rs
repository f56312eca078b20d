//! Polynomials and rational maps over the complex numbers: evaluation,
//! root finding, composition, iteration, and partial fractions.

mod dd;
mod partial_fractions;
mod poly;
mod ratmap;
mod roots;

pub use partial_fractions::{partial_fractions, PartialFractionForm, PfTerm};
pub use poly::Polynomial;
pub use ratmap::{compose, iterate, PointValue, RationalMap};
pub use roots::{all_roots, cluster_roots, poly_roots, RootCluster};
