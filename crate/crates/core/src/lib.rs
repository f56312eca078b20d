//! Classification of rational composition operators on Hardy spaces of the
//! upper half-plane.
//!
//! Given a rational self-map `r` of the upper half-plane, the composition
//! operator `C_r f = f ∘ r` acts on `H^p(ℂ⁺)`. This crate decides whether
//! `C_r` is an isometry (equivalently, similar to an isometry), and backs
//! every verdict with either a machine-checkable certificate — the
//! measure-preserving canonical form `r(z) = z + α + Σ μ_i/(z − γ_i)` with
//! real `α`, distinct real poles `γ_i` and negative residues `μ_i` — or a
//! counterexample witness `z ∈ ℂ⁺` with `Im r(z) < 0`.
//!
//! The crate is layered:
//!
//! - [`ratfunc`]: complex polynomials and rational maps (evaluation, roots,
//!   composition, iteration, partial fractions).
//! - [`conformal`]: disc ↔ half-plane transfer through the Cayley map,
//!   innerness tests on both domains, and outer-function construction from
//!   a prescribed boundary modulus.
//! - [`classify`]: the decision procedure itself — canonical form,
//!   self-map verification, asymptotic slope, verdict, witnesses, and the
//!   operator norm.
//! - [`oracle`]: an independent numerical verification layer built on
//!   adaptive quadrature — invariant-integral residuals, Hardy norms,
//!   power-bound probes, and the weighted-composition equivalence residual.

pub mod classify;
pub mod config;
pub mod conformal;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod ratfunc;

pub use config::Config;
pub use error::{Error, Result};
