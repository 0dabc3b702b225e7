//! Damek–Ricci spaces built from Clifford-module data, together with the
//! distorted distance functions, their prolongations beyond the ideal
//! boundary, and the focal varieties of the resulting isoparametric families.
//!
//! Every closed-form identity in this crate has a numerical counterpart
//! (finite differences, quadrature, direct minimization) so that the
//! identities can be checked rather than trusted. The `drspace` binary runs
//! those checks as batch suites.
//!
//! Module map:
//!
//! - [`clifford_algebra`]: generator matrices `J_α`, the bracket on `𝔳`,
//!   structure constants and the J²-condition.
//! - [`model`]: the half-space model, its group law, distance and
//!   Laplacian.
//! - [`geodesic`]: closed-form geodesics, their projective prolongation,
//!   conic type and cross-ratios.
//! - [`isoparametric`]: the functions `D_{x₀}`, `D_⊛` and the subset
//!   functions, tube radii and mean curvature.
//! - [`focal`]: focal varieties, orthogonal geodesics, total geodesy and
//!   Kähler angles.
//! - [`cli`]: the batch driver behind `drspace`.

pub mod cli;
pub mod clifford_algebra;
pub mod error;
pub mod focal;
pub mod geodesic;
pub mod isoparametric;
pub mod linalg;
pub mod model;
pub mod numerics;
pub mod sampling;

pub use clifford_algebra::{CliffordSpec, DamekRicciAlgebra, IrrepKind, ModuleSpec, ValidationReport};
pub use error::{Error, Result};
pub use focal::FocalVariety;
pub use geodesic::{ConicClass, ConicKind, ExtReal, ProjectivePoint, ProlongedGeodesic};
pub use isoparametric::{IsoFn, Isoparametric};
pub use linalg::{Matrix, Vector};
pub use model::{AffinePoint, Point, ScalarField, TangentVec};
