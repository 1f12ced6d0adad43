//! Thermal coherent-state toolkit for the exotic Landau problem.
//!
//! A charged particle on a noncommutative plane in a perpendicular magnetic
//! field splits into two commuting oscillator sectors with cyclotron
//! frequencies `ω_c = eB/(Mc)` and `ω*_c = eB/(M*c)`, where
//! `M* = (1 − eBθ)M` is the effective mass. This crate implements the
//! machinery built on top of that decomposition:
//!
//! - [`model`] — physical parameters, derived frequencies, two-oscillator
//!   spectrum, and the critical-regime guard at `B = 1/(eθ)`.
//! - [`fock`] — truncated Fock-space kernels: ladder actions, coherent-state
//!   amplitude vectors, Poisson overlaps, Mandel parameter.
//! - [`phase_dist`] — thermal occupancies, density-matrix diagonals, Q-Husimi
//!   and Glauber–Sudarshan P distributions, Wehrl entropy, and the
//!   Gauss–Laguerre phase-space quadrature that verifies every normalization.
//! - [`magnetics`] — Landau-diamagnetism thermodynamics: partition function,
//!   free energy, magnetization, susceptibility, the high-temperature
//!   `1 + 6κ + 6κ²` form, and finite-difference consistency oracles.
//! - [`kms`] — truncated Hilbert–Schmidt space: HS inner product, two-sided
//!   multiplication actions, displacement operators, Wigner transform,
//!   oscillator thermal state, displaced thermal (KMS) coherent states, and
//!   their resolution-of-identity / Husimi checks.
//!
//! All numerical kernels are generic over the scalar type through the
//! [`Scalar`] trait (`f32` or `f64`); the `*64` aliases below pin the common
//! double-precision case. Quantities carry explicit truncation diagnostics
//! (`tail_mass`, tail bounds) so downstream error budgets stay visible.

// `!(x > 0)` style guards are deliberate: unlike `x <= 0`, they also reject
// NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod kms;
pub mod magnetics;
pub mod model;
pub mod phase_dist;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision aliases for the main domain types.
pub type ModelParams64 = model::ModelParams<f64>;
pub type DerivedModel64 = model::DerivedModel<f64>;
pub type ThermalEnsemble64 = phase_dist::ThermalEnsemble<f64>;
pub type PhaseQuadrature64 = phase_dist::PhaseQuadrature<f64>;
pub type MagnetContext64 = magnetics::MagnetContext<f64>;
pub type HSMatrix64 = kms::HSMatrix<f64>;
pub type ThermalStateVector64 = kms::ThermalStateVector<f64>;
pub type PlanarGrid64 = kms::PlanarGrid<f64>;
