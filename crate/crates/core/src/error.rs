//! Error types shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the library.
///
/// Variants split into precondition/domain violations (invalid inputs, guarded
/// regimes) and numerical-quality failures ([`Error::QuadratureDivergence`]).
/// Diagnostics are stored as `f64` regardless of the working scalar type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `|1 − eBθ|` fell below the critical-regime guard: the symplectic
    /// structure degenerates at `B = 1/(eθ)` and the model is singular.
    #[error("critical regime: |1 - eB\u{3b8}| = {gap:e} <= {eps:e} (field at/near B_c = 1/(e\u{3b8}))")]
    CriticalRegime { gap: f64, eps: f64 },

    /// Invalid model parameter (non-positive mass, negative field, ...).
    #[error("invalid parameter {name}: {value} ({requirement})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// Requested spectrum window lies below the ground level.
    #[error("empty spectrum: e_max = {e_max} is below the ground energy {ground}")]
    EmptySpectrum { e_max: f64, ground: f64 },

    /// `|z|²` exceeds the Fock cutoff: the Poisson mass center would sit
    /// beyond the truncated basis, so amplitudes would be meaningless.
    #[error("overflow guard: |z|^2 = {z_norm_sq} exceeds the Fock cutoff N = {cutoff}; raise N")]
    OverflowGuard { z_norm_sq: f64, cutoff: usize },

    /// `βħω` outside the representable window `[1e-10, 700]`; callers should
    /// switch to asymptotic branches.
    #[error("degenerate temperature: \u{3b2}\u{127}\u{3c9} = {arg:e} outside [{lo:e}, {hi:e}]")]
    DegenerateTemperature { arg: f64, lo: f64, hi: f64 },

    /// Mean occupancy too small for the P-function: the distribution
    /// degenerates toward a point mass and is unresolvable on the grid.
    #[error("delta limit: mean occupancy {nbar:e} below {eps:e}; P-function degenerates at T -> 0")]
    DeltaLimit { nbar: f64, eps: f64 },

    /// Quadrature self-estimate exceeded the requested tolerance.
    #[error("quadrature divergence: estimated error {estimate:e} exceeds {tol:e}")]
    QuadratureDivergence { estimate: f64, tol: f64 },

    /// Hilbert–Schmidt operands of different dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    /// Displacement argument outside the unitarity budget `|z|² ≤ N/4`.
    #[error("domain guard: |z|^2 = {z_norm_sq} exceeds N/4 = {limit} (unitarity degrades near the cutoff)")]
    DomainGuard { z_norm_sq: f64, limit: f64 },

    /// Truncation too small for the requested tail tolerance.
    #[error("cutoff too small: {what} tail bound {bound:e} exceeds {tol:e}")]
    CutoffTooSmall {
        what: &'static str,
        bound: f64,
        tol: f64,
    },

    /// Density operator fails the unit-trace requirement.
    #[error("invalid density operator: trace deviates from 1 by {deviation:e} (> {tol:e})")]
    InvalidDensity { deviation: f64, tol: f64 },
}

impl Error {
    /// `true` for numerical-quality failures, `false` for precondition and
    /// domain violations. The CLI maps these onto exit codes 3 and 2.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureDivergence { .. })
    }
}
