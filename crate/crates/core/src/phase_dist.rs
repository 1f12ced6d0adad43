//! Thermal-state phase-space distributions for the two chiral modes.
//!
//! For each oscillator mode with argument `a = βħω` the thermal state has
//! mean occupancy `n̄ = 1/(e^a − 1)` and the distributions factorize:
//!
//! ```text
//! Q(u) = (1 − e^{−a}) e^{−(1 − e^{−a}) u}        (Husimi, u = |z|²)
//! P(u) = (1/n̄) e^{−u/n̄}                          (Glauber–Sudarshan)
//! ρ(n, n) = (1/(n̄+1)) (n̄/(n̄+1))ⁿ                (number-basis diagonal)
//! W = 1 − ln(1 − e^{−a}) = 1 + ln(n̄ + 1)        (per-mode Wehrl factor)
//! ```
//!
//! The two-mode quantities are plain products, with the total Wehrl entropy
//! defined as the *product* of per-mode factors; the factors are exposed so
//! callers can form an additive version themselves if they prefer.

pub mod quad;

use num_complex::Complex;

pub use quad::PhaseQuadrature;

use crate::error::{Error, Result};
use crate::fock::poisson_weight;
use crate::model::{DerivedModel, ModelParams};
use crate::scalar::Scalar;

/// Validity window for `βħω`: outside it the occupancy over/underflows and
/// callers should switch to asymptotic branches.
pub const MODE_ARG_MIN: f64 = 1e-10;
pub const MODE_ARG_MAX: f64 = 700.0;

/// Below this occupancy the P-function degenerates toward a point mass and
/// is unresolvable on the quadrature grid.
pub const EPS_P: f64 = 1e-8;

/// Quadrature self-estimate tolerance for the numeric Wehrl integral.
pub const WEHRL_QUAD_TOL: f64 = 1e-6;

/// One of the two chiral oscillator sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiralMode {
    Plus,
    Minus,
}

/// Per-mode occupancies and partition factors at fixed `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnsemble<T> {
    /// Inverse temperature the arguments were built with.
    pub beta: T,
    /// `βħω_c`.
    pub arg_plus: T,
    /// `βħω*_c`.
    pub arg_minus: T,
    /// `n̄ = 1/(e^{βħω_c} − 1)`.
    pub nbar: T,
    /// `n̄* = 1/(e^{βħω*_c} − 1)`.
    pub nbar_star: T,
    /// `Z₊ = e^{−βħω_c/2}/(1 − e^{−βħω_c})`.
    pub z_plus: T,
    /// `Z₋ = e^{−βħω*_c/2}/(1 − e^{−βħω*_c})`.
    pub z_minus: T,
    /// `Z = Z₊ Z₋`.
    pub z: T,
}

impl<T: Scalar> ThermalEnsemble<T> {
    /// Ensemble from the dimensionless mode arguments `βħω_c`, `βħω*_c`
    /// (the stored `beta` is 1 with the frequencies absorbed).
    pub fn from_mode_args(arg_plus: T, arg_minus: T) -> Result<Self> {
        for arg in [arg_plus, arg_minus] {
            if !(arg.as_f64() >= MODE_ARG_MIN && arg.as_f64() <= MODE_ARG_MAX) {
                return Err(Error::DegenerateTemperature {
                    arg: arg.as_f64(),
                    lo: MODE_ARG_MIN,
                    hi: MODE_ARG_MAX,
                });
            }
        }
        let nbar = arg_plus.exp_m1().recip();
        let nbar_star = arg_minus.exp_m1().recip();
        let part = |a: T| (-a * T::of(0.5)).exp() / -(-a).exp_m1();
        let z_plus = part(arg_plus);
        let z_minus = part(arg_minus);
        Ok(ThermalEnsemble {
            beta: T::one(),
            arg_plus,
            arg_minus,
            nbar,
            nbar_star,
            z_plus,
            z_minus,
            z: z_plus * z_minus,
        })
    }

    /// Ensemble with prescribed mean occupancies (`βħω = ln(1 + 1/n̄)`).
    pub fn from_occupancies(nbar: T, nbar_star: T) -> Result<Self> {
        Self::from_mode_args(nbar.recip().ln_1p(), nbar_star.recip().ln_1p())
    }

    /// `βħω` for the requested mode.
    pub fn arg(&self, mode: ChiralMode) -> T {
        match mode {
            ChiralMode::Plus => self.arg_plus,
            ChiralMode::Minus => self.arg_minus,
        }
    }

    /// Mean occupancy for the requested mode.
    pub fn occupancy(&self, mode: ChiralMode) -> T {
        match mode {
            ChiralMode::Plus => self.nbar,
            ChiralMode::Minus => self.nbar_star,
        }
    }

    /// Gaussian width parameter `s = 1 − e^{−βħω}` of the mode's Husimi
    /// factor, in the exponential form.
    pub fn width_exp(&self, mode: ChiralMode) -> T {
        -(-self.arg(mode)).exp_m1()
    }

    /// The same width in the occupancy form `s = 1/(n̄ + 1)`; algebraically
    /// identical to [`Self::width_exp`], kept separate so the two evaluation
    /// routes can be compared.
    pub fn width_occ(&self, mode: ChiralMode) -> T {
        (self.occupancy(mode) + T::one()).recip()
    }
}

/// Thermal ensemble of the model's two chiral modes.
pub fn ensemble<T: Scalar>(
    derived: &DerivedModel<T>,
    params: &ModelParams<T>,
) -> Result<ThermalEnsemble<T>> {
    let base = params.beta * params.hbar;
    let mut ens = ThermalEnsemble::from_mode_args(base * derived.omega_c, base * derived.omega_star)?;
    ens.beta = params.beta;
    Ok(ens)
}

/// Diagonal density-matrix element `(n₊, n₋|ρ|n₊, n₋)`: the product of two
/// geometric distributions.
pub fn rho_diag<T: Scalar>(n_plus: usize, n_minus: usize, ens: &ThermalEnsemble<T>) -> T {
    geometric(n_plus, ens.nbar) * geometric(n_minus, ens.nbar_star)
}

fn geometric<T: Scalar>(n: usize, nbar: T) -> T {
    let ratio = nbar / (nbar + T::one());
    (nbar + T::one()).recip() * ratio.powi(n as i32)
}

/// Per-mode Husimi factor `Q(u) = s·e^{−s·u}` with `u = |z|²`.
pub fn husimi_mode<T: Scalar>(ens: &ThermalEnsemble<T>, mode: ChiralMode, u: T) -> T {
    let s = ens.width_exp(mode);
    s * (-s * u).exp()
}

/// Two-mode Husimi distribution `Q(|z₊|²)·Q(|z₋|²)`, strictly positive and
/// normalized to 1 under `∫ d²z₊ d²z₋ / π²`.
pub fn husimi<T: Scalar>(
    z_plus: Complex<T>,
    z_minus: Complex<T>,
    ens: &ThermalEnsemble<T>,
) -> T {
    husimi_mode(ens, ChiralMode::Plus, z_plus.norm_sqr())
        * husimi_mode(ens, ChiralMode::Minus, z_minus.norm_sqr())
}

/// Per-mode P factor `(1/n̄)·e^{−u/n̄}`; guarded by [`EPS_P`].
pub fn p_mode<T: Scalar>(ens: &ThermalEnsemble<T>, mode: ChiralMode, u: T) -> Result<T> {
    let nbar = ens.occupancy(mode);
    if nbar < T::of(EPS_P) {
        return Err(Error::DeltaLimit {
            nbar: nbar.as_f64(),
            eps: EPS_P,
        });
    }
    Ok(nbar.recip() * (-u / nbar).exp())
}

/// Two-mode Glauber–Sudarshan P-function, positive and factorized; fails in
/// the `T → 0` delta limit where either occupancy drops below [`EPS_P`].
pub fn p_function<T: Scalar>(
    z_plus: Complex<T>,
    z_minus: Complex<T>,
    ens: &ThermalEnsemble<T>,
) -> Result<T> {
    Ok(p_mode(ens, ChiralMode::Plus, z_plus.norm_sqr())?
        * p_mode(ens, ChiralMode::Minus, z_minus.norm_sqr())?)
}

/// Reconstructs a density-matrix diagonal from the P-representation:
/// `∫ P(|z₊|², |z₋|²) |(n₊,n₋|z₊,z₋)|² d²z₊ d²z₋ / π²`, evaluated by the
/// radial quadrature per mode. Must agree with [`rho_diag`].
pub fn reconstruct_rho_diag<T: Scalar>(
    n_plus: usize,
    n_minus: usize,
    ens: &ThermalEnsemble<T>,
    quad: &PhaseQuadrature<T>,
) -> Result<T> {
    for n in [n_plus, n_minus] {
        if n > 10 {
            return Err(Error::InvalidParameter {
                name: "reconstruction index",
                value: n as f64,
                requirement: "n <= 10 (integrand moments grow factorially)",
            });
        }
    }
    let mode_integral = |n: usize, mode: ChiralMode| -> Result<T> {
        let nbar = ens.occupancy(mode);
        p_mode(ens, mode, T::zero())?; // trips the delta-limit guard
        let scale = T::one() + nbar.recip();
        Ok(quad.integrate_radial(scale, |u| {
            nbar.recip() * (-u / nbar).exp() * poisson_weight(n, u)
        }))
    };
    Ok(mode_integral(n_plus, ChiralMode::Plus)? * mode_integral(n_minus, ChiralMode::Minus)?)
}

/// Per-mode closed-form Wehrl factor `W = 1 − ln(1 − e^{−βħω})`, always ≥ 1.
pub fn wehrl_mode_closed<T: Scalar>(ens: &ThermalEnsemble<T>, mode: ChiralMode) -> T {
    T::one() - ens.width_exp(mode).ln()
}

/// Closed-form two-mode Wehrl entropy: the product `W₊·W₋`.
pub fn wehrl_closed<T: Scalar>(ens: &ThermalEnsemble<T>) -> T {
    wehrl_mode_closed(ens, ChiralMode::Plus) * wehrl_mode_closed(ens, ChiralMode::Minus)
}

/// Per-mode Wehrl factor by quadrature: `−∫ (d²z/π) Q ln Q`.
pub fn wehrl_mode_numeric<T: Scalar>(
    ens: &ThermalEnsemble<T>,
    mode: ChiralMode,
    quad: &PhaseQuadrature<T>,
) -> Result<T> {
    let s = ens.width_exp(mode);
    let ln_s = s.ln();
    // −Q ln Q written as Q·(s·u − ln s): no log of an underflowed Q at far
    // nodes, where the exponential alone sends the term to zero.
    let (value, estimate) = quad.integrate_radial_with_estimate(s, |u| {
        let q = s * (-s * u).exp();
        q * (s * u - ln_s)
    });
    if estimate.as_f64() > WEHRL_QUAD_TOL {
        return Err(Error::QuadratureDivergence {
            estimate: estimate.as_f64(),
            tol: WEHRL_QUAD_TOL,
        });
    }
    Ok(value)
}

/// Numeric two-mode Wehrl entropy: the product of the per-mode integrals.
pub fn wehrl_numeric<T: Scalar>(
    ens: &ThermalEnsemble<T>,
    quad: &PhaseQuadrature<T>,
) -> Result<T> {
    Ok(wehrl_mode_numeric(ens, ChiralMode::Plus, quad)?
        * wehrl_mode_numeric(ens, ChiralMode::Minus, quad)?)
}

/// Truncated trace `Σ_{n± < N} ρ(n₊n₋, n₊n₋)` together with the geometric
/// tail bound `(n̄/(n̄+1))^N + (n̄*/(n̄*+1))^N`.
pub fn rho_trace_truncated<T: Scalar>(ens: &ThermalEnsemble<T>, cutoff: usize) -> (T, T) {
    let mut sum_plus = T::zero();
    let mut sum_minus = T::zero();
    for n in 0..cutoff {
        sum_plus += geometric(n, ens.nbar);
        sum_minus += geometric(n, ens.nbar_star);
    }
    let ratio = |nbar: T| nbar / (nbar + T::one());
    let bound = ratio(ens.nbar).powi(cutoff as i32) + ratio(ens.nbar_star).powi(cutoff as i32);
    (sum_plus * sum_minus, bound)
}

/// Smallest cutoff whose geometric tail bound stays below `tol`.
pub fn cutoff_for_trace_tol<T: Scalar>(ens: &ThermalEnsemble<T>, tol: T) -> usize {
    let per_mode = |nbar: T| -> usize {
        let ratio = nbar / (nbar + T::one());
        ((tol * T::of(0.5)).ln() / ratio.ln()).ceil().as_f64() as usize
    };
    per_mode(ens.nbar).max(per_mode(ens.nbar_star)).max(2)
}
