//! Landau-diamagnetism thermodynamics of the exotic model.
//!
//! With `x = βħω_c(1 − eBθ)` and `g = ħe/(Mc)` the printed chain is
//!
//! ```text
//! F  = −(n/β)[ln(V/λ³) + ln(x/2) − ln sinh(x/2)]
//! 𝓜  =  n·g·(1 − 2eBθ)·[1/x − ½coth(x/2)]
//! χ  = −2g·eθ·[1/x − ½coth(x/2)] − g²β(1 − 2eBθ)²·[1/x² + ¼(1 − coth²(x/2))]
//! ```
//!
//! which forms a consistent derivative chain `𝓜 = −∂F/∂B`, `χ = (1/n)∂𝓜/∂B`;
//! the finite-difference oracles in [`fd`] are the arbiter of that
//! consistency. In the high-temperature limit `x ≪ 1`,
//! `χ → −⅓(ħe/2Mc)²β·(1 + 6κ + 6κ²)` with `κ = −eBθ`: diamagnetic except on
//! the window between the roots `κ = −(3 ∓ √3)/6` where the sign flips.
//!
//! Two quantities are deliberately reported side by side without
//! reconciliation: the partition function as printed (argument `βħω*_c/2`)
//! and `exp(−βF/n)` from the free energy (argument `x/2`). They differ unless
//! `θ = 0`; [`partition_consistency`] surfaces the mismatch.

use crate::error::{Error, Result};
use crate::model::{derive, DerivedModel, ModelParams};
use crate::scalar::Scalar;

/// Context for the thermodynamic quantities. `volume`, `particle_count`, and
/// `thermal_wavelength` enter the free energy only through a B-independent
/// additive constant; magnetization and susceptibility never read them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetContext<T> {
    pub params: ModelParams<T>,
    pub derived: DerivedModel<T>,
    /// Volume `V` (> 0).
    pub volume: T,
    /// Particle count `n` (> 0).
    pub particle_count: T,
    /// Thermal wavelength `λ`. As printed this is `(2πħ²/M)^{1/2}`, without
    /// the customary `β^{1/2}`; see [`MagnetContext::new_with_beta_wavelength`].
    pub thermal_wavelength: T,
}

impl<T: Scalar> MagnetContext<T> {
    /// Context with `λ = (2πħ²/M)^{1/2}` as printed.
    pub fn new(params: ModelParams<T>, volume: T, particle_count: T) -> Result<Self> {
        Self::build(params, volume, particle_count, false)
    }

    /// Deviation option restoring the conventional `β` factor:
    /// `λ = (2πħ²β/M)^{1/2}`. No in-scope result depends on the choice.
    pub fn new_with_beta_wavelength(
        params: ModelParams<T>,
        volume: T,
        particle_count: T,
    ) -> Result<Self> {
        Self::build(params, volume, particle_count, true)
    }

    fn build(params: ModelParams<T>, volume: T, particle_count: T, with_beta: bool) -> Result<Self> {
        for (name, value) in [("volume", volume), ("particle count", particle_count)] {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: value.as_f64(),
                    requirement: "strictly positive and finite",
                });
            }
        }
        let derived = derive(&params)?;
        let mut lambda_sq = T::TAU() * params.hbar * params.hbar / params.mass;
        if with_beta {
            lambda_sq *= params.beta;
        }
        Ok(MagnetContext {
            params,
            derived,
            volume,
            particle_count,
            thermal_wavelength: lambda_sq.sqrt(),
        })
    }

    /// `ħe/(Mc)`.
    fn coupling(&self) -> T {
        self.params.hbar * self.params.charge / (self.params.mass * self.params.light_speed)
    }

    /// `1 − 2eBθ`.
    fn double_factor(&self) -> T {
        T::one() - T::of(2.0) * self.params.charge * self.params.field * self.params.theta
    }

    /// Recomputes the derived block after a parameter change (used by the
    /// finite-difference oracles to vary `B`).
    pub fn with_field(&self, field: T) -> Result<Self> {
        let mut params = self.params;
        params.field = field;
        let derived = derive(&params)?;
        Ok(MagnetContext {
            params,
            derived,
            ..*self
        })
    }
}

/// `ln(u/2) − ln sinh(u/2)`, evaluated as `ln u − u/2 − ln(1 − e^{−u})` so it
/// neither overflows at large `u` nor cancels at small `u` (limit 0).
fn ln_u_over_sinh<T: Scalar>(u: T) -> T {
    u.ln() - u * T::of(0.5) - (-(-u).exp_m1()).ln()
}

/// `h(x) = 1/x − ½coth(x/2)`, with a series branch below x = 1e−3 where the
/// two terms cancel to O(x).
fn coth_deficit<T: Scalar>(x: T) -> T {
    if x.abs() < T::of(1e-3) {
        let x2 = x * x;
        // −x/12 + x³/720 − x⁵/30240
        return -x / T::of(12.0) * (T::one() - x2 / T::of(60.0) + x2 * x2 / T::of(2520.0));
    }
    x.recip() - T::of(0.5) / (x * T::of(0.5)).tanh()
}

/// `k(x) = 1/x² + ¼(1 − coth²(x/2))`, series branch `1/12 − x²/240 + x⁴/6048`
/// below x = 1e−3.
fn coth_sq_deficit<T: Scalar>(x: T) -> T {
    if x.abs() < T::of(1e-3) {
        let x2 = x * x;
        return T::of(1.0 / 12.0) - x2 / T::of(240.0) + x2 * x2 / T::of(6048.0);
    }
    let coth = (x * T::of(0.5)).tanh().recip();
    x.powi(-2) + T::of(0.25) * (T::one() - coth * coth)
}

/// Partition function exactly as printed: `Z = (V/λ³)·(βħω*_c/2)/sinh(βħω*_c/2)`.
///
/// Note the argument is `βħω*_c`, while the free-energy chain uses
/// `x = βħω_c(1 − eBθ)`; the two disagree unless `θ = 0`.
pub fn partition_printed<T: Scalar>(ctx: &MagnetContext<T>) -> T {
    let u = ctx.params.beta * ctx.params.hbar * ctx.derived.omega_star;
    let lambda3 = ctx.thermal_wavelength.powi(3);
    ctx.volume / lambda3 * ln_u_over_sinh(u).exp()
}

/// Relative mismatch between [`partition_printed`] and `exp(−βF/n)`;
/// zero (to roundoff) iff `θ = 0`. Reported, never reconciled.
pub fn partition_consistency<T: Scalar>(ctx: &MagnetContext<T>) -> Result<T> {
    let printed = partition_printed(ctx);
    let from_f = (-ctx.params.beta * free_energy(ctx)? / ctx.particle_count).exp();
    Ok(((printed - from_f) / from_f).abs())
}

/// Free energy `F = −(n/β)[ln(V/λ³) + ln(x/2) − ln sinh(x/2)]`.
pub fn free_energy<T: Scalar>(ctx: &MagnetContext<T>) -> Result<T> {
    let x = ctx.derived.x;
    if !(x > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x.as_f64(),
            requirement: "βħω_c(1 − eBθ) > 0",
        });
    }
    let lambda3 = ctx.thermal_wavelength.powi(3);
    let bracket = (ctx.volume / lambda3).ln() + ln_u_over_sinh(x);
    Ok(-ctx.particle_count / ctx.params.beta * bracket)
}

/// Magnetization `𝓜 = n·(ħe/Mc)·(1 − 2eBθ)·[1/x − ½coth(x/2)]`; equals
/// `−∂F/∂B` and is diamagnetic (negative) for small `x` at `κ = 0`.
pub fn magnetization<T: Scalar>(ctx: &MagnetContext<T>) -> Result<T> {
    let x = ctx.derived.x;
    if !(x > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x.as_f64(),
            requirement: "βħω_c(1 − eBθ) > 0",
        });
    }
    Ok(ctx.particle_count * ctx.coupling() * ctx.double_factor() * coth_deficit(x))
}

/// Susceptibility as printed:
/// `χ = −2(ħe/Mc)eθ·[1/x − ½coth(x/2)] − (ħe/Mc)²β(1−2eBθ)²·[1/x² + ¼(1−coth²(x/2))]`.
pub fn susceptibility<T: Scalar>(ctx: &MagnetContext<T>) -> Result<T> {
    let x = ctx.derived.x;
    if !(x > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x.as_f64(),
            requirement: "βħω_c(1 − eBθ) > 0",
        });
    }
    let g = ctx.coupling();
    let e_theta = ctx.params.charge * ctx.params.theta;
    let first = -T::of(2.0) * g * e_theta * coth_deficit(x);
    let second = -g * g * ctx.params.beta * ctx.double_factor().powi(2) * coth_sq_deficit(x);
    Ok(first + second)
}

/// High-temperature susceptibility `χ = −⅓(ħe/2Mc)²β·(1 + 6κ + 6κ²)`.
pub fn susceptibility_high_t<T: Scalar>(kappa: T, beta: T, params: &ModelParams<T>) -> T {
    let half_g = params.hbar * params.charge
        / (T::of(2.0) * params.mass * params.light_speed);
    let poly = T::one() + T::of(6.0) * kappa + T::of(6.0) * kappa * kappa;
    -half_g * half_g * beta * poly / T::of(3.0)
}

/// Magnetic response regime at one `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Diamagnetic,
    Paramagnetic,
}

/// Classifies each `κ` on the grid by the sign of the high-temperature
/// susceptibility. Grid values must lie in `(−1, 0]`.
pub fn sign_scan<T: Scalar>(
    kappa_grid: &[T],
    beta: T,
    params: &ModelParams<T>,
) -> Result<Vec<(T, T, Regime)>> {
    let mut rows = Vec::with_capacity(kappa_grid.len());
    for &kappa in kappa_grid {
        if !(kappa > -T::one() && kappa <= T::zero()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa.as_f64(),
                requirement: "in (-1, 0]",
            });
        }
        let chi = susceptibility_high_t(kappa, beta, params);
        let regime = if chi > T::zero() {
            Regime::Paramagnetic
        } else {
            Regime::Diamagnetic
        };
        rows.push((kappa, chi, regime));
    }
    Ok(rows)
}

/// Bisects a sign change of the high-temperature susceptibility on
/// `[lo, hi]` down to an interval of width `tol`; the limits must bracket a
/// sign change.
pub fn sign_boundary<T: Scalar>(
    mut lo: T,
    mut hi: T,
    beta: T,
    params: &ModelParams<T>,
    tol: T,
) -> Result<T> {
    let chi = |k: T| susceptibility_high_t(k, beta, params);
    if (chi(lo) > T::zero()) == (chi(hi) > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "bisection bracket",
            value: lo.as_f64(),
            requirement: "endpoints must straddle a sign change",
        });
    }
    while hi - lo > tol {
        let mid = (lo + hi) * T::of(0.5);
        if (chi(mid) > T::zero()) == (chi(lo) > T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::of(0.5))
}

/// Finite-difference derivative oracles used to cross-check the printed
/// formula chain.
pub mod fd {
    use crate::scalar::Scalar;

    /// 4th-order central difference `[f(x−2h) − 8f(x−h) + 8f(x+h) − f(x+2h)] / (12h)`
    /// with sign fixed so it estimates `f'(x)`.
    pub fn deriv_central4<T: Scalar, F: Fn(T) -> T>(f: &F, x: T, h: T) -> T {
        let two = T::of(2.0);
        let eight = T::of(8.0);
        (f(x - two * h) - eight * f(x - h) + eight * f(x + h) - f(x + two * h))
            / (T::of(12.0) * h)
    }

    /// Richardson extrapolation of [`deriv_central4`] across `h` and `h/2`
    /// (6th order); also returns the spread between the two stencils as an
    /// error indicator.
    pub fn deriv_richardson<T: Scalar, F: Fn(T) -> T>(f: &F, x: T, h: T) -> (T, T) {
        let coarse = deriv_central4(f, x, h);
        let fine = deriv_central4(f, x, h * T::of(0.5));
        let extrapolated = (T::of(16.0) * fine - coarse) / T::of(15.0);
        (extrapolated, (fine - coarse).abs())
    }

    /// Step size `h = 1e−5·max(|x|, 1)` used by the consistency oracles.
    pub fn default_step<T: Scalar>(x: T) -> T {
        T::of(1e-5) * x.abs().max(T::one())
    }
}

/// Residuals of the derivative chain at one parameter point:
/// `|𝓜 + ∂F/∂B| / max(1, |𝓜|)` and `|χ − (1/n)∂𝓜/∂B| / max(1, |χ|)`,
/// with 4th-order stencils at `h = 1e−5·max(|B|, 1)`.
pub fn derivative_chain_residuals<T: Scalar>(ctx: &MagnetContext<T>) -> Result<(T, T)> {
    let b = ctx.params.field;
    let h = fd::default_step(b);
    // Fail fast (instead of panicking mid-stencil) if any evaluation point
    // leaves the valid domain.
    for k in [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
        let shifted = ctx.with_field(b + T::of(k) * h)?;
        free_energy(&shifted)?;
    }
    let f_of_b = |field: T| free_energy(&ctx.with_field(field).unwrap()).unwrap();
    let m_of_b = |field: T| magnetization(&ctx.with_field(field).unwrap()).unwrap();

    let m = magnetization(ctx)?;
    let df_db = fd::deriv_central4(&f_of_b, b, h);
    let res_m = (m + df_db).abs() / m.abs().max(T::one());

    let chi = susceptibility(ctx)?;
    let dm_db = fd::deriv_central4(&m_of_b, b, h);
    let res_chi = (chi - dm_db / ctx.particle_count).abs() / chi.abs().max(T::one());
    Ok((res_m, res_chi))
}
