//! Displacement-operator matrix elements in the Fock basis.
//!
//! The closed form, per (m, n) with `u = |z|²` and `d = |m − n|`:
//!
//! ```text
//! ⟨m|D(z)|n⟩ = √(n!/m!) · z^d     · e^{−u/2} · Lₙ^{(d)}(u),   m ≥ n
//! ⟨m|D(z)|n⟩ = √(m!/n!) · (−z̄)^d · e^{−u/2} · Lₘ^{(d)}(u),   n ≥ m
//! ```
//!
//! Each entry is the exact infinite-dimensional matrix element — truncation
//! never enters a single value — so the grid is valid at any `z`. The
//! evaluation walks each diagonal offset with the associated-Laguerre
//! three-term recurrence; prefactors are carried in log space and unit
//! phases accumulated multiplicatively, so nothing over- or underflows.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::ln_factorial;
use crate::scalar::Scalar;

use super::HSMatrix;

/// Exact matrix elements `⟨m|D(z)|n⟩` for `m, n < dim`, no domain guard.
pub fn displacement_elements<T: Scalar>(z: Complex<T>, dim: usize) -> HSMatrix<T> {
    let mut out = HSMatrix::zeros(dim);
    let u = z.norm_sqr();
    if u == T::zero() {
        for n in 0..dim {
            out.set(n, n, Complex::new(T::one(), T::zero()));
        }
        return out;
    }
    let r = u.sqrt();
    let unit_up = z / r; // z/|z|
    let unit_down = -z.conj() / r; // (−z̄)/|z|
    let half = T::of(0.5);
    let mut phase_up = Complex::new(T::one(), T::zero());
    let mut phase_down = Complex::new(T::one(), T::zero());
    for d in 0..dim {
        // Prefactor at the head of the diagonal: |z|^d e^{−u/2}/√(d!).
        let mut pref = (T::of(d as f64) * r.ln() - half * ln_factorial::<T>(d) - half * u).exp();
        // Associated Laguerre Lₙ^{(d)}(u) along the diagonal.
        let mut lag_prev = T::zero();
        let mut lag = T::one();
        let mut n = 0usize;
        while n + d < dim {
            let value = pref * lag;
            out.set(n + d, n, phase_up * value);
            if d > 0 {
                out.set(n, n + d, phase_down * value);
            }
            let nf = T::of(n as f64);
            let df = T::of(d as f64);
            let next = ((T::of(2.0) * nf + T::one() + df - u) * lag - (nf + df) * lag_prev)
                / (nf + T::one());
            lag_prev = lag;
            lag = next;
            // √(n!/(n+d)!) steps down by √((n+1)/(n+1+d)).
            pref *= ((nf + T::one()) / (nf + T::one() + df)).sqrt();
            n += 1;
        }
        phase_up *= unit_up;
        phase_down *= unit_down;
    }
    out
}

/// Displacement operator on the truncated basis, guarded by the unitarity
/// budget `|z|² ≤ N/4` (beyond it the displaced low-lying states leak past
/// the cutoff and the grid stops acting unitarily).
pub fn displacement<T: Scalar>(z: Complex<T>, dim: usize) -> Result<HSMatrix<T>> {
    let limit = T::of(dim as f64) * T::of(0.25);
    let u = z.norm_sqr();
    if u > limit {
        return Err(Error::DomainGuard {
            z_norm_sq: u.as_f64(),
            limit: limit.as_f64(),
        });
    }
    Ok(displacement_elements(z, dim))
}
