//! Truncated single-mode and chiral Fock-space kernels.
//!
//! Everything here works on a finite basis `{|0⟩, …, |N−1⟩}` per mode, with
//! the dropped probability reported as an explicit `tail_mass` so downstream
//! quantities can carry a truncation budget instead of silently losing mass.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-mode basis size; the basis is `{0, …, N−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockCutoff {
    n: usize,
}

impl FockCutoff {
    /// Requires `N ≥ 2`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "fock cutoff",
                value: n as f64,
                requirement: "N >= 2",
            });
        }
        Ok(FockCutoff { n })
    }

    #[inline]
    pub fn get(&self) -> usize {
        self.n
    }
}

/// Result of a raising action: target index, amplitude, and whether the
/// target collided with the truncation edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Raised<T> {
    pub index: usize,
    pub amplitude: T,
    /// Set when `index = N`: the target lies outside the truncated basis.
    /// The amplitude is still reported; the caller decides whether dropped
    /// mass matters.
    pub truncated: bool,
}

/// Lowering action `a|n⟩ = √n |n−1⟩`; the vacuum maps to amplitude 0.
#[inline]
pub fn ladder_lower<T: Scalar>(n: usize) -> (usize, T) {
    if n == 0 {
        (0, T::zero())
    } else {
        (n - 1, T::of(n as f64).sqrt())
    }
}

/// Raising action `a†|n⟩ = √(n+1) |n+1⟩`, flagged (not failed) when the
/// target hits the cutoff edge.
#[inline]
pub fn ladder_raise<T: Scalar>(n: usize, cutoff: FockCutoff) -> Raised<T> {
    Raised {
        index: n + 1,
        amplitude: T::of((n + 1) as f64).sqrt(),
        truncated: n + 1 >= cutoff.get(),
    }
}

/// Truncated coherent-state amplitude vector for one mode.
///
/// `amps[n] = e^{−|z|²/2} zⁿ/√(n!)`, built by the recurrence
/// `amps[n+1] = amps[n]·z/√(n+1)` (factorials would overflow past n ≈ 170).
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentAmplitudes<T> {
    pub z: Complex<T>,
    pub amps: Vec<Complex<T>>,
    /// Probability mass beyond the cutoff: `1 − Σ_n |amps[n]|²`.
    pub tail_mass: T,
}

impl<T: Scalar> CoherentAmplitudes<T> {
    /// Crude Poisson-tail bound `e^{|z|²} |z|^{2N} / N!` the stored
    /// `tail_mass` is guaranteed to respect.
    pub fn tail_bound(&self) -> T {
        let u = self.z.norm_sqr();
        let n = self.amps.len();
        // log-space: e^u u^N / N! = exp(u + N ln u − ln N!)
        if u == T::zero() {
            return T::zero();
        }
        (u + T::of(n as f64) * u.ln() - ln_factorial::<T>(n)).exp()
    }
}

/// Coherent amplitudes `⟨n|z⟩` for `n < N`.
///
/// Fails with [`Error::OverflowGuard`] when `|z|² > N`: the Poisson mass
/// center would lie beyond the cutoff and the truncation would be
/// meaningless — raise `N` instead.
pub fn coherent_amps<T: Scalar>(z: Complex<T>, cutoff: FockCutoff) -> Result<CoherentAmplitudes<T>> {
    let n = cutoff.get();
    let u = z.norm_sqr();
    if u > T::of(n as f64) {
        return Err(Error::OverflowGuard {
            z_norm_sq: u.as_f64(),
            cutoff: n,
        });
    }
    let mut amps = Vec::with_capacity(n);
    let mut a = Complex::new((-u * T::of(0.5)).exp(), T::zero());
    let mut norm_sq = T::zero();
    for k in 0..n {
        amps.push(a);
        norm_sq += a.norm_sqr();
        a = a * z / T::of((k + 1) as f64).sqrt();
    }
    let tail_mass = (T::one() - norm_sq).max(T::zero());
    Ok(CoherentAmplitudes { z, amps, tail_mass })
}

/// `ln n!` by direct summation (exact enough for tail bounds and weights).
pub(crate) fn ln_factorial<T: Scalar>(n: usize) -> T {
    let mut acc = T::zero();
    for k in 2..=n {
        acc += T::of(k as f64).ln();
    }
    acc
}

/// Poisson weight `e^{−u} uⁿ/n!`, evaluated in log space for stability.
pub(crate) fn poisson_weight<T: Scalar>(n: usize, u: T) -> T {
    if u == T::zero() {
        return if n == 0 { T::one() } else { T::zero() };
    }
    (T::of(n as f64) * u.ln() - u - ln_factorial::<T>(n)).exp()
}

/// Overlap probability `|(n₊, n₋|z₊, z₋)|²` of a chiral coherent state with a
/// number state: the product of two Poisson weights, always in `[0, 1]`.
pub fn chiral_overlap<T: Scalar>(
    n_plus: usize,
    n_minus: usize,
    z_plus: Complex<T>,
    z_minus: Complex<T>,
) -> T {
    poisson_weight(n_plus, z_plus.norm_sqr()) * poisson_weight(n_minus, z_minus.norm_sqr())
}

/// Mandel parameter `𝒬 = (⟨n²⟩ − ⟨n⟩²)/⟨n⟩ − 1` of the truncated coherent
/// weights; 0 for exact Poisson statistics, and 0 by convention at `z = 0`.
pub fn mandel_parameter<T: Scalar>(z: Complex<T>, cutoff: FockCutoff) -> Result<T> {
    let cs = coherent_amps(z, cutoff)?;
    let mut mean = T::zero();
    let mut second = T::zero();
    for (n, a) in cs.amps.iter().enumerate() {
        let p = a.norm_sqr();
        let nf = T::of(n as f64);
        mean += nf * p;
        second += nf * nf * p;
    }
    if mean == T::zero() {
        return Ok(T::zero());
    }
    Ok((second - mean * mean) / mean - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    type C64 = Complex<f64>;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn cutoff_rejects_degenerate_basis() {
        assert!(FockCutoff::new(1).is_err());
        assert!(FockCutoff::new(2).is_ok());
    }

    #[test]
    fn vacuum_annihilates() {
        let (idx, amp) = ladder_lower::<f64>(0);
        assert_eq!(idx, 0);
        assert_eq!(amp, 0.0);
    }

    #[test]
    fn raise_amplitude() {
        let r: Raised<f64> = ladder_raise(3, cut(40));
        assert_eq!(r.index, 4);
        assert_abs_diff_eq!(r.amplitude, 2.0);
        assert!(!r.truncated);
        let inside: Raised<f64> = ladder_raise(38, cut(40));
        assert!(!inside.truncated);
        let edge: Raised<f64> = ladder_raise(39, cut(40));
        assert!(edge.truncated);
    }

    proptest! {
        // [a, a†] = 1: the raise∘lower and lower∘raise amplitude products
        // differ by exactly 1 on every interior level.
        #[test]
        fn prop_commutator_ladder_identity(n in 0usize..38) {
            let c = cut(40);
            let up: Raised<f64> = ladder_raise(n, c);
            let (_, down_after_up) = ladder_lower::<f64>(up.index);
            let (_, down) = ladder_lower::<f64>(n);
            let up_after_down: Raised<f64> = ladder_raise(n.saturating_sub(1), c);
            let lower_raise = up.amplitude * down_after_up; // n + 1
            let raise_lower = if n == 0 { 0.0 } else { down * up_after_down.amplitude }; // n
            prop_assert!((lower_raise - raise_lower - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_vacuum() {
        let cs = coherent_amps(C64::new(0.0, 0.0), cut(10)).unwrap();
        assert_eq!(cs.amps[0], C64::new(1.0, 0.0));
        for a in &cs.amps[1..] {
            assert_eq!(*a, C64::new(0.0, 0.0));
        }
        assert_eq!(cs.tail_mass, 0.0);
    }

    #[test]
    fn coherent_poisson_weight_at_one() {
        let cs = coherent_amps(C64::new(1.0, 0.0), cut(40)).unwrap();
        assert_abs_diff_eq!(cs.amps[1].norm_sqr(), (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn coherent_normalization_against_taylor_oracle() {
        // Independent oracle: Σ_{n<N} u^n/n! by direct Taylor summation.
        let z = C64::new(1.0, 0.0);
        let n = 40;
        let cs = coherent_amps(z, cut(n)).unwrap();
        let u = z.norm_sqr();
        let mut term = 1.0;
        let mut series = 0.0;
        for k in 0..n {
            series += term;
            term *= u / (k + 1) as f64;
        }
        let expected = (-u).exp() * series;
        let total: f64 = cs.amps.iter().map(|a| a.norm_sqr()).sum();
        assert_abs_diff_eq!(total, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        assert!(cs.tail_mass <= cs.tail_bound());
    }

    #[test]
    fn coherent_overflow_guard() {
        let r = coherent_amps(C64::new(4.0, 3.0), cut(20)); // |z|² = 25 > 20
        assert!(matches!(r, Err(Error::OverflowGuard { .. })));
    }

    proptest! {
        // Unit mass splits exactly between kept amplitudes and tail.
        #[test]
        fn prop_mass_partition(re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let cs = coherent_amps(C64::new(re, im), cut(40)).unwrap();
            let kept: f64 = cs.amps.iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((kept + cs.tail_mass - 1.0).abs() < 1e-14);
            prop_assert!(cs.tail_mass <= cs.tail_bound() + 1e-14);
        }

        // Coherent amplitudes form an eigen-sequence of the lowering action:
        // √(n+1)·amps[n+1] = z·amps[n].
        #[test]
        fn prop_lowering_eigen_sequence(re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let z = C64::new(re, im);
            let cs = coherent_amps(z, cut(40)).unwrap();
            for n in 0..39 {
                let lowered = cs.amps[n + 1] * (n as f64 + 1.0).sqrt();
                let expected = z * cs.amps[n];
                prop_assert!((lowered - expected).norm() < 1e-12);
            }
        }

        // chiral_overlap factorizes into the squared coherent amplitudes.
        #[test]
        fn prop_overlap_matches_amplitudes(
            rp in -1.5f64..1.5, ip in -1.5f64..1.5,
            rm in -1.5f64..1.5, im in -1.5f64..1.5,
            np in 0usize..12, nm in 0usize..12,
        ) {
            let zp = C64::new(rp, ip);
            let zm = C64::new(rm, im);
            let ap = coherent_amps(zp, cut(40)).unwrap();
            let am = coherent_amps(zm, cut(40)).unwrap();
            let overlap = chiral_overlap(np, nm, zp, zm);
            let from_amps = ap.amps[np].norm_sqr() * am.amps[nm].norm_sqr();
            prop_assert!((overlap - from_amps).abs() < 1e-14);
            prop_assert!((0.0..=1.0).contains(&overlap));
        }
    }

    #[test]
    fn overlap_examples() {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        assert_abs_diff_eq!(chiral_overlap(0, 0, zero, zero), 1.0);
        assert_abs_diff_eq!(chiral_overlap(1, 0, one, zero), (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn overlap_double_sum_normalizes() {
        // Double Taylor-sum oracle at |z±| = 1: Σ over n± ≤ 60 of the product
        // of Poisson weights must reach 1.
        let z = C64::new(1.0, 0.0);
        let mut total = 0.0;
        for np in 0..=60 {
            for nm in 0..=60 {
                total += chiral_overlap(np, nm, z, z);
            }
        }
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mandel_vacuum_convention() {
        assert_eq!(mandel_parameter(C64::new(0.0, 0.0), cut(10)).unwrap(), 0.0);
    }

    #[test]
    fn mandel_poissonian_at_unit_amplitude() {
        let q = mandel_parameter(C64::new(1.0, 0.0), cut(40)).unwrap();
        assert!(q.abs() < 1e-10, "Q = {q:e}");
    }

    #[test]
    fn mandel_against_exact_poisson_moments() {
        // Exact oracle: a Poisson distribution has mean = variance = |z|²,
        // so Q vanishes identically; check the truncated evaluation at
        // |z| = 2 with a cutoff far past the mass center.
        let q = mandel_parameter(C64::new(0.0, 2.0), cut(80)).unwrap();
        assert!(q.abs() < 1e-10, "Q = {q:e}");
        let cs = coherent_amps(C64::new(0.0, 2.0), cut(80)).unwrap();
        let mean: f64 = cs.amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
        assert_relative_eq!(mean, 4.0, max_relative = 1e-12);
    }
}
