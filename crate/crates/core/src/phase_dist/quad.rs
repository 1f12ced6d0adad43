//! Deterministic phase-space quadrature realizing the measure `d²z/π`.
//!
//! The substitution `u = |z|²` turns every radial integral here into
//! `∫₀^∞ g(u) du` with `g` an exponentially weighted smooth function, which
//! Gauss–Laguerre handles near-exactly. A `scale` parameter adapts the rule
//! to integrands decaying like `e^{−s·u}`; angular structure is resolved by
//! uniform midpoint nodes, spectrally accurate for periodic integrands.
//!
//! Node/weight tables are generated by Newton iteration on the Laguerre
//! recurrence. The recurrence is seeded with `e^{−x/2}` instead of 1 so the
//! computed weights come out already multiplied by `e^{x}` (the only form
//! ever needed); this keeps every intermediate in range for any order.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default radial (Gauss–Laguerre) order.
pub const DEFAULT_RADIAL_ORDER: usize = 64;
/// Default number of uniform angular nodes.
pub const DEFAULT_ANGULAR_ORDER: usize = 32;
/// Largest supported radial order (recurrence range limit).
pub const MAX_RADIAL_ORDER: usize = 160;

/// Gauss–Laguerre nodes and `e^{x}`-modified weights, order `n`, in f64.
///
/// Satisfies `Σᵢ Wᵢ f(xᵢ) ≈ ∫₀^∞ f(x) dx` for `f` of the form
/// `e^{−x}·(polynomial)`, exactly up to degree `2n − 1`.
fn gauss_laguerre_f64(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(2..=MAX_RADIAL_ORDER).contains(&n) {
        return Err(Error::InvalidParameter {
            name: "radial quadrature order",
            value: n as f64,
            requirement: "between 2 and 160",
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    // Laguerre recurrence at x, globally scaled by e^{−x/2}; returns
    // (Lₙ, Lₙ₋₁, Lₙ') in the scaled normalization.
    let eval = |x: f64| -> (f64, f64, f64) {
        let mut p1 = (-0.5 * x).exp();
        let mut p2 = 0.0;
        for j in 1..=n {
            let p3 = p2;
            p2 = p1;
            let jf = j as f64;
            p1 = ((2.0 * jf - 1.0 - x) * p2 - (jf - 1.0) * p3) / jf;
        }
        (p1, p2, nf * (p1 - p2) / x)
    };
    let mut z = 0.0f64;
    for i in 0..n {
        // Stroud/Secrest initial guesses (α = 0).
        if i == 0 {
            z = 3.0 / (1.0 + 2.4 * nf);
        } else if i == 1 {
            z += 15.0 / (1.0 + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2]);
        }
        for _ in 0..100 {
            let (p1, _, pp) = eval(z);
            let step = p1 / pp;
            z -= step;
            if step.abs() <= 1e-15 * z.max(1.0) {
                break;
            }
        }
        let (_, prev, deriv) = eval(z);
        nodes[i] = z;
        // −1/(Lₙ'·n·Lₙ₋₁) with e^{−z/2}-scaled values gives wᵢ·e^{zᵢ}.
        weights[i] = -1.0 / (deriv * nf * prev);
    }
    Ok((nodes, weights))
}

/// A fixed radial × angular integration scheme for the plane with measure
/// `d²z/π`, with a built-in coarser rule for error estimation.
#[derive(Debug, Clone)]
pub struct PhaseQuadrature<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    half_nodes: Vec<T>,
    half_weights: Vec<T>,
    n_theta: usize,
}

impl<T: Scalar> PhaseQuadrature<T> {
    /// Builds the rule and verifies the unit-Gaussian normalization
    /// `∫ (d²z/π) e^{−|z|²} = 1` to 1e−12.
    pub fn new(n_radial: usize, n_theta: usize) -> Result<Self> {
        if n_theta == 0 {
            return Err(Error::InvalidParameter {
                name: "angular quadrature order",
                value: 0.0,
                requirement: "at least 1",
            });
        }
        let (nodes, weights) = gauss_laguerre_f64(n_radial)?;
        let (half_nodes, half_weights) = gauss_laguerre_f64((n_radial / 2).max(2))?;
        let quad = PhaseQuadrature {
            nodes: nodes.into_iter().map(T::of).collect(),
            weights: weights.into_iter().map(T::of).collect(),
            half_nodes: half_nodes.into_iter().map(T::of).collect(),
            half_weights: half_weights.into_iter().map(T::of).collect(),
            n_theta,
        };
        let unit = quad.integrate_radial(T::one(), |u| (-u).exp());
        let deviation = (unit - T::one()).abs().as_f64();
        // 1e−12 in double precision; scaled up for coarser scalars.
        let tol = 1e-12f64.max(300.0 * T::epsilon().as_f64());
        if deviation > tol {
            return Err(Error::QuadratureDivergence {
                estimate: deviation,
                tol,
            });
        }
        Ok(quad)
    }

    /// Default 64 × 32 rule.
    pub fn standard() -> Result<Self> {
        Self::new(DEFAULT_RADIAL_ORDER, DEFAULT_ANGULAR_ORDER)
    }

    pub fn radial_order(&self) -> usize {
        self.nodes.len()
    }

    pub fn angular_order(&self) -> usize {
        self.n_theta
    }

    /// The `i`-th radial node for unit scale (`u = node/scale` in general);
    /// ascending in `i`.
    pub fn radial_node(&self, i: usize) -> T {
        self.nodes[i]
    }

    /// `∫₀^∞ g(u) du` for integrands decaying like `e^{−scale·u}`.
    ///
    /// The rule is exact (to roundoff) when `e^{scale·u} g(u)` is a
    /// polynomial of degree < 2n.
    pub fn integrate_radial<F>(&self, scale: T, g: F) -> T
    where
        F: Fn(T) -> T,
    {
        rule_sum(&self.nodes, &self.weights, scale, &g)
    }

    /// Radial integral together with an error estimate from the embedded
    /// half-order rule.
    pub fn integrate_radial_with_estimate<F>(&self, scale: T, g: F) -> (T, T)
    where
        F: Fn(T) -> T,
    {
        let full = rule_sum(&self.nodes, &self.weights, scale, &g);
        let coarse = rule_sum(&self.half_nodes, &self.half_weights, scale, &g);
        (full, (full - coarse).abs())
    }

    /// `∫ (d²z/π) f(z)` over the whole plane for integrands whose radial
    /// profile decays like `e^{−scale·|z|²}`; angular structure is handled by
    /// the uniform midpoint rule.
    pub fn integrate_plane<F>(&self, scale: T, f: F) -> T
    where
        F: Fn(Complex<T>) -> T,
    {
        let two_pi = T::TAU();
        let d_theta = two_pi / T::of(self.n_theta as f64);
        let mut total = T::zero();
        for (node, weight) in self.nodes.iter().zip(&self.weights) {
            let r = (*node / scale).sqrt();
            let mut angular = T::zero();
            for k in 0..self.n_theta {
                let phi = d_theta * (T::of(k as f64) + T::of(0.5));
                angular += f(Complex::from_polar(r, phi));
            }
            total += *weight / scale * angular;
        }
        total / T::of(self.n_theta as f64)
    }
}

fn rule_sum<T: Scalar, F: Fn(T) -> T>(nodes: &[T], weights: &[T], scale: T, g: &F) -> T {
    let mut total = T::zero();
    for (node, weight) in nodes.iter().zip(weights) {
        let u = *node / scale;
        total += *weight / scale * g(u);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn moments_match_factorials() {
        // ∫₀^∞ e^{−u} u^k du = k!
        let quad = PhaseQuadrature::<f64>::new(32, 8).unwrap();
        let mut factorial = 1.0;
        for k in 0..12u32 {
            if k > 0 {
                factorial *= k as f64;
            }
            let value = quad.integrate_radial(1.0, |u| (-u).exp() * u.powi(k as i32));
            assert_relative_eq!(value, factorial, max_relative = 1e-12);
        }
    }

    #[test]
    fn unit_gaussian_normalization() {
        for order in [2, 8, 64, 128] {
            let quad = PhaseQuadrature::<f64>::new(order, 4).unwrap();
            let one = quad.integrate_radial(1.0, |u| (-u).exp());
            assert_abs_diff_eq!(one, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn scaled_exponential_exact() {
        let quad = PhaseQuadrature::<f64>::new(16, 4).unwrap();
        for s in [1e-6, 0.01, 0.5, 1.0, 7.0, 2e5] {
            let value = quad.integrate_radial(s, |u| s * (-s * u).exp());
            assert_abs_diff_eq!(value, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn error_estimate_tracks_truth() {
        let quad = PhaseQuadrature::<f64>::new(64, 4).unwrap();
        // A non-polynomial integrand: ∫ e^{−u} √(u+1) du = e·Γ(3/2, 1)
        //  = e·[(√π/2)·erfc(1) + e^{−1}] ≈ 1.37893686.
        let (value, estimate) = quad.integrate_radial_with_estimate(1.0, |u| (-u).exp() * (u + 1.0).sqrt());
        let reference = 1.37893686;
        assert!((value - reference).abs() < 1e-6, "value {value}");
        assert!(estimate < 1e-6);
    }

    #[test]
    fn plane_integral_with_angles() {
        let quad = PhaseQuadrature::<f64>::new(32, 16).unwrap();
        // Rotationally invariant: ∫ (d²z/π) e^{−|z|²} = 1.
        let gauss = quad.integrate_plane(1.0, |z| (-z.norm_sqr()).exp());
        assert_abs_diff_eq!(gauss, 1.0, epsilon = 1e-12);
        // Angle-dependent: ∫ (d²z/π) |z|² cos²φ e^{−|z|²} = 1/2.
        let aniso = quad.integrate_plane(1.0, |z| z.re * z.re * (-z.norm_sqr()).exp());
        assert_abs_diff_eq!(aniso, 0.5, epsilon = 1e-12);
        // Odd angular dependence integrates away.
        let odd = quad.integrate_plane(1.0, |z| z.re * (-z.norm_sqr()).exp());
        assert_abs_diff_eq!(odd, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(PhaseQuadrature::<f64>::new(1, 4).is_err());
        assert!(PhaseQuadrature::<f64>::new(1000, 4).is_err());
        assert!(PhaseQuadrature::<f64>::new(16, 0).is_err());
    }

    #[test]
    fn single_precision_tables_stay_finite() {
        let quad = PhaseQuadrature::<f32>::new(64, 8).unwrap();
        let one = quad.integrate_radial(1.0f32, |u| (-u).exp());
        assert!((one - 1.0).abs() < 1e-5);
    }
}
