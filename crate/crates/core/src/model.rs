//! Physical parameters and spectrum of the exotic Landau problem.
//!
//! The model is a charge `e` of mass `M` on a plane with noncommutativity
//! `θ`, in a perpendicular field `B`, at inverse temperature `β`. Away from
//! the critical field `B_c = 1/(eθ)` the Hamiltonian splits into two
//! commuting oscillators with frequencies
//!
//! ```text
//! ω_c = eB/(Mc),    ω*_c = eB/(M*c),    M* = (1 − eBθ) M,
//! ```
//!
//! and spectrum `E(n₊, n₋) = ħω_c(n₊ + ½) + ħω*_c(n₋ + ½)`. One unit
//! convention is used throughout: `ω_c = eB/(Mc)` with `c` defaulting to 1,
//! which covers both the `eB/M` and `ħe/(Mc)` forms found in different
//! treatments under a single parameter set.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default guard width for the critical-regime check.
pub const EPS_CRIT: f64 = 1e-12;

/// Physical inputs. All fields are in the chosen unit system; `hbar` and
/// `light_speed` default to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Particle mass `M` (> 0).
    pub mass: T,
    /// Charge `e` (> 0).
    pub charge: T,
    /// Magnetic field `B` (≥ 0).
    pub field: T,
    /// Noncommutativity parameter `θ` (≥ 0).
    pub theta: T,
    /// Reduced Planck constant `ħ` (> 0).
    pub hbar: T,
    /// Speed of light `c` (> 0).
    pub light_speed: T,
    /// Inverse temperature `β` (> 0).
    pub beta: T,
}

impl<T: Scalar> ModelParams<T> {
    /// Parameters with `ħ = c = 1`.
    pub fn new(mass: T, charge: T, field: T, theta: T, beta: T) -> Result<Self> {
        let params = ModelParams {
            mass,
            charge,
            field,
            theta,
            hbar: T::one(),
            light_speed: T::one(),
            beta,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_hbar(mut self, hbar: T) -> Result<Self> {
        self.hbar = hbar;
        self.validate()?;
        Ok(self)
    }

    pub fn with_light_speed(mut self, c: T) -> Result<Self> {
        self.light_speed = c;
        self.validate()?;
        Ok(self)
    }

    /// Builds parameters from flat `(key, value)` pairs.
    ///
    /// Recognized keys: `mass`, `charge`, `field`, `theta`, `hbar`, `c`,
    /// `beta`. `hbar` and `c` default to 1; the rest are mandatory. Unknown
    /// or duplicate keys are rejected.
    pub fn from_key_values<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut seen: [Option<f64>; 7] = [None; 7];
        const KEYS: [&str; 7] = ["mass", "charge", "field", "theta", "hbar", "c", "beta"];
        for (key, value) in pairs {
            let slot = KEYS.iter().position(|k| *k == key).ok_or(Error::InvalidParameter {
                name: "config key",
                value,
                requirement: "one of mass, charge, field, theta, hbar, c, beta",
            })?;
            if seen[slot].replace(value).is_some() {
                return Err(Error::InvalidParameter {
                    name: KEYS[slot],
                    value,
                    requirement: "given at most once",
                });
            }
        }
        let fetch = |slot: usize| -> Result<T> {
            seen[slot].map(T::of).ok_or(Error::InvalidParameter {
                name: KEYS[slot],
                value: f64::NAN,
                requirement: "mandatory key missing",
            })
        };
        let params = ModelParams {
            mass: fetch(0)?,
            charge: fetch(1)?,
            field: fetch(2)?,
            theta: fetch(3)?,
            hbar: seen[4].map(T::of).unwrap_or_else(T::one),
            light_speed: seen[5].map(T::of).unwrap_or_else(T::one),
            beta: fetch(6)?,
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks positivity constraints and the non-critical regime `1 − eBθ > 0`.
    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, T); 5] = [
            ("mass", self.mass),
            ("charge", self.charge),
            ("hbar", self.hbar),
            ("c", self.light_speed),
            ("beta", self.beta),
        ];
        for (name, value) in positive {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: value.as_f64(),
                    requirement: "strictly positive and finite",
                });
            }
        }
        let non_negative: [(&'static str, T); 2] = [("field", self.field), ("theta", self.theta)];
        for (name, value) in non_negative {
            if !(value >= T::zero()) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: value.as_f64(),
                    requirement: "non-negative and finite",
                });
            }
        }
        if self.mass_factor() < T::zero() {
            return Err(Error::InvalidParameter {
                name: "field",
                value: self.field.as_f64(),
                requirement: "subcritical: 1 - eB\u{3b8} > 0",
            });
        }
        Ok(())
    }

    /// The dimensionless factor `1 − eBθ`.
    #[inline]
    pub fn mass_factor(&self) -> T {
        T::one() - self.charge * self.field * self.theta
    }
}

/// Structure constants of the exotic Poisson brackets, all carrying the
/// `1/(1 − eBθ)` denominator that blows up at the critical field:
/// `{x¹, x²} = θ/(1−eBθ)`, `{xⁱ, pⁱ} = 1/(1−eBθ)`, `{p¹, p²} = eB/(1−eBθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExoticBrackets<T> {
    pub position_position: T,
    pub position_momentum: T,
    pub momentum_momentum: T,
}

/// Quantities derived from [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedModel<T> {
    /// Effective mass `M* = (1 − eBθ) M`.
    pub effective_mass: T,
    /// Cyclotron frequency `ω_c = eB/(Mc)`.
    pub omega_c: T,
    /// Starred frequency `ω*_c = eB/(M*c) = ω_c/(1 − eBθ)`.
    pub omega_star: T,
    /// Dimensionless noncommutativity `κ = −eBθ ∈ (−1, 0]`.
    pub kappa: T,
    /// Critical field `B_c = 1/(eθ)`; absent when `θ = 0`.
    pub critical_field: Option<T>,
    /// Dimensionless thermal argument `x = βħω_c(1 − eBθ)`.
    pub x: T,
}

/// Derives frequencies, effective mass, and the thermal argument, guarding
/// the critical regime with the default width [`EPS_CRIT`].
pub fn derive<T: Scalar>(params: &ModelParams<T>) -> Result<DerivedModel<T>> {
    derive_with_eps(params, T::of(EPS_CRIT))
}

/// Same as [`derive()`] with an explicit critical-regime guard width; sweeps in
/// `B` or `θ` that approach the critical field may need to widen or narrow it.
pub fn derive_with_eps<T: Scalar>(params: &ModelParams<T>, eps_crit: T) -> Result<DerivedModel<T>> {
    params.validate()?;
    let factor = params.mass_factor();
    if factor.abs() <= eps_crit {
        // det(Ω) = (M*/M)² = 0 here: the symplectic matrix is singular.
        return Err(Error::CriticalRegime {
            gap: factor.abs().as_f64(),
            eps: eps_crit.as_f64(),
        });
    }
    let effective_mass = factor * params.mass;
    let omega_c = params.charge * params.field / (params.mass * params.light_speed);
    let omega_star = params.charge * params.field / (effective_mass * params.light_speed);
    let critical_field = (params.theta > T::zero())
        .then(|| (params.charge * params.theta).recip());
    Ok(DerivedModel {
        effective_mass,
        omega_c,
        omega_star,
        kappa: -params.charge * params.field * params.theta,
        critical_field,
        x: params.beta * params.hbar * omega_c * factor,
    })
}

impl<T: Scalar> DerivedModel<T> {
    /// Determinant of the symplectic matrix, `det(Ω) = (M*/M)²`; the
    /// critical-regime guard fires exactly where this degenerates to zero.
    pub fn symplectic_determinant(&self, params: &ModelParams<T>) -> T {
        let ratio = self.effective_mass / params.mass;
        ratio * ratio
    }

    /// The exotic Poisson-bracket structure constants at these parameters.
    pub fn exotic_brackets(&self, params: &ModelParams<T>) -> ExoticBrackets<T> {
        let denom = params.mass_factor();
        ExoticBrackets {
            position_position: params.theta / denom,
            position_momentum: denom.recip(),
            momentum_momentum: params.charge * params.field / denom,
        }
    }
}

/// Two-oscillator energy `E(n₊, n₋) = ħω_c(n₊ + ½) + ħω*_c(n₋ + ½)`.
pub fn energy<T: Scalar>(
    n_plus: usize,
    n_minus: usize,
    derived: &DerivedModel<T>,
    params: &ModelParams<T>,
) -> T {
    let half = T::of(0.5);
    params.hbar
        * (derived.omega_c * (T::of(n_plus as f64) + half)
            + derived.omega_star * (T::of(n_minus as f64) + half))
}

/// All levels with `E ≤ e_max`, ascending in `E`, ties broken
/// lexicographically by `(n₊, n₋)`.
pub fn enumerate_levels<T: Scalar>(
    derived: &DerivedModel<T>,
    params: &ModelParams<T>,
    e_max: T,
) -> Result<Vec<(usize, usize, T)>> {
    let ground = energy(0, 0, derived, params);
    if e_max < ground {
        return Err(Error::EmptySpectrum {
            e_max: e_max.as_f64(),
            ground: ground.as_f64(),
        });
    }
    let mut levels = Vec::new();
    let mut n_plus = 0usize;
    while energy(n_plus, 0, derived, params) <= e_max {
        let mut n_minus = 0usize;
        loop {
            let e = energy(n_plus, n_minus, derived, params);
            if e > e_max {
                break;
            }
            levels.push((n_plus, n_minus, e));
            n_minus += 1;
        }
        n_plus += 1;
    }
    levels.sort_by(|a, b| {
        a.2.partial_cmp(&b.2)
            .expect("finite energies")
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(mass: f64, charge: f64, field: f64, theta: f64, beta: f64) -> ModelParams<f64> {
        ModelParams::new(mass, charge, field, theta, beta).unwrap()
    }

    #[test]
    fn derive_direct_substitution() {
        let p = params(1.0, 1.0, 1.0, 0.5, 1.0);
        let d = derive(&p).unwrap();
        assert_abs_diff_eq!(d.effective_mass, 0.5);
        assert_abs_diff_eq!(d.omega_c, 1.0);
        assert_abs_diff_eq!(d.omega_star, 2.0);
        assert_abs_diff_eq!(d.kappa, -0.5);
        assert_abs_diff_eq!(d.critical_field.unwrap(), 2.0);
        assert_abs_diff_eq!(d.x, 0.5);
    }

    #[test]
    fn derive_commutative_limit() {
        let p = params(2.0, 1.0, 3.0, 0.0, 1.0);
        let d = derive(&p).unwrap();
        assert_abs_diff_eq!(d.effective_mass, p.mass);
        assert_abs_diff_eq!(d.omega_star, d.omega_c);
        assert_abs_diff_eq!(d.kappa, 0.0);
        assert!(d.critical_field.is_none());
    }

    #[test]
    fn derive_critical_regime_errors() {
        let p = params(1.0, 1.0, 2.0, 0.5, 1.0);
        match derive(&p) {
            Err(Error::CriticalRegime { .. }) => {}
            other => panic!("expected CriticalRegime, got {other:?}"),
        }
    }

    #[test]
    fn derive_rejects_supercritical_field() {
        let p = ModelParams::new(1.0, 1.0, 3.0, 0.5, 1.0);
        assert!(matches!(p, Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn frequency_identity_exact() {
        // ω*_c (1 − eBθ) = ω_c is algebraically exact.
        for (b, theta) in [(0.3, 0.1), (1.0, 0.5), (2.5, 0.2), (0.9, 0.0)] {
            let p = params(1.7, 1.1, b, theta, 0.8);
            let d = derive(&p).unwrap();
            assert_relative_eq!(d.omega_star * p.mass_factor(), d.omega_c, max_relative = 1e-15);
        }
    }

    #[test]
    fn bracket_consistency_data() {
        let p = params(2.0, 1.5, 1.0, 0.2, 1.0); // eBθ = 0.3
        let d = derive(&p).unwrap();
        assert_relative_eq!(d.symplectic_determinant(&p), 0.49, max_relative = 1e-14);
        let brackets = d.exotic_brackets(&p);
        assert_relative_eq!(brackets.position_position, 0.2 / 0.7, max_relative = 1e-14);
        assert_relative_eq!(brackets.position_momentum, 1.0 / 0.7, max_relative = 1e-14);
        assert_relative_eq!(brackets.momentum_momentum, 1.5 / 0.7, max_relative = 1e-14);
        // Commutative limit: canonical brackets, det(Ω) = 1.
        let flat = params(2.0, 1.5, 1.0, 0.0, 1.0);
        let d0 = derive(&flat).unwrap();
        assert_abs_diff_eq!(d0.symplectic_determinant(&flat), 1.0);
        assert_abs_diff_eq!(d0.exotic_brackets(&flat).position_position, 0.0);
        assert_abs_diff_eq!(d0.exotic_brackets(&flat).position_momentum, 1.0);
    }

    #[test]
    fn energy_examples() {
        let p = params(1.0, 1.0, 1.0, 0.5, 1.0);
        let d = derive(&p).unwrap();
        assert_abs_diff_eq!(energy(0, 0, &d, &p), 1.5);
        assert_abs_diff_eq!(energy(1, 2, &d, &p), 6.5);
    }

    #[test]
    fn energy_ladder_spacing() {
        let p = params(1.3, 0.9, 1.2, 0.3, 1.0);
        let d = derive(&p).unwrap();
        for n in 1..8 {
            let dp = energy(n, 2, &d, &p) - energy(n - 1, 2, &d, &p);
            let dm = energy(3, n, &d, &p) - energy(3, n - 1, &d, &p);
            assert_relative_eq!(dp, p.hbar * d.omega_c, max_relative = 1e-13);
            assert_relative_eq!(dm, p.hbar * d.omega_star, max_relative = 1e-13);
        }
    }

    #[test]
    fn symmetric_limit_degeneracy() {
        // θ = 0: E depends only on n₊ + n₋.
        let p = params(1.0, 1.0, 1.0, 0.0, 1.0);
        let d = derive(&p).unwrap();
        assert_abs_diff_eq!(energy(2, 1, &d, &p), energy(1, 2, &d, &p));
        assert_abs_diff_eq!(energy(3, 0, &d, &p), energy(0, 3, &d, &p));
    }

    #[test]
    fn enumerate_empty_below_ground() {
        let p = params(1.0, 1.0, 1.0, 0.5, 1.0);
        let d = derive(&p).unwrap();
        assert!(matches!(
            enumerate_levels(&d, &p, 1.4),
            Err(Error::EmptySpectrum { .. })
        ));
    }

    #[test]
    fn enumerate_small_window() {
        let p = params(1.0, 1.0, 1.0, 0.5, 1.0);
        let d = derive(&p).unwrap();
        let levels = enumerate_levels(&d, &p, 2.6).unwrap();
        assert_eq!(levels.len(), 2);
        assert_eq!((levels[0].0, levels[0].1), (0, 0));
        assert_abs_diff_eq!(levels[0].2, 1.5);
        assert_eq!((levels[1].0, levels[1].1), (1, 0));
        assert_abs_diff_eq!(levels[1].2, 2.5);
    }

    #[test]
    fn enumerate_count_matches_brute_force() {
        let p = params(1.0, 1.0, 1.0, 0.5, 1.0);
        let d = derive(&p).unwrap();
        let e_max = 10.1;
        let levels = enumerate_levels(&d, &p, e_max).unwrap();
        // Independent exhaustive double loop over n± ≤ 20.
        let mut count = 0;
        for np in 0..=20 {
            for nm in 0..=20 {
                if energy(np, nm, &d, &p) <= e_max {
                    count += 1;
                }
            }
        }
        assert_eq!(levels.len(), count);
    }

    #[test]
    fn enumerate_count_monotone_in_e_max() {
        let p = params(1.0, 1.0, 1.0, 0.3, 1.0);
        let d = derive(&p).unwrap();
        let mut last = 0;
        for e_max in [1.2, 2.0, 3.5, 5.0, 8.0, 12.0] {
            let n = enumerate_levels(&d, &p, e_max).map(|v| v.len()).unwrap_or(0);
            assert!(n >= last, "count dropped at e_max = {e_max}");
            last = n;
        }
    }

    #[test]
    fn enumerate_sorted_with_lexicographic_ties() {
        let p = params(1.0, 1.0, 1.0, 0.0, 1.0); // θ = 0: exact degeneracies
        let d = derive(&p).unwrap();
        let levels = enumerate_levels(&d, &p, 4.1).unwrap();
        for w in levels.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(a.2 < b.2 || (a.2 == b.2 && (a.0, a.1) < (b.0, b.1)));
        }
    }

    #[test]
    fn from_key_values_defaults_and_errors() {
        let p: ModelParams<f64> = ModelParams::from_key_values([
            ("mass", 1.0),
            ("charge", 1.0),
            ("field", 1.0),
            ("theta", 0.5),
            ("beta", 2.0),
        ])
        .unwrap();
        assert_eq!(p.hbar, 1.0);
        assert_eq!(p.light_speed, 1.0);

        let missing: Result<ModelParams<f64>> =
            ModelParams::from_key_values([("mass", 1.0), ("charge", 1.0)]);
        assert!(missing.is_err());

        let unknown: Result<ModelParams<f64>> = ModelParams::from_key_values([
            ("mass", 1.0),
            ("charge", 1.0),
            ("field", 1.0),
            ("theta", 0.0),
            ("beta", 1.0),
            ("bogus", 1.0),
        ]);
        assert!(unknown.is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let p = ModelParams::<f32>::new(1.0, 1.0, 1.0, 0.5, 1.0).unwrap();
        let d = derive(&p).unwrap();
        assert!((d.omega_star - 2.0).abs() < 1e-6);
        assert!((energy(1, 2, &d, &p) - 6.5).abs() < 1e-5);
    }
}
