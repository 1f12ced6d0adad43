//! Truncated Hilbert–Schmidt space and thermal (KMS) coherent states.
//!
//! Operators on the truncated oscillator space are treated as vectors of the
//! Hilbert–Schmidt space with inner product `⟨X|Y⟩₂ = Tr[X†Y]` and basis
//! `Ψ_nl = |φ_n⟩⟨φ_l|`. Two commuting multiplication actions live on it,
//! `A∨B: X ↦ AXB†`; the left ladder operators act on the row index only.
//!
//! The Wigner transform `(𝒲X)(x, y) = (2π)^{−1/2}·Tr[U(x,y)† X]` maps HS
//! vectors to square-integrable functions of the plane and is an isometry.
//! One fixed convention identifies the plane with the coherent-state label:
//! `z = (x + iy)/√2`, `U(x, y) := D(z) = e^{zẐ† − z̄Ẑ}`.
//!
//! The oscillator thermal state `Φ_β = Σ √λ_n Ψ_nn`, `λ_n = (1−e^{−ωβ})e^{−nωβ}`,
//! displaced from the left gives the KMS coherent states
//! `Φ(z) = D(z)Φ_β`. Because `Φ_βΦ_β† = ρ_β` has unit trace, these resolve
//! the identity in the operator-product sense
//!
//! ```text
//! (1/2π) ∫ Φ(z)·Φ(z)† dxdy = I,
//! ```
//!
//! which [`kms_resolution_check`] verifies on an inner index block; at
//! `β → ∞` (`Φ_β → Ψ_00`) this degenerates to the ordinary Glauber
//! resolution on the left index.

pub mod displacement;

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

pub use displacement::{displacement, displacement_elements};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Thermal-tail tolerance for [`thermal_state`]: requires `e^{−Nωβ}` at most
/// this large.
pub const THERMAL_TAIL_TOL: f64 = 1e-12;

/// Grid-coverage guard for the resolution check: `e^{−R²/4}` must not exceed
/// this.
pub const KMS_COVERAGE_TOL: f64 = 1e-3;

/// Unit-trace tolerance for density operators fed to the KMS Husimi.
pub const DENSITY_TRACE_TOL: f64 = 1e-10;

/// Nodes per work unit in the deterministic parallel reductions.
const NODE_CHUNK: usize = 64;

/// An element of the truncated Hilbert–Schmidt space: an `N × N` grid of
/// complex amplitudes, entry `(n, l)` being the coefficient of `Ψ_nl`.
///
/// The same type doubles as a plain operator grid (for `A∨B` operands,
/// displacement operators, densities): both live on the same index set.
#[derive(Debug, Clone, PartialEq)]
pub struct HSMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> HSMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        HSMatrix {
            dim,
            entries: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for n in 0..dim {
            m.set(n, n, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Basis element `Ψ_nl`.
    pub fn basis(dim: usize, n: usize, l: usize) -> Result<Self> {
        if n >= dim || l >= dim {
            return Err(Error::DimMismatch {
                left: n.max(l),
                right: dim,
            });
        }
        let mut m = Self::zeros(dim);
        m.set(n, l, Complex::new(T::one(), T::zero()));
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for n in 0..dim {
            for l in 0..dim {
                m.set(n, l, f(n, l));
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, n: usize, l: usize) -> Complex<T> {
        self.entries[n * self.dim + l]
    }

    #[inline]
    pub fn set(&mut self, n: usize, l: usize, value: Complex<T>) {
        self.entries[n * self.dim + l] = value;
    }

    /// `√(Σ |entries|²) = √⟨X|X⟩₂`.
    pub fn hs_norm(&self) -> T {
        let mut acc = T::zero();
        for e in &self.entries {
            acc += e.norm_sqr();
        }
        acc.sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        let mut acc = Complex::zero();
        for n in 0..self.dim {
            acc += self.get(n, n);
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |n, l| self.get(l, n).conj())
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        HSMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| *e * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(HSMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a + *b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        let dim = self.dim;
        let mut out = Self::zeros(dim);
        for n in 0..dim {
            for k in 0..dim {
                let a = self.get(n, k);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for l in 0..dim {
                    let v = out.get(n, l) + a * other.get(k, l);
                    out.set(n, l, v);
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise deviation from another grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        check_dims(self, other)?;
        let mut worst = T::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            worst = worst.max((*a - *b).norm());
        }
        Ok(worst)
    }
}

fn check_dims<T: Scalar>(a: &HSMatrix<T>, b: &HSMatrix<T>) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

/// HS inner product `⟨X|Y⟩₂ = Tr[X†Y] = Σ conj(X_nl)·Y_nl`; sesquilinear and
/// positive-definite.
pub fn hs_inner<T: Scalar>(x: &HSMatrix<T>, y: &HSMatrix<T>) -> Result<Complex<T>> {
    check_dims(x, y)?;
    let mut acc = Complex::zero();
    for (a, b) in x.entries.iter().zip(&y.entries) {
        acc += a.conj() * *b;
    }
    Ok(acc)
}

/// Left multiplication `A∨I: X ↦ AX`.
pub fn left_action<T: Scalar>(a: &HSMatrix<T>, x: &HSMatrix<T>) -> Result<HSMatrix<T>> {
    a.matmul(x)
}

/// Right multiplication `I∨B: X ↦ XB†`.
pub fn right_action<T: Scalar>(b: &HSMatrix<T>, x: &HSMatrix<T>) -> Result<HSMatrix<T>> {
    x.matmul(&b.adjoint())
}

/// Which ladder action to apply on the left index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// Left-index ladder action: `A†: Ψ_nl ↦ √(n+1) Ψ_{n+1,l}`,
/// `A: Ψ_nl ↦ √n Ψ_{n−1,l}`. Returns the result and a flag set when raising
/// pushed mass off the top row.
pub fn ladder_hs<T: Scalar>(x: &HSMatrix<T>, which: Ladder) -> (HSMatrix<T>, bool) {
    let dim = x.dim();
    let mut out = HSMatrix::zeros(dim);
    let mut truncated = false;
    match which {
        Ladder::Raise => {
            for n in 1..dim {
                let amp = T::of(n as f64).sqrt();
                for l in 0..dim {
                    out.set(n, l, x.get(n - 1, l) * amp);
                }
            }
            for l in 0..dim {
                let top = x.get(dim - 1, l);
                if top.norm_sqr() > T::zero() {
                    truncated = true;
                }
            }
        }
        Ladder::Lower => {
            for n in 0..dim - 1 {
                let amp = T::of((n + 1) as f64).sqrt();
                for l in 0..dim {
                    out.set(n, l, x.get(n + 1, l) * amp);
                }
            }
        }
    }
    (out, truncated)
}

/// Wigner transform value `(𝒲X)(x, y) = (2π)^{−1/2} Tr[D(z)† X]` with
/// `z = (x + iy)/√2`.
///
/// Self-adjointness of `X` shows up as the point symmetry
/// `conj(𝒲X)(x, y) = (𝒲X)(−x, −y)` (real at the origin), not as pointwise
/// realness: this is the Fourier-side transform that is unitary onto
/// `L²(dxdy)`, the convention every identity in this module is built on.
pub fn wigner<T: Scalar>(x_op: &HSMatrix<T>, x: T, y: T) -> Complex<T> {
    let inv_sqrt2 = T::of(0.5).sqrt();
    let z = Complex::new(x * inv_sqrt2, y * inv_sqrt2);
    let d = displacement_elements(z, x_op.dim());
    hs_inner(&d, x_op).expect("dims match by construction") * (T::TAU().sqrt().recip())
}

/// Uniform midpoint grid on the square `|Re z|, |Im z| ≤ radius` of the
/// coherent-state label plane, realizing the measure `(1/2π)·dxdy` with
/// `(x, y) = √2·(Re z, Im z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarGrid<T> {
    pub radius: T,
    pub nodes_per_axis: usize,
}

impl<T: Scalar> PlanarGrid<T> {
    pub fn new(radius: T, nodes_per_axis: usize) -> Result<Self> {
        if !(radius > T::zero()) || nodes_per_axis < 2 {
            return Err(Error::InvalidParameter {
                name: "planar grid",
                value: radius.as_f64(),
                requirement: "radius > 0 and at least 2 nodes per axis",
            });
        }
        Ok(PlanarGrid {
            radius,
            nodes_per_axis,
        })
    }

    /// Node spacing in `z` units.
    pub fn spacing(&self) -> T {
        T::of(2.0) * self.radius / T::of(self.nodes_per_axis as f64)
    }

    /// Weight per node for the measure `(1/2π)∫·dxdy ≡ (1/π)∫·d²z`.
    pub fn node_weight(&self) -> T {
        let h = self.spacing();
        h * h / T::PI()
    }

    /// Midpoint nodes in deterministic row-major order.
    pub fn nodes(&self) -> Vec<Complex<T>> {
        let n = self.nodes_per_axis;
        let h = self.spacing();
        let half = T::of(0.5);
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            let re = -self.radius + h * (T::of(j as f64) + half);
            for k in 0..n {
                let im = -self.radius + h * (T::of(k as f64) + half);
                out.push(Complex::new(re, im));
            }
        }
        out
    }

    /// The paper-plane coordinates of a node: `(x, y) = √2·(Re z, Im z)`.
    pub fn xy(z: Complex<T>) -> (T, T) {
        let sqrt2 = T::of(2.0).sqrt();
        (z.re * sqrt2, z.im * sqrt2)
    }

    /// Coverage guard: fails unless `e^{−R²/4} ≤ tol`.
    pub fn coverage_guard(&self, tol: f64) -> Result<()> {
        let bound = (-self.radius * self.radius / T::of(4.0)).exp().as_f64();
        if bound > tol {
            return Err(Error::CutoffTooSmall {
                what: "planar grid radius",
                bound,
                tol,
            });
        }
        Ok(())
    }
}

/// Quadrature of `conj(𝒲X)·𝒲Y` over the plane; approximates `⟨X|Y⟩₂` when
/// the grid covers the operators' phase-space support (the isometry).
pub fn wigner_isometry_inner<T: Scalar>(
    x_op: &HSMatrix<T>,
    y_op: &HSMatrix<T>,
    grid: &PlanarGrid<T>,
) -> Result<Complex<T>> {
    check_dims(x_op, y_op)?;
    let dim = x_op.dim();
    let nodes = grid.nodes();
    let partials: Vec<Complex<T>> = nodes
        .par_chunks(NODE_CHUNK)
        .map(|chunk| {
            let mut acc = Complex::zero();
            for &z in chunk {
                let d = displacement_elements(z, dim);
                let wx = hs_inner(&d, x_op).expect("dims checked");
                let wy = hs_inner(&d, y_op).expect("dims checked");
                acc += wx.conj() * wy;
            }
            acc
        })
        .collect();
    let mut total = Complex::zero();
    for p in partials {
        total += p;
    }
    // dxdy = 2·d(Re z)d(Im z) and each Wigner value carries (2π)^{−1/2}, so
    // the per-node factor is 2h²/(2π) = h²/π — the grid's node weight.
    Ok(total * grid.node_weight())
}

/// Harmonic-oscillator thermal state as an HS vector: diagonal weights
/// `√λ_n`, `λ_n = (1 − e^{−ωβ}) e^{−nωβ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalStateVector<T> {
    pub beta: T,
    pub omega: T,
    /// `λ_n` for `n < N`; sums to `1 − tail`.
    pub lambdas: Vec<T>,
    /// Diagonal HS matrix with entries `√λ_n`.
    pub as_hs: HSMatrix<T>,
}

impl<T: Scalar> ThermalStateVector<T> {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// Geometric tail `e^{−Nωβ}` dropped by the truncation.
    pub fn tail_bound(&self) -> T {
        (-self.omega * self.beta * T::of(self.dim() as f64)).exp()
    }

    /// The thermal density operator `ρ_β = Φ_βΦ_β† = diag(λ_n)`.
    pub fn density(&self) -> HSMatrix<T> {
        let mut rho = HSMatrix::zeros(self.dim());
        for (n, lambda) in self.lambdas.iter().enumerate() {
            rho.set(n, n, Complex::new(*lambda, T::zero()));
        }
        rho
    }
}

/// Builds `Φ_β` at cutoff `dim`, requiring the dropped tail `e^{−Nωβ}` to be
/// at most [`THERMAL_TAIL_TOL`].
pub fn thermal_state<T: Scalar>(beta: T, omega: T, dim: usize) -> Result<ThermalStateVector<T>> {
    let arg = omega * beta;
    if !(arg > T::zero()) || !arg.is_finite() {
        return Err(Error::InvalidParameter {
            name: "omega*beta",
            value: arg.as_f64(),
            requirement: "strictly positive and finite",
        });
    }
    if dim < 2 {
        return Err(Error::InvalidParameter {
            name: "thermal cutoff",
            value: dim as f64,
            requirement: "N >= 2",
        });
    }
    let tail = (-arg * T::of(dim as f64)).exp();
    if tail.as_f64() > THERMAL_TAIL_TOL {
        return Err(Error::CutoffTooSmall {
            what: "thermal state",
            bound: tail.as_f64(),
            tol: THERMAL_TAIL_TOL,
        });
    }
    let head = -(-arg).exp_m1(); // 1 − e^{−ωβ}
    let ratio = (-arg).exp();
    let mut lambdas = Vec::with_capacity(dim);
    let mut lambda = head;
    for _ in 0..dim {
        lambdas.push(lambda);
        lambda *= ratio;
    }
    let mut as_hs = HSMatrix::zeros(dim);
    for (n, l) in lambdas.iter().enumerate() {
        as_hs.set(n, n, Complex::new(l.sqrt(), T::zero()));
    }
    Ok(ThermalStateVector {
        beta,
        omega,
        lambdas,
        as_hs,
    })
}

/// Displaced thermal state `Φ(z) = D(z)·Φ_β` (column scaling by `√λ`),
/// without the displacement domain guard — grid sweeps need large `|z|`.
fn displaced_thermal<T: Scalar>(z: Complex<T>, ts: &ThermalStateVector<T>) -> HSMatrix<T> {
    let dim = ts.dim();
    let mut c = displacement_elements(z, dim);
    for i in 0..dim {
        let w = ts.lambdas[i].sqrt();
        for j in 0..dim {
            let v = c.get(j, i) * w;
            c.set(j, i, v);
        }
    }
    c
}

/// KMS coherent state `Φ(z) = e^{zA†−z̄A}Φ_β = D(z)Φ_β`, with the
/// displacement guard `|z|² ≤ N/4` enforced (unit HS norm is the contract).
pub fn kms_coherent<T: Scalar>(z: Complex<T>, ts: &ThermalStateVector<T>) -> Result<HSMatrix<T>> {
    let limit = T::of(ts.dim() as f64) * T::of(0.25);
    if z.norm_sqr() > limit {
        return Err(Error::DomainGuard {
            z_norm_sq: z.norm_sqr().as_f64(),
            limit: limit.as_f64(),
        });
    }
    Ok(displaced_thermal(z, ts))
}

/// Quadrature sum `S = (1/2π)∫ Φ(z)Φ(z)† dxdy` restricted to the index block
/// `j, i < block`; converges to the identity there.
pub fn kms_resolution_operator<T: Scalar>(
    ts: &ThermalStateVector<T>,
    grid: &PlanarGrid<T>,
    block: usize,
) -> Result<HSMatrix<T>> {
    grid.coverage_guard(KMS_COVERAGE_TOL)?;
    let dim = ts.dim();
    if block == 0 || block > dim {
        return Err(Error::DimMismatch {
            left: block,
            right: dim,
        });
    }
    let nodes = grid.nodes();
    let weight = grid.node_weight();
    let partials: Vec<Vec<Complex<T>>> = nodes
        .par_chunks(NODE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![Complex::<T>::zero(); block * block];
            for &z in chunk {
                let c = displaced_thermal(z, ts);
                for j in 0..block {
                    for i in 0..block {
                        let mut dot = Complex::zero();
                        for m in 0..dim {
                            dot += c.get(j, m) * c.get(i, m).conj();
                        }
                        acc[j * block + i] += dot;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Complex::<T>::zero(); block * block];
    for partial in partials {
        for (t, p) in total.iter_mut().zip(partial) {
            *t += p;
        }
    }
    let mut s = HSMatrix::zeros(block);
    for j in 0..block {
        for i in 0..block {
            s.set(j, i, total[j * block + i] * weight);
        }
    }
    Ok(s)
}

/// Maximum deviation of the resolution quadrature from the identity on the
/// inner sub-block `j, i < N/4`.
pub fn kms_resolution_check<T: Scalar>(
    ts: &ThermalStateVector<T>,
    grid: &PlanarGrid<T>,
) -> Result<T> {
    let block = (ts.dim() / 4).max(1);
    let s = kms_resolution_operator(ts, grid, block)?;
    s.max_abs_diff(&HSMatrix::identity(block))
}

/// Which side the density operator acts on inside the KMS Husimi form.
///
/// Only [`RhoAction::Left`] (the default) yields a normalizable Husimi
/// density: the right algebra commutes with the left displacement, so the
/// right action gives a z-independent constant `Tr[ρ_β ρ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoAction {
    #[default]
    Left,
    Right,
    /// Two-sided `ρ^{1/2}·X·ρ^{1/2}`.
    Symmetric,
}

/// KMS Husimi evaluator: validates and pre-processes the density once, then
/// evaluates `⟨Φ(z)| ρ∨ |Φ(z)⟩₂` pointwise or summed over a grid.
pub struct KmsHusimi<'a, T> {
    ts: &'a ThermalStateVector<T>,
    action: RhoAction,
    rho: HSMatrix<T>,
    sqrt_rho: Option<HSMatrix<T>>,
}

impl<'a, T: Scalar> KmsHusimi<'a, T> {
    pub fn new(ts: &'a ThermalStateVector<T>, rho: &HSMatrix<T>, action: RhoAction) -> Result<Self> {
        if rho.dim() != ts.dim() {
            return Err(Error::DimMismatch {
                left: rho.dim(),
                right: ts.dim(),
            });
        }
        let trace = rho.trace();
        let deviation = ((trace.re - T::one()).abs() + trace.im.abs()).as_f64();
        if deviation > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensity {
                deviation,
                tol: DENSITY_TRACE_TOL,
            });
        }
        let sqrt_rho = match action {
            RhoAction::Symmetric => Some(hermitian_sqrt(rho)),
            _ => None,
        };
        Ok(KmsHusimi {
            ts,
            action,
            rho: rho.clone(),
            sqrt_rho,
        })
    }

    /// `Q(z)`; real and non-negative for positive semi-definite densities.
    pub fn eval(&self, z: Complex<T>) -> T {
        let c = displaced_thermal(z, self.ts);
        let value = match self.action {
            RhoAction::Left => {
                // Tr[C† ρ C]
                let rho_c = self.rho.matmul(&c).expect("dims checked");
                hs_inner(&c, &rho_c).expect("dims checked")
            }
            RhoAction::Right => {
                // Tr[C† C ρ] = ⟨C| Cρ⟩₂ (ρ self-adjoint)
                let c_rho = c.matmul(&self.rho).expect("dims checked");
                hs_inner(&c, &c_rho).expect("dims checked")
            }
            RhoAction::Symmetric => {
                let s = self.sqrt_rho.as_ref().expect("precomputed");
                let s_c_s = s.matmul(&c).expect("dims").matmul(s).expect("dims");
                hs_inner(&c, &s_c_s).expect("dims checked")
            }
        };
        value.re
    }

    /// `(1/2π)∫ Q dxdy` over the grid; `Tr[ρ] = 1` in the left convention
    /// once the grid covers the state.
    pub fn normalization(&self, grid: &PlanarGrid<T>) -> Result<T> {
        grid.coverage_guard(KMS_COVERAGE_TOL)?;
        let nodes = grid.nodes();
        let partials: Vec<T> = nodes
            .par_chunks(NODE_CHUNK)
            .map(|chunk| {
                let mut acc = T::zero();
                for &z in chunk {
                    acc += self.eval(z);
                }
                acc
            })
            .collect();
        let mut total = T::zero();
        for p in partials {
            total += p;
        }
        Ok(total * grid.node_weight())
    }
}

/// One-shot KMS Husimi in the default left convention.
pub fn kms_husimi<T: Scalar>(
    z: Complex<T>,
    ts: &ThermalStateVector<T>,
    rho: &HSMatrix<T>,
) -> Result<T> {
    kms_husimi_with(z, ts, rho, RhoAction::Left)
}

/// One-shot KMS Husimi with an explicit action side.
pub fn kms_husimi_with<T: Scalar>(
    z: Complex<T>,
    ts: &ThermalStateVector<T>,
    rho: &HSMatrix<T>,
    action: RhoAction,
) -> Result<T> {
    Ok(KmsHusimi::new(ts, rho, action)?.eval(z))
}

/// The extractable constraint of the KMS P-weight relation (the printed
/// equation pairs a vector with an operator and is not well-typed as
/// written): with the inner product read as the diagonal matrix element,
/// both sides collapse to `λ_n`, forcing the P-weight normalization
/// `∫ (d²z/π) P = 1`. Returns the residuals of the two identities it does
/// pin down at truncation: `max_n |⟨φ_n|ρ_β|φ_n⟩ − λ_n|` and
/// `|Σ λ_n + tail − 1|`.
pub fn kms_p_weight_check<T: Scalar>(ts: &ThermalStateVector<T>) -> (T, T) {
    let rho = ts.density();
    let mut worst = T::zero();
    let mut sum = T::zero();
    for (n, lambda) in ts.lambdas.iter().enumerate() {
        worst = worst.max((rho.get(n, n).re - *lambda).abs());
        sum += *lambda;
    }
    (worst, (sum + ts.tail_bound() - T::one()).abs())
}

/// Eigen-decomposition of a Hermitian grid by cyclic complex Jacobi
/// rotations; returns eigenvalues and the unitary of eigenvector columns.
fn hermitian_eigen<T: Scalar>(a: &HSMatrix<T>) -> (Vec<T>, HSMatrix<T>) {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = HSMatrix::identity(n);
    let scale = m.hs_norm().max(T::epsilon());
    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= scale * T::epsilon() * T::of(n as f64) {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag <= scale * T::epsilon() * T::of(0.01) {
                    continue;
                }
                let phase = apq / mag; // e^{iβ}
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (T::of(2.0) * mag);
                let t = if tau >= T::zero() {
                    (tau + (T::one() + tau * tau).sqrt()).recip()
                } else {
                    -((-tau + (T::one() + tau * tau).sqrt()).recip())
                };
                let c = (T::one() + t * t).sqrt().recip();
                let s = t * c;
                // U = [[c, s], [−s·e^{−iβ}, c·e^{−iβ}]] on columns (p, q).
                let upp = Complex::new(c, T::zero());
                let upq = Complex::new(s, T::zero());
                let uqp = phase.conj() * -s;
                let uqq = phase.conj() * c;
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, mip * upp + miq * uqp);
                    m.set(i, q, mip * upq + miq * uqq);
                }
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, upp.conj() * mpj + uqp.conj() * mqj);
                    m.set(q, j, upq.conj() * mpj + uqq.conj() * mqj);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * upp + viq * uqp);
                    v.set(i, q, vip * upq + viq * uqq);
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| m.get(i, i).re).collect();
    (eigenvalues, v)
}

/// Hermitian square root via the Jacobi decomposition; negative eigenvalues
/// (roundoff-level for PSD inputs) are clamped to zero.
fn hermitian_sqrt<T: Scalar>(a: &HSMatrix<T>) -> HSMatrix<T> {
    let (eigenvalues, v) = hermitian_eigen(a);
    let roots: Vec<T> = eigenvalues.iter().map(|l| l.max(T::zero()).sqrt()).collect();
    let n = a.dim();
    HSMatrix::from_fn(n, |i, j| {
        let mut acc = Complex::zero();
        for (k, root) in roots.iter().enumerate() {
            acc += v.get(i, k) * v.get(j, k).conj() * *root;
        }
        acc
    })
}
