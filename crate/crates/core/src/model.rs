//! Closed-form reduced dynamics of the driven qubit.
//!
//! Starting from `|+⟩` with the reservoir in its vacuum, the excited dressed
//! amplitude evolves as `c₊(t) = ε(t) c₊(0)` with
//!
//! ```text
//! ε(t) = e^{−a t/2} [cosh(D t/2) + (a/D) sinh(D t/2)],   a = λ − iδ,
//! D    = √(λ² − 2λ − δ² − 2iδλ) = √(a² − 2λ).
//! ```
//!
//! `ε` and `ε̇` are even in `D`, so the principal square root is always fine.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_time, invalid, Result};
use crate::params::PhysicalParams;
use crate::state::DressedDensityMatrix;

/// Grid density used for scans and traces: points per unit of `R t`.
pub const DEFAULT_POINTS_PER_UNIT_TIME: usize = 2000;

/// Below this `|D t / 2|` the hyperbolic terms are replaced by their series.
const SERIES_THRESHOLD: f64 = 1e-3;

/// Lorentzian spectral density of the reservoir, normalised so that its
/// Fourier transform reproduces the memory kernel `(λ/2) e^{(iδ − λ)τ}`
/// behind the closed-form amplitude.
pub fn spectral_density(params: &PhysicalParams, omega: f64) -> f64 {
    let lambda = params.lambda();
    let x = omega - params.reservoir_center();
    lambda * lambda / (2.0 * PI * (x * x + lambda * lambda))
}

/// `a = λ − iδ`
pub fn decay_exponent(params: &PhysicalParams) -> Complex64 {
    Complex64::new(params.lambda(), -params.detuning())
}

/// The complex rate `D`, principal branch.
pub fn complex_rate(params: &PhysicalParams) -> Complex64 {
    let lambda = params.lambda();
    let delta = params.detuning();
    Complex64::new(
        lambda * lambda - 2.0 * lambda - delta * delta,
        0.0 - 2.0 * delta * lambda, // avoids −0.0, which would flip the branch at δ = 0
    )
    .sqrt()
}

/// `sinh(z)/z`, continuous through `z = 0`.
fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_THRESHOLD {
        let z2 = z * z;
        1.0 + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

/// Both `ε(t)` and `ε̇(t)`, given `a` and `D`.
///
/// Away from `D t ≈ 0` the amplitude is written as a sum of the two decaying
/// modes `e^{s± t}`, `s± = (−a ± D)/2`, which never overflow.
fn amplitude_and_rate(a: Complex64, d: Complex64, lambda: f64, t: f64) -> (Complex64, Complex64) {
    let z = d * (0.5 * t);
    if z.norm() < SERIES_THRESHOLD {
        let envelope = (-a * (0.5 * t)).exp();
        let z2 = z * z;
        let cosh = 1.0 + z2 / 2.0 + z2 * z2 / 24.0;
        let half_t_sinhc = sinhc(z) * (0.5 * t);
        let eps = envelope * (cosh + a * half_t_sinhc);
        let rate = -envelope * half_t_sinhc * lambda;
        (eps, rate)
    } else {
        let fast = ((-a + d) * (0.5 * t)).exp();
        let slow = ((-a - d) * (0.5 * t)).exp();
        let ratio = a / d;
        let eps = 0.5 * ((1.0 + ratio) * fast + (1.0 - ratio) * slow);
        let rate = -(lambda / d) * 0.5 * (fast - slow);
        (eps, rate)
    }
}

/// Reusable evaluator of `ε(t)` and `ε̇(t)` for one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct Amplitude {
    a: Complex64,
    d: Complex64,
    lambda: f64,
}

impl Amplitude {
    pub fn new(params: &PhysicalParams) -> Self {
        Self::with_rate(params, complex_rate(params))
    }

    /// Uses a caller-chosen root `D` instead of the principal one.
    pub fn with_rate(params: &PhysicalParams, rate: Complex64) -> Self {
        Self {
            a: decay_exponent(params),
            d: rate,
            lambda: params.lambda(),
        }
    }

    /// `ε(t)`, assuming `t ≥ 0`.
    pub fn value(&self, t: f64) -> Complex64 {
        amplitude_and_rate(self.a, self.d, self.lambda, t).0
    }

    /// `ε̇(t) = −(λ/D) e^{−a t/2} sinh(D t/2)`.
    pub fn rate(&self, t: f64) -> Complex64 {
        amplitude_and_rate(self.a, self.d, self.lambda, t).1
    }

    pub fn value_and_rate(&self, t: f64) -> (Complex64, Complex64) {
        amplitude_and_rate(self.a, self.d, self.lambda, t)
    }

    /// `P(t) = |ε(t)|²`
    pub fn population(&self, t: f64) -> f64 {
        self.value(t).norm_sqr()
    }

    /// `σ(t) = ∂ₜ|ε(t)|² = 2 Re(ε* ε̇)`
    pub fn sigma(&self, t: f64) -> f64 {
        let (eps, rate) = self.value_and_rate(t);
        2.0 * (eps.conj() * rate).re
    }
}

pub fn amplitude(params: &PhysicalParams, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(Amplitude::new(params).value(t))
}

pub fn amplitude_derivative(params: &PhysicalParams, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(Amplitude::new(params).rate(t))
}

/// Applies the amplitude-damping map: `ρ₊₊ → ρ₊₊ |ε|²`, `ρ₊₋ → ρ₊₋ ε`.
pub fn evolve_density(
    params: &PhysicalParams,
    rho0: &DressedDensityMatrix,
    t: f64,
) -> Result<DressedDensityMatrix> {
    check_time(t)?;
    // Re-validate so hand-built states cannot slip through.
    let rho0 = DressedDensityMatrix::new(rho0.p_plus(), rho0.coherence())?;
    let eps = Amplitude::new(params).value(t);
    Ok(apply_map(&rho0, eps))
}

pub(crate) fn apply_map(rho0: &DressedDensityMatrix, eps: Complex64) -> DressedDensityMatrix {
    DressedDensityMatrix::from_parts_unchecked(
        rho0.p_plus() * eps.norm_sqr(),
        rho0.coherence() * eps,
    )
}

/// Sampled amplitude on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub times: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub amplitude_rate: Vec<Complex64>,
    /// `|ε|²`, the `|+⟩` population for a `|+⟩` start.
    pub population: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl AmplitudeTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub(crate) fn from_samples(times: Vec<f64>, samples: Vec<(Complex64, Complex64)>) -> Self {
        let (amplitude, amplitude_rate): (Vec<_>, Vec<_>) = samples.into_iter().unzip();
        let population = amplitude.iter().map(|e| e.norm_sqr()).collect();
        let sigma = amplitude
            .iter()
            .zip(&amplitude_rate)
            .map(|(e, r)| 2.0 * (e.conj() * r).re)
            .collect();
        Self {
            times,
            amplitude,
            amplitude_rate,
            population,
            sigma,
        }
    }
}

/// `n_points` uniformly spaced samples on `[0, t_end]`.
pub fn uniform_grid(t_end: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(invalid("t_end", format!("must be > 0, got {t_end}")));
    }
    if n_points < 2 {
        return Err(invalid("n_points", format!("need at least 2 points, got {n_points}")));
    }
    let step = t_end / (n_points - 1) as f64;
    let mut grid: Vec<f64> = (0..n_points).map(|i| i as f64 * step).collect();
    grid[n_points - 1] = t_end;
    Ok(grid)
}

/// Number of grid points covering a span at the default density.
pub fn default_point_count(span: f64) -> usize {
    ((span * DEFAULT_POINTS_PER_UNIT_TIME as f64).ceil() as usize + 1).max(DEFAULT_POINTS_PER_UNIT_TIME + 1)
}

pub fn trace(params: &PhysicalParams, t_end: f64, n_points: usize) -> Result<AmplitudeTrace> {
    let times = uniform_grid(t_end, n_points)?;
    let amp = Amplitude::new(params);
    let samples = times.iter().map(|&t| amp.value_and_rate(t)).collect();
    Ok(AmplitudeTrace::from_samples(times, samples))
}
