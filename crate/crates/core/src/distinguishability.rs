//! Trace distance, its rate of change, and the BLP non-Markovianity measure
//! restricted to a finite window.
//!
//! The measure counts every regrowth of the trace distance between two
//! evolving states,
//!
//! ```text
//! N = max over pairs of  ∫_{σ > 0} σ(t) dt,   σ = d/dt D(ρ₁(t), ρ₂(t)),
//! ```
//!
//! but only over `[0, τ_D]` (or a shifted window), not the infinite horizon.
//! The two numbers differ whenever the first revival comes after `τ_D`.
//!
//! Under the amplitude-damping map the difference of two states has
//! `Δp(t) = Δp(0) |ε|²` and `Δc(t) = Δc(0) ε`, so
//! `D(t) = √(Δp(0)² x² + |Δc(0)|² x)` with `x = |ε(t)|²`. `D` is increasing in
//! `x`, hence it grows exactly where `σ(t) = ∂ₜ|ε|² > 0`, whatever the pair.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::model::{apply_map, default_point_count, uniform_grid, Amplitude};
use crate::numeric::{adaptive_simpson, positive_intervals};
use crate::params::PhysicalParams;
use crate::state::DressedDensityMatrix;

/// `|σ|` below this counts as zero when scanning for growth.
pub const SIGMA_ZERO: f64 = 1e-12;
/// Sign changes of `σ` are located to this time resolution.
pub const TIME_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance of the direct `∫ max(σ, 0)` quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 1000;

/// Two initial states whose distinguishability is tracked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePair {
    pub first: DressedDensityMatrix,
    pub second: DressedDensityMatrix,
}

impl StatePair {
    pub fn new(first: DressedDensityMatrix, second: DressedDensityMatrix) -> Self {
        Self { first, second }
    }

    /// `(|+⟩⟨+|, |−⟩⟨−|)`, for which `D(t) = |ε(t)|²`.
    pub fn optimal() -> Self {
        Self::new(DressedDensityMatrix::plus(), DressedDensityMatrix::minus())
    }

    /// Trace distance of the pair after the map with amplitude `eps`.
    pub fn distance_after(&self, eps: Complex64) -> f64 {
        trace_distance(&apply_map(&self.first, eps), &apply_map(&self.second, eps))
    }

    pub fn initial_distance(&self) -> f64 {
        trace_distance(&self.first, &self.second)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlpResult {
    /// Total regrowth of the trace distance inside the window, `≥ 0`.
    pub measure: f64,
    /// Maximal sub-intervals on which the trace distance grows.
    pub growth_intervals: Vec<(f64, f64)>,
    pub pair: StatePair,
}

/// `½ ‖a − b‖₁`. The difference is Hermitian and traceless, so both
/// eigenvalues are `±√(Δp² + |Δc|²)`.
pub fn trace_distance(a: &DressedDensityMatrix, b: &DressedDensityMatrix) -> f64 {
    let dp = a.p_plus() - b.p_plus();
    let dc = a.coherence() - b.coherence();
    (dp * dp + dc.norm_sqr()).sqrt()
}

/// `σ(t)` for the optimal pair, i.e. `∂ₜ|ε(t)|²`.
pub fn sigma_rate(params: &PhysicalParams, t: f64) -> Result<f64> {
    crate::error::check_time(t)?;
    Ok(Amplitude::new(params).sigma(t))
}

fn check_window(start: f64, end: f64) -> Result<()> {
    if !(start.is_finite() && start >= 0.0) {
        return Err(invalid("window_start", format!("must be >= 0, got {start}")));
    }
    if !(end.is_finite() && end > start) {
        return Err(invalid(
            "window_end",
            format!("must exceed the window start {start}, got {end}"),
        ));
    }
    Ok(())
}

/// Sub-intervals of `[start, end]` where `σ > 0`: a scan at the default grid
/// density, each crossing refined by bisection.
pub fn growth_intervals(params: &PhysicalParams, start: f64, end: f64) -> Result<Vec<(f64, f64)>> {
    check_window(start, end)?;
    let amp = Amplitude::new(params);
    let span = end - start;
    let grid: Vec<f64> = uniform_grid(span, default_point_count(span))?
        .into_iter()
        .map(|t| start + t)
        .collect();
    Ok(positive_intervals(|t| amp.sigma(t), &grid, SIGMA_ZERO, TIME_TOLERANCE))
}

fn measure_from_intervals(amp: &Amplitude, pair: &StatePair, intervals: &[(f64, f64)]) -> f64 {
    intervals
        .iter()
        .map(|&(s, e)| pair.distance_after(amp.value(e)) - pair.distance_after(amp.value(s)))
        .sum::<f64>()
        .max(0.0)
}

/// BLP measure of one pair over `[0, window_end]`.
pub fn blp_measure(params: &PhysicalParams, pair: &StatePair, window_end: f64) -> Result<BlpResult> {
    blp_measure_on(params, pair, 0.0, window_end)
}

/// BLP measure of one pair over `[start, end]`.
pub fn blp_measure_on(params: &PhysicalParams, pair: &StatePair, start: f64, end: f64) -> Result<BlpResult> {
    let intervals = growth_intervals(params, start, end)?;
    Ok(result_for(params, pair, intervals))
}

fn result_for(params: &PhysicalParams, pair: &StatePair, intervals: Vec<(f64, f64)>) -> BlpResult {
    if pair.initial_distance() == 0.0 {
        return BlpResult {
            measure: 0.0,
            growth_intervals: Vec::new(),
            pair: *pair,
        };
    }
    let amp = Amplitude::new(params);
    BlpResult {
        measure: measure_from_intervals(&amp, pair, &intervals),
        growth_intervals: intervals,
        pair: *pair,
    }
}

/// `∫ max(σ, 0) dt` over `[0, window_end]` by adaptive Simpson on each growth
/// interval. For the optimal pair this must equal [`blp_measure`].
pub fn positive_rate_integral(params: &PhysicalParams, window_end: f64) -> Result<f64> {
    let amp = Amplitude::new(params);
    let intervals = growth_intervals(params, 0.0, window_end)?;
    let total: f64 = intervals.iter().map(|&(s, e)| e - s).sum();
    Ok(intervals
        .iter()
        .map(|&(s, e)| {
            let share = if total > 0.0 { (e - s) / total } else { 1.0 };
            adaptive_simpson(|t| amp.sigma(t).max(0.0), s, e, QUADRATURE_TOLERANCE * share)
        })
        .sum())
}

fn uniform_unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

fn uniform_in_ball<R: Rng>(rng: &mut R) -> [f64; 3] {
    let [x, y, z] = uniform_unit_vector(rng);
    let r = rng.random::<f64>().cbrt();
    [r * x, r * y, r * z]
}

fn state_at(v: [f64; 3]) -> DressedDensityMatrix {
    // Pure states can land a rounding error outside the Bloch ball.
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let s = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    DressedDensityMatrix::from_bloch(v[0] * s, v[1] * s, v[2] * s)
        .expect("vector inside the Bloch ball")
}

/// The `index`-th random pair for `seed`.
///
/// Every tenth pair is two independent mixed states drawn uniformly from the
/// Bloch ball; the rest are antipodal pure states with a uniformly random
/// axis. Each index draws from its own ChaCha stream, so the result does not
/// depend on evaluation order.
pub fn random_pair(seed: u64, index: u64) -> StatePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    if index % 10 == 9 {
        StatePair::new(state_at(uniform_in_ball(&mut rng)), state_at(uniform_in_ball(&mut rng)))
    } else {
        let n = uniform_unit_vector(&mut rng);
        StatePair::new(state_at(n), state_at([-n[0], -n[1], -n[2]]))
    }
}

/// Monte-Carlo maximization of the BLP measure over `n_samples` random pairs.
///
/// Deterministic for a fixed seed regardless of thread count; ties go to the
/// lowest sample index.
pub fn maximize_blp(params: &PhysicalParams, window_end: f64, n_samples: usize, seed: u64) -> Result<BlpResult> {
    if n_samples == 0 {
        return Err(invalid("n_samples", "need at least one sample"));
    }
    let intervals = growth_intervals(params, 0.0, window_end)?;
    let amp = Amplitude::new(params);
    let (best_index, _) = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let pair = random_pair(seed, i);
            let m = if pair.initial_distance() == 0.0 {
                0.0
            } else {
                measure_from_intervals(&amp, &pair, &intervals)
            };
            (i, m)
        })
        .reduce(
            || (u64::MAX, f64::NEG_INFINITY),
            |a, b| {
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(result_for(params, &random_pair(seed, best_index), intervals))
}
