//! Quantum speed limit times for the driven qubit.
//!
//! For a pure start `ρ₀ = |φ₀⟩⟨φ₀|` the unified Mandelstam–Tamm /
//! Margolus–Levitin bound reads
//!
//! ```text
//! τ_QSL = max{1/Λ¹, 1/Λ², 1/Λ^∞} · sin² ℬ(ρ₀, ρ_τD),
//! Λᵖ    = τ_D⁻¹ ∫₀^τD ‖ρ̇_t‖_p dt,
//! ```
//!
//! with `‖·‖_p` the Schatten norm and `ℬ` the Bures angle. Starting from
//! `|+⟩`, both singular values of `ρ̇_t` are `|σ(t)|`, which makes the
//! operator-norm bound the largest and gives
//! `τ_QSL = τ_D (1 − P_τD) / (2N + 1 − P_τD)`.

use num_complex::Complex64;

use crate::distinguishability::{blp_measure, growth_intervals, StatePair};
use crate::error::{check_time, invalid, Error, Result};
use crate::linalg::{schatten_norm, singular_values};
use crate::model::{apply_map, Amplitude};
use crate::numeric::integrate_pieces;
use crate::params::PhysicalParams;
use crate::state::DressedDensityMatrix;

/// Absolute tolerance for `∫ ‖ρ̇‖ dt`.
pub const NORM_QUADRATURE_TOLERANCE: f64 = 1e-12;

/// Below this the state is considered not to move at all.
const NO_EVOLUTION: f64 = 1e-300;

const PURITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct QsltReport {
    pub tau_d: f64,
    pub tau_qsl: f64,
    pub bound_p1: f64,
    pub bound_p2: f64,
    pub bound_pinf: f64,
    /// Bures angle between start and target; only defined for a pure start.
    pub bures_angle: Option<f64>,
    /// `τ_QSL / τ_D`.
    pub ratio: f64,
    /// Set when the state does not move during the window; all bounds are 0.
    pub no_evolution: bool,
}

/// QSLT from `ρ_τ` to `ρ_{τ+τ_D}` for the mixed-state bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedQslt {
    pub tau: f64,
    pub tau_d: f64,
    pub tau_qsl: f64,
    pub ratio: f64,
    pub no_evolution: bool,
}

/// `arccos √⟨φ₀|ρ|φ₀⟩` for a pure start `|φ₀⟩⟨φ₀|`.
pub fn bures_angle(pure_start: &DressedDensityMatrix, evolved: &DressedDensityMatrix) -> Result<f64> {
    if !pure_start.is_pure(PURITY_TOLERANCE) {
        return Err(Error::InvalidState(format!(
            "Bures angle needs a pure start, purity is {}",
            pure_start.purity()
        )));
    }
    let fidelity = pure_start.overlap(evolved).clamp(0.0, 1.0);
    Ok(fidelity.sqrt().acos())
}

/// Singular values of `ρ̇_t = L_t ρ_t`, largest first.
///
/// `ρ̇_t` has diagonal `±p₊(0) σ(t)` and off-diagonal `ρ₊₋(0) ε̇(t)`.
pub fn generator_norms(params: &PhysicalParams, rho0: &DressedDensityMatrix, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    Ok(generator_singular_values(&Amplitude::new(params), rho0, t))
}

fn generator_singular_values(amp: &Amplitude, rho0: &DressedDensityMatrix, t: f64) -> (f64, f64) {
    let (eps, rate) = amp.value_and_rate(t);
    let sigma = 2.0 * (eps.conj() * rate).re;
    let diag = rho0.p_plus() * sigma;
    let off = rho0.coherence() * rate;
    let m = [
        [Complex64::new(diag, 0.0), off],
        [off.conj(), Complex64::new(-diag, 0.0)],
    ];
    singular_values(&m)
}

fn check_driving_time(tau_d: f64) -> Result<()> {
    if tau_d.is_finite() && tau_d > 0.0 {
        Ok(())
    } else {
        Err(invalid("tau_d", format!("driving time must be > 0, got {tau_d}")))
    }
}

/// Breakpoints of `[start, end]` at every sign change of `σ`.
fn kink_points(params: &PhysicalParams, start: f64, end: f64) -> Result<Vec<f64>> {
    let mut points = vec![start];
    for (s, e) in growth_intervals(params, start, end)? {
        for p in [s, e] {
            if p > *points.last().unwrap() && p < end {
                points.push(p);
            }
        }
    }
    points.push(end);
    Ok(points)
}

/// Unified speed-limit bound for the `|+⟩⟨+|` start over `[0, τ_D]`, with
/// every time average computed by adaptive quadrature.
pub fn qslt_pure(params: &PhysicalParams, tau_d: f64) -> Result<QsltReport> {
    check_driving_time(tau_d)?;
    let amp = Amplitude::new(params);
    let start = DressedDensityMatrix::plus();
    let target = apply_map(&start, amp.value(tau_d));
    let angle = bures_angle(&start, &target)?;
    let sin2 = angle.sin().powi(2);

    let points = kink_points(params, 0.0, tau_d)?;
    let average = |p: f64| {
        integrate_pieces(
            |t| schatten_norm(generator_singular_values(&amp, &start, t), p),
            &points,
            NORM_QUADRATURE_TOLERANCE,
        ) / tau_d
    };
    let lambdas = [average(1.0), average(2.0), average(f64::INFINITY)];

    if lambdas[2] <= NO_EVOLUTION || sin2 <= 0.0 {
        return Ok(QsltReport {
            tau_d,
            tau_qsl: 0.0,
            bound_p1: 0.0,
            bound_p2: 0.0,
            bound_pinf: 0.0,
            bures_angle: Some(angle),
            ratio: 0.0,
            no_evolution: true,
        });
    }
    let [bound_p1, bound_p2, bound_pinf] = lambdas.map(|l| sin2 / l);
    let tau_qsl = bound_p1.max(bound_p2).max(bound_pinf);
    Ok(QsltReport {
        tau_d,
        tau_qsl,
        bound_p1,
        bound_p2,
        bound_pinf,
        bures_angle: Some(angle),
        ratio: tau_qsl / tau_d,
        no_evolution: false,
    })
}

/// `τ_D (1 − P_τD) / (2N + 1 − P_τD)` from the BLP measure of the optimal
/// pair.
pub fn qslt_identity(params: &PhysicalParams, tau_d: f64) -> Result<f64> {
    check_driving_time(tau_d)?;
    let deficit = 1.0 - Amplitude::new(params).population(tau_d);
    let n = blp_measure(params, &StatePair::optimal(), tau_d)?.measure;
    let denominator = 2.0 * n + deficit;
    if denominator <= NO_EVOLUTION {
        return Err(Error::UndefinedRatio);
    }
    Ok(tau_d * deficit / denominator)
}

/// Mixed-state QSLT from `ρ_τ` to `ρ_{τ+τ_D}` for the `|+⟩` start:
///
/// ```text
/// τ_QSL = τ_D |(1 − 2P_τ)(P_τ − P_{τ+τ_D})| / ∫_τ^{τ+τ_D} |Ṗ_t| dt
/// ```
pub fn qslt_window(params: &PhysicalParams, tau: f64, tau_d: f64) -> Result<WindowedQslt> {
    check_time(tau)?;
    check_driving_time(tau_d)?;
    let amp = Amplitude::new(params);
    let (p_start, p_end) = (amp.population(tau), amp.population(tau + tau_d));
    let numerator = tau_d * ((1.0 - 2.0 * p_start) * (p_start - p_end)).abs();
    let points = kink_points(params, tau, tau + tau_d)?;
    let denominator = integrate_pieces(|t| amp.sigma(t).abs(), &points, NORM_QUADRATURE_TOLERANCE);
    if denominator <= NO_EVOLUTION {
        return Ok(WindowedQslt {
            tau,
            tau_d,
            tau_qsl: 0.0,
            ratio: 0.0,
            no_evolution: true,
        });
    }
    let tau_qsl = numerator / denominator;
    Ok(WindowedQslt {
        tau,
        tau_d,
        tau_qsl,
        ratio: tau_qsl / tau_d,
        no_evolution: false,
    })
}
