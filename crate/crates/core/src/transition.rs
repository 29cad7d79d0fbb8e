//! Locating the Markovian → non-Markovian transition in the driving strength,
//! and parameter sweeps over `Ω` and over the window start `τ`.

use rayon::prelude::*;

use crate::distinguishability::{blp_measure, blp_measure_on, StatePair};
use crate::error::{invalid, Error, Result};
use crate::model::Amplitude;
use crate::numeric::bisect;
use crate::params::PhysicalParams;
use crate::speed_limit::{qslt_pure, qslt_window};

/// `N` above this counts as non-Markovian.
pub const BLP_THRESHOLD: f64 = 1e-10;
pub const DEFAULT_RESOLUTION: f64 = 1e-3;
pub const DEFAULT_DRIVE_CAP: f64 = 1e3;

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub drive_strength: f64,
    /// Start `τ` of the window for window sweeps; `None` for `Ω` sweeps,
    /// whose window is `[0, τ_D]`.
    pub tau_window_start: Option<f64>,
    pub tau_qsl: f64,
    pub tau_qsl_ratio: f64,
    /// BLP measure of the optimal pair over the same window.
    pub blp_measure: f64,
    /// `|+⟩` population at `τ_D` (Ω sweeps) or at `τ` (window sweeps).
    pub population: f64,
    pub population_deficit: f64,
}

/// Bounds for [`critical_drive_strength_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSearch {
    pub resolution: f64,
    /// Give up once the bracket would pass this driving strength.
    pub cap: f64,
}

impl Default for CriticalSearch {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            cap: DEFAULT_DRIVE_CAP,
        }
    }
}

fn check_tau_d(tau_d: f64) -> Result<()> {
    if tau_d.is_finite() && tau_d > 0.0 {
        Ok(())
    } else {
        Err(invalid("tau_d", format!("driving time must be > 0, got {tau_d}")))
    }
}

/// `N(Ω)` of the optimal pair over `[0, τ_D]`.
pub fn blp_at(lambda: f64, drive_strength: f64, tau_d: f64) -> Result<f64> {
    let params = PhysicalParams::resonant(lambda, drive_strength)?;
    Ok(blp_measure(&params, &StatePair::optimal(), tau_d)?.measure)
}

/// Finds the first `Ω` where `indicator` switches on: doubling from `Ω = 1`
/// for a bracket, then bisection to `search.resolution`.
fn onset<F>(mut indicator: F, search: CriticalSearch) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    if !(search.resolution.is_finite() && search.resolution > 0.0) {
        return Err(invalid("resolution", format!("must be > 0, got {}", search.resolution)));
    }
    if !(search.cap.is_finite() && search.cap > 0.0) {
        return Err(invalid("cap", format!("must be > 0, got {}", search.cap)));
    }
    if indicator(0.0)? {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0_f64.min(search.cap));
    while !indicator(hi)? {
        if hi >= search.cap {
            return Err(Error::NoTransition { cap: search.cap });
        }
        lo = hi;
        hi = (2.0 * hi).min(search.cap);
    }
    let mut failure = None;
    let (lo, hi) = bisect(
        |omega| match indicator(omega) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                true
            }
        },
        lo,
        hi,
        search.resolution,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(0.5 * (lo + hi)),
    }
}

/// Critical driving strength `Ω_c` beyond which the dynamics inside
/// `[0, τ_D]` is non-Markovian (`N > 10⁻¹⁰`), for a resonant qubit.
pub fn critical_drive_strength(lambda: f64, tau_d: f64, resolution: f64) -> Result<f64> {
    critical_drive_strength_with(
        lambda,
        tau_d,
        CriticalSearch {
            resolution,
            ..CriticalSearch::default()
        },
    )
}

pub fn critical_drive_strength_with(lambda: f64, tau_d: f64, search: CriticalSearch) -> Result<f64> {
    check_tau_d(tau_d)?;
    PhysicalParams::resonant(lambda, 0.0)?;
    onset(|omega| Ok(blp_at(lambda, omega, tau_d)? > BLP_THRESHOLD), search)
}

/// First `Ω` at which `τ_QSL / τ_D` drops below `1 − departure`. Located the
/// same way as [`critical_drive_strength`] so the two can be compared.
pub fn speed_up_onset(lambda: f64, tau_d: f64, departure: f64, search: CriticalSearch) -> Result<f64> {
    check_tau_d(tau_d)?;
    if !(departure.is_finite() && departure > 0.0 && departure < 1.0) {
        return Err(invalid("departure", format!("must lie in (0, 1), got {departure}")));
    }
    onset(
        |omega| {
            let params = PhysicalParams::resonant(lambda, omega)?;
            Ok(qslt_pure(&params, tau_d)?.ratio < 1.0 - departure)
        },
        search,
    )
}

/// `n_points` evenly spaced values on `[min, max]`.
pub fn linspace(min: f64, max: f64, n_points: usize) -> Vec<f64> {
    match n_points {
        0 => Vec::new(),
        1 => vec![min],
        n => {
            let step = (max - min) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { max } else { min + i as f64 * step })
                .collect()
        }
    }
}

fn check_range(name: &'static str, min: f64, max: f64, n_points: usize) -> Result<()> {
    if !(min.is_finite() && max.is_finite() && min >= 0.0 && max >= min) {
        return Err(invalid(name, format!("need 0 <= min <= max, got [{min}, {max}]")));
    }
    if n_points == 0 {
        return Err(invalid("n_points", "need at least one point"));
    }
    Ok(())
}

/// `τ_QSL/τ_D`, `N` and `1 − P_τD` for each `Ω` on an even grid.
pub fn sweep_omega(
    lambda: f64,
    tau_d: f64,
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
) -> Result<Vec<SweepRow>> {
    check_tau_d(tau_d)?;
    check_range("omega_range", omega_min, omega_max, n_points)?;
    linspace(omega_min, omega_max, n_points)
        .into_par_iter()
        .map(|omega| omega_row(lambda, omega, tau_d))
        .collect()
}

fn omega_row(lambda: f64, omega: f64, tau_d: f64) -> Result<SweepRow> {
    let params = PhysicalParams::resonant(lambda, omega)?;
    let report = qslt_pure(&params, tau_d)?;
    let blp = blp_measure(&params, &StatePair::optimal(), tau_d)?.measure;
    let population = Amplitude::new(&params).population(tau_d);
    Ok(SweepRow {
        lambda,
        drive_strength: omega,
        tau_window_start: None,
        tau_qsl: report.tau_qsl,
        tau_qsl_ratio: report.ratio,
        blp_measure: blp,
        population,
        population_deficit: 1.0 - population,
    })
}

/// Windowed QSLT from `ρ_τ` to `ρ_{τ+τ_D}` for each `Ω` and each `τ` on an
/// even grid. Rows are ordered by `Ω` first, then `τ`.
pub fn sweep_window(
    lambda: f64,
    drive_strengths: &[f64],
    tau_d: f64,
    tau_min: f64,
    tau_max: f64,
    n_points: usize,
) -> Result<Vec<SweepRow>> {
    check_tau_d(tau_d)?;
    check_range("tau_range", tau_min, tau_max, n_points)?;
    let taus = linspace(tau_min, tau_max, n_points);
    let jobs: Vec<(f64, f64)> = drive_strengths
        .iter()
        .flat_map(|&omega| taus.iter().map(move |&tau| (omega, tau)))
        .collect();
    jobs.into_par_iter()
        .map(|(omega, tau)| window_row(lambda, omega, tau, tau_d))
        .collect()
}

fn window_row(lambda: f64, omega: f64, tau: f64, tau_d: f64) -> Result<SweepRow> {
    let params = PhysicalParams::resonant(lambda, omega)?;
    let w = qslt_window(&params, tau, tau_d)?;
    let blp = blp_measure_on(&params, &StatePair::optimal(), tau, tau + tau_d)?.measure;
    let population = Amplitude::new(&params).population(tau);
    Ok(SweepRow {
        lambda,
        drive_strength: omega,
        tau_window_start: Some(tau),
        tau_qsl: w.tau_qsl,
        tau_qsl_ratio: w.ratio,
        blp_measure: blp,
        population,
        population_deficit: 1.0 - population,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
        assert_eq!(*linspace(0.0, 0.3, 7).last().unwrap(), 0.3);
    }

    #[test]
    fn no_transition_below_cap() {
        let search = CriticalSearch { resolution: 1e-2, cap: 3.0 };
        let err = critical_drive_strength_with(3.0, 1.0, search).unwrap_err();
        assert_eq!(err, Error::NoTransition { cap: 3.0 });
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(critical_drive_strength(3.0, 1.0, 0.0).is_err());
        assert!(critical_drive_strength(-3.0, 1.0, 1e-3).is_err());
        assert!(critical_drive_strength(3.0, 0.0, 1e-3).is_err());
        assert!(sweep_omega(3.0, 1.0, 5.0, 1.0, 10).is_err());
        assert!(sweep_omega(3.0, 1.0, 0.0, 1.0, 0).is_err());
        assert!(sweep_window(3.0, &[0.0], 1.0, -1.0, 1.0, 10).is_err());
    }

    #[test]
    fn sweep_rows_are_ordered() {
        let rows = sweep_omega(3.0, 1.0, 0.0, 20.0, 21).unwrap();
        assert_eq!(rows.len(), 21);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.drive_strength, i as f64);
            assert!(r.tau_qsl_ratio > 0.0 && r.tau_qsl_ratio <= 1.0 + 1e-9);
            assert!(r.blp_measure >= 0.0);
        }
        let rows = sweep_window(3.0, &[0.0, 2.0], 1.0, 0.0, 1.0, 5).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[4].drive_strength, 0.0);
        assert_eq!(rows[5].drive_strength, 2.0);
        assert_eq!(rows[5].tau_window_start, Some(0.0));
    }

    #[test]
    fn omega_sweep_shape_weak_coupling() {
        for r in sweep_omega(3.0, 1.0, 0.0, 20.0, 41).unwrap() {
            if r.drive_strength < 5.0 {
                assert!((r.tau_qsl_ratio - 1.0).abs() < 1e-6, "{r:?}");
            } else if r.drive_strength > 5.5 {
                assert!(r.tau_qsl_ratio < 1.0 - 1e-6, "{r:?}");
            }
        }
    }
}
