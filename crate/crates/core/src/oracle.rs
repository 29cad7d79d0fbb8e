//! Brute-force integration of the amplitude equations, independent of the
//! closed form in [`crate::model`].
//!
//! Eliminating the reservoir amplitudes leaves
//! `ċ₊(t) = −∫₀ᵗ f(t − s) c₊(s) ds`. The Lorentzian kernel is a single
//! exponential `f(τ) = f(0) e^{κτ}` with `κ = iδ − λ`, so the memory integral
//! `y(t) = ∫₀ᵗ f(t − s) c₊(s) ds` obeys `ẏ = f(0) c₊ + κ y` exactly and the
//! problem closes on two complex variables:
//!
//! ```text
//! ċ₊ = −y
//! ẏ  = f(0) c₊ + κ y
//! ```
//!
//! This is integrated with an embedded Dormand–Prince 5(4) pair.

use num_complex::Complex64;

use crate::error::{check_time, invalid, Error, Result};
use crate::model::{default_point_count, uniform_grid, AmplitudeTrace};
use crate::params::PhysicalParams;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `(c₊, y)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState {
    pub c_plus: Complex64,
    pub kernel_memory: Complex64,
}

impl OdeState {
    /// `c₊(0) = 1`, no memory: the reservoir starts in its vacuum.
    pub fn initial() -> Self {
        Self {
            c_plus: Complex64::new(1.0, 0.0),
            kernel_memory: Complex64::new(0.0, 0.0),
        }
    }

    fn axpy(self, h: f64, k: OdeState) -> Self {
        Self {
            c_plus: self.c_plus + k.c_plus * h,
            kernel_memory: self.kernel_memory + k.kernel_memory * h,
        }
    }
}

/// Reservoir correlation function `f(τ) = (λ/2) e^{(iδ − λ)τ}`.
pub fn correlation_kernel(params: &PhysicalParams, tau: f64) -> Result<Complex64> {
    check_time(tau)?;
    Ok(kernel_at_zero(params) * (kernel_exponent(params) * tau).exp())
}

fn kernel_at_zero(params: &PhysicalParams) -> f64 {
    0.5 * params.lambda()
}

fn kernel_exponent(params: &PhysicalParams) -> Complex64 {
    Complex64::new(-params.lambda(), params.detuning())
}

struct System {
    f0: f64,
    kappa: Complex64,
}

impl System {
    /// Largest eigenvalue modulus of the system matrix `[[0, −1], [f0, κ]]`.
    fn spectral_radius(&self) -> f64 {
        let disc = (self.kappa * self.kappa - 4.0 * self.f0).sqrt();
        (0.5 * (self.kappa + disc).norm()).max(0.5 * (self.kappa - disc).norm())
    }

    /// Longest step whose cubic Hermite interpolant stays within `tol`:
    /// the remainder is bounded by `h⁴ max|y⁗| / 384` and `|y⁗| ≲ r⁴ |y|`.
    fn max_dense_step(&self, tol: f64) -> f64 {
        (384.0 * tol).powf(0.25) / self.spectral_radius().max(f64::MIN_POSITIVE)
    }

    fn rhs(&self, s: OdeState) -> OdeState {
        OdeState {
            c_plus: -s.kernel_memory,
            kernel_memory: s.c_plus * self.f0 + self.kappa * s.kernel_memory,
        }
    }
}

// Dormand–Prince 5(4) tableau. The system is autonomous, so the nodes c_i
// are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin(terms: &[(f64, OdeState)]) -> OdeState {
    terms.iter().fold(
        OdeState {
            c_plus: Complex64::new(0.0, 0.0),
            kernel_memory: Complex64::new(0.0, 0.0),
        },
        |acc, &(w, k)| acc.axpy(w, k),
    )
}

/// One Dormand–Prince step. Returns the new state, its derivative (FSAL) and
/// the embedded error estimate.
fn dopri_step(sys: &System, y: OdeState, k1: OdeState, h: f64) -> (OdeState, OdeState, OdeState) {
    let k2 = sys.rhs(y.axpy(h, lin(&[(A21, k1)])));
    let k3 = sys.rhs(y.axpy(h, lin(&[(A31, k1), (A32, k2)])));
    let k4 = sys.rhs(y.axpy(h, lin(&[(A41, k1), (A42, k2), (A43, k3)])));
    let k5 = sys.rhs(y.axpy(h, lin(&[(A51, k1), (A52, k2), (A53, k3), (A54, k4)])));
    let k6 = sys.rhs(y.axpy(
        h,
        lin(&[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]),
    ));
    let y_new = y.axpy(h, lin(&[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]));
    let k7 = sys.rhs(y_new);
    let err = lin(&[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)]);
    let err = OdeState {
        c_plus: err.c_plus * h,
        kernel_memory: err.kernel_memory * h,
    };
    (y_new, k7, err)
}

fn error_norm(err: OdeState, y0: OdeState, y1: OdeState, tol: f64) -> f64 {
    let scale = |e: Complex64, a: Complex64, b: Complex64| e.norm() / (tol + tol * a.norm().max(b.norm()));
    let ec = scale(err.c_plus, y0.c_plus, y1.c_plus);
    let ey = scale(err.kernel_memory, y0.kernel_memory, y1.kernel_memory);
    ((ec * ec + ey * ey) / 2.0).sqrt()
}

/// Cubic Hermite interpolation inside a step.
fn hermite(y0: Complex64, d0: Complex64, y1: Complex64, d1: Complex64, h: f64, theta: f64) -> Complex64 {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + theta;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    y0 * h00 + d0 * (h10 * h) + y1 * h01 + d1 * (h11 * h)
}

fn interpolate(s0: OdeState, k0: OdeState, s1: OdeState, k1: OdeState, h: f64, theta: f64) -> OdeState {
    OdeState {
        c_plus: hermite(s0.c_plus, k0.c_plus, s1.c_plus, k1.c_plus, h, theta),
        kernel_memory: hermite(
            s0.kernel_memory,
            k0.kernel_memory,
            s1.kernel_memory,
            k1.kernel_memory,
            h,
            theta,
        ),
    }
}

/// Integrates the augmented system and reports `(c₊, y)` on `grid`.
///
/// `grid` must be sorted ascending and start at or after 0.
pub fn integrate_states(params: &PhysicalParams, grid: &[f64], tol: f64) -> Result<Vec<OdeState>> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(invalid("tol", format!("must be > 0, got {tol}")));
    }
    if let Some(&first) = grid.first() {
        check_time(first)?;
    }
    if grid.iter().any(|t| !t.is_finite()) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("grid", "times must be finite and sorted ascending"));
    }
    let Some(&t_end) = grid.last() else {
        return Ok(Vec::new());
    };

    let sys = System {
        f0: kernel_at_zero(params),
        kappa: kernel_exponent(params),
    };
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    let mut t = 0.0_f64;
    let mut y = OdeState::initial();
    let mut k = sys.rhs(y);

    while next < grid.len() && grid[next] <= 0.0 {
        out.push(y);
        next += 1;
    }

    let rate_scale = params.lambda().max(params.detuning().abs()).max(1.0);
    let h_max = sys.max_dense_step(tol);
    let mut h = (0.1 * tol.powf(0.2) / rate_scale)
        .min(h_max)
        .min(t_end.max(f64::MIN_POSITIVE));

    while next < grid.len() {
        let min_step = 1e-13 * t.abs().max(1.0);
        if h < min_step {
            return Err(Error::IntegrationFailure { t, step: h });
        }
        let h_try = h.min(h_max).min(t_end - t).max(min_step);
        let (y_new, k_new, err) = dopri_step(&sys, y, k, h_try);
        let e = error_norm(err, y, y_new, tol);
        if !e.is_finite() {
            h *= 0.2;
            continue;
        }
        let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
        if e <= 1.0 {
            let t_new = if t_end - t <= h_try { t_end } else { t + h_try };
            while next < grid.len() && grid[next] <= t_new {
                let theta = ((grid[next] - t) / (t_new - t)).clamp(0.0, 1.0);
                out.push(interpolate(y, k, y_new, k_new, t_new - t, theta));
                next += 1;
            }
            t = t_new;
            y = y_new;
            k = k_new;
            h = h_try * factor;
        } else {
            h = h_try * factor.min(1.0);
        }
    }
    Ok(out)
}

/// Integrates on a caller-supplied grid and packages the result as a trace.
pub fn integrate_amplitude_on(params: &PhysicalParams, grid: &[f64], tol: f64) -> Result<AmplitudeTrace> {
    let states = integrate_states(params, grid, tol)?;
    let samples = states.iter().map(|s| (s.c_plus, -s.kernel_memory)).collect();
    Ok(AmplitudeTrace::from_samples(grid.to_vec(), samples))
}

/// Integrates on `[0, t_end]` at the default grid density.
pub fn integrate_amplitude(params: &PhysicalParams, t_end: f64, tol: f64) -> Result<AmplitudeTrace> {
    let grid = uniform_grid(t_end, default_point_count(t_end))?;
    integrate_amplitude_on(params, &grid, tol)
}
