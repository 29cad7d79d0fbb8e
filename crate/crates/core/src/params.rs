//! Model parameters.
//!
//! Every frequency is measured in units of the reservoir coupling strength
//! `R`, and every time in units of `1/R`. Internally `R = 1`.

use crate::error::{invalid, Result};

/// Dimensionless parameters of the driven qubit and its Lorentzian reservoir.
///
/// The classical drive never appears on its own in the dissipative dynamics;
/// it enters only through the effective frequency `2 Ω + ω₀` of the dressed
/// qubit and hence through the detuning from the reservoir center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    lambda: f64,
    drive_strength: f64,
    qubit_freq: f64,
    reservoir_center: f64,
}

impl PhysicalParams {
    pub fn new(
        lambda: f64,
        drive_strength: f64,
        qubit_freq: f64,
        reservoir_center: f64,
    ) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid("lambda", format!("spectral width must be > 0, got {lambda}")));
        }
        if !(drive_strength.is_finite() && drive_strength >= 0.0) {
            return Err(invalid(
                "drive_strength",
                format!("driving strength must be >= 0, got {drive_strength}"),
            ));
        }
        if !qubit_freq.is_finite() {
            return Err(invalid("qubit_freq", "must be finite"));
        }
        if !reservoir_center.is_finite() {
            return Err(invalid("reservoir_center", "must be finite"));
        }
        Ok(Self {
            lambda,
            drive_strength,
            qubit_freq,
            reservoir_center,
        })
    }

    /// Qubit in resonance with the reservoir center (`ω₀ = ω_c = 0`), so the
    /// detuning is exactly `2 Ω`.
    pub fn resonant(lambda: f64, drive_strength: f64) -> Result<Self> {
        Self::new(lambda, drive_strength, 0.0, 0.0)
    }

    /// Same reservoir and qubit, different driving strength.
    pub fn with_drive_strength(&self, drive_strength: f64) -> Result<Self> {
        Self::new(self.lambda, drive_strength, self.qubit_freq, self.reservoir_center)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn drive_strength(&self) -> f64 {
        self.drive_strength
    }

    pub fn qubit_freq(&self) -> f64 {
        self.qubit_freq
    }

    pub fn reservoir_center(&self) -> f64 {
        self.reservoir_center
    }

    /// `ω′ = 2 Ω + ω₀`.
    pub fn effective_freq(&self) -> f64 {
        2.0 * self.drive_strength + self.qubit_freq
    }

    /// `δ = ω′ − ω_c`.
    pub fn detuning(&self) -> f64 {
        self.effective_freq() - self.reservoir_center
    }
}
