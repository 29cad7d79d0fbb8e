//! Qubit states in the dressed basis `{|+⟩, |−⟩}`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Slack allowed on the positivity and population bounds.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// A 2×2 density matrix written in the dressed basis.
///
/// Only `ρ₊₊` and `ρ₊₋` are stored; `ρ₋₋ = 1 − ρ₊₊` and `ρ₋₊ = ρ₊₋*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedDensityMatrix {
    p_plus: f64,
    coherence: Complex64,
}

impl DressedDensityMatrix {
    pub fn new(p_plus: f64, coherence: Complex64) -> Result<Self> {
        if !p_plus.is_finite() || !coherence.re.is_finite() || !coherence.im.is_finite() {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        if !(-STATE_TOLERANCE..=1.0 + STATE_TOLERANCE).contains(&p_plus) {
            return Err(Error::InvalidState(format!(
                "population {p_plus} outside [0, 1]"
            )));
        }
        let p_plus = p_plus.clamp(0.0, 1.0);
        if coherence.norm_sqr() > p_plus * (1.0 - p_plus) + STATE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "|coherence|² = {} exceeds p(1 − p) = {}",
                coherence.norm_sqr(),
                p_plus * (1.0 - p_plus)
            )));
        }
        Ok(Self { p_plus, coherence })
    }

    /// `|+⟩⟨+|`
    pub fn plus() -> Self {
        Self {
            p_plus: 1.0,
            coherence: Complex64::new(0.0, 0.0),
        }
    }

    /// `|−⟩⟨−|`
    pub fn minus() -> Self {
        Self {
            p_plus: 0.0,
            coherence: Complex64::new(0.0, 0.0),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            p_plus: 0.5,
            coherence: Complex64::new(0.0, 0.0),
        }
    }

    /// State with Bloch vector `(x, y, z)`, `z` pointing along `|+⟩`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(0.5 * (1.0 + z), Complex64::new(0.5 * x, -0.5 * y))
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        [
            2.0 * self.coherence.re,
            -2.0 * self.coherence.im,
            2.0 * self.p_plus - 1.0,
        ]
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn p_minus(&self) -> f64 {
        1.0 - self.p_plus
    }

    pub fn coherence(&self) -> Complex64 {
        self.coherence
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.p_plus * self.p_plus + self.p_minus() * self.p_minus() + 2.0 * self.coherence.norm_sqr()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }

    /// `Tr(ρ σ)` for two qubit states.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.p_plus * other.p_plus
            + self.p_minus() * other.p_minus()
            + 2.0 * (self.coherence * other.coherence.conj()).re
    }

    /// Matrix elements `[[ρ₊₊, ρ₊₋], [ρ₋₊, ρ₋₋]]`.
    pub fn to_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.p_plus, 0.0), self.coherence],
            [self.coherence.conj(), Complex64::new(self.p_minus(), 0.0)],
        ]
    }

    /// Builds a state without checking it; used where positivity follows from
    /// a contraction of an already valid state.
    pub(crate) fn from_parts_unchecked(p_plus: f64, coherence: Complex64) -> Self {
        Self { p_plus, coherence }
    }
}
