//! 2×2 complex matrix helpers.

use num_complex::Complex64;

pub type Matrix2 = [[Complex64; 2]; 2];

/// Singular values of a 2×2 complex matrix, largest first.
///
/// Uses `s₁² + s₂² = ‖M‖_F²` and `s₁ s₂ = |det M|`; the smaller value is
/// recovered from the determinant to avoid cancellation.
pub fn singular_values(m: &Matrix2) -> (f64, f64) {
    let frob2: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
    let s_max = (0.5 * (frob2 + disc)).sqrt();
    let s_min = if s_max > 0.0 { det / s_max } else { 0.0 };
    (s_max, s_min)
}

/// Schatten p-norm from singular values; `p = ∞` gives the operator norm.
pub fn schatten_norm(singular: (f64, f64), p: f64) -> f64 {
    let (a, b) = singular;
    if p.is_infinite() {
        a.max(b)
    } else {
        (a.powf(p) + b.powf(p)).powf(1.0 / p)
    }
}
