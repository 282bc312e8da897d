//! Schur–Cohn test for polynomials with complex coefficients.
//!
//! One reduction step maps `p` of degree `n` to
//! `q(z) = (conj(a_n) p(z) - a_0 p*(z)) / z`, where `p*(z) = zⁿ conj(p(1/z̄))`.
//! When `|a_0| < |a_n|` the two polynomials have the same number of roots
//! strictly inside the unit disk, so `p` is Schur stable iff every step
//! keeps `|a_0| < |a_n|`.
//!
//! The closed disk is handled by testing `p((1 + δ) z)`: every root with
//! `|λ| ≤ 1` lands strictly inside, so roots on the unit circle count as
//! stable.

use num_complex::Complex64;

/// Boundary tolerance `δ` of the closed-disk test; the same disk as the
/// spectral-radius verdict.
pub const BOUNDARY_TOL: f64 = super::STABILITY_TOL;

/// `true` iff all roots of the polynomial (ascending coefficients) lie in
/// `|λ| ≤ 1 + δ`.
pub fn schur_cohn(coeffs: &[Complex64]) -> bool {
    let mut a: Vec<Complex64> = coeffs.to_vec();
    while a.len() > 1 && a.last().map_or(false, |c| c.norm() == 0.0) {
        a.pop();
    }
    if a.len() <= 1 {
        return true;
    }
    let r = 1.0 + BOUNDARY_TOL;
    let mut scale = 1.0;
    for c in a.iter_mut() {
        *c *= scale;
        scale *= r;
    }
    strict_schur(a)
}

/// Strict-interior test on already scaled coefficients.
fn strict_schur(mut a: Vec<Complex64>) -> bool {
    while a.len() > 1 {
        let n = a.len() - 1;
        let lead = a[n];
        let tail = a[0];
        if tail.norm() >= lead.norm() {
            return false;
        }
        let lead_c = lead.conj();
        let mut next: Vec<Complex64> = (1..=n)
            .map(|j| lead_c * a[j] - tail * a[n - j].conj())
            .collect();
        // Keep magnitudes near one between steps.
        let norm = next.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if norm > 0.0 {
            for c in next.iter_mut() {
                *c /= norm;
            }
        }
        a = next;
    }
    true
}

/// Monic-cubic convenience wrapper, `[a0, a1, a2, 1]`.
pub fn schur_cohn_cubic(coeffs: &[Complex64; 4]) -> bool {
    schur_cohn(coeffs)
}
