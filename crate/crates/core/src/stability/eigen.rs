//! Dense eigenvalues through the characteristic polynomial and QR.

use num_complex::Complex64;

use super::charpoly::faddeev_leverrier;
use super::qr::hessenberg_qr;
use super::roots::{backward_error, polynomial_roots, RESIDUAL_TOL};
use super::STABILITY_TOL;
use crate::error::{LbError, Result};
use crate::matrix::CMatrix;

/// Spectrum summary of an evolution operator.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Eigenvalues sorted by decreasing modulus (ties by argument).
    pub eigenvalues: Vec<Complex64>,
    pub spectral_radius: f64,
    /// `spectral_radius ≤ 1 + STABILITY_TOL`.
    pub stable: bool,
}

/// All eigenvalues. Faddeev–LeVerrier coefficients and Aberth–Ehrlich roots
/// give the spectrum to the accuracy of the characteristic polynomial; QR
/// sweeps on the matrix, shifted by those roots, then resolve eigenvalues
/// that the polynomial blurs (a multiple root close to another cluster).
/// Each result must be a root of the polynomial to within `RESIDUAL_TOL`
/// normwise backward error.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let coeffs = faddeev_leverrier(m);
    let seeds = polynomial_roots(&coeffs).unwrap_or_default();
    let eig = hessenberg_qr(m, &seeds)?;
    let residuals: Vec<f64> = eig.iter().map(|&z| backward_error(&coeffs, z)).collect();
    if residuals.iter().any(|&r| !(r <= RESIDUAL_TOL)) {
        return Err(LbError::RootFinderNonConvergence {
            iterations: 0,
            residuals,
        });
    }
    Ok(eig)
}

pub fn spectral_radius(m: &CMatrix) -> Result<StabilityReport> {
    let mut eigenvalues = eigenvalues(m)?;
    sort_by_modulus(&mut eigenvalues);
    let spectral_radius = eigenvalues.first().map_or(0.0, |z| z.norm());
    Ok(StabilityReport {
        eigenvalues,
        spectral_radius,
        stable: spectral_radius <= 1.0 + STABILITY_TOL,
    })
}

pub(crate) fn sort_by_modulus(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then_with(|| a.arg().total_cmp(&b.arg()))
    });
}
