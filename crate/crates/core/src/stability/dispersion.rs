//! Long-wave dispersion and dissipation of the acoustic D1Q3 modes.
//!
//! Each eigenvalue is written `λ = exp(-i ω̄)` with the frequency convention
//! `ω = c k + i ν R k² + O(k³)`; that is `Re ω = -Im ln λ` and
//! `Im ω = -Re ln λ`. Real parts are odd in `k` and imaginary parts even,
//! so the fits use the bases `{k, k³}` and `{k², k⁴}`.

use num_complex::Complex64;

use super::operator::LinearizedOperator;
use super::roots::polynomial_roots;
use crate::equilibrium::EquilibriumModel;
use crate::error::{LbError, Result};
use crate::lattice::Lattice;

/// Largest wave number accepted by the fit.
pub const MAX_FIT_K: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionFit {
    pub c_plus: f64,
    pub c_minus: f64,
    /// Fitted `ν R+`.
    pub nu_r_plus: f64,
    /// Fitted `ν R-`.
    pub nu_r_minus: f64,
}

/// Frequency `ω` of an eigenvalue in the convention above.
pub fn frequency(lambda: Complex64) -> Complex64 {
    let l = lambda.ln();
    Complex64::new(-l.im, -l.re)
}

/// The two acoustic frequencies `(ω+, ω-)` at wave number `k`.
pub fn acoustic_frequencies(
    model: EquilibriumModel,
    u: f64,
    beta: f64,
    k: f64,
) -> Result<(Complex64, Complex64)> {
    let lat = Lattice::d1q3();
    let op = LinearizedOperator::new(&lat, model, 1.0, &[u], beta, &[k])?;
    let mut roots = polynomial_roots(&op.char_poly_d1q3()?)?;
    roots.sort_by(|a, b| (a - 1.0).norm().total_cmp(&(b - 1.0).norm()));
    let near = (roots[1] - 1.0).norm();
    let ghost = (roots[2] - 1.0).norm();
    // The non-hydrodynamic root sits near 1 - 2β; it must be well separated.
    if ghost < 4.0 * near {
        return Err(LbError::BranchMatching { k });
    }
    let (w0, w1) = (frequency(roots[0]), frequency(roots[1]));
    if (w0.re - w1.re).abs() < 1e-3 * k {
        return Err(LbError::BranchMatching { k });
    }
    Ok(if w0.re > w1.re { (w0, w1) } else { (w1, w0) })
}

/// Least-squares coefficient of the first basis function in
/// `y ≈ α x^p + γ x^(p+2)`.
fn fit_leading(xs: &[f64], ys: &[f64], p: i32) -> f64 {
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let b1 = x.powi(p);
        let b2 = x.powi(p + 2);
        s11 += b1 * b1;
        s12 += b1 * b2;
        s22 += b2 * b2;
        t1 += b1 * y;
        t2 += b2 * y;
    }
    let det = s11 * s22 - s12 * s12;
    if xs.len() < 2 || det.abs() <= f64::EPSILON * s11 * s22 {
        return t1 / s11;
    }
    (t1 * s22 - t2 * s12) / det
}

pub fn dispersion_fit(
    model: EquilibriumModel,
    u: f64,
    beta: f64,
    k_small: &[f64],
) -> Result<DispersionFit> {
    if k_small.is_empty() {
        return Err(LbError::InvalidParameter("no wave numbers to fit".into()));
    }
    if let Some(&k) = k_small.iter().find(|&&k| !(k > 0.0 && k <= MAX_FIT_K)) {
        return Err(LbError::InvalidParameter(format!(
            "dispersion fit needs 0 < k <= {MAX_FIT_K}, got {k}"
        )));
    }
    let mut plus = Vec::with_capacity(k_small.len());
    let mut minus = Vec::with_capacity(k_small.len());
    for &k in k_small {
        let (wp, wm) = acoustic_frequencies(model, u, beta, k)?;
        plus.push(wp);
        minus.push(wm);
    }
    let re = |w: &[Complex64]| w.iter().map(|z| z.re).collect::<Vec<_>>();
    let im = |w: &[Complex64]| w.iter().map(|z| z.im).collect::<Vec<_>>();
    Ok(DispersionFit {
        c_plus: fit_leading(k_small, &re(&plus), 1),
        c_minus: fit_leading(k_small, &re(&minus), 1),
        nu_r_plus: fit_leading(k_small, &im(&plus), 2),
        nu_r_minus: fit_leading(k_small, &im(&minus), 2),
    })
}
