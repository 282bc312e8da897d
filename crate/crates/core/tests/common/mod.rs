//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use lbstab::matrix::CMatrix;
use nalgebra::{Complex, DMatrix, Schur};
use num_complex::Complex64;
use rand::Rng;

pub const CS2: f64 = 1.0 / 3.0;

/// Asymptotically free pressure written directly from its definition.
pub fn af_pressure(u: f64) -> (f64, f64) {
    let s = (1.0 + 3.0 * u * u).sqrt();
    ((2.0 / 3.0) * s - 1.0 / 3.0 - u * u, 2.0 * u / s - 2.0 * u)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_row_major(n, (0..n * n).map(|_| random_complex(rng)).collect())
}

fn to_nalgebra(m: &CMatrix) -> DMatrix<Complex<f64>> {
    let n = m.dim();
    DMatrix::from_row_slice(
        n,
        n,
        &m.as_slice()
            .iter()
            .map(|z| Complex::new(z.re, z.im))
            .collect::<Vec<_>>(),
    )
}

/// Eigenvalues from the diagonal of a complex Schur form.
pub fn schur_eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    let schur = Schur::try_new(to_nalgebra(m), 1e-15, 10_000)?;
    let (_, t) = schur.unpack();
    Some(
        t.diagonal()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect(),
    )
}

/// Characteristic polynomial `det(zI - A)` (ascending, monic) recovered by a
/// discrete Fourier transform of determinants sampled on a circle.
pub fn interpolated_charpoly(a: &CMatrix) -> Vec<Complex64> {
    let n = a.dim();
    let radius = a.determinant().norm().powf(1.0 / n as f64).max(0.5);
    let samples: Vec<Complex64> = (0..=n)
        .map(|j| {
            let z =
                Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / (n + 1) as f64);
            let mut shifted = CMatrix::zeros(n);
            for r in 0..n {
                for c in 0..n {
                    shifted[(r, c)] = -a[(r, c)];
                }
                shifted[(r, r)] += z;
            }
            shifted.determinant()
        })
        .collect();
    let mut coeffs: Vec<Complex64> = (0..=n)
        .map(|m| {
            let s: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    p * Complex64::from_polar(
                        1.0,
                        -std::f64::consts::TAU * (j * m) as f64 / (n + 1) as f64,
                    )
                })
                .sum();
            s / (n + 1) as f64 / radius.powi(m as i32)
        })
        .collect();
    coeffs[n] = Complex64::new(1.0, 0.0);
    coeffs
}

/// Roots of a monic polynomial (ascending coefficients) as eigenvalues of
/// its companion matrix.
pub fn companion_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let mut c = CMatrix::zeros(n);
    for i in 1..n {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        c[(i, n - 1)] = -coeffs[i] / coeffs[n];
    }
    schur_eigenvalues(&c)
}

/// Largest distance from an element of `a` to its greedily matched partner
/// in `b`, relative to `1 + |z|`.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut pool = b.to_vec();
    let mut worst = 0.0f64;
    for z in a {
        let (idx, d) = pool
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("pools have equal length");
        worst = worst.max(d / (1.0 + z.norm()));
        pool.swap_remove(idx);
    }
    worst
}

/// Monic cubic `[a0, a1, a2, 1]` with the given roots.
pub fn cubic_from_roots(r: [Complex64; 3]) -> [Complex64; 4] {
    [
        -r[0] * r[1] * r[2],
        r[0] * r[1] + r[1] * r[2] + r[0] * r[2],
        -(r[0] + r[1] + r[2]),
        Complex64::new(1.0, 0.0),
    ]
}

/// Per-step log growth `ln(a_{t+1}/a_t)` fitted over the tail of a series.
pub fn tail_slope(series: &[f64], skip: usize) -> f64 {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .enumerate()
        .skip(skip)
        .map(|(t, a)| (t as f64, a.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
