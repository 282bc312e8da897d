//! Eigenvalues of a dense complex matrix by Householder reduction to
//! Hessenberg form followed by single-shift QR sweeps with deflation.
//!
//! Polynomial roots passed in as `seeds` serve as the first shift for each
//! eigenvalue; Wilkinson shifts take over when a seed does not deflate, and
//! an exceptional shift breaks cycles on highly structured matrices.

use num_complex::Complex64;

use crate::error::{LbError, Result};
use crate::matrix::CMatrix;

/// Sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 30;

const EXCEPTIONAL_PERIOD: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

struct Work {
    n: usize,
    h: Vec<Complex64>,
}

impl Work {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.h[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.h[i * self.n + j]
    }
}

pub fn hessenberg_qr(a: &CMatrix, seeds: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.dim();
    let mut w = Work {
        n,
        h: a.as_slice().to_vec(),
    };
    if w.h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LbError::InvalidParameter(
            "matrix has non-finite entries".into(),
        ));
    }
    reduce_to_hessenberg(&mut w);
    let norm = w.h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let small = f64::EPSILON * norm;

    let mut eig = vec![ZERO; n];
    let mut hi = n;
    let mut sweeps = 0;
    let mut total = 0;
    while hi > 0 {
        let top = hi - 1;
        let mut l = top;
        while l > 0 && w.at(l, l - 1).norm() > small {
            l -= 1;
        }
        if l > 0 {
            *w.at_mut(l, l - 1) = ZERO;
        }
        if l == top {
            eig[top] = w.at(top, top);
            hi -= 1;
            sweeps = 0;
            continue;
        }
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(LbError::Internal(format!(
                "QR iteration did not converge after {total} sweeps"
            )));
        }
        let shift = if sweeps % EXCEPTIONAL_PERIOD == EXCEPTIONAL_PERIOD - 1 {
            w.at(top, top) + 0.75 * w.at(top, top - 1).norm()
        } else {
            let wilkinson = wilkinson_shift(&w, top);
            match nearest(seeds, wilkinson) {
                Some(seed) if sweeps == 0 => seed,
                _ => wilkinson,
            }
        };
        qr_sweep(&mut w, l, top, shift);
        sweeps += 1;
    }
    Ok(eig)
}

fn reduce_to_hessenberg(w: &mut Work) {
    let n = w.n;
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| w.at(i, k)).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }
        // H ← (I - 2vv*) H (I - 2vv*)
        for j in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * w.at(k + 1 + i, j))
                .sum();
            for (i, vi) in v.iter().enumerate() {
                *w.at_mut(k + 1 + i, j) -= 2.0 * vi * s;
            }
        }
        for r in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| w.at(r, k + 1 + i) * vi)
                .sum();
            for (i, vi) in v.iter().enumerate() {
                *w.at_mut(r, k + 1 + i) -= 2.0 * s * vi.conj();
            }
        }
        for i in k + 2..n {
            *w.at_mut(i, k) = ZERO;
        }
    }
}

/// Eigenvalue of the trailing 2×2 block closer to its last diagonal entry.
fn wilkinson_shift(w: &Work, top: usize) -> Complex64 {
    let a = w.at(top - 1, top - 1);
    let b = w.at(top - 1, top);
    let c = w.at(top, top - 1);
    let d = w.at(top, top);
    let half = (a - d) / 2.0;
    let root = (half * half + b * c).sqrt();
    let (e1, e2) = ((a + d) / 2.0 + root, (a + d) / 2.0 - root);
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

fn nearest(seeds: &[Complex64], z: Complex64) -> Option<Complex64> {
    seeds
        .iter()
        .copied()
        .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
}

/// Givens rotation `[c s; -s̄ c]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// One explicitly shifted QR step on rows and columns `l..=top`.
fn qr_sweep(w: &mut Work, l: usize, top: usize, shift: Complex64) {
    for i in l..=top {
        *w.at_mut(i, i) -= shift;
    }
    let mut rotations = Vec::with_capacity(top - l);
    for k in l..top {
        let (c, s) = givens(w.at(k, k), w.at(k + 1, k));
        for j in k..=top {
            let (x, y) = (w.at(k, j), w.at(k + 1, j));
            *w.at_mut(k, j) = c * x + s * y;
            *w.at_mut(k + 1, j) = -s.conj() * x + c * y;
        }
        rotations.push((c, s));
    }
    for (k, &(c, s)) in (l..top).zip(&rotations) {
        for r in l..=(k + 2).min(top) {
            let (x, y) = (w.at(r, k), w.at(r, k + 1));
            *w.at_mut(r, k) = c * x + s.conj() * y;
            *w.at_mut(r, k + 1) = -s * x + c * y;
        }
    }
    for i in l..=top {
        *w.at_mut(i, i) += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn triangular_and_diagonal() {
        let a = CMatrix::from_row_major(
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(5.0, 0.0),
                ZERO,
                c(-1.0, 0.5),
                c(3.0, 0.0),
                ZERO,
                ZERO,
                c(0.25, 0.0),
            ],
        );
        let got = sorted(hessenberg_qr(&a, &[]).unwrap());
        let want = sorted(vec![c(2.0, 0.0), c(-1.0, 0.5), c(0.25, 0.0)]);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-14);
        }
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let a = CMatrix::from_row_major(2, vec![ZERO, c(-1.0, 0.0), c(1.0, 0.0), ZERO]);
        let got = sorted(hessenberg_qr(&a, &[]).unwrap());
        assert!((got[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((got[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn cyclic_permutation_needs_exceptional_shift() {
        // Unshifted and Wilkinson-shifted QR stall on the cyclic shift.
        let n = 5;
        let mut a = CMatrix::zeros(n);
        for i in 0..n {
            a[((i + 1) % n, i)] = c(1.0, 0.0);
        }
        let got = hessenberg_qr(&a, &[]).unwrap();
        for z in &got {
            assert!((z.powi(5) - 1.0).norm() < 1e-12);
        }
        let mut args: Vec<f64> = got.iter().map(|z| z.arg()).collect();
        args.sort_by(f64::total_cmp);
        for pair in args.windows(2) {
            assert!(pair[1] - pair[0] > 1.0);
        }
    }

    #[test]
    fn semisimple_multiple_eigenvalue_is_resolved() {
        // Similarity transform of diag(1, 1, 1, 0.9, 0.9, 0.9): the roots of
        // its characteristic polynomial spread by ε^(1/3), QR keeps them tight.
        let n = 6;
        let mut d = CMatrix::zeros(n);
        for i in 0..n {
            d[(i, i)] = if i < 3 { c(1.0, 0.0) } else { c(0.9, 0.0) };
        }
        let mut s = CMatrix::identity(n);
        let mut s_inv = CMatrix::identity(n);
        for i in 0..n - 1 {
            s[(i, i + 1)] = c(0.5, 0.25);
        }
        // (I + N)^-1 = Σ (-N)^k for nilpotent N.
        let mut power = CMatrix::identity(n);
        let mut neg = CMatrix::zeros(n);
        for i in 0..n - 1 {
            neg[(i, i + 1)] = c(-0.5, -0.25);
        }
        for _ in 1..n {
            power = power.matmul(&neg);
            for (k, z) in power.as_slice().iter().enumerate() {
                s_inv[(k / n, k % n)] += *z;
            }
        }
        let a = s.matmul(&d).matmul(&s_inv);
        let got = hessenberg_qr(&a, &[]).unwrap();
        assert_eq!(got.iter().filter(|z| (*z - 1.0).norm() < 1e-12).count(), 3);
        assert_eq!(got.iter().filter(|z| (*z - 0.9).norm() < 1e-12).count(), 3);
    }

    #[test]
    fn rejects_non_finite() {
        let a = CMatrix::from_diagonal(&[c(f64::NAN, 0.0), c(1.0, 0.0)]);
        assert!(hessenberg_qr(&a, &[]).is_err());
    }
}
