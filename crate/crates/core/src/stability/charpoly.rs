//! Characteristic polynomials of small dense matrices.

use num_complex::Complex64;

use crate::matrix::CMatrix;

/// Monic characteristic polynomial `det(λI - A)` by the Faddeev–LeVerrier
/// recursion, coefficients in ascending order (`len = n + 1`, last = 1).
///
/// The matrix is scaled by its infinity norm first so that the recursion
/// works with eigenvalues inside the unit disk; coefficients are mapped
/// back afterwards.
pub fn faddeev_leverrier(a: &CMatrix) -> Vec<Complex64> {
    let n = a.dim();
    let norm = a.inf_norm();
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let scaled = CMatrix::from_row_major(n, a.as_slice().iter().map(|&x| x / scale).collect());

    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    // M_1 = I, c_{n-1} = -tr(A).
    let mut m = CMatrix::identity(n);
    for k in 1..=n {
        let am = scaled.matmul(&m);
        let c = -am.trace() / k as f64;
        coeffs[n - k] = c;
        m = am;
        for i in 0..n {
            m[(i, i)] += c;
        }
    }
    // Undo the scaling: coefficient of λ^j picks up scale^(n-j).
    let mut factor = 1.0;
    for j in (0..n).rev() {
        factor *= scale;
        coeffs[j] *= factor;
    }
    coeffs
}

/// Monic cubic of a 3×3 matrix from trace invariants, ascending order:
/// `[a0, a1, a2, 1]` with `a2 = -tr L`, `a1 = (tr²L - tr L²)/2`,
/// `a0 = -det L`.
pub fn cubic_from_traces(l: &CMatrix) -> [Complex64; 4] {
    assert_eq!(
        l.dim(),
        3,
        "cubic characteristic polynomial needs a 3x3 matrix"
    );
    let tr = l.trace();
    let tr2 = l.matmul(l).trace();
    [
        -l.determinant(),
        (tr * tr - tr2) / 2.0,
        -tr,
        Complex64::new(1.0, 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_binomial() {
        let p = faddeev_leverrier(&CMatrix::identity(3));
        let want = [-1.0, 3.0, -3.0, 1.0];
        for (a, b) in p.iter().zip(want) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-14);
        }
        let q = cubic_from_traces(&CMatrix::identity(3));
        for (a, b) in q.iter().zip(want) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_matrix() {
        let d = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.25),
            Complex64::new(0.1, 0.0),
        ];
        let p = faddeev_leverrier(&CMatrix::from_diagonal(&d));
        let q = cubic_from_traces(&CMatrix::from_diagonal(&d));
        for (a, b) in p.iter().zip(q.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
        // Constant term is -det = -(0.5)(-0.25i)(0.1).
        assert!((p[0] - Complex64::new(0.0, 0.0125)).norm() < 1e-16);
    }
}
