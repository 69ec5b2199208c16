//! Dense complex vector helpers.

use num_complex::Complex64;

/// `xᴴ y`.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn scale(x: &mut [Complex64], s: f64) {
    x.iter_mut().for_each(|a| *a *= s);
}

/// `y += a x`.
pub fn axpy(a: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Orthogonalizes `w` against the orthonormal columns in `bases` with one
/// reorthogonalization pass when cancellation is detected. Returns the
/// coefficients against the last basis group.
pub fn orthogonalize(w: &mut [Complex64], locked: &[Vec<Complex64>], basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); basis.len()];
    for pass in 0..2 {
        let before = norm(w);
        for q in locked {
            let c = dot(q, w);
            axpy(-c, q, w);
        }
        for (k, v) in basis.iter().enumerate() {
            let c = dot(v, w);
            axpy(-c, v, w);
            h[k] += c;
        }
        if pass == 0 && norm(w) > 0.717 * before {
            break;
        }
    }
    h
}
