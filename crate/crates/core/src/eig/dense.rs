use faer::linalg::solvers::Eigen;
use num_complex::Complex64;

use super::{Method, SpectralResult};
use crate::error::{CpmError, Result};
use crate::sparse::SparseOperator;

/// Largest operator handed to the dense solver by default.
pub const DEFAULT_DENSE_MAX: usize = 4000;

/// Complete eigendecomposition of `-op` (Hessenberg reduction and QR iteration).
pub fn dense_spectrum(op: &SparseOperator) -> Result<SpectralResult> {
    dense_spectrum_with_limit(op, DEFAULT_DENSE_MAX)
}

pub fn dense_spectrum_with_limit(op: &SparseOperator, max_m: usize) -> Result<SpectralResult> {
    let n = op.nrows();
    if n != op.ncols() {
        return Err(CpmError::Config(format!("operator is {}x{}, not square", n, op.ncols())));
    }
    if n > max_m {
        return Err(CpmError::Config(format!(
            "operator size {n} exceeds the dense solver limit {max_m}; use the Arnoldi solver"
        )));
    }
    let a = op.scaled(-1.0).to_dense();
    let evd = Eigen::new_from_real(a.as_ref())
        .map_err(|e| CpmError::Numeric(format!("dense eigensolver did not converge for n = {n}: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let pairs = (0..n)
        .map(|j| {
            let v: Vec<Complex64> = (0..n).map(|i| u[(i, j)]).collect();
            (s[j], v)
        })
        .collect();
    SpectralResult::from_pairs(op, pairs, Method::Dense, 0.0)
}
