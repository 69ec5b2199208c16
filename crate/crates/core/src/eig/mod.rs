//! Spectra of the assembled operators.
//!
//! Solvers work on `A = -op`, so surface eigenvalues come out as nonnegative
//! reals. Small problems use a dense decomposition; large ones use
//! shift-invert Arnoldi.

mod arnoldi;
mod cond;
mod dense;
mod filter;
mod vecops;

pub use arnoldi::{arnoldi_near_shift, arnoldi_near_shift_with, ArnoldiOptions, ShiftInvert};
pub use cond::{condition_number_2norm, ConditionEstimate};
pub use dense::{dense_spectrum, dense_spectrum_with_limit, DEFAULT_DENSE_MAX};
pub use filter::{filter_spurious, filter_values, FilterParams, FilterReport};

use num_complex::Complex64;

use crate::band::Band;
use crate::discretize::evaluation_row;
use crate::error::{CpmError, Result};
use crate::geometry::Point;
use crate::sparse::SparseOperator;

/// Residual bound every reported eigenpair should meet.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dense,
    Arnoldi,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::Arnoldi => "arnoldi",
        }
    }
}

/// Eigenpairs of `-op`, sorted by real part (then imaginary part).
#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub eigenvalues: Vec<Complex64>,
    /// Unit 2-norm eigenvectors over the band.
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub method: Method,
    pub shift: f64,
    /// `‖(-op) v - λ v‖ / ‖v‖` per pair.
    pub residuals: Vec<f64>,
}

impl SpectralResult {
    /// Normalizes, measures residuals against `-op` and sorts.
    pub fn from_pairs(
        op: &SparseOperator,
        pairs: Vec<(Complex64, Vec<Complex64>)>,
        method: Method,
        shift: f64,
    ) -> Result<Self> {
        let mut rows = Vec::with_capacity(pairs.len());
        for (lambda, mut v) in pairs {
            let nv = vecops::norm(&v);
            if nv > 0.0 {
                vecops::scale(&mut v, 1.0 / nv);
            }
            let r = residual(op, lambda, &v)?;
            rows.push((lambda, v, r));
        }
        rows.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        let mut out = SpectralResult { eigenvalues: vec![], eigenvectors: vec![], method, shift, residuals: vec![] };
        for (l, v, r) in rows {
            out.eigenvalues.push(l);
            out.eigenvectors.push(v);
            out.residuals.push(r);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `‖(-op) v - λ v‖₂ / ‖v‖₂`.
pub fn residual(op: &SparseOperator, lambda: Complex64, v: &[Complex64]) -> Result<f64> {
    let av = op.matvec_complex(v)?;
    let r: f64 = av.iter().zip(v).map(|(a, x)| (-*a - lambda * x).norm_sqr()).sum::<f64>().sqrt();
    Ok(r / vecops::norm(v).max(f64::MIN_POSITIVE))
}

/// Which eigensolver [`solve`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Dense when `m` does not exceed the dense limit, Arnoldi otherwise.
    Auto,
    Dense,
    Arnoldi,
}

impl Solver {
    pub fn from_name(name: &str) -> Result<Solver> {
        match name {
            "auto" => Ok(Solver::Auto),
            "dense" => Ok(Solver::Dense),
            "arnoldi" => Ok(Solver::Arnoldi),
            other => Err(CpmError::Config(format!("unknown solver '{other}'; valid: auto, dense, arnoldi"))),
        }
    }
}

/// Full spectrum (dense) or the `k` eigenvalues nearest `shift` (Arnoldi).
pub fn solve(op: &SparseOperator, k: usize, shift: f64, solver: Solver, dense_max: usize) -> Result<SpectralResult> {
    let dense = match solver {
        Solver::Dense => true,
        Solver::Arnoldi => false,
        Solver::Auto => op.nrows() <= dense_max,
    };
    if dense {
        dense_spectrum_with_limit(op, dense_max.max(if solver == Solver::Dense { op.nrows() } else { 0 }))
    } else {
        arnoldi_near_shift(op, k, shift)
    }
}

/// Evaluates an eigenvector at surface points by interpolation on the band.
pub fn sample_eigenfunction(vector: &[Complex64], band: &Band, points: &[Point]) -> Result<Vec<Complex64>> {
    if vector.len() != band.m() {
        return Err(CpmError::Config(format!(
            "eigenvector has length {} but the band has {} nodes",
            vector.len(),
            band.m()
        )));
    }
    points
        .iter()
        .map(|&x| Ok(evaluation_row(band, x)?.into_iter().map(|(j, w)| vector[j] * w).sum()))
        .collect()
}

/// Real field for plotting: rotates the vector so its largest entry is real
/// and positive, then takes real parts.
pub fn real_mode(vector: &[Complex64]) -> Vec<f64> {
    let big = vector.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
    let phase = if big.norm() > 0.0 { big.conj() / big.norm() } else { Complex64::new(1.0, 0.0) };
    vector.iter().map(|v| (v * phase).re).collect()
}
