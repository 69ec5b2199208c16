use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arnoldi::ShiftInvert;
use crate::error::{CpmError, Result};
use crate::sparse::SparseOperator;

/// 2-norm condition number estimate `σ_max / σ_min`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionEstimate {
    /// `f64::INFINITY` when the operator is singular.
    pub kappa: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub iterations: usize,
    pub diagnostic: Option<String>,
}

const REL_TOL: f64 = 1e-9;
const MAX_ITER: usize = 20_000;

/// `σ_max` by power iteration on `opᵀ op`, `σ_min` by inverse iteration
/// through a sparse LU of `op`.
pub fn condition_number_2norm(op: &SparseOperator) -> Result<ConditionEstimate> {
    let n = op.nrows();
    if n != op.ncols() || n == 0 {
        return Err(CpmError::Config(format!("condition number needs a nonempty square matrix, got {}x{}", n, op.ncols())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0d);
    let start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();

    let (lmax, it1) = power(&start, |x| op.matvec_transpose(&op.matvec(x)?))?;
    let sigma_max = lmax.sqrt();

    // the factor of -op works for op: singular values are sign-invariant
    let lu = match ShiftInvert::factor(op, 0.0)? {
        Some(lu) => lu,
        None => {
            return Ok(ConditionEstimate {
                kappa: f64::INFINITY,
                sigma_max,
                sigma_min: 0.0,
                iterations: it1,
                diagnostic: Some("matrix is singular to working precision".into()),
            })
        }
    };
    let (linv, it2) = power(&start, |x| Ok(lu.solve(&lu.solve_transpose(x))))?;
    if !(linv.is_finite() && linv > 0.0) {
        return Ok(ConditionEstimate {
            kappa: f64::INFINITY,
            sigma_max,
            sigma_min: 0.0,
            iterations: it1 + it2,
            diagnostic: Some("inverse iteration diverged".into()),
        });
    }
    let sigma_min = 1.0 / linv.sqrt();
    Ok(ConditionEstimate { kappa: sigma_max / sigma_min, sigma_max, sigma_min, iterations: it1 + it2, diagnostic: None })
}

/// Dominant eigenvalue of a symmetric positive semidefinite map by the
/// power method with Rayleigh quotients.
fn power(start: &[f64], apply: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<(f64, usize)> {
    let nrm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut x: Vec<f64> = start.to_vec();
    let n0 = nrm(&x);
    x.iter_mut().for_each(|a| *a /= n0);
    let mut prev = 0.0;
    for it in 1..=MAX_ITER {
        let y = apply(&x)?;
        let rq: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ny = nrm(&y);
        if !(ny.is_finite()) || ny == 0.0 {
            return Ok((if ny == 0.0 { 0.0 } else { f64::INFINITY }, it));
        }
        x = y.into_iter().map(|a| a / ny).collect();
        if it > 2 && (rq - prev).abs() <= REL_TOL * rq.abs() {
            return Ok((rq, it));
        }
        prev = rq;
    }
    Ok((prev, MAX_ITER))
}
