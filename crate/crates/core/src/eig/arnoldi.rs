//! Implicitly restarted shift-invert Arnoldi in complex arithmetic.
//!
//! Restarts apply the unwanted Ritz values as exact shifts through a Givens
//! bulge chase on the Hessenberg matrix. A Krylov space holds only one
//! direction per eigenvalue, so exactly repeated eigenvalues (common on
//! symmetric grids) are recovered by further passes run orthogonally to
//! everything found so far.

use faer::linalg::solvers::{Eigen, Solve, Svd};
use faer::sparse::linalg::solvers::Lu;
use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::vecops::{axpy, dot, norm, orthogonalize, scale};
use super::{Method, SpectralResult};
use crate::error::{CpmError, Result};
use crate::sparse::SparseOperator;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// `‖A⁻¹‖ · ‖A‖` above which a shift counts as an eigenvalue.
const NEAR_SINGULAR: f64 = 1e11;

/// Largest absolute row sum.
fn op_scale(op: &SparseOperator) -> f64 {
    (0..op.nrows()).map(|i| op.row(i).1.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Tuning knobs for [`arnoldi_near_shift_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArnoldiOptions {
    /// Krylov dimension; at least `2k + 10` when unset.
    pub ncv: Option<usize>,
    pub max_restarts: usize,
    /// Ritz estimate tolerance relative to the Ritz value.
    pub tol: f64,
    /// Seed of the start vector.
    pub seed: u64,
    /// Upper bound on deflated passes.
    pub max_passes: usize,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        ArnoldiOptions { ncv: None, max_restarts: 300, tol: 1e-13, seed: 0x5eed_cafe, max_passes: 4 }
    }
}

/// Sparse LU factorization of `-op - σI`, applied as `(-op - σI)⁻¹`.
pub struct ShiftInvert {
    lu: Lu<usize, f64>,
    n: usize,
    shift: f64,
}

impl ShiftInvert {
    /// Factors `-op - σI`. When the factorization breaks down or the shift sits
    /// on an eigenvalue to working precision, retries once with `σ` moved by
    /// `1e-8` of the operator scale.
    pub fn new(op: &SparseOperator, shift: f64) -> Result<Self> {
        let scale = op_scale(op).max(shift.abs()).max(1.0);
        if let Some(s) = Self::factor(op, shift)? {
            if s.growth() * scale < NEAR_SINGULAR {
                return Ok(s);
            }
        }
        let perturbed = shift - 1e-8 * scale;
        Self::factor(op, perturbed)?.ok_or_else(|| {
            CpmError::Numeric(format!(
                "shifted operator is singular at shift {shift} and at the perturbed shift {perturbed}"
            ))
        })
    }

    /// Lower bound on `‖(-op - σI)⁻¹‖₂` from a fixed probe.
    fn growth(&self) -> f64 {
        let b: Vec<f64> = (0..self.n).map(|i| if i % 2 == 0 { 1.0 } else { -0.5 } + (i % 5) as f64 / 10.0).collect();
        let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let x = self.solve(&b);
        x.iter().map(|v| v * v).sum::<f64>().sqrt() / nb
    }

    /// `None` when the factorization fails or produces non-finite solves.
    pub fn factor(op: &SparseOperator, shift: f64) -> Result<Option<Self>> {
        let n = op.nrows();
        if n != op.ncols() {
            return Err(CpmError::Config(format!("operator is {}x{}, not square", n, op.ncols())));
        }
        let a = op.scaled(-1.0).shifted(shift)?.to_faer()?;
        let lu = match a.sp_lu() {
            Ok(lu) => lu,
            Err(_) => return Ok(None),
        };
        let s = ShiftInvert { lu, n, shift };
        let probe: Vec<f64> = (0..n).map(|i| 1.0 + (i % 7) as f64 / 7.0).collect();
        let ok = s.solve(&probe).iter().chain(&s.solve_transpose(&probe)).all(|v| v.is_finite());
        Ok(ok.then_some(s))
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `(-op - σI)⁻¹ b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = Mat::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_in_place(x.as_mut());
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }

    /// `(-op - σI)⁻ᵀ b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let mut x = Mat::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_transpose_in_place(x.as_mut());
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }

    pub fn apply(&self, x: &[C]) -> Vec<C> {
        let mut m = Mat::from_fn(self.n, 2, |i, j| if j == 0 { x[i].re } else { x[i].im });
        self.lu.solve_in_place(m.as_mut());
        (0..self.n).map(|i| C::new(m[(i, 0)], m[(i, 1)])).collect()
    }
}

/// The `k` eigenpairs of `-op` nearest `shift`.
pub fn arnoldi_near_shift(op: &SparseOperator, k: usize, shift: f64) -> Result<SpectralResult> {
    arnoldi_near_shift_with(op, k, shift, ArnoldiOptions::default())
}

pub fn arnoldi_near_shift_with(
    op: &SparseOperator,
    k: usize,
    shift: f64,
    opts: ArnoldiOptions,
) -> Result<SpectralResult> {
    let n = op.nrows();
    if k == 0 || 2 * k >= n {
        return Err(CpmError::Config(format!("requested {k} eigenvalues of a {n}x{n} operator; need 0 < k < m/2")));
    }
    let si = ShiftInvert::new(op, shift)?;
    let apply = |x: &[C]| si.apply(x);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut found: Vec<(C, Vec<C>)> = Vec::new();
    let mut locked: Vec<Vec<C>> = Vec::new();
    for pass in 0..opts.max_passes.max(1) {
        let avail = n - locked.len();
        let ncv = opts.ncv.unwrap_or(2 * k + 10).max(2 * k + 1).min(avail.saturating_sub(1));
        if ncv <= k {
            break;
        }
        let ritz = match ira(&apply, &locked, n, k, ncv, &opts, &mut rng) {
            Ok(r) => r,
            Err(e) if pass == 0 => return Err(e),
            Err(_) => break,
        };
        let new_pairs = if locked.is_empty() { ritz } else { recover(&apply, &locked, ritz)? };

        let mut mags: Vec<f64> = found.iter().map(|p| p.0.norm()).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        let threshold = if mags.len() >= k { mags[k - 1] } else { 0.0 };
        let useful = new_pairs.iter().any(|p| p.0.norm() >= threshold * (1.0 - 1e-10));
        for (theta, x) in new_pairs {
            let mut q = x.clone();
            orthogonalize(&mut q, &locked, &[]);
            let nq = norm(&q);
            if nq > 1e-8 * norm(&x) {
                scale(&mut q, 1.0 / nq);
                locked.push(q);
            }
            found.push((theta, x));
        }
        if !useful {
            break;
        }
    }
    found.sort_by(|a, b| b.0.norm().total_cmp(&a.0.norm()));
    found.truncate(k);
    let sigma = si.shift();
    let pairs = polish(op, &apply, found.into_iter().map(|p| p.1).collect())?;
    SpectralResult::from_pairs(op, pairs, Method::Arnoldi, sigma)
}

/// One block inverse-iteration step through the (backward stable) LU, then
/// Rayleigh-Ritz with `-op` on the resulting subspace. Removes the rounding
/// the Krylov recurrence picks up from the dominant Ritz values.
fn polish(op: &SparseOperator, apply: &dyn Fn(&[C]) -> Vec<C>, xs: Vec<Vec<C>>) -> Result<Vec<(C, Vec<C>)>> {
    let mut q: Vec<Vec<C>> = Vec::with_capacity(xs.len());
    for x in &xs {
        let mut y = apply(x);
        let ny = norm(&y);
        orthogonalize(&mut y, &[], &q);
        let nq = norm(&y);
        if nq > 1e-10 * ny {
            scale(&mut y, 1.0 / nq);
            q.push(y);
        }
    }
    let aq: Vec<Vec<C>> = q
        .iter()
        .map(|x| Ok(op.matvec_complex(x)?.into_iter().map(|v| -v).collect()))
        .collect::<Result<_>>()?;
    let kq = q.len();
    let g = Mat::<C>::from_fn(kq, kq, |i, j| dot(&q[i], &aq[j]));
    let evd = Eigen::new(g.as_ref()).map_err(|e| CpmError::Numeric(format!("Rayleigh-Ritz eigensolve failed: {e:?}")))?;
    let (s, w) = (evd.S().column_vector(), evd.U());
    Ok((0..kq)
        .map(|j| {
            let mut x = vec![ZERO; q[0].len()];
            for (i, qi) in q.iter().enumerate() {
                axpy(w[(i, j)], qi, &mut x);
            }
            (s[j], x)
        })
        .collect())
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n).map(|_| C::new(rng.random_range(-1.0..1.0), 0.0)).collect()
}

/// A unit vector orthogonal to `locked` and `basis`.
fn fresh_direction(rng: &mut ChaCha8Rng, n: usize, locked: &[Vec<C>], basis: &[Vec<C>]) -> Vec<C> {
    loop {
        let mut r = random_vector(rng, n);
        orthogonalize(&mut r, locked, basis);
        let nr = norm(&r);
        if nr > 1e-8 {
            scale(&mut r, 1.0 / nr);
            return r;
        }
    }
}

/// Arnoldi steps `from..ncv`; `v` holds `from + 1` vectors on entry.
/// Returns the residual vector and its norm.
fn extend(
    apply: &dyn Fn(&[C]) -> Vec<C>,
    locked: &[Vec<C>],
    v: &mut Vec<Vec<C>>,
    h: &mut Mat<C>,
    from: usize,
    ncv: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<C>, f64) {
    let n = v[0].len();
    let mut f = vec![ZERO; n];
    let mut beta = 0.0;
    for j in from..ncv {
        let mut w = apply(&v[j]);
        let hcol = orthogonalize(&mut w, locked, &v[..=j]);
        for (i, hi) in hcol.iter().enumerate() {
            h[(i, j)] = *hi;
        }
        beta = norm(&w);
        if beta <= 1e-14 * norm(&hcol) {
            h[(j + 1, j)] = ZERO;
            beta = 0.0;
            if j + 1 < ncv {
                let r = fresh_direction(rng, n, locked, &v[..]);
                v.push(r);
            } else {
                f = vec![ZERO; n];
            }
            continue;
        }
        h[(j + 1, j)] = C::new(beta, 0.0);
        if j + 1 < ncv {
            scale(&mut w, 1.0 / beta);
            v.push(w);
        } else {
            f = w;
        }
    }
    (f, beta)
}

/// Implicitly restarted Arnoldi for the `k` largest-magnitude eigenvalues of
/// `apply`, restricted to the orthogonal complement of `locked`.
fn ira(
    apply: &dyn Fn(&[C]) -> Vec<C>,
    locked: &[Vec<C>],
    n: usize,
    k: usize,
    ncv: usize,
    opts: &ArnoldiOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(C, Vec<C>)>> {
    let mut v = vec![fresh_direction(rng, n, locked, &[])];
    let mut h = Mat::<C>::zeros(ncv + 1, ncv);
    let (mut f, mut beta) = extend(apply, locked, &mut v, &mut h, 0, ncv, rng);

    for restart in 0..=opts.max_restarts {
        let mut hm = Mat::<C>::from_fn(ncv, ncv, |i, j| h[(i, j)]);
        let evd = Eigen::new(hm.as_ref())
            .map_err(|e| CpmError::Numeric(format!("Hessenberg eigensolve failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let y = evd.U();
        let mut order: Vec<usize> = (0..ncv).collect();
        order.sort_by(|&a, &b| s[b].norm().total_cmp(&s[a].norm()).then(a.cmp(&b)));
        let converged = |i: usize| {
            let yn: f64 = (0..ncv).map(|r| y[(r, i)].norm_sqr()).sum::<f64>().sqrt();
            beta * y[(ncv - 1, i)].norm() / yn <= opts.tol * s[i].norm()
        };
        let nconv = order[..k].iter().filter(|&&i| converged(i)).count();
        if nconv == k {
            return Ok(order[..k]
                .iter()
                .map(|&i| {
                    let mut x = vec![ZERO; n];
                    for (r, vr) in v.iter().enumerate() {
                        axpy(y[(r, i)], vr, &mut x);
                    }
                    let nx = norm(&x);
                    scale(&mut x, 1.0 / nx);
                    (s[i], x)
                })
                .collect());
        }
        if restart == opts.max_restarts {
            return Err(CpmError::Numeric(format!(
                "Arnoldi did not converge: {nconv} of {k} eigenvalues after {} restarts (ncv = {ncv})",
                opts.max_restarts
            )));
        }

        let np = ncv - k;
        let kp = (k + nconv.min(np / 2)).min(ncv - 1);
        let shifts: Vec<C> = order[kp..].iter().map(|&i| s[i]).collect();
        let mut q = Mat::<C>::identity(ncv, ncv);
        for mu in shifts {
            qr_shift_step(&mut hm, &mut q, mu);
        }

        let mut vnew: Vec<Vec<C>> = (0..=kp)
            .map(|j| {
                let mut x = vec![ZERO; n];
                for (r, vr) in v.iter().enumerate() {
                    let c = q[(r, j)];
                    if c != ZERO {
                        axpy(c, vr, &mut x);
                    }
                }
                x
            })
            .collect();
        let mut fnew = vnew.pop().expect("kp + 1 columns");
        scale_c(&mut fnew, hm[(kp, kp - 1)]);
        axpy(q[(ncv - 1, kp - 1)], &f, &mut fnew);

        h = Mat::<C>::zeros(ncv + 1, ncv);
        for i in 0..kp {
            for j in 0..kp {
                h[(i, j)] = hm[(i, j)];
            }
        }
        v = vnew;
        // keep the new residual exactly orthogonal to the retained basis
        orthogonalize(&mut fnew, locked, &v);
        let bnew = norm(&fnew);
        if bnew <= 1e-14 * hm_norm(&hm) {
            h[(kp, kp - 1)] = ZERO;
            let r = fresh_direction(rng, n, locked, &v);
            v.push(r);
        } else {
            h[(kp, kp - 1)] = C::new(bnew, 0.0);
            scale(&mut fnew, 1.0 / bnew);
            v.push(fnew);
        }
        (f, beta) = extend(apply, locked, &mut v, &mut h, kp, ncv, rng);
    }
    unreachable!("the restart loop returns")
}

fn scale_c(x: &mut [C], s: C) {
    x.iter_mut().for_each(|a| *a *= s);
}

fn hm_norm(h: &Mat<C>) -> f64 {
    let mut s = 0.0;
    for j in 0..h.ncols() {
        for i in 0..h.nrows() {
            s += h[(i, j)].norm_sqr();
        }
    }
    s.sqrt().max(f64::MIN_POSITIVE)
}

/// Rotation `[c s; -s̄ c]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens(x: C, y: C) -> (f64, C) {
    if y == ZERO {
        (1.0, ZERO)
    } else if x == ZERO {
        (0.0, y.conj() / y.norm())
    } else {
        let ax = x.norm();
        let rho = ax.hypot(y.norm());
        (ax / rho, (x / ax) * y.conj() / rho)
    }
}

/// One implicit single-shift QR sweep on upper Hessenberg `h`, accumulated
/// into `q`. Negligible subdiagonals are zeroed first and each unreduced
/// block is swept separately.
fn qr_shift_step(h: &mut Mat<C>, q: &mut Mat<C>, mu: C) {
    let m = h.nrows();
    for i in 0..m - 1 {
        let s = h[(i, i)].norm() + h[(i + 1, i + 1)].norm();
        if h[(i + 1, i)].norm() <= f64::EPSILON * s {
            h[(i + 1, i)] = ZERO;
        }
    }
    let mut l = 0;
    while l < m {
        let mut u = l;
        while u + 1 < m && h[(u + 1, u)] != ZERO {
            u += 1;
        }
        if u > l {
            chase(h, q, l, u, mu);
        }
        l = u + 1;
    }
}

fn chase(h: &mut Mat<C>, q: &mut Mat<C>, l: usize, u: usize, mu: C) {
    let m = h.nrows();
    let mut x = h[(l, l)] - mu;
    let mut y = h[(l + 1, l)];
    for i in l..u {
        let (c, s) = givens(x, y);
        let start = if i > l { i - 1 } else { l };
        for j in start..m {
            let (a, b) = (h[(i, j)], h[(i + 1, j)]);
            h[(i, j)] = a * c + s * b;
            h[(i + 1, j)] = -s.conj() * a + b * c;
        }
        for r in 0..=(i + 2).min(u) {
            let (a, b) = (h[(r, i)], h[(r, i + 1)]);
            h[(r, i)] = a * c + b * s.conj();
            h[(r, i + 1)] = -a * s + b * c;
        }
        for r in 0..m {
            let (a, b) = (q[(r, i)], q[(r, i + 1)]);
            q[(r, i)] = a * c + b * s.conj();
            q[(r, i + 1)] = -a * s + b * c;
        }
        if i > l {
            h[(i + 1, i - 1)] = ZERO;
        }
        if i + 1 < u {
            x = h[(i + 1, i)];
            y = h[(i + 2, i)];
        }
    }
}

/// Maps Ritz pairs `(θ, z)` of the operator restricted to the complement of
/// `locked` back to eigenvectors `z + Q c` of the full operator, where
/// `(θ I - QᴴAQ) c = Qᴴ A z`.
fn recover(apply: &dyn Fn(&[C]) -> Vec<C>, locked: &[Vec<C>], ritz: Vec<(C, Vec<C>)>) -> Result<Vec<(C, Vec<C>)>> {
    let kq = locked.len();
    let aq: Vec<Vec<C>> = locked.iter().map(|x| apply(x)).collect();
    let t = Mat::<C>::from_fn(kq, kq, |i, j| dot(&locked[i], &aq[j]));
    let mut out = Vec::with_capacity(ritz.len());
    for (theta, z) in ritz {
        let az = apply(&z);
        let b: Vec<C> = locked.iter().map(|qi| dot(qi, &az)).collect();
        let a = Mat::<C>::from_fn(kq, kq, |i, j| if i == j { theta - t[(i, j)] } else { -t[(i, j)] });
        let c = pinv_solve(&a, &b)?;
        let mut x = z;
        for (ci, qi) in c.iter().zip(locked) {
            axpy(*ci, qi, &mut x);
        }
        let nx = norm(&x);
        scale(&mut x, 1.0 / nx);
        out.push((theta, x));
    }
    Ok(out)
}

/// Minimum-norm least-squares solution through the SVD.
fn pinv_solve(a: &Mat<C>, b: &[C]) -> Result<Vec<C>> {
    let n = a.nrows();
    let svd = Svd::new(a.as_ref()).map_err(|e| CpmError::Numeric(format!("SVD failed: {e:?}")))?;
    let s = svd.S().column_vector();
    let (u, v) = (svd.U(), svd.V());
    let smax = (0..n).map(|i| s[i].re).fold(0.0, f64::max);
    let mut x = vec![ZERO; n];
    for k in 0..n {
        let sk = s[k].re;
        if sk <= 1e-12 * smax {
            continue;
        }
        let coef: C = (0..n).map(|i| u[(i, k)].conj() * b[i]).sum::<C>() / sk;
        for i in 0..n {
            x[i] += v[(i, k)] * coef;
        }
    }
    Ok(x)
}
