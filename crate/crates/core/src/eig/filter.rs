use num_complex::Complex64;

use super::SpectralResult;

/// Thresholds for [`filter_spurious`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterParams {
    /// Relative imaginary part above which a value counts as complex.
    pub imag_tol: f64,
    /// Half-width of the window around `2d/dx²`; `None` means `0.5 · 2d/dx²`.
    pub cutoff_window: Option<f64>,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams { imag_tol: 1e-6, cutoff_window: None }
    }
}

/// Partition of eigenvalue indices into kept and discarded sets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FilterReport {
    pub kept: Vec<usize>,
    pub discarded_near_cutoff: Vec<usize>,
    pub discarded_complex: Vec<usize>,
}

impl FilterReport {
    /// `"kept"`, `"near_cutoff"` or `"complex"` for index `i`.
    pub fn reason(&self, i: usize) -> &'static str {
        if self.discarded_near_cutoff.contains(&i) {
            "near_cutoff"
        } else if self.discarded_complex.contains(&i) {
            "complex"
        } else {
            "kept"
        }
    }
}

/// Discards eigenvalues within the window around `2d/dx²` and those with a
/// relative imaginary part above `imag_tol`; keeps the rest.
pub fn filter_spurious(res: &SpectralResult, dx: f64, d: usize, params: FilterParams) -> FilterReport {
    filter_values(&res.eigenvalues, dx, d, params)
}

pub fn filter_values(values: &[Complex64], dx: f64, d: usize, params: FilterParams) -> FilterReport {
    let cutoff = 2.0 * d as f64 / (dx * dx);
    let window = params.cutoff_window.unwrap_or(0.5 * cutoff);
    let mut report = FilterReport::default();
    for (i, l) in values.iter().enumerate() {
        if (l - cutoff).norm() < window {
            report.discarded_near_cutoff.push(i);
        } else if l.im.abs() > params.imag_tol * l.re.abs().max(1.0) {
            report.discarded_complex.push(i);
        } else {
            report.kept.push(i);
        }
    }
    report
}
