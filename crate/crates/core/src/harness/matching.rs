use super::analytic::AnalyticSpectrum;
use crate::error::{CpmError, Result};

/// One analytic eigenvalue copy and the computed value assigned to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchedPair {
    pub analytic: f64,
    pub computed: Option<f64>,
    pub abs_err: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatchReport {
    /// One entry per analytic copy, ascending.
    pub pairs: Vec<MatchedPair>,
    /// Analytic values with fewer computed copies than their multiplicity.
    pub gaps: Vec<f64>,
    /// Computed values inside the matched range that no analytic copy took.
    pub extras: Vec<f64>,
}

impl MatchReport {
    pub fn partial(&self) -> bool {
        !self.gaps.is_empty()
    }

    /// Largest error over the copies of `value`; `None` if any copy is missing.
    pub fn error_of(&self, value: f64) -> Option<f64> {
        let copies: Vec<_> = self.pairs.iter().filter(|p| p.analytic == value).collect();
        if copies.is_empty() || copies.iter().any(|p| p.abs_err.is_none()) {
            return None;
        }
        Some(copies.iter().filter_map(|p| p.abs_err).fold(0.0, f64::max))
    }
}

/// Assigns computed eigenvalues to the first `count` distinct analytic values.
///
/// Each analytic value owns the computed values closer to it than to its
/// distinct neighbors (midpoint windows); within a window the copies closest
/// to the analytic value are taken, up to its multiplicity. Input order of
/// `computed` does not matter.
pub fn match_eigenvalues(computed: &[f64], analytic: &AnalyticSpectrum, count: usize) -> MatchReport {
    let mut sorted: Vec<f64> = computed.to_vec();
    sorted.sort_by(f64::total_cmp);
    let vals = &analytic.values;
    let count = count.min(vals.len());
    let mut report = MatchReport::default();
    for i in 0..count {
        let (a, mult) = vals[i];
        let lo = if i == 0 { f64::NEG_INFINITY } else { 0.5 * (vals[i - 1].0 + a) };
        let hi = if i + 1 < vals.len() {
            0.5 * (a + vals[i + 1].0)
        } else {
            // beyond the listed spectrum: mirror the previous gap
            let gap = if i > 0 { a - vals[i - 1].0 } else { a.abs().max(1.0) };
            a + 0.5 * gap
        };
        let mut window: Vec<f64> = sorted.iter().copied().filter(|&c| c >= lo && c < hi).collect();
        window.sort_by(|x, y| (x - a).abs().total_cmp(&(y - a).abs()).then(x.total_cmp(y)));
        let take = window.len().min(mult);
        let mut chosen: Vec<f64> = window[..take].to_vec();
        chosen.sort_by(f64::total_cmp);
        report.extras.extend_from_slice(&window[take..]);
        for c in &chosen {
            report.pairs.push(MatchedPair { analytic: a, computed: Some(*c), abs_err: Some((c - a).abs()) });
        }
        for _ in take..mult {
            report.pairs.push(MatchedPair { analytic: a, computed: None, abs_err: None });
        }
        if take < mult {
            report.gaps.push(a);
        }
    }
    report.extras.sort_by(f64::total_cmp);
    report
}

/// Groups ascending values into clusters whose consecutive gaps are at most `tol`.
pub fn group_multiplets(values: &[f64], tol: f64) -> Vec<Vec<f64>> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some(g) if v - g[g.len() - 1] <= tol => g.push(v),
            _ => out.push(vec![v]),
        }
    }
    out
}

/// Least-squares slope of `log(error)` against `log(dx)`. An exact (zero)
/// error anywhere gives `f64::INFINITY`.
pub fn observed_order(errors: &[f64], dxs: &[f64]) -> Result<f64> {
    if errors.len() != dxs.len() {
        return Err(CpmError::Config(format!("{} errors for {} grid spacings", errors.len(), dxs.len())));
    }
    if errors.len() < 2 {
        return Err(CpmError::Config("an observed order needs at least two grid levels".into()));
    }
    if errors.iter().any(|&e| e == 0.0) {
        return Ok(f64::INFINITY);
    }
    let x: Vec<f64> = dxs.iter().map(|d| d.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(CpmError::Config("grid spacings must differ".into()));
    }
    Ok(sxy / sxx)
}
