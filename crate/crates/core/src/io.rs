//! Text output: spectra, histograms and point-cloud mode files.

use std::fmt::Write as _;

use crate::eig::{FilterReport, SpectralResult};
use crate::error::{CpmError, Result};
use crate::geometry::Point;

/// Columns `idx,re,im,residual,kept,reason`, one row per eigenvalue.
pub fn spectrum_csv(res: &SpectralResult, filter: &FilterReport) -> String {
    let mut s = String::from("idx,re,im,residual,kept,reason\n");
    for (i, l) in res.eigenvalues.iter().enumerate() {
        let reason = filter.reason(i);
        let _ = writeln!(
            s,
            "{},{:.15e},{:.15e},{:.3e},{},{}",
            i,
            l.re,
            l.im,
            res.residuals[i],
            (reason == "kept") as u8,
            reason
        );
    }
    s
}

/// Equal-width histogram over `[min, max]` of `values`: `(bin center, count)`.
pub fn histogram(values: &[f64], bins: usize) -> Vec<(f64, usize)> {
    if values.is_empty() || bins == 0 {
        return vec![];
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    counts.into_iter().enumerate().map(|(i, c)| (lo + (i as f64 + 0.5) * width, c)).collect()
}

/// Gnuplot-ready histogram of real parts.
pub fn histogram_data(values: &[f64], bins: usize) -> String {
    let mut s = String::from("# bin_center count\n");
    for (c, n) in histogram(values, bins) {
        let _ = writeln!(s, "{c:.6e} {n}");
    }
    s
}

/// Legacy ASCII VTK point cloud with one scalar field named `mode`.
pub fn vtk_point_cloud(title: &str, points: &[Point], values: &[f64]) -> Result<String> {
    if points.len() != values.len() {
        return Err(CpmError::Config(format!("{} points but {} values", points.len(), values.len())));
    }
    let n = points.len();
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "{}", title.replace('\n', " "));
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET POLYDATA");
    let _ = writeln!(s, "POINTS {n} float");
    for p in points {
        let _ = writeln!(s, "{} {} {}", p[0] as f32, p[1] as f32, p[2] as f32);
    }
    let _ = writeln!(s, "VERTICES {} {}", n, 2 * n);
    for i in 0..n {
        let _ = writeln!(s, "1 {i}");
    }
    let _ = writeln!(s, "POINT_DATA {n}");
    let _ = writeln!(s, "SCALARS mode float 1");
    let _ = writeln!(s, "LOOKUP_TABLE default");
    for v in values {
        let _ = writeln!(s, "{}", *v as f32);
    }
    Ok(s)
}
