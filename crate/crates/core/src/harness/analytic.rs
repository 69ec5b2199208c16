use std::f64::consts::PI;

use crate::discretize::BcSpec;
use crate::error::{CpmError, Result};
pub use crate::geometry::curve_arclength as arclength;
use crate::geometry::Surface;

/// Surfaces with a closed-form Laplace-Beltrami spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumCase {
    /// Closed curve of total length `length`: `(2πn/L)²`, double for `n ≥ 1`.
    ClosedCurve { length: f64 },
    /// Open curve with zero end values: `(kπ/L)²`, `k ≥ 1`.
    IntervalDirichlet { length: f64 },
    /// Open curve with zero end derivatives: `(kπ/L)²`, `k ≥ 0`.
    IntervalNeumann { length: f64 },
    /// Hemisphere with zero normal derivative on the equator:
    /// `l(l+1)/R²` with multiplicity `l + 1`.
    HemisphereNeumann { radius: f64 },
    /// Hemisphere vanishing on the equator: `l(l+1)/R²`, `l ≥ 1`, multiplicity `l`.
    HemisphereDirichlet { radius: f64 },
    /// Circle of radius `R`: `(n/R)²`, double for `n ≥ 1`.
    Circle { radius: f64 },
    /// Sphere of radius `R`: `l(l+1)/R²` with multiplicity `2l + 1`.
    Sphere { radius: f64 },
}

impl SpectrumCase {
    /// The reference spectrum for a surface and boundary condition.
    pub fn for_surface(surface: &Surface, bc: BcSpec) -> Result<SpectrumCase> {
        let interval = |length: f64| match bc {
            BcSpec::Dirichlet | BcSpec::NaiveDirichlet => Ok(SpectrumCase::IntervalDirichlet { length }),
            BcSpec::Neumann | BcSpec::NaiveNeumann => Ok(SpectrumCase::IntervalNeumann { length }),
            BcSpec::None => Err(CpmError::Config("open curves need a boundary condition".into())),
        };
        match surface {
            Surface::Circle(c) => Ok(SpectrumCase::Circle { radius: c.radius }),
            Surface::Egg(e) => Ok(SpectrumCase::ClosedCurve { length: arclength(e, 1e-13) }),
            Surface::Cosine(c) => interval(arclength(c, 1e-13)),
            Surface::Segment(s) => interval(s.length()),
            Surface::Semicircle(s) => interval(PI * s.radius),
            Surface::Sphere(s) => Ok(SpectrumCase::Sphere { radius: s.radius }),
            Surface::Hemisphere(h) => match bc {
                BcSpec::Dirichlet | BcSpec::NaiveDirichlet => Ok(SpectrumCase::HemisphereDirichlet { radius: h.radius }),
                BcSpec::Neumann | BcSpec::NaiveNeumann => Ok(SpectrumCase::HemisphereNeumann { radius: h.radius }),
                BcSpec::None => Err(CpmError::Config("the hemisphere needs a boundary condition".into())),
            },
            other => Err(CpmError::Config(format!(
                "no analytic spectrum is available for surface '{}'",
                other.kind_name()
            ))),
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            SpectrumCase::ClosedCurve { length }
            | SpectrumCase::IntervalDirichlet { length }
            | SpectrumCase::IntervalNeumann { length } => length,
            SpectrumCase::HemisphereNeumann { radius }
            | SpectrumCase::HemisphereDirichlet { radius }
            | SpectrumCase::Circle { radius }
            | SpectrumCase::Sphere { radius } => radius,
        }
    }

    /// The `i`-th distinct eigenvalue (ascending) with its multiplicity.
    fn entry(&self, i: usize) -> (f64, usize) {
        let n = i as f64;
        match *self {
            SpectrumCase::ClosedCurve { length } => ((2.0 * PI * n / length).powi(2), if i == 0 { 1 } else { 2 }),
            SpectrumCase::IntervalDirichlet { length } => (((n + 1.0) * PI / length).powi(2), 1),
            SpectrumCase::IntervalNeumann { length } => ((n * PI / length).powi(2), 1),
            SpectrumCase::HemisphereNeumann { radius } => (n * (n + 1.0) / (radius * radius), i + 1),
            SpectrumCase::HemisphereDirichlet { radius } => ((n + 1.0) * (n + 2.0) / (radius * radius), i + 1),
            SpectrumCase::Circle { radius } => ((n / radius).powi(2), if i == 0 { 1 } else { 2 }),
            SpectrumCase::Sphere { radius } => (n * (n + 1.0) / (radius * radius), 2 * i + 1),
        }
    }
}

/// Ascending distinct eigenvalues with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticSpectrum {
    pub values: Vec<(f64, usize)>,
    pub case: SpectrumCase,
}

impl AnalyticSpectrum {
    /// Every eigenvalue repeated by multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.values.iter().flat_map(|&(v, m)| std::iter::repeat(v).take(m)).collect()
    }

    pub fn distinct(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.0).collect()
    }

    pub fn has_zero_mode(&self) -> bool {
        self.values.first().is_some_and(|v| v.0 == 0.0)
    }
}

/// The first `count` distinct eigenvalues of `case`.
pub fn analytic_spectrum(case: SpectrumCase, count: usize) -> Result<AnalyticSpectrum> {
    let s = case.scale();
    if !(s > 0.0 && s.is_finite()) {
        return Err(CpmError::Config(format!("spectrum scale must be positive, got {s}")));
    }
    Ok(AnalyticSpectrum { values: (0..count).map(|i| case.entry(i)).collect(), case })
}
