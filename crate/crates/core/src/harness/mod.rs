//! Reference spectra, eigenvalue matching and convergence studies.

mod analytic;
mod matching;
mod oracle;
mod study;

pub use analytic::{analytic_spectrum, arclength, AnalyticSpectrum, SpectrumCase};
pub use matching::{group_multiplets, match_eigenvalues, observed_order, MatchReport, MatchedPair};
pub use oracle::embedded_circle_eigenfunction;
pub use study::{run_study, LevelReport, StudyConfig, StudyReport, TrackedValue};
