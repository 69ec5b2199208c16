//! Laplace-Beltrami eigenvalue problems on curves, surfaces and solids with
//! the closest point method.
//!
//! The pipeline is
//! [`geometry`] (closest points) → [`band`] (computational grid nodes) →
//! [`discretize`] (extension matrix `E`, finite-difference Laplacian `Δh`,
//! stabilized operator `M`) → [`eig`] (spectra) → [`harness`] (reference
//! spectra, matching, convergence studies).

pub mod band;
pub mod discretize;
pub mod eig;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod sparse;

mod par;
mod quadrature;

pub use error::{CpmError, Result};
pub use quadrature::integrate;
