use crate::error::{CpmError, Result};

/// Embedded eigenfunction of the split operator for a circle of radius `R`
/// in the plane, evaluated at polar coordinates `(r, θ)`:
///
/// `v = (λε²(1 − R²/r²) / (4 − λε²) + 1) · cos(√λ R θ)`.
///
/// On the circle (`r = R`) this is the surface eigenfunction.
pub fn embedded_circle_eigenfunction(lambda: f64, radius: f64, eps: f64, r: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(CpmError::Domain(format!("radius coordinate must be positive, got {r}")));
    }
    let le = lambda * eps * eps;
    let denom = 4.0 - le;
    if denom.abs() < 1e-12 * le.abs().max(1.0) {
        return Err(CpmError::Domain(format!("lambda * eps^2 = {le} hits the singular shift 4")));
    }
    let radial = le * (1.0 - radius * radius / (r * r)) / denom + 1.0;
    Ok(radial * (lambda.sqrt() * radius * theta).cos())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_value() {
        for theta in [0.0, 0.3, 2.0] {
            let v = embedded_circle_eigenfunction(4.0, 1.0, 0.1, 1.0, theta).unwrap();
            assert!((v - (2.0 * theta).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_lambda_is_constant() {
        assert_eq!(embedded_circle_eigenfunction(0.0, 1.0, 0.1, 1.7, 0.4).unwrap(), 1.0);
    }

    #[test]
    fn off_surface_value() {
        let theta = 0.7;
        let v = embedded_circle_eigenfunction(1.0, 1.0, 0.1, 1.1, theta).unwrap();
        let want = (1.0 + 0.01 * (1.0 - 1.0 / 1.21) / 3.99) * theta.cos();
        assert!((v - want).abs() < 1e-15);
    }

    #[test]
    fn singular_and_bad_radius() {
        assert!(embedded_circle_eigenfunction(400.0, 1.0, 0.1, 1.1, 0.0).is_err());
        assert!(embedded_circle_eigenfunction(1.0, 1.0, 0.1, 0.0, 0.0).is_err());
    }
}
