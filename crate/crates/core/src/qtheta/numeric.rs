use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_FACTORS: usize = 1_000_000;

/// Floating-point theta with the principal branch of `x^{1/2}`.
pub fn numeric_theta(x: Complex64, q: Complex64, tolerance: f64) -> Result<Complex64> {
    if x == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("theta at x = 0".into()));
    }
    numeric_theta_from_sqrt(x.sqrt(), q, tolerance)
}

/// Floating-point theta at `x = sqrt_x^2`, with `x^{1/2}` taken to be
/// `sqrt_x`. This sidesteps branch choices when `x` comes from a monomial
/// with half-integer exponents.
pub fn numeric_theta_from_sqrt(sqrt_x: Complex64, q: Complex64, tolerance: f64) -> Result<Complex64> {
    if q.norm() >= 1.0 {
        return Err(Error::NonConvergence(format!("|q| = {} is not below 1", q.norm())));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tolerance} must be positive")));
    }
    if sqrt_x == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("theta at x = 0".into()));
    }
    let x = sqrt_x * sqrt_x;
    let mut value = sqrt_x - sqrt_x.inv();
    let mut qi = q;
    for _ in 0..MAX_FACTORS {
        let (u, v) = (x * qi, qi / x);
        if u.norm() + v.norm() < tolerance {
            return Ok(value);
        }
        value *= (Complex64::new(1.0, 0.0) - u) * (Complex64::new(1.0, 0.0) - v);
        qi *= q;
    }
    Err(Error::NonConvergence(format!("product did not settle within {MAX_FACTORS} factors")))
}
