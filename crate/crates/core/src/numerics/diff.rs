//! Central finite differences.

use crate::error::{Error, Result};

/// Step used for coordinate `x`: `1e-6 * max(1, |x|)`.
pub fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Central-difference gradient of `f` at `x`.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64]) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = fd_step(x[i]);
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        if !(up.is_finite() && down.is_finite()) {
            return Err(Error::NonFinite(format!(
                "finite-difference samples around coordinate {i} are {down} and {up}"
            )));
        }
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}
