use num_complex::Complex64;

use super::recurrence::{double_factorial_ratios, hermite_sequence_scaled, weighted_sequence};
use crate::error::{Error, Result};

fn validate(tau: f64, l: usize, n: usize, omega0: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Precondition(format!("tau = {tau} outside (0, 1)")));
    }
    if n == 0 || l >= n {
        return Err(Error::Precondition(format!("need 0 <= l < N, got l = {l}, N = {n}")));
    }
    let edge = (2.0 * (1.0 + tau) / (1.0 - tau)).sqrt();
    if omega0.abs() < edge * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!("|omega0| = {} below the edge {edge}", omega0.abs())));
    }
    Ok(())
}

/// Whether `|(tau/2)^l / (2l)!! H_{2l}(x)| <= |(tau/2)^{l+1} / (2l+2)!! H_{2l+2}(x)|`
/// at `x = sqrt(N (1 - tau^2) / (2 tau)) omega0`.
pub fn hermite_inequality_holds(tau: f64, l: usize, n: usize, omega0: f64) -> Result<bool> {
    validate(tau, l, n, omega0)?;
    let y = Complex64::new((n as f64 * (1.0 - tau * tau)).sqrt() * omega0, 0.0);
    let len = 2 * l + 3;
    let ratios = double_factorial_ratios(len);
    let h = weighted_sequence(y, tau, len, &ratios);
    Ok(h[2 * l].cmp_abs(&h[2 * l + 2]).is_le())
}

/// The sharper form `H_{2l}(x) <= tau / (2(l+1)) y H_{2l+1}(x)` with `x = (1 + tau) y / sqrt(tau)`,
/// evaluated at the same point with `omega0` replaced by `|omega0|`.
pub fn hermite_inequality_v2_holds(tau: f64, l: usize, n: usize, omega0: f64) -> Result<bool> {
    validate(tau, l, n, omega0)?;
    let x = (n as f64 * (1.0 - tau * tau) / (2.0 * tau)).sqrt() * omega0.abs();
    let y = tau.sqrt() * x / (1.0 + tau);
    let h = hermite_sequence_scaled(2 * l + 1, Complex64::new(x, 0.0))?;
    let rhs = h[2 * l + 1].scale(tau / (2.0 * (l + 1) as f64) * y);
    Ok((rhs - h[2 * l]).mantissa().re >= 0.0)
}
