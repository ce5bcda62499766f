use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::kernels::exp_times_erfc;
use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::special::{dawson_real, erfc_real, erfcx_real};

/// Lower end of the edge-density integral; the Gaussian weight is below `e^{-81}` there.
const DENSITY_TRUNCATION: f64 = -9.0;
const DENSITY_TOLERANCE: f64 = 1e-12;

/// Bulk density `4 y F(2y)` with `F` Dawson's integral.
pub fn bulk_density(y: f64) -> f64 {
    4.0 * y * dawson_real(2.0 * y)
}

/// `e^{-s^2} erfc(u)` for real arguments.
fn gauss_erfc(s: f64, u: f64) -> f64 {
    if u > 0.0 {
        (-s * s - u * u).exp() * erfcx_real(u)
    } else {
        (-s * s).exp() * erfc_real(u)
    }
}

/// Edge density `R(x + iy) = -2y int_{-inf}^0 e^{-s^2} sin(4sy) erfc(2x - s) ds`.
pub fn edge_density(z: Complex64) -> Result<f64> {
    let (x, y) = (z.re, z.im);
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::Precondition(format!("non-finite point {z}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let f = |s: f64| Ok(Complex64::new(gauss_erfc(s, 2.0 * x - s) * (4.0 * s * y).sin(), 0.0));
    // the sine oscillates 2|y|/pi times per unit length
    let panels = 200 + (40.0 * y.abs()) as usize;
    let v = integrate(f, DENSITY_TRUNCATION, 0.0, DENSITY_TOLERANCE, panels * 10)?;
    Ok(-2.0 * y * v.re)
}

/// First correction `R^{(1/2)}(z)` to the edge density.
pub fn edge_density_correction(tau: f64, z: Complex64) -> Result<f64> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Precondition(format!("tau = {tau} outside [0, 1)")));
    }
    let k = ((1.0 + tau) / (1.0 - tau)).powf(1.5);
    let c1 = (1.0 - 2.0 * tau) / (1.0 + tau);
    let y = z.im;
    let zb = z.conj();
    // e^{-4y^2} folded into both terms of the bracket
    let first = (2.0 * z * z + c1) * exp_times_erfc(-2.0 * z * z - 4.0 * y * y, SQRT_2 * zb)?;
    let second = 2.0 * (2.0 / PI).sqrt() * zb * (-4.0 * (z * z).re - 4.0 * y * y).exp();
    Ok(k / (3.0 * SQRT_2) * y * (first + second).im)
}
