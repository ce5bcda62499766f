//! Complex error functions, the Faddeeva function and Dawson's integral.
//!
//! Everything is built on [`faddeeva`], which is evaluated in the closed upper
//! half-plane by a modified trapezoidal rule for the Stieltjes integral
//!
//! ```text
//! w(z) = (i/pi) * integral exp(-t^2) / (z - t) dt,   Im z > 0,
//! ```
//!
//! with the pole contribution added back when `Im z < pi/h`. Two node sets are
//! available (`t_k = k h` and `t_k = (k + 1/2) h`); the one whose nodes are
//! farther from `Re z` is used so the node sum and the pole correction never
//! cancel catastrophically. The lower half-plane follows from
//! `w(z) = 2 exp(-z^2) - w(-z)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Trapezoid step. The discretisation error is of order `exp(-pi^2 / h^2)`.
const STEP: f64 = 0.5;
/// Nodes beyond `K_MAX * STEP` carry weights below `1e-17`.
const K_MAX: usize = 14;
/// Beyond this modulus the three-term asymptotic series is exact to double precision.
const ASYMPTOTIC_RADIUS: f64 = 1.0e4;

/// Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`.
///
/// Relative accuracy is about `1e-15` for `|z| <= 30` in the upper half-plane.
/// In the lower half-plane `exp(-z^2)` dominates and the result overflows once
/// `(Im z)^2 - (Re z)^2` exceeds the double range; that case is reported as
/// [`Error::Overflow`].
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Precondition(format!("non-finite argument {z}")));
    }
    if z.im >= 0.0 {
        return Ok(faddeeva_upper(z));
    }
    let reflected = faddeeva_upper(-z);
    let gauss = checked_exp(-z * z)?;
    let value = 2.0 * gauss - reflected;
    finite_or_overflow(value, "faddeeva")
}

fn faddeeva_upper(z: Complex64) -> Complex64 {
    if z.norm() > ASYMPTOTIC_RADIUS {
        let inv = 1.0 / (z * z);
        return Complex64::i() * FRAC_1_SQRT_PI / z * (1.0 + inv * (0.5 + 0.75 * inv));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(1.0, 0.0);
    }

    // Distance of Re z from the integer grid, in units of the step.
    let frac = (z.re.abs() / STEP).fract();
    let near_integer_node = frac.min(1.0 - frac) < 0.25;
    let z2 = z * z;
    let pole_active = z.im < PI / STEP;

    if !near_integer_node {
        let mut sum = 1.0 / z;
        for k in 1..=K_MAX {
            let t = k as f64 * STEP;
            sum += 2.0 * z * (-t * t).exp() / (z2 - t * t);
        }
        let mut w = Complex64::i() * STEP / PI * sum;
        if pole_active {
            let denom = 1.0 - (Complex64::new(0.0, -2.0 * PI / STEP) * z).exp();
            w += 2.0 * (-z2).exp() / denom;
        }
        w
    } else {
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..=K_MAX {
            let t = (k as f64 + 0.5) * STEP;
            sum += 2.0 * z * (-t * t).exp() / (z2 - t * t);
        }
        let mut w = Complex64::i() * STEP / PI * sum;
        if pole_active {
            let denom = 1.0 + (Complex64::new(0.0, -2.0 * PI / STEP) * z).exp();
            w += 2.0 * (-z2).exp() / denom;
        }
        w
    }
}

/// Complex error function.
pub fn erf(z: Complex64) -> Result<Complex64> {
    if z.norm() <= 1.0 {
        return Ok(erf_series(z));
    }
    if z.re >= 0.0 {
        Ok(1.0 - erfc_right(z)?)
    } else {
        Ok(erfc_right(-z)? - 1.0)
    }
}

/// Complementary complex error function.
pub fn erfc(z: Complex64) -> Result<Complex64> {
    if z.re >= 0.0 {
        erfc_right(z)
    } else {
        Ok(2.0 - erfc_right(-z)?)
    }
}

// erfc(z) = exp(-z^2) w(iz) for Re z >= 0, where iz lies in the upper half-plane.
fn erfc_right(z: Complex64) -> Result<Complex64> {
    let w = faddeeva_upper(Complex64::i() * z);
    let gauss = checked_exp(-z * z)?;
    finite_or_overflow(gauss * w, "erfc")
}

/// Scaled complementary error function `exp(z^2) erfc(z)`.
///
/// Finite wherever `erfc` is small, which is what lets limiting-kernel formulas
/// avoid products of the form `exp(+quadratic) * erfc(..)`.
pub fn erfcx(z: Complex64) -> Result<Complex64> {
    faddeeva(Complex64::i() * z)
}

/// Dawson's integral `F(z) = exp(-z^2) * integral_0^z exp(t^2) dt`.
pub fn dawson(z: Complex64) -> Result<Complex64> {
    if z.norm() < 0.2 {
        return Ok(dawson_series(z));
    }
    if z.im < 0.0 {
        return dawson(-z).map(|d| -d);
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(0.5 * SQRT_PI * faddeeva_upper(z).im, 0.0));
    }
    let w = faddeeva_upper(z);
    let gauss = checked_exp(-z * z)?;
    finite_or_overflow(Complex64::new(0.0, -0.5 * SQRT_PI) * (w - gauss), "dawson")
}

/// Real Dawson integral.
pub fn dawson_real(x: f64) -> f64 {
    if x.abs() < 0.2 {
        return dawson_series(Complex64::new(x, 0.0)).re;
    }
    0.5 * SQRT_PI * faddeeva_upper(Complex64::new(x, 0.0)).im
}

/// Real complementary error function.
pub fn erfc_real(x: f64) -> f64 {
    // Real arguments never overflow.
    erfc(Complex64::new(x, 0.0)).map(|v| v.re).unwrap_or(0.0)
}

/// Real scaled complementary error function `exp(x^2) erfc(x)`.
pub fn erfcx_real(x: f64) -> f64 {
    if x >= 0.0 {
        faddeeva_upper(Complex64::new(0.0, x)).re
    } else {
        // 2 exp(x^2) overflows only for x < -26.6
        2.0 * (x * x).exp() - faddeeva_upper(Complex64::new(0.0, -x)).re
    }
}

fn erf_series(z: Complex64) -> Complex64 {
    // erf z = 2/sqrt(pi) * sum (-1)^n z^(2n+1) / (n! (2n+1))
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..60 {
        term *= -z2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    2.0 * FRAC_1_SQRT_PI * sum
}

fn dawson_series(z: Complex64) -> Complex64 {
    // F(z) = sum (-1)^n 2^n z^(2n+1) / (2n+1)!!
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..40 {
        term *= -2.0 * z2 / (2 * n + 1) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn checked_exp(arg: Complex64) -> Result<Complex64> {
    if arg.re > 709.0 {
        return Err(Error::Overflow(format!("exp({arg}) exceeds the double range")));
    }
    Ok(arg.exp())
}

fn finite_or_overflow(v: Complex64, what: &str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} is not representable")))
    }
}
