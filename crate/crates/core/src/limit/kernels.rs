use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;

use super::quadrature::{integrate, EdgeQuadratureSpec};
use crate::error::{Error, Result};
use crate::special::{erf, erfcx, SQRT_PI};

/// Largest argument modulus accepted by the quadrature-based kernels.
pub const ARGUMENT_BOUND: f64 = 20.0;

fn cexp(x: Complex64) -> Result<Complex64> {
    let v = x.exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("exp({x})")))
    }
}

/// `e^{e} erfc(u)` without forming either factor when they are large or small.
pub fn exp_times_erfc(e: Complex64, u: Complex64) -> Result<Complex64> {
    if u.re >= 0.0 {
        Ok(cexp(e - u * u)? * erfcx(u)?)
    } else {
        // erfc(u) = 2 - erfc(-u)
        Ok(2.0 * cexp(e)? - cexp(e - u * u)? * erfcx(-u)?)
    }
}

/// `(1 + tau) / (1 - tau)`
fn aspect(tau: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Precondition(format!("tau = {tau} outside [0, 1)")));
    }
    Ok((1.0 + tau) / (1.0 - tau))
}

fn check_arguments(z: Complex64, w: Complex64) -> Result<()> {
    if z.norm() > ARGUMENT_BOUND || w.norm() > ARGUMENT_BOUND {
        return Err(Error::Precondition(format!("|z|, |w| must not exceed {ARGUMENT_BOUND}, got {z}, {w}")));
    }
    Ok(())
}

/// Real-bulk kernel `sqrt(pi) e^{z^2 + w^2} erf(z - w)`.
pub fn kappa_bulk(z: Complex64, w: Complex64) -> Result<Complex64> {
    let d = z - w;
    let s = z * z + w * w;
    let v = if d.norm() <= 1.0 {
        cexp(s)? * erf(d)?
    } else if d.re >= 0.0 {
        cexp(s)? - exp_times_erfc(s, d)?
    } else {
        exp_times_erfc(s, -d)? - cexp(s)?
    };
    Ok(SQRT_PI * v)
}

/// Lower truncation point for integrals whose Gaussian factors peak at `Re z` and `Re w`.
fn lower_limit(base: f64, z: Complex64, w: Complex64) -> f64 {
    (base - 2.0 * (w - z).norm()).min(z.re.min(w.re) + base)
}

/// Real-edge kernel `e^{2zw} int_{-inf}^0 e^{-s^2} sinh(2s(w - z)) erfc(z + w - s) ds`.
pub fn kappa_edge(z: Complex64, w: Complex64) -> Result<Complex64> {
    kappa_edge_with(&EdgeQuadratureSpec::default(), z, w)
}

pub fn kappa_edge_with(spec: &EdgeQuadratureSpec, z: Complex64, w: Complex64) -> Result<Complex64> {
    check_arguments(z, w)?;
    if z == w {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // sinh split into its two exponentials, each folded with e^{2zw - s^2} into the erfc factor
    let f = |s: f64| {
        let u = z + w - s;
        let plus = exp_times_erfc(2.0 * z * w - s * s + 2.0 * s * (w - z), u)?;
        let minus = exp_times_erfc(2.0 * z * w - s * s - 2.0 * s * (w - z), u)?;
        Ok(0.5 * (plus - minus))
    };
    // the tolerance applies to the integral, before the factor e^{2zw} folded into it
    let tol = spec.tolerance * (2.0 * z * w).re.exp();
    integrate(f, lower_limit(spec.truncation, z, w), 0.0, tol, spec.max_subdivisions)
}

/// First correction `kappa^{1/2}_edge` at the real edge.
pub fn kappa_edge_sub(tau: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    let k = aspect(tau)?;
    let c1 = (1.0 - 2.0 * tau) / (1.0 + tau);
    let pref = k.powf(1.5) / (12.0 * SQRT_2);
    let s = z * z + w * w;
    let half = |a: Complex64, b: Complex64| -> Result<Complex64> {
        Ok((2.0 * a * a + c1) * exp_times_erfc(s - 2.0 * a * a, SQRT_2 * b)?
            + 2.0 * (2.0 / PI).sqrt() * b * cexp(-s)?)
    };
    Ok(pref * (half(z, w)? - half(w, z)?))
}

/// Kernel at the moving centre `a`, interpolating between bulk (`a = +inf`) and vacuum (`a = -inf`).
pub fn kappa_a(a: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    kappa_a_with(&EdgeQuadratureSpec::default(), a, z, w)
}

pub fn kappa_a_with(spec: &EdgeQuadratureSpec, a: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    if a.is_nan() {
        return Err(Error::Precondition("a is NaN".into()));
    }
    if a == f64::INFINITY {
        return kappa_bulk(z, w);
    }
    if a == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    check_arguments(z, w)?;
    if z == w {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let s = z * z + w * w;
    let f = |u: f64| {
        let first = exp_times_erfc(s - 2.0 * (z - u) * (z - u), SQRT_2 * (w - u))?;
        let second = exp_times_erfc(s - 2.0 * (w - u) * (w - u), SQRT_2 * (z - u))?;
        Ok(FRAC_1_SQRT_2 * (first - second))
    };
    let lower = lower_limit(spec.truncation, z, w).min(a - 1.0);
    // beyond this point the integrand is below e^{-2 * 64}
    let upper = a.min(z.re.max(w.re) - spec.truncation);
    if upper <= lower {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let tol = spec.tolerance * s.re.exp() * FRAC_1_SQRT_2;
    integrate(f, lower, upper, tol, spec.max_subdivisions)
}

/// Edge limit `r(z, w) = erfc(z + w) - e^{(z - w)^2 - 2z^2} erfc(sqrt(2) w) / sqrt(2)` of `r_N`.
pub fn r_limit(z: Complex64, w: Complex64) -> Result<Complex64> {
    let e = (z - w) * (z - w) - 2.0 * z * z;
    Ok(exp_times_erfc(Complex64::new(0.0, 0.0), z + w)? - FRAC_1_SQRT_2 * exp_times_erfc(e, SQRT_2 * w)?)
}

/// First correction `r^{1/2}(z, w)` at the edge.
pub fn r_half(tau: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    let k = aspect(tau)?;
    let t = tau / (1.0 + tau);
    let e = (z - w) * (z - w) - 2.0 * z * z;
    let poly = 4.0 / 3.0 * z * z - 4.0 / 3.0 * z * w + 2.0 / 3.0 * w * w - t;
    let gauss = poly * cexp(e - 2.0 * w * w)? / (2.0 * PI).sqrt();
    let tail = (2.0 / 3.0 * z * z * z - t * z) * exp_times_erfc(e, SQRT_2 * w)?;
    Ok(FRAC_1_SQRT_2 * k.powf(1.5) * (gauss - tail))
}
