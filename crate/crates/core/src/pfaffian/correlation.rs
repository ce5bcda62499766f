use num_complex::Complex64;

use super::pfaffian_scaled;
use crate::error::{Error, Result};
use crate::hermite::ScaledComplex;
use crate::kernel::{weighted_kernel_matrix, KernelContext};

/// Imaginary parts above this fraction of the scale are reported as a numerical failure.
const IMAGINARY_TOLERANCE: f64 = 1e-9;

/// Interleaved list `z_1, conj z_1, z_2, conj z_2, ...`.
fn with_conjugates(points: &[Complex64]) -> Vec<Complex64> {
    points.iter().flat_map(|&z| [z, z.conj()]).collect()
}

fn check_points(points: &[Complex64]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::Precondition(format!("non-finite point {a}")));
        }
        if points[..i].contains(a) {
            return Err(Error::Precondition(format!("repeated point {a}")));
        }
    }
    Ok(())
}

fn correlation_from(points: &[Complex64], m: &[Vec<ScaledComplex>]) -> Result<f64> {
    let pf = pfaffian_scaled(m.len(), |i, j| m[i][j])?;
    let mut factor = ScaledComplex::ONE;
    let mut scale = ScaledComplex::ONE;
    for (j, z) in points.iter().enumerate() {
        let gap = ScaledComplex::from_complex(z.conj() - z);
        factor *= gap;
        scale *= (gap * m[2 * j][2 * j + 1]).abs();
    }
    let v = (pf.value * factor).to_complex();
    let bound = IMAGINARY_TOLERANCE * v.norm().max(scale.to_complex().re);
    if v.im.abs() > bound {
        return Err(Error::Numerical(format!("correlation has imaginary part {:e} (real part {:e})", v.im, v.re)));
    }
    Ok(v.re)
}

/// The k-point function `R_{N,k}(z_1, .., z_k)` of the rescaled process.
///
/// `prod (conj z_j - z_j)` times the Pfaffian of the `2k x 2k` matrix whose
/// `(j, l)` block is the weighted kernel at `(z_j, z_l)`, `(z_j, conj z_l)`,
/// `(conj z_j, z_l)` and `(conj z_j, conj z_l)`.
pub fn correlation_k(ctx: &KernelContext, points: &[Complex64]) -> Result<f64> {
    check_points(points)?;
    if points.iter().any(|z| z.im == 0.0) {
        return Ok(0.0);
    }
    let m = weighted_kernel_matrix(ctx, &with_conjugates(points));
    correlation_from(points, &m)
}

/// Largest relative change of `R_{N,k}` when every kernel entry `(a, b)` is multiplied by `g(a) g(b)`.
///
/// `g` must satisfy `g(conj z) = 1 / g(z)` at the sample points.
pub fn cocycle_invariance_check(ctx: &KernelContext, points: &[Complex64], g: impl Fn(Complex64) -> Complex64) -> Result<f64> {
    check_points(points)?;
    let all = with_conjugates(points);
    for &z in points {
        let d = (g(z) * g(z.conj()) - 1.0).norm();
        if d > 1e-12 {
            return Err(Error::Precondition(format!("g(conj z) g(z) = 1 fails by {d:e} at {z}")));
        }
    }
    let m = weighted_kernel_matrix(ctx, &all);
    let base = correlation_from(points, &m)?;
    let mut twisted = m.clone();
    for (i, row) in twisted.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = v.mul_complex(g(all[i]) * g(all[j]));
        }
    }
    let moved = correlation_from(points, &twisted)?;
    if base == 0.0 {
        return Ok(moved.abs());
    }
    Ok((moved - base).abs() / base.abs())
}
