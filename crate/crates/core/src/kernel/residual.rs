use num_complex::Complex64;

use super::context::KernelContext;
use super::prekernel::{kappa_prefactor, odd_even_sum, partial_sums, ratios_for, PointSeries};
use super::transformed::{log_omega_n, omega_n, r_n};
use crate::error::Result;
use crate::hermite::ScaledComplex;

/// Relative size of the perturbation applied by [`cd_residual_perturbed`].
pub const PROBE_PERTURBATION: f64 = 1e-6;

/// Accumulates `sum_k |a_k| |b_k|` for the roundoff scale of a residual.
fn abs_dot(a: impl Iterator<Item = ScaledComplex>, b: impl Iterator<Item = ScaledComplex>) -> ScaledComplex {
    let mut acc = ScaledComplex::ZERO;
    for (x, y) in a.zip(b) {
        acc += x.abs() * y.abs();
    }
    acc
}

fn max_abs(xs: &[ScaledComplex]) -> ScaledComplex {
    xs.iter().copied().max_by(|a, b| a.cmp_abs(b)).unwrap_or(ScaledComplex::ZERO)
}

fn relative(diff: ScaledComplex, scale: ScaledComplex) -> f64 {
    if diff.is_zero() {
        return 0.0;
    }
    if scale.is_zero() {
        return f64::INFINITY;
    }
    (diff / scale).to_complex().norm()
}

/// The two sides of the Christoffel-Darboux identity with their roundoff scale.
struct CdParts {
    derivative: ScaledComplex,
    rhs: ScaledComplex,
    kappa: ScaledComplex,
    kappa_scale: ScaledComplex,
    scale: ScaledComplex,
}

fn cd_parts(ctx: &KernelContext, z: Complex64, sz: &PointSeries, sw: &PointSeries, ratios: &[f64]) -> CdParts {
    let n = ctx.n();
    let tau = ctx.tau();
    let s = (2.0 * (1.0 - tau * tau)).sqrt();
    let c = kappa_prefactor(tau);
    let two_root = 2.0 * (1.0 - tau * tau).sqrt();

    let dz = sz.derivative(s, ratios);
    let dz_even = partial_sums(dz.iter().step_by(2).take(n).copied());
    let abs_even = |h: &[ScaledComplex]| partial_sums(h.iter().step_by(2).take(n).map(ScaledComplex::abs));
    let odd = |h: &[ScaledComplex]| h.iter().skip(1).step_by(2).copied().collect::<Vec<_>>();

    let derivative = (odd_even_sum(&dz, &sw.even) - odd_even_sum(&sw.h, &dz_even)).scale(c);
    let deriv_scale = abs_dot(odd(&dz).into_iter(), abs_even(&sw.h).into_iter())
        .max_abs(abs_dot(odd(&sw.h).into_iter(), abs_even(&dz).into_iter()))
        .scale(c);

    let kappa = (odd_even_sum(&sz.h, &sw.even) - odd_even_sum(&sw.h, &sz.even)).scale(c);
    let kappa_scale = (abs_dot(odd(&sz.h).into_iter(), abs_even(&sw.h).into_iter())
        + abs_dot(odd(&sw.h).into_iter(), abs_even(&sz.h).into_iter()))
    .scale(c);

    let a = (2.0 * (1.0 - tau) * n as f64 / (1.0 + tau)).sqrt() * ctx.kernel_center() + 2.0 * (1.0 - tau) * z;

    let mut diag = ScaledComplex::ZERO;
    for k in 0..2 * n {
        diag += (sz.h[k] * sw.h[k]).scale(ratios[k]);
    }
    let diag_scale = abs_dot(
        sz.h[..2 * n].iter().zip(ratios).map(|(h, r)| h.scale(*r)),
        sw.h[..2 * n].iter().copied(),
    )
    .scale(two_root);
    let boundary = (sz.h[2 * n] * sw.even[n - 1]).scale(two_root * ratios[2 * n]);
    let boundary_scale = (sz.h[2 * n].abs() * abs_even(&sw.h)[n - 1]).scale(two_root * ratios[2 * n]);

    let rhs = kappa.mul_complex(a) + diag.scale(two_root) - boundary;
    let scale = max_abs(&[deriv_scale, kappa_scale.scale(a.norm()), diag_scale, boundary_scale]);
    CdParts { derivative, rhs, kappa, kappa_scale, scale }
}

trait MaxAbs {
    fn max_abs(self, other: Self) -> Self;
}

impl MaxAbs for ScaledComplex {
    fn max_abs(self, other: Self) -> Self {
        if self.cmp_abs(&other).is_lt() {
            other
        } else {
            self
        }
    }
}

fn series_pair(ctx: &KernelContext, z: Complex64, w: Complex64, ratios: &[f64]) -> (PointSeries, PointSeries) {
    (PointSeries::new(ctx, z, ratios), PointSeries::new(ctx, w, ratios))
}

/// Relative residual of `d_z kappa_N = A kappa_N + (diagonal sum) - (boundary term)`.
///
/// The derivative is taken term by term, and the residual is measured against the
/// largest sum of absolute values among the constituent sums, which bounds their roundoff.
pub fn cd_residual(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<f64> {
    let ratios = ratios_for(ctx);
    let (sz, sw) = series_pair(ctx, z, w, &ratios);
    let p = cd_parts(ctx, z, &sz, &sw, &ratios);
    Ok(relative(p.derivative - p.rhs, p.scale))
}

/// [`cd_residual`] after multiplying the largest term `h_j(z)` by `1 + PROBE_PERTURBATION`.
///
/// Used to confirm that the residual actually detects a corrupted series.
pub fn cd_residual_perturbed(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<f64> {
    let ratios = ratios_for(ctx);
    let (sz, sw) = series_pair(ctx, z, w, &ratios);
    let mut h = sz.h.clone();
    let j = (0..h.len()).max_by(|&a, &b| h[a].cmp_abs(&h[b])).unwrap_or(0);
    h[j] = h[j].scale(1.0 + PROBE_PERTURBATION);
    let sz = PointSeries::from_terms(h, ctx.n());
    let p = cd_parts(ctx, z, &sz, &sw, &ratios);
    Ok(relative(p.derivative - p.rhs, p.scale))
}

/// Relative residual of `d_z kappa_hat = 2 (z - w) kappa_hat + r_N`.
pub fn transformed_residual(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<f64> {
    let ratios = ratios_for(ctx);
    let (sz, sw) = series_pair(ctx, z, w, &ratios);
    let p = cd_parts(ctx, z, &sz, &sw, &ratios);
    let omega = omega_n(ctx, z, w);
    let a = shifted_log_derivative(ctx, z, w);
    let lhs = (p.derivative + p.kappa.mul_complex(a)) * omega;
    let rhs = (p.kappa * omega).mul_complex(2.0 * (z - w)) + r_n(ctx, z, w)?;
    let scale = p.scale.max_abs(p.kappa_scale.scale(a.norm().max(2.0 * (z - w).norm()))) * omega.abs();
    debug_assert!(log_omega_n(ctx, z, w).re.is_finite());
    Ok(relative(lhs - rhs, scale))
}

/// `d_z ln omega_N(z, w)`
fn shifted_log_derivative(ctx: &KernelContext, z: Complex64, w: Complex64) -> Complex64 {
    let a = ctx.kernel_center() * ctx.scale();
    2.0 * ctx.tau() * (a + z) - 2.0 * (a + w)
}
