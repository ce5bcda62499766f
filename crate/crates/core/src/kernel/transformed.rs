use num_complex::Complex64;

use super::context::KernelContext;
use super::prekernel::{kappa_from_series, partial_sums, ratios_for, PointSeries};
use crate::error::Result;
use crate::hermite::{weighted_sequence, ScaledComplex};

/// `p sqrt(N / (2 (1 - tau^2)))`, the centre in microscopic units.
fn shifted_centre(ctx: &KernelContext) -> f64 {
    ctx.kernel_center() * ctx.scale()
}

/// `ln omega_N(z, w) = tau ((a + z)^2 + (a + w)^2) - 2 (a + z)(a + w)`.
pub fn log_omega_n(ctx: &KernelContext, z: Complex64, w: Complex64) -> Complex64 {
    let a = shifted_centre(ctx);
    let (s, t) = (a + z, a + w);
    ctx.tau() * (s * s + t * t) - 2.0 * s * t
}

pub fn omega_n(ctx: &KernelContext, z: Complex64, w: Complex64) -> ScaledComplex {
    ScaledComplex::exp(log_omega_n(ctx, z, w))
}

pub(crate) fn kappa_hat_from_series(
    ctx: &KernelContext,
    z: Complex64,
    w: Complex64,
    sz: &PointSeries,
    sw: &PointSeries,
) -> ScaledComplex {
    kappa_from_series(ctx.tau(), sz, sw) * omega_n(ctx, z, w)
}

/// `omega_N kappa_N`, with the Gaussian factor kept in the scaled exponent.
pub fn kappa_hat(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<ScaledComplex> {
    let ratios = ratios_for(ctx);
    let sz = PointSeries::new(ctx, z, &ratios);
    let sw = PointSeries::new(ctx, w, &ratios);
    Ok(kappa_hat_from_series(ctx, z, w, &sz, &sw))
}

/// `e^{2zw} omega_N kappa_N`, the representative whose limits are the universal kernels.
pub fn kappa_tilde(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<ScaledComplex> {
    let ratios = ratios_for(ctx);
    let sz = PointSeries::new(ctx, z, &ratios);
    let sw = PointSeries::new(ctx, w, &ratios);
    let log = log_omega_n(ctx, z, w) + 2.0 * z * w;
    Ok(kappa_from_series(ctx.tau(), &sz, &sw) * ScaledComplex::exp(log))
}

/// `e^{-N/2 (Q(a) + Q(b))} kappa_N(a, b)` for every pair drawn from `points`.
///
/// Each point enters through its series and the conjugate series, so `points`
/// should already contain both `z` and `conj z` when both are needed.
pub(crate) fn weighted_kernel_matrix(ctx: &KernelContext, points: &[Complex64]) -> Vec<Vec<ScaledComplex>> {
    let ratios = ratios_for(ctx);
    let series: Vec<PointSeries> = points.iter().map(|&u| PointSeries::new(ctx, u, &ratios)).collect();
    let n = points.len();
    let mut out = vec![vec![ScaledComplex::ZERO; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (points[i], points[j]);
            let gauss = ScaledComplex::exp(2.0 * a * b - a.norm_sqr() - b.norm_sqr());
            let v = kappa_hat_from_series(ctx, a, b, &series[i], &series[j])
                * gauss
                * ScaledComplex::from_complex(cocycle(ctx, a) * cocycle(ctx, b));
            out[i][j] = v;
            out[j][i] = -v;
        }
    }
    out
}

/// Cocycle `g(z)` with `e^{-N/2 (Q(z) + Q(w))} kappa_N(z, w) = g(z) g(w) e^{-|z|^2 - |w|^2} kappa_tilde(z, w)`.
pub fn cocycle(ctx: &KernelContext, z: Complex64) -> Complex64 {
    let tau = ctx.tau();
    let b = (2.0 * ctx.n() as f64 * (1.0 - tau) / (1.0 + tau)).sqrt() * ctx.kernel_center();
    let phase = b * z.im - tau * (z * z).im;
    Complex64::from_polar(1.0, phase)
}

/// Weighted terms with `y = sqrt(N (1 - tau^2)) x` for the unshifted `E` arguments.
fn e_terms(ctx: &KernelContext, x: Complex64, ratios: &[f64]) -> Vec<ScaledComplex> {
    let tau = ctx.tau();
    let y = (ctx.n() as f64 * (1.0 - tau * tau)).sqrt() * x;
    weighted_sequence(y, tau, 2 * ctx.n() + 1, ratios)
}

fn e1_from_terms(ctx: &KernelContext, xi: Complex64, om: Complex64, hx: &[ScaledComplex], ho: &[ScaledComplex], ratios: &[f64]) -> ScaledComplex {
    let tau = ctx.tau();
    let nf = ctx.n() as f64;
    let mut acc = ScaledComplex::ZERO;
    for k in 0..2 * ctx.n() {
        acc += (hx[k] * ho[k]).scale(ratios[k]);
    }
    let log = nf * (tau / 2.0 * (xi * xi + om * om) - xi * om);
    (acc * ScaledComplex::exp(log)).scale(2.0 * (1.0 - tau * tau).sqrt())
}

fn e2_from_terms(ctx: &KernelContext, xi: Complex64, om: Complex64, hx: &[ScaledComplex], ho: &[ScaledComplex], ratios: &[f64]) -> ScaledComplex {
    let tau = ctx.tau();
    let n = ctx.n();
    let even = partial_sums(ho.iter().step_by(2).take(n).copied());
    let log = -(n as f64) * (1.0 - tau) / 2.0 * (xi * xi + om * om);
    (hx[2 * n] * even[n - 1] * ScaledComplex::exp(log)).scale(2.0 * (1.0 - tau * tau).sqrt() * ratios[2 * n])
}

/// `E^1_N(xi, omega)`: the holomorphic elliptic Ginibre kernel of size `2N` with its Gaussian factor.
///
/// Only `N` and `tau` are read from the context. At `tau = 0` the terms are monomials.
pub fn e1(ctx: &KernelContext, xi: Complex64, om: Complex64) -> Result<ScaledComplex> {
    let ratios = ratios_for(ctx);
    let hx = e_terms(ctx, xi, &ratios);
    let ho = e_terms(ctx, om, &ratios);
    Ok(e1_from_terms(ctx, xi, om, &hx, &ho, &ratios))
}

/// `E^2_N(xi, omega)`: the boundary term `h_{2N}(xi) sum_{l<N} h_{2l}(omega)` with its Gaussian factor.
pub fn e2(ctx: &KernelContext, xi: Complex64, om: Complex64) -> Result<ScaledComplex> {
    let ratios = ratios_for(ctx);
    let hx = e_terms(ctx, xi, &ratios);
    let ho = e_terms(ctx, om, &ratios);
    Ok(e2_from_terms(ctx, xi, om, &hx, &ho, &ratios))
}

/// `p / sqrt(1 - tau^2) + sqrt(2/N) z`
pub fn shifted_argument(ctx: &KernelContext, z: Complex64) -> Complex64 {
    let tau = ctx.tau();
    ctx.kernel_center() / (1.0 - tau * tau).sqrt() + (2.0 / ctx.n() as f64).sqrt() * z
}

/// Inhomogeneous term `r_N = E^1_N - e^{(z - w)^2} E^2_N` at the shifted arguments.
pub fn r_n(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<ScaledComplex> {
    let ratios = ratios_for(ctx);
    let (xi, om) = (shifted_argument(ctx, z), shifted_argument(ctx, w));
    let hx = e_terms(ctx, xi, &ratios);
    let ho = e_terms(ctx, om, &ratios);
    let first = e1_from_terms(ctx, xi, om, &hx, &ho, &ratios);
    let second = e2_from_terms(ctx, xi, om, &hx, &ho, &ratios);
    Ok(first - second * ScaledComplex::exp((z - w) * (z - w)))
}
