use num_complex::Complex64;

use super::context::KernelContext;
use super::prekernel::{ratios_for, PointSeries};
use super::transformed::kappa_hat_from_series;
use crate::error::Result;

/// One-point function `R_N(z) = (conj z - z) e^{-N Q} kappa_N(z, conj z)` of the rescaled process.
///
/// Only the series at `z` is built; the one at `conj z` is its conjugate.
pub fn one_point_density(ctx: &KernelContext, z: Complex64) -> Result<f64> {
    let ratios = ratios_for(ctx);
    let sz = PointSeries::new(ctx, z, &ratios);
    let sc = sz.conj();
    let k = kappa_hat_from_series(ctx, z, z.conj(), &sz, &sc);
    let v = k.mul_complex(z.conj() - z).try_to_complex()?;
    Ok(v.re)
}
