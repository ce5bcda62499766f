use num_complex::Complex64;

use super::context::KernelContext;
use crate::error::{Error, Result};
use crate::hermite::{double_factorial_ratios, monomial_sequence, weighted_sequence, ScaledComplex};

/// Weighted Hermite terms `h_0..=h_{2N}` at one rescaled point.
///
/// Built once per point and dropped with the call that needed it.
#[derive(Clone, Debug)]
pub(crate) struct PointSeries {
    pub h: Vec<ScaledComplex>,
    /// `C_k = sum_{l <= k} h_{2l}` for `k < N`.
    pub even: Vec<ScaledComplex>,
}

impl PointSeries {
    pub fn new(ctx: &KernelContext, u: Complex64, ratios: &[f64]) -> Self {
        let len = 2 * ctx.n() + 1;
        let y = ctx.weighted_argument(u);
        let h = if ctx.tau() == 0.0 {
            monomial_sequence(y, len, ratios)
        } else {
            weighted_sequence(y, ctx.tau(), len, ratios)
        };
        Self::from_terms(h, ctx.n())
    }

    pub fn from_terms(h: Vec<ScaledComplex>, n: usize) -> Self {
        let even = partial_sums(h.iter().step_by(2).take(n).copied());
        Self { h, even }
    }

    /// Terms at the conjugate point; all recurrence coefficients are real.
    pub fn conj(&self) -> Self {
        Self {
            h: self.h.iter().map(ScaledComplex::conj).collect(),
            even: self.even.iter().map(ScaledComplex::conj).collect(),
        }
    }

    /// `d h_j / du = s r_{j-1} h_{j-1}` with `s = sqrt(2 (1 - tau^2))`.
    pub fn derivative(&self, s: f64, ratios: &[f64]) -> Vec<ScaledComplex> {
        let mut d = Vec::with_capacity(self.h.len());
        d.push(ScaledComplex::ZERO);
        for j in 1..self.h.len() {
            d.push(self.h[j - 1].scale(s * ratios[j - 1]));
        }
        d
    }
}

pub(crate) fn partial_sums(it: impl Iterator<Item = ScaledComplex>) -> Vec<ScaledComplex> {
    let mut acc = ScaledComplex::ZERO;
    it.map(|t| {
        acc += t;
        acc
    })
    .collect()
}

/// `sum_{k<N} odd_{2k+1} * even_k`, the sweep shared by `F` and its derivatives.
pub(crate) fn odd_even_sum(odd: &[ScaledComplex], even: &[ScaledComplex]) -> ScaledComplex {
    let mut acc = ScaledComplex::ZERO;
    for (k, c) in even.iter().enumerate() {
        acc += odd[2 * k + 1] * *c;
    }
    acc
}

pub(crate) fn ratios_for(ctx: &KernelContext) -> Vec<f64> {
    double_factorial_ratios(2 * ctx.n() + 1)
}

/// `sqrt(2) (1 + tau)`
pub(crate) fn kappa_prefactor(tau: f64) -> f64 {
    2f64.sqrt() * (1.0 + tau)
}

/// `F(z, w) = sum_{k<N} h_{2k+1}(z) sum_{l<=k} h_{2l}(w)` on the Hermite path.
pub fn prekernel_f(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<ScaledComplex> {
    if ctx.tau() == 0.0 {
        return Err(Error::TauZero);
    }
    let ratios = ratios_for(ctx);
    let sz = PointSeries::new(ctx, z, &ratios);
    let sw = PointSeries::new(ctx, w, &ratios);
    Ok(odd_even_sum(&sz.h, &sw.even))
}

/// `F(z, w)` at `tau = 0`, where the weighted Hermite terms are the monomials `y^j / j!!`.
pub fn prekernel_f_tau0(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<ScaledComplex> {
    if ctx.tau() != 0.0 {
        return Err(Error::Precondition(format!("monomial path needs tau = 0, got {}", ctx.tau())));
    }
    let ratios = ratios_for(ctx);
    let sz = PointSeries::new(ctx, z, &ratios);
    let sw = PointSeries::new(ctx, w, &ratios);
    Ok(odd_even_sum(&sz.h, &sw.even))
}

pub(crate) fn kappa_from_series(tau: f64, sz: &PointSeries, sw: &PointSeries) -> ScaledComplex {
    let d = odd_even_sum(&sz.h, &sw.even) - odd_even_sum(&sw.h, &sz.even);
    d.scale(kappa_prefactor(tau))
}

/// The rescaled pre-kernel `kappa_N(z, w) = sqrt(2)(1 + tau)(F(z, w) - F(w, z))`.
pub fn kappa_n(ctx: &KernelContext, z: Complex64, w: Complex64) -> Result<ScaledComplex> {
    let ratios = ratios_for(ctx);
    let sz = PointSeries::new(ctx, z, &ratios);
    let sw = PointSeries::new(ctx, w, &ratios);
    Ok(kappa_from_series(ctx.tau(), &sz, &sw))
}
