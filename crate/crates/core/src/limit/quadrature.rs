use std::collections::BinaryHeap;
use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// 15-point Kronrod extension of the 7-point Gauss rule; abscissae in decreasing order.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Error estimates below this fraction of `int |f|` are rounding noise.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

/// Settings for the truncated edge integrals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeQuadratureSpec {
    /// Base truncation point; the integral starts at `truncation - (argument-dependent margin)`.
    pub truncation: f64,
    pub tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for EdgeQuadratureSpec {
    fn default() -> Self {
        Self { truncation: -8.0, tolerance: 1e-10, max_subdivisions: 2000 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// Kronrod estimate of the integral of `|f|`.
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut magnitude = fc.norm() * WGK[7];
    for (j, &x) in XGK[..7].iter().enumerate() {
        let (lo, hi) = (f(c - h * x)?, f(c + h * x)?);
        let pair = lo + hi;
        magnitude += (lo.norm() + hi.norm()) * WGK[j];
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    let error = ((k - g) * h).norm();
    if !error.is_finite() {
        return Err(Error::Numerical(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(Panel { a, b, value: k * h, error, magnitude: magnitude * h.abs() })
}

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature of a complex integrand on `[a, b]`.
///
/// The panel with the largest error estimate is bisected until the summed estimate
/// falls below `tol`, or below the rounding floor set by the integral of `|f|`;
/// running out of `max_panels` is an [`Error::Quadrature`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Precondition(format!("integration limits [{a}, {b}] must be finite")));
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b)?;
    let mut total = first.value;
    let mut error = first.error;
    let mut magnitude = first.magnitude;
    heap.push(first);
    while error > tol.max(ROUNDOFF * magnitude) {
        if heap.len() >= max_panels {
            return Err(Error::Quadrature { tolerance: tol, estimate: error });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            return Err(Error::Quadrature { tolerance: tol, estimate: error });
        }
        let left = kronrod(&mut f, worst.a, m)?;
        let right = kronrod(&mut f, m, worst.b)?;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of incremental updates
    Ok(heap.iter().map(|p| p.value).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_gaussian() {
        let v = integrate(|x| Ok(Complex64::new(x.powi(5), 2.0 * x)), 0.0, 2.0, 1e-13, 100).unwrap();
        assert!((v - Complex64::new(64.0 / 6.0, 4.0)).norm() < 1e-13);
        let g = integrate(|x| Ok(Complex64::new((-x * x).exp(), 0.0)), -9.0, 9.0, 1e-13, 200).unwrap();
        assert!((g.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x| Ok(Complex64::new(0.0, x).exp() * (-x * x / 50.0).exp()), -60.0, 60.0, 1e-11, 500).unwrap();
        let exact = (50.0 * std::f64::consts::PI).sqrt() * (-50.0f64 / 4.0).exp();
        assert!((v.re - exact).abs() < 1e-10 && v.im.abs() < 1e-10);
    }

    #[test]
    fn reports_failure() {
        let r = integrate(|x| Ok(Complex64::new((1.0 / x).sin(), 0.0)), 1e-4, 1.0, 1e-14, 8);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
        let r = integrate(|x| Ok(Complex64::new(1.0 / x, 0.0)), 0.0, 1.0, 1e-8, 100);
        assert!(r.is_err());
    }
}
