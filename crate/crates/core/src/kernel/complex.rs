use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{double_factorial_ratios, weighted_sequence, ScaledComplex};

fn check_size(n: usize, tau: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("kernel size n must be positive".into()));
    }
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Precondition(format!("tau = {tau} outside [0, 1)")));
    }
    Ok(())
}

/// `sum_{k<n} r_k h_k(x) h_k(y)` for weighted terms at `x`, `y`.
fn mehler_sum(n: usize, tau: f64, x: Complex64, y: Complex64, ratios: &[f64]) -> ScaledComplex {
    let hx = weighted_sequence(x, tau, n, ratios);
    let hy = weighted_sequence(y, tau, n, ratios);
    let mut acc = ScaledComplex::ZERO;
    for k in 0..n {
        acc += (hx[k] * hy[k]).scale(ratios[k]);
    }
    acc
}

/// Partial Mehler sum `S_n(zeta, eta) = sum_{k<n} (tau/2)^k / k! H_k(zeta) H_k(eta)`.
pub fn complex_kernel_s(n: usize, tau: f64, zeta: Complex64, eta: Complex64) -> Result<ScaledComplex> {
    check_size(n, tau)?;
    let ratios = double_factorial_ratios(n);
    let s = (2.0 * tau).sqrt();
    Ok(mehler_sum(n, tau, s * zeta, s * eta, &ratios))
}

/// Kernel of the complex elliptic Ginibre ensemble with `n` points at scale `N`,
/// `N sqrt(1 - tau^2) e^{-N (z v - tau/2 (z^2 + v^2))} S_n(a z, a v)` with
/// `a = sqrt(N (1 - tau^2) / (2 tau))` and `v` standing for the conjugated second argument.
pub fn cal_k(n: usize, big_n: usize, tau: f64, z: Complex64, v: Complex64) -> Result<ScaledComplex> {
    check_size(n, tau)?;
    if big_n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    let nf = big_n as f64;
    let ratios = double_factorial_ratios(n);
    let root = (nf * (1.0 - tau * tau)).sqrt();
    let sum = mehler_sum(n, tau, root * z, root * v, &ratios);
    let log = -nf * (z * v - tau / 2.0 * (z * z + v * v));
    Ok((sum * ScaledComplex::exp(log)).scale(nf * (1.0 - tau * tau).sqrt()))
}

/// Relative residual of the Christoffel-Darboux identity for `d S_n / d zeta`.
pub fn complex_cd_residual(n: usize, tau: f64, zeta: Complex64, eta: Complex64) -> Result<f64> {
    check_size(n, tau)?;
    if tau == 0.0 {
        return Err(Error::TauZero);
    }
    let ratios = double_factorial_ratios(n + 1);
    let s = (2.0 * tau).sqrt();
    let hz = weighted_sequence(s * zeta, tau, n + 1, &ratios);
    let he = weighted_sequence(s * eta, tau, n + 1, &ratios);
    let q = 1.0 - tau * tau;

    let mut sum = ScaledComplex::ZERO;
    let mut deriv = ScaledComplex::ZERO;
    let mut abs_sum = ScaledComplex::ZERO;
    let mut abs_deriv = ScaledComplex::ZERO;
    for k in 0..n {
        let t = (hz[k] * he[k]).scale(ratios[k]);
        sum += t;
        abs_sum += t.abs();
        if k > 0 {
            let d = (hz[k - 1] * he[k]).scale(s * ratios[k - 1] * ratios[k]);
            deriv += d;
            abs_deriv += d.abs();
        }
    }
    let lin = 2.0 * tau / q * (eta - tau * zeta);
    let c = 2.0 / q * (tau / 2.0).sqrt() * n as f64;
    let first = (hz[n] * he[n - 1]).scale(c * tau);
    let second = (hz[n - 1] * he[n]).scale(c);
    let rhs = sum.mul_complex(lin) + first - second;

    let scale = [abs_deriv, abs_sum.scale(lin.norm()), first.abs(), second.abs()]
        .into_iter()
        .max_by(|a, b| a.cmp_abs(b))
        .unwrap_or(ScaledComplex::ZERO);
    let diff = deriv - rhs;
    if diff.is_zero() {
        return Ok(0.0);
    }
    Ok((diff / scale).to_complex().norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_sequence_scaled;
    use crate::kernel::{e1, KernelContext};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mehler_sum_small_n() {
        let (tau, zeta, eta) = (0.4, c(0.3, -0.2), c(1.1, 0.5));
        let s = complex_kernel_s(4, tau, zeta, eta).unwrap().to_complex();
        let hz = hermite_sequence_scaled(3, zeta).unwrap();
        let he = hermite_sequence_scaled(3, eta).unwrap();
        let mut direct = Complex64::new(0.0, 0.0);
        let mut fact = 1.0;
        for k in 0..4 {
            if k > 0 {
                fact *= k as f64;
            }
            direct += (tau / 2.0f64).powi(k as i32) / fact * hz[k].to_complex() * he[k].to_complex();
        }
        assert!((s - direct).norm() < 1e-14 * direct.norm());
    }

    #[test]
    fn cd_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let tau = rng.gen_range(0.05..0.95);
            let zeta = c(rng.gen_range(-6.0..6.0), rng.gen_range(-3.0..3.0));
            let eta = c(rng.gen_range(-6.0..6.0), rng.gen_range(-3.0..3.0));
            let r = complex_cd_residual(50, tau, zeta, eta).unwrap();
            assert!(r < 1e-11, "tau {tau}: {r}");
        }
    }

    #[test]
    fn relation_to_e1() {
        let ctx = KernelContext::new(40, 0.35, 0.0).unwrap();
        let (xi, om) = (c(0.4, 0.3), c(-0.2, 0.8));
        let a = e1(&ctx, xi, om).unwrap();
        let b = cal_k(80, 40, 0.35, xi, om).unwrap().scale(2.0 / 40.0);
        assert!(a.relative_distance(&b) < 1e-13);
    }

    #[test]
    fn bulk_diagonal_density() {
        let big_n = 300;
        for z in [c(0.0, 0.0), c(0.8, 0.4), c(-1.2, -0.2)] {
            let k = cal_k(2 * big_n, big_n, 0.4, z, z.conj()).unwrap().to_complex() / big_n as f64;
            assert!((k - 1.0).norm() < 1e-6, "{z}: {k}");
        }
    }
}
