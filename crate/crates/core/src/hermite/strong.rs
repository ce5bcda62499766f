use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::scaled::ScaledComplex;
use crate::error::{Error, Result};

/// Distance to the cut `[-F0, F0]` below which `g`, `psi` and `psi'` refuse to evaluate.
pub const BRANCH_TOLERANCE: f64 = 1e-8;

/// Constants of the strong asymptotics of `H_{TN+R}` for a degree ratio `T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticFrame {
    pub t: f64,
    pub tau: f64,
    /// `T (log(T / (1 - tau^2)) - 1)`
    pub l: f64,
    /// Half-length of the cut, `2 sqrt(T tau / (1 - tau^2))`.
    pub f0: f64,
    /// Right end of the ellipse `K_T` on the real axis.
    pub x0: f64,
    /// Curvature of the boundary of `K_T` at `x0`.
    pub kappa_t: f64,
}

impl AsymptoticFrame {
    pub fn new(t: f64, tau: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Precondition(format!("degree ratio T = {t} must be positive")));
        }
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::Precondition(format!("tau = {tau} outside [0, 1)")));
        }
        let s = 1.0 - tau * tau;
        let k = (1.0 + tau) / (1.0 - tau);
        Ok(Self {
            t,
            tau,
            l: t * ((t / s).ln() - 1.0),
            f0: 2.0 * (t * tau / s).sqrt(),
            x0: (t * k).sqrt(),
            kappa_t: k.powf(1.5) / t.sqrt(),
        })
    }

    /// `sqrt(z - F0) sqrt(z + F0)`: cut on `[-F0, F0]`, asymptotic to `z`.
    pub fn radical(&self, z: Complex64) -> Complex64 {
        (z - self.f0).sqrt() * (z + self.f0).sqrt()
    }

    /// Distance from `z` to the segment `[-F0, F0]`.
    pub fn branch_distance(&self, z: Complex64) -> f64 {
        let x = z.re.clamp(-self.f0, self.f0);
        (z - x).norm()
    }

    fn check_branch(&self, z: Complex64) -> Result<()> {
        let d = self.branch_distance(z);
        if d < BRANCH_TOLERANCE {
            return Err(Error::Precondition(format!(
                "z = {z} lies within {d:e} of the branch cut [-{0}, {0}]",
                self.f0
            )));
        }
        Ok(())
    }

    /// `sqrt((1 - tau^2) / (4T))`, equal to `sqrt(tau) / F0` when `tau > 0`.
    fn psi_scale(&self) -> f64 {
        ((1.0 - self.tau * self.tau) / (4.0 * self.t)).sqrt()
    }

    fn g_unchecked(&self, z: Complex64) -> Complex64 {
        let u = z + self.radical(z);
        u.ln() + z / u - LN_2 - 0.5
    }

    pub fn g(&self, z: Complex64) -> Result<Complex64> {
        self.check_branch(z)?;
        Ok(self.g_unchecked(z))
    }

    pub fn psi(&self, z: Complex64) -> Result<Complex64> {
        self.check_branch(z)?;
        Ok(self.psi_scale() * (z + self.radical(z)))
    }

    pub fn psi_prime(&self, z: Complex64) -> Result<Complex64> {
        self.check_branch(z)?;
        Ok(self.psi_scale() * (1.0 + z / self.radical(z)))
    }

    pub fn psi_second(&self, z: Complex64) -> Result<Complex64> {
        self.check_branch(z)?;
        let s = self.radical(z);
        Ok(-self.psi_scale() * self.f0 * self.f0 / (s * s * s))
    }

    /// `|z|^2 - tau Re z^2 - 2T Re g(z) + l`, nonnegative and zero exactly on the boundary of `K_T`.
    ///
    /// `Re g` is continuous across the cut, so any `z` is accepted.
    pub fn omega(&self, z: Complex64) -> f64 {
        z.norm_sqr() - self.tau * (z * z).re - 2.0 * self.t * self.g_unchecked(z).re + self.l
    }

    /// Membership in the ellipse `K_T`.
    pub fn contains(&self, z: Complex64) -> bool {
        let k = (1.0 + self.tau) / (1.0 - self.tau);
        z.re * z.re / k + k * z.im * z.im <= self.t * (1.0 + 1e-14)
    }

    fn degree(&self, n: usize, r: i64) -> Result<usize> {
        let d = (self.t * n as f64).round() as i64 + r;
        if d < 0 {
            return Err(Error::Precondition(format!("degree T N + R = {d} is negative")));
        }
        Ok(d as usize)
    }

    fn common_log(&self, n: usize, d: usize) -> f64 {
        let nf = n as f64;
        -(d as f64) / 2.0 * (self.tau / 2.0).ln() + 0.5 * (ln_gamma(d as f64 + 1.0) - nf.ln())
    }

    /// Leading term of `H_{TN+R}(sqrt(N (1 - tau^2) / (2 tau)) z)` off the cut.
    pub fn hermite_asymptotic(&self, n: usize, r: i64, z: Complex64) -> Result<ScaledComplex> {
        if self.tau == 0.0 {
            return Err(Error::TauZero);
        }
        let d = self.degree(n, r)?;
        let nf = n as f64;
        let psi = self.psi(z)?;
        let dpsi = self.psi_prime(z)?;
        let log = 0.25 * (nf / (2.0 * PI * (1.0 - self.tau * self.tau))).ln()
            + self.common_log(n, d)
            + r as f64 * psi.ln()
            + 0.5 * dpsi.ln()
            + nf * (self.t * self.g(z)? - self.l / 2.0);
        Ok(ScaledComplex::exp(log))
    }

    /// Envelope `(tau/2)^{-d/2} sqrt(d!/N) |exp(N (T g(z) - l/2))|` of the uniform modulus bound.
    pub fn hermite_envelope(&self, n: usize, r: i64, z: Complex64) -> Result<ScaledComplex> {
        if self.tau == 0.0 {
            return Err(Error::TauZero);
        }
        let d = self.degree(n, r)?;
        let nf = n as f64;
        let log = self.common_log(n, d) + nf * (self.t * self.g_unchecked(z).re - self.l / 2.0);
        Ok(ScaledComplex::exp(Complex64::new(log, 0.0)))
    }

    /// The argument scale `sqrt(N (1 - tau^2) / (2 tau))` of the asymptotic formulas.
    pub fn argument_scale(&self, n: usize) -> f64 {
        (n as f64 * (1.0 - self.tau * self.tau) / (2.0 * self.tau)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::rate_fit;
    use crate::hermite::hermite_scaled;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frame_constants() {
        let f = AsymptoticFrame::new(2.0, 0.3).unwrap();
        assert!((f.f0 - 2.0 * (0.6 / 0.91f64).sqrt()).abs() < 1e-15);
        assert!((f.kappa_t - (1.3f64 / 0.7).powf(1.5) / 2f64.sqrt()).abs() < 1e-15);
        assert!((f.x0 - (2.0 * 1.3 / 0.7f64).sqrt()).abs() < 1e-15);
        assert!(AsymptoticFrame::new(0.0, 0.3).is_err());
        assert!(AsymptoticFrame::new(2.0, 1.0).is_err());
    }

    #[test]
    fn psi_at_boundary_point() {
        for tau in [0.1, 1.0 / 3.0, 0.5, 0.8] {
            for t in [1.0, 2.0, 3.5] {
                let f = AsymptoticFrame::new(t, tau).unwrap();
                let x0 = c(f.x0, 0.0);
                assert!((f.psi(x0).unwrap() - 1.0).norm() < 1e-14);
                let d1 = ((1.0 + tau) / (t * (1.0 - tau))).sqrt();
                assert!((f.psi_prime(x0).unwrap() - d1).norm() < 1e-13 * d1);
                let d2 = -2.0 * tau * (1.0 + tau) / (t * (1.0 - tau) * (1.0 - tau));
                assert!((f.psi_second(x0).unwrap() - d2).norm() < 1e-13 * d2.abs());
                // and by differencing psi'
                let h = 1e-6;
                let fd = (f.psi_prime(x0 + h).unwrap() - f.psi_prime(x0 - h).unwrap()) / (2.0 * h);
                assert!((fd - d2).norm() < 1e-7 * d2.abs(), "tau {tau} t {t}: {fd} vs {d2}");
            }
        }
    }

    #[test]
    fn branch_cut_is_guarded() {
        let f = AsymptoticFrame::new(2.0, 0.5).unwrap();
        assert!(f.g(c(0.3, 0.0)).is_err());
        assert!(f.psi(c(f.f0, 1e-9)).is_err());
        assert!(f.psi(c(f.f0 + 1e-6, 0.0)).is_ok());
        let big = c(1e6, 3.0);
        assert!((f.radical(big) / big - 1.0).norm() < 1e-9);
        let big = c(-1e6, -3.0);
        assert!((f.radical(big) / big - 1.0).norm() < 1e-9);
    }

    #[test]
    fn omega_vanishes_on_boundary_and_is_positive_inside() {
        let f = AsymptoticFrame::new(2.0, 0.3).unwrap();
        assert!(f.omega(c(f.x0, 0.0)).abs() < 1e-13);
        assert!(f.omega(c(0.5 * f.x0, 0.0)) > 0.0);
        let k: f64 = 1.3 / 0.7;
        for j in 0..64 {
            let th = 2.0 * PI * j as f64 / 64.0;
            let z = c((2.0 * k).sqrt() * th.cos(), (2.0 / k).sqrt() * th.sin());
            assert!(f.omega(z).abs() < 1e-12, "boundary point {z}");
        }
    }

    #[test]
    fn omega_nonnegative_on_grid_with_minimum_on_boundary() {
        let f = AsymptoticFrame::new(2.0, 0.3).unwrap();
        let n = 200;
        let h = 4.0 * f.x0 / (n - 1) as f64;
        let mut min = f64::INFINITY;
        let mut argmin = c(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let z = c(-2.0 * f.x0 + i as f64 * h, -2.0 * f.x0 + j as f64 * h);
                let o = f.omega(z);
                assert!(o > -1e-12, "Omega({z}) = {o}");
                if o < min {
                    min = o;
                    argmin = z;
                }
            }
        }
        // Distance of the minimiser to the ellipse, measured along the ray.
        let k: f64 = 1.3 / 0.7;
        let rho = (argmin.re * argmin.re / k + k * argmin.im * argmin.im).sqrt() / 2f64.sqrt();
        let dist = (argmin - argmin / rho).norm();
        assert!(dist <= h, "minimum at {argmin}, {dist} from the boundary");
        assert!(min < 1e-6 + 2.0 * h * h);
    }

    #[test]
    fn omega_quadratic_near_boundary() {
        let f = AsymptoticFrame::new(2.0, 0.3).unwrap();
        let samples: Vec<(usize, f64)> = (0..6)
            .map(|i| {
                let d = 0.02 / 2f64.powi(i);
                let s = c(f.x0 + d, 0.0);
                // index encodes 1/d so the fitted slope is the exponent
                ((1.0 / d).round() as usize, (f.omega(s) - 2.0 * d * d).abs())
            })
            .collect();
        let slope = -rate_fit(&samples).unwrap();
        assert!(slope >= 2.9, "fitted exponent {slope}");
    }

    #[test]
    fn droplet_membership() {
        let f = AsymptoticFrame::new(2.0, 0.5).unwrap();
        assert!(f.contains(c(0.0, 0.0)));
        assert!(f.contains(c(f.x0, 0.0)));
        assert!(!f.contains(c(1.01 * f.x0, 0.0)));
    }

    fn relative_error(n: usize, f: &AsymptoticFrame, z: f64, r: i64) -> f64 {
        let d = (f.t * n as f64).round() as i64 + r;
        let exact = hermite_scaled(d as usize, c(f.argument_scale(n) * z, 0.0)).unwrap();
        let asym = f.hermite_asymptotic(n, r, c(z, 0.0)).unwrap();
        asym.relative_distance(&exact)
    }

    #[test]
    fn strong_asymptotics_error_is_order_one_over_n() {
        let f = AsymptoticFrame::new(2.0, 1.0 / 3.0).unwrap();
        let z = 1.2 * f.x0;
        let e200 = relative_error(200, &f, z, 0);
        let e400 = relative_error(400, &f, z, 0);
        let ratio = e200 / e400;
        assert!((1.6..=2.5).contains(&ratio), "ratio {ratio} ({e200:e}, {e400:e})");
    }

    #[test]
    fn strong_asymptotics_complex_point() {
        let f = AsymptoticFrame::new(2.0, 0.5).unwrap();
        let z = c(0.4 * f.x0, 0.8);
        let n = 400;
        let exact = hermite_scaled(2 * n, z * f.argument_scale(n)).unwrap();
        let asym = f.hermite_asymptotic(n, 0, z).unwrap();
        assert!(asym.relative_distance(&exact) < 1e-2);
    }

    #[test]
    fn shifted_degree_ratio() {
        let f = AsymptoticFrame::new(2.0, 0.4).unwrap();
        let n = 500;
        let z = c(1.1 * f.x0, 0.3);
        let x = z * f.argument_scale(n);
        let exact = hermite_scaled(2 * n - 1, x).unwrap() / hermite_scaled(2 * n, x).unwrap();
        let asym = f.hermite_asymptotic(n, -1, z).unwrap() / f.hermite_asymptotic(n, 0, z).unwrap();
        assert!(asym.relative_distance(&exact) < 1e-2);
        // the ratio itself is psi^{-1} sqrt(tau/2) / sqrt(2N), up to cancellation in ln_gamma
        let closed = (0.2f64).sqrt() / ((2 * n) as f64).sqrt() / f.psi(z).unwrap();
        assert!((asym.to_complex() - closed).norm() < 1e-10 * closed.norm(), "{} vs {closed}", asym.to_complex());
    }

    #[test]
    fn modulus_bound_constant_does_not_grow() {
        let f = AsymptoticFrame::new(2.0, 0.5).unwrap();
        let mut worst = Vec::new();
        for n in [25usize, 50, 100, 200] {
            let mut m: f64 = 0.0;
            for i in 0..41 {
                for j in 0..9 {
                    let z = c(-1.5 * f.x0 + 3.0 * f.x0 * i as f64 / 40.0, -0.4 + 0.1 * j as f64);
                    let exact = hermite_scaled(2 * n, z * f.argument_scale(n)).unwrap();
                    let env = f.hermite_envelope(n, 0, z).unwrap();
                    let ratio = (exact.abs() / env).to_complex().re / (n as f64).powf(5.0 / 12.0);
                    m = m.max(ratio);
                }
            }
            worst.push(m);
        }
        assert!(worst.iter().all(|w| w.is_finite() && *w > 0.0));
        assert!(worst[3] <= 1.5 * worst[0], "observed constants {worst:?}");
    }

    /// `N [(1-tau)/2 s^2 - T g(s) + l/2]` at `s = x0 + sqrt(2/N) z` minus its two leading terms.
    fn exponent_remainder(f: &AsymptoticFrame, n: usize, z: Complex64) -> f64 {
        let nf = n as f64;
        let s = f.x0 + (2.0 / nf).sqrt() * z;
        let e = nf * ((1.0 - f.tau) / 2.0 * s * s - f.t * f.g(s).unwrap() + f.l / 2.0);
        let lead = 2.0 * z * z - 2.0 * 2f64.sqrt() / 3.0 * f.kappa_t * z * z * z / nf.sqrt();
        (e - lead).norm()
    }

    #[test]
    fn edge_exponent_expansion_rate() {
        let f = AsymptoticFrame::new(2.0, 1.0 / 3.0).unwrap();
        for z in [c(0.5, 0.3), c(-0.7, 0.2), c(1.0, -0.5)] {
            let samples: Vec<(usize, f64)> =
                [500usize, 1000, 2000, 4000, 8000].iter().map(|&n| (n, exponent_remainder(&f, n, z))).collect();
            let slope = rate_fit(&samples).unwrap();
            assert!((slope + 1.0).abs() <= 0.15, "z = {z}: slope {slope}");
        }
    }

    #[test]
    fn edge_psi_expansion_rate() {
        let f = AsymptoticFrame::new(2.0, 0.4).unwrap();
        let k = f.kappa_t;
        let tau = f.tau;
        let (z, s) = (c(0.6, 0.2), c(-0.4, 0.5));
        let mut first = Vec::new();
        let mut second = Vec::new();
        for n in [500usize, 1000, 2000, 4000, 8000] {
            let nf = n as f64;
            let h = (2.0 / nf).sqrt();
            let dz = f.psi_prime(f.x0 + h * z).unwrap().sqrt();
            let ds = f.psi_prime(f.x0 + h * s).unwrap().sqrt();
            let ps = f.psi(f.x0 + h * s).unwrap();
            let base = ((1.0 + tau) / (f.t * (1.0 - tau))).powf(0.25);
            let lead1 = base * (1.0 - 2f64.sqrt() * tau / (1.0 + tau) * k * z / nf.sqrt());
            let lead2 = base * base * (1.0 - 2f64.sqrt() / (1.0 + tau) * k * (s + tau * z) / nf.sqrt());
            first.push((n, (dz - lead1).norm()));
            second.push((n, (dz * ds / ps - lead2).norm()));
        }
        for (name, samples) in [("sqrt psi'", first), ("psi product", second)] {
            let slope = rate_fit(&samples).unwrap();
            assert!((slope + 1.0).abs() <= 0.15, "{name}: slope {slope}");
        }
    }
}
