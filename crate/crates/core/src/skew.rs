//! The skew form, the skew-orthogonal polynomials of the elliptic potential,
//! and a polynomial-coefficient construction of the pre-kernel used to
//! cross-check the Hermite-series evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::ScaledComplex;
use crate::kernel::KernelContext;

/// Largest Gauss-Hermite rule used by [`skew_inner`].
pub const MAX_NODES: usize = 120;
/// Largest `k` accepted by [`q_even`] and [`q_odd`].
pub const MAX_INDEX: usize = 30;
/// Largest `N` accepted by [`prekernel_via_sop`].
pub const MAX_SOP_N: usize = 10;

/// Polynomial in the monomial basis, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { coeffs };
        while p.coeffs.len() > 1 && p.coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            p.coeffs.pop();
        }
        if p.coeffs.is_empty() {
            p.coeffs.push(Complex64::new(0.0, 0.0));
        }
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

/// Monic scaled Hermite polynomials `P_j = (tau / 2N)^{j/2} H_j(sqrt(N / 2 tau) zeta)`, `j <= m`.
///
/// `P_{j+1} = zeta P_j - (j tau / N) P_{j-1}`, which reduces to monomials at `tau = 0`.
fn monic_hermite(m: usize, n: usize, tau: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
    if m >= 1 {
        out.push(vec![0.0, 1.0]);
    }
    for j in 1..m {
        let mut next = vec![0.0; j + 2];
        for (i, &c) in out[j].iter().enumerate() {
            next[i + 1] += c;
        }
        let f = j as f64 * tau / n as f64;
        for (i, &c) in out[j - 1].iter().enumerate() {
            next[i] -= f * c;
        }
        out.push(next);
    }
    out
}

fn check_params(k: usize, n: usize, tau: f64) -> Result<()> {
    if k > MAX_INDEX {
        return Err(Error::Precondition(format!("index {k} exceeds {MAX_INDEX}")));
    }
    if n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Precondition(format!("tau = {tau} outside [0, 1)")));
    }
    Ok(())
}

/// `q_{2k} = (2/N)^k k! sum_{l<=k} N^l / (2^l l!) P_{2l}`.
pub fn q_even(k: usize, n: usize, tau: f64) -> Result<Polynomial> {
    check_params(k, n, tau)?;
    let p = monic_hermite(2 * k, n, tau);
    let nf = n as f64;
    let mut coeffs = vec![0.0; 2 * k + 1];
    // weight (2/N)^{k-l} k! / l!, built from l = k downwards
    let mut weight = 1.0;
    for l in (0..=k).rev() {
        for (i, &c) in p[2 * l].iter().enumerate() {
            coeffs[i] += weight * c;
        }
        weight *= 2.0 * l as f64 / nf;
    }
    Ok(Polynomial::from_real(&coeffs))
}

/// `q_{2k+1} = P_{2k+1}`.
pub fn q_odd(k: usize, n: usize, tau: f64) -> Result<Polynomial> {
    check_params(k, n, tau)?;
    Ok(Polynomial::from_real(&monic_hermite(2 * k + 1, n, tau)[2 * k + 1]))
}

/// `q_m` for either parity.
pub fn q(m: usize, n: usize, tau: f64) -> Result<Polynomial> {
    if m % 2 == 0 {
        q_even(m / 2, n, tau)
    } else {
        q_odd(m / 2, n, tau)
    }
}

/// Skew norm `r_k = 2 (1 - tau)^{3/2} (1 + tau)^{1/2} (2k+1)! / N^{2k+2}`.
pub fn r_norm(k: usize, n: usize, tau: f64) -> f64 {
    let nf = n as f64;
    let mut r = 2.0 * (1.0 - tau).powf(1.5) * (1.0 + tau).sqrt() / (nf * nf);
    for j in 1..=k {
        r *= (2 * j) as f64 * (2 * j + 1) as f64 / (nf * nf);
    }
    r
}

/// Gauss-Hermite nodes and weights for the weight `e^{-x^2}`, by Newton iteration
/// on the orthonormal recurrence.
fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    let pim4 = PI.powf(-0.25);
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * out[0].0,
            3 => 1.91 * z - 0.91 * out[1].0,
            _ => 2.0 * z - out[i - 2].0,
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / j as f64).sqrt() * p2 - ((j - 1) as f64 / j as f64).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let step = p1 / pp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        out[i] = (z, 2.0 / (pp * pp));
        out[n - 1 - i] = (-z, 2.0 / (pp * pp));
    }
    out
}

/// `<f, g>_s = int (f(z) g(conj z) - g(z) f(conj z)) (z - conj z) e^{-N Q(z)} dA(z)` with `dA = d^2 z / pi`.
///
/// After `x = sqrt((1 + tau)/N) u`, `y = sqrt((1 - tau)/N) v` the weight separates
/// into `e^{-u^2 - v^2}` and a tensor Gauss-Hermite rule integrates the
/// polynomial integrand exactly.
pub fn skew_inner(f: &Polynomial, g: &Polynomial, n: usize, tau: f64) -> Result<Complex64> {
    let nodes = (f.degree() + g.degree() + 1) / 2 + 4;
    skew_inner_with_nodes(f, g, n, tau, nodes)
}

/// [`skew_inner`] with an explicit node count per axis.
pub fn skew_inner_with_nodes(f: &Polynomial, g: &Polynomial, n: usize, tau: f64, nodes: usize) -> Result<Complex64> {
    check_params(0, n, tau)?;
    if nodes > MAX_NODES {
        return Err(Error::Precondition(format!("{nodes} quadrature nodes exceed the budget of {MAX_NODES}")));
    }
    if 2 * nodes < f.degree() + g.degree() + 2 {
        return Err(Error::Precondition(format!("{nodes} nodes cannot integrate degree {} exactly", f.degree() + g.degree() + 1)));
    }
    let nf = n as f64;
    let (sx, sy) = (((1.0 + tau) / nf).sqrt(), ((1.0 - tau) / nf).sqrt());
    let rule = gauss_hermite(nodes);
    let mut total = Complex64::new(0.0, 0.0);
    for &(u, wu) in &rule {
        for &(v, wv) in &rule {
            let z = Complex64::new(sx * u, sy * v);
            let zb = z.conj();
            let integrand = (f.eval(z) * g.eval(zb) - g.eval(z) * f.eval(zb)) * (z - zb);
            total += integrand * (wu * wv);
        }
    }
    Ok(total * ((1.0 - tau * tau).sqrt() / (nf * PI)))
}

/// Largest deviation of `<q_a, q_b>_s` from its skew-orthogonality value, over
/// `a, b <= 2 k_max + 1`, in units of `r_0`.
pub fn verify_skew_orthogonality(n: usize, tau: f64, k_max: usize) -> Result<f64> {
    let qs: Vec<Polynomial> = (0..=2 * k_max + 1).map(|m| q(m, n, tau)).collect::<Result<_>>()?;
    let r0 = r_norm(0, n, tau);
    let mut worst = 0.0f64;
    for (a, qa) in qs.iter().enumerate() {
        for (b, qb) in qs.iter().enumerate() {
            let expected = match (a % 2, b % 2) {
                (0, 1) if a / 2 == b / 2 => r_norm(a / 2, n, tau),
                (1, 0) if a / 2 == b / 2 => -r_norm(a / 2, n, tau),
                _ => 0.0,
            };
            let got = skew_inner(qa, qb, n, tau)?;
            worst = worst.max((got - expected).norm() / r0);
        }
    }
    Ok(worst)
}

/// Rescaled pre-kernel from the skew-orthogonal polynomials,
/// `(N delta)^{-3/2} sum_{k<N} (q_{2k+1}(zeta) q_{2k}(eta) - q_{2k}(zeta) q_{2k+1}(eta)) / r_k`
/// at `zeta, eta` the kernel centre plus `z, w` over the microscopic scale.
pub fn prekernel_via_sop(n: usize, tau: f64, p: f64, z: Complex64, w: Complex64) -> Result<ScaledComplex> {
    if n > MAX_SOP_N {
        return Err(Error::Precondition(format!("polynomial path limited to N <= {MAX_SOP_N}, got {n}")));
    }
    let ctx = KernelContext::new(n, tau, p)?;
    let zeta = ctx.kernel_center() + z / ctx.scale();
    let eta = ctx.kernel_center() + w / ctx.scale();
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let (qe, qo) = (q_even(k, n, tau)?, q_odd(k, n, tau)?);
        total += (qo.eval(zeta) * qe.eval(eta) - qe.eval(zeta) * qo.eval(eta)) / r_norm(k, n, tau);
    }
    Ok(ScaledComplex::from_complex(total / (n as f64 * ctx.delta()).powf(1.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kappa_n;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// `q_{2k}` in exact arithmetic from the explicit Hermite sum
    /// `H_j(x) = j! sum_m (-1)^m (2x)^{j-2m} / (m! (j-2m)!)`, for rational `tau`.
    fn q_even_exact(k: usize, n: i64, tau: &BigRational) -> Vec<BigRational> {
        let fact = |m: usize| -> BigRational { (1..=m).fold(BigRational::one(), |a, i| a * rat(i as i64, 1)) };
        let pow = |b: &BigRational, e: usize| (0..e).fold(BigRational::one(), |a, _| a * b);
        let mut out = vec![BigRational::zero(); 2 * k + 1];
        for l in 0..=k {
            // N^l / (2^l l!) times the monic P_{2l}; coefficient of zeta^{2l-2m} in P_{2l}
            // is (2l)! (-1)^m (tau / 2N)^m / (m! (2l-2m)!)
            let weight = pow(&rat(n, 2), l) / fact(l);
            for m in 0..=l {
                let sign = if m % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                let term = sign * fact(2 * l) / (fact(m) * fact(2 * l - 2 * m))
                    * pow(&(tau / rat(2 * n, 1)), m);
                out[2 * l - 2 * m] += weight.clone() * term;
            }
        }
        let pre = pow(&rat(2, n), k) * fact(k);
        out.into_iter().map(|x| x * pre.clone()).collect()
    }

    #[test]
    fn low_order_closed_forms() {
        let (n, tau) = (4, 0.3);
        assert_eq!(q_even(0, n, tau).unwrap().coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(q_odd(0, n, tau).unwrap().coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        let q2 = q_even(1, n, tau).unwrap();
        // zeta^2 + (2 - tau) / N
        assert!((q2.coeffs()[0].re - (2.0 - tau) / n as f64).abs() < 1e-15);
        assert_eq!(q2.leading(), c(1.0, 0.0));
    }

    #[test]
    fn even_polynomials_match_exact_expansion() {
        let tau = rat(3, 10);
        for (n, k) in [(4i64, 2usize), (4, 5), (7, 4), (3, 8)] {
            let exact = q_even_exact(k, n, &tau);
            let got = q_even(k, n as usize, 0.3).unwrap();
            for (i, e) in exact.iter().enumerate() {
                let e = e.to_f64().unwrap();
                let g = got.coeffs()[i].re;
                assert!((g - e).abs() <= 1e-13 * e.abs().max(1.0), "N={n} k={k} coeff {i}: {g} vs {e}");
            }
        }
    }

    #[test]
    fn monic_with_parity() {
        for k in 0..=MAX_INDEX {
            for p in [q_even(k, 6, 0.4).unwrap(), q_odd(k, 6, 0.4).unwrap()] {
                assert_eq!(p.leading(), c(1.0, 0.0));
                let parity = p.degree() % 2;
                assert!(p.coeffs().iter().enumerate().all(|(i, x)| i % 2 == parity || *x == c(0.0, 0.0)));
            }
        }
        assert!(q_even(MAX_INDEX + 1, 6, 0.4).is_err());
    }

    #[test]
    fn norm_formula() {
        let (n, tau) = (4, 0.3);
        let r0 = skew_inner(&q_even(0, n, tau).unwrap(), &q_odd(0, n, tau).unwrap(), n, tau).unwrap();
        let closed = 2.0 * 0.7f64.powf(1.5) * 1.3f64.sqrt() / 16.0;
        assert!((r0.re - closed).abs() < 1e-10 * closed && r0.im.abs() < 1e-15);
        assert!((r_norm(0, n, tau) - closed).abs() < 1e-15 * closed);
        for k in 0..6 {
            let ratio = r_norm(k + 1, n, tau) / r_norm(k, n, tau);
            let expect = ((2 * k + 3) * (2 * k + 2)) as f64 / 16.0;
            assert!((ratio - expect).abs() < 1e-14 * expect);
        }
    }

    #[test]
    fn skew_orthogonal_family() {
        assert!(verify_skew_orthogonality(4, 0.3, 3).unwrap() <= 1e-9);
        assert!(verify_skew_orthogonality(4, 0.0, 3).unwrap() <= 1e-9);
        assert!(verify_skew_orthogonality(9, 0.7, 5).unwrap() <= 1e-9);
        let q0 = q_even(0, 4, 0.3).unwrap();
        let q2 = q_even(1, 4, 0.3).unwrap();
        assert!(skew_inner(&q0, &q2, 4, 0.3).unwrap().norm() < 1e-12);
    }

    #[test]
    fn quadrature_is_exact() {
        let pairs = [
            (q_even(4, 5, 0.45).unwrap(), q_odd(4, 5, 0.45).unwrap()),
            (Polynomial::from_real(&[0.3, -1.0, 0.0, 2.0, 0.5]), Polynomial::from_real(&[1.0, 0.25, -0.7, 0.0, 0.0, 1.0])),
        ];
        for (f, g) in &pairs {
            let a = skew_inner(f, g, 5, 0.45).unwrap();
            let b = skew_inner_with_nodes(f, g, 5, 0.45, 2 * ((f.degree() + g.degree() + 1) / 2 + 4)).unwrap();
            assert!((a - b).norm() <= 1e-13 * a.norm(), "{a} vs {b}");
        }
        let (f, g) = &pairs[0];
        assert!(skew_inner_with_nodes(f, g, 5, 0.45, MAX_NODES + 1).is_err());
        assert!(skew_inner_with_nodes(f, g, 5, 0.45, 3).is_err());
    }

    #[test]
    fn gauss_hermite_moments() {
        let rule = gauss_hermite(20);
        let m0: f64 = rule.iter().map(|&(_, w)| w).sum();
        let m2: f64 = rule.iter().map(|&(x, w)| w * x * x).sum();
        let m8: f64 = rule.iter().map(|&(x, w)| w * x.powi(8)).sum();
        let sp = PI.sqrt();
        assert!((m0 - sp).abs() < 1e-14 && (m2 - sp / 2.0).abs() < 1e-14);
        assert!((m8 - 105.0 / 16.0 * sp).abs() < 1e-12);
    }

    #[test]
    fn sop_prekernel_matches_hermite_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (n, tau, p) in [(4, 0.3, 0.0), (4, 0.3, 1.2), (4, 0.0, 0.5), (7, 0.6, 2.262741699796952)] {
            let ctx = KernelContext::new(n, tau, p).unwrap();
            for _ in 0..10 {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let w = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let a = prekernel_via_sop(n, tau, p, z, w).unwrap();
                let b = kappa_n(&ctx, z, w).unwrap();
                assert!(a.relative_distance(&b) <= 1e-10, "N={n} tau={tau}: {a} vs {b}");
            }
        }
        let (z, w) = (c(0.3, 0.8), c(-1.1, 0.2));
        let k = prekernel_via_sop(1, 0.4, 0.0, z, w).unwrap().to_complex();
        let expect = 2.0 * 1.4 * (1.0f64 - 0.16).sqrt() * (z - w);
        assert!((k - expect).norm() < 1e-14 * expect.norm());
        assert!(prekernel_via_sop(MAX_SOP_N + 1, 0.4, 0.0, z, w).is_err());
    }

    proptest! {
        #[test]
        fn skew_symmetric_and_bilinear(
            a in prop::collection::vec(-1.0f64..1.0, 1..6),
            b in prop::collection::vec(-1.0f64..1.0, 1..6),
            d in prop::collection::vec(-1.0f64..1.0, 1..6),
            s in -2.0f64..2.0, t in -2.0f64..2.0,
            tau in 0.0f64..0.9,
        ) {
            let (f, g, h) = (Polynomial::from_real(&a), Polynomial::from_real(&b), Polynomial::from_real(&d));
            let n = 3;
            let fg = skew_inner(&f, &g, n, tau).unwrap();
            let gf = skew_inner(&g, &f, n, tau).unwrap();
            prop_assert!((fg + gf).norm() <= 1e-14 * fg.norm().max(1e-3));
            prop_assert!(skew_inner(&f, &f, n, tau).unwrap().norm() < 1e-15);
            let len = a.len().max(d.len());
            let comb: Vec<f64> = (0..len).map(|i| s * a.get(i).copied().unwrap_or(0.0) + t * d.get(i).copied().unwrap_or(0.0)).collect();
            let lhs = skew_inner(&Polynomial::from_real(&comb), &g, n, tau).unwrap();
            let rhs = s * fg + t * skew_inner(&h, &g, n, tau).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
