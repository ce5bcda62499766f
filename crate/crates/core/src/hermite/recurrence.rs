use num_complex::Complex64;

use super::scaled::{ldexp, ScaledComplex};
use crate::error::{Error, Result};
use crate::kernel::KernelContext;

/// Largest supported degree.
pub const MAX_DEGREE: usize = 1_000_000;

const HIGH: f64 = 4_294_967_296.0;
const LOW: f64 = 1.0 / HIGH;

/// Three-term recurrence state sharing one binary exponent between the two
/// most recent values.
struct PairState {
    prev: Complex64,
    cur: Complex64,
    exponent: i64,
}

impl PairState {
    fn new(first: Complex64) -> Self {
        let mut s = Self { prev: Complex64::new(0.0, 0.0), cur: first, exponent: 0 };
        s.rebalance();
        s
    }

    #[inline]
    fn advance(&mut self, next: Complex64) {
        self.prev = self.cur;
        self.cur = next;
        let m = self.cur.re.abs().max(self.cur.im.abs());
        if !(LOW..HIGH).contains(&m) {
            self.rebalance();
        }
    }

    fn rebalance(&mut self) {
        let m = [self.prev.re, self.prev.im, self.cur.re, self.cur.im]
            .iter()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()));
        if m == 0.0 {
            return;
        }
        let shift = m.log2().floor() as i64;
        let f = |c: Complex64| Complex64::new(ldexp(c.re, -shift), ldexp(c.im, -shift));
        self.prev = f(self.prev);
        self.cur = f(self.cur);
        self.exponent += shift;
    }

    #[inline]
    fn current(&self) -> ScaledComplex {
        ScaledComplex::new(self.cur, self.exponent)
    }
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return Err(Error::Precondition(format!("degree {k} exceeds {MAX_DEGREE}")));
    }
    Ok(())
}

/// Physicists' Hermite polynomials `H_0(z), ..., H_{k_max}(z)` in one pass.
pub fn hermite_sequence_scaled(k_max: usize, z: Complex64) -> Result<Vec<ScaledComplex>> {
    check_degree(k_max)?;
    let mut out = Vec::with_capacity(k_max + 1);
    let mut st = PairState::new(Complex64::new(1.0, 0.0));
    out.push(st.current());
    let two_z = 2.0 * z;
    for j in 0..k_max {
        let next = two_z * st.cur - 2.0 * j as f64 * st.prev;
        st.advance(next);
        out.push(st.current());
    }
    Ok(out)
}

/// `H_k(z)` in scaled form.
pub fn hermite_scaled(k: usize, z: Complex64) -> Result<ScaledComplex> {
    check_degree(k)?;
    let mut st = PairState::new(Complex64::new(1.0, 0.0));
    let two_z = 2.0 * z;
    for j in 0..k {
        let next = two_z * st.cur - 2.0 * j as f64 * st.prev;
        st.advance(next);
    }
    Ok(st.current())
}

/// Double-factorial ratios `r_j = j!! / (j-1)!!` for `j = 0..=len`, with `r_0 = 1`.
///
/// They satisfy `r_j r_{j-1} = j`.
pub fn double_factorial_ratios(len: usize) -> Vec<f64> {
    let mut r = Vec::with_capacity(len + 1);
    r.push(1.0);
    for j in 1..=len {
        r.push(j as f64 / r[j - 1]);
    }
    r
}

/// Weighted Hermite terms `h_j = (tau/2)^{j/2} H_j(y / sqrt(2 tau)) / j!!` for `j < len`.
///
/// Evaluated through `h_{j+1} = y h_j / r_{j+1} - tau j/(j+1) h_{j-1}`, which is
/// finite at `tau = 0` where it reduces to `y^j / j!!`.
pub fn weighted_sequence(y: Complex64, tau: f64, len: usize, ratios: &[f64]) -> Vec<ScaledComplex> {
    debug_assert!(ratios.len() >= len);
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let mut st = PairState::new(Complex64::new(1.0, 0.0));
    out.push(st.current());
    for j in 0..len.saturating_sub(1) {
        let jf = j as f64;
        let next = y * st.cur / ratios[j + 1] - (tau * jf / (jf + 1.0)) * st.prev;
        st.advance(next);
        out.push(st.current());
    }
    out
}

/// Monomial terms `y^j / j!!` for `j < len`.
pub fn monomial_sequence(y: Complex64, len: usize, ratios: &[f64]) -> Vec<ScaledComplex> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let mut st = PairState::new(Complex64::new(1.0, 0.0));
    out.push(st.current());
    for j in 1..len {
        let next = y * st.cur / ratios[j];
        st.advance(next);
        out.push(st.current());
    }
    out
}

/// `(tau/2)^{k/2} / k!! * H_k(sqrt(N/(2 tau)) p + sqrt((1 - tau^2)/tau) u)`.
///
/// Only defined for `tau > 0`; the `tau = 0` kernels use monomials instead.
pub fn weighted_hermite_term(k: usize, ctx: &KernelContext, u: Complex64) -> Result<ScaledComplex> {
    check_degree(k)?;
    if ctx.tau() == 0.0 {
        return Err(Error::TauZero);
    }
    let ratios = double_factorial_ratios(k + 1);
    let seq = weighted_sequence(ctx.weighted_argument(u), ctx.tau(), k + 1, &ratios);
    Ok(seq[k])
}
