use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const UPPER: f64 = 4_294_967_296.0; // 2^32
const LOWER: f64 = 1.0 / UPPER;
/// Exponent gap beyond which the smaller addend cannot change the sum.
const ADD_CUTOFF: i64 = 128;

/// A complex number `mantissa * 2^exponent`.
///
/// The larger component of the mantissa is kept in `[2^-32, 2^32)`, which
/// leaves room for one product of two mantissas before renormalising. Zero is
/// stored as `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex {
    mantissa: Complex64,
    exponent: i64,
}

/// Exact multiplication by `2^k`, valid for any `k` that keeps the result representable.
#[inline]
pub(crate) fn ldexp(x: f64, k: i64) -> f64 {
    let mut x = x;
    let mut k = k;
    while k > 1000 {
        x *= f64::from_bits(((1000 + 1023) as u64) << 52);
        k -= 1000;
    }
    while k < -1000 {
        x *= f64::from_bits(((-1000_i64 + 1023) as u64) << 52);
        k += 1000;
    }
    x * f64::from_bits(((k + 1023) as u64) << 52)
}

#[inline]
fn inf_norm(c: Complex64) -> f64 {
    c.re.abs().max(c.im.abs())
}

#[inline]
fn scale_pow2(c: Complex64, k: i64) -> Complex64 {
    Complex64::new(ldexp(c.re, k), ldexp(c.im, k))
}

impl ScaledComplex {
    pub const ZERO: Self = Self { mantissa: Complex64::new(0.0, 0.0), exponent: 0 };
    pub const ONE: Self = Self { mantissa: Complex64::new(1.0, 0.0), exponent: 0 };

    /// Build `mantissa * 2^exponent`, renormalising as needed.
    ///
    /// # Panics
    /// If the mantissa is not finite.
    pub fn new(mantissa: Complex64, exponent: i64) -> Self {
        assert!(
            mantissa.re.is_finite() && mantissa.im.is_finite(),
            "non-finite mantissa {mantissa}"
        );
        let mut s = Self { mantissa, exponent };
        s.renormalize();
        s
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0)
    }

    /// `exp(arg)` without ever forming the raw exponential.
    pub fn exp(arg: Complex64) -> Self {
        let k = (arg.re / LN_2).floor();
        let rest = arg.re - k * LN_2;
        Self::new(Complex64::from_polar(rest.exp(), arg.im), k as i64)
    }

    #[inline]
    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    #[inline]
    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    #[inline]
    fn renormalize(&mut self) {
        let m = inf_norm(self.mantissa);
        if m == 0.0 {
            self.exponent = 0;
            self.mantissa = Complex64::new(0.0, 0.0);
            return;
        }
        if (LOWER..UPPER).contains(&m) {
            return;
        }
        let shift = m.log2().floor() as i64;
        self.mantissa = scale_pow2(self.mantissa, -shift);
        self.exponent += shift;
    }

    /// Plain complex value. Saturates to infinity or flushes to zero out of range.
    pub fn to_complex(&self) -> Complex64 {
        if self.exponent > 1100 {
            let sign = |x: f64| if x == 0.0 { 0.0 } else { x.signum() * f64::INFINITY };
            return Complex64::new(sign(self.mantissa.re), sign(self.mantissa.im));
        }
        if self.exponent < -1200 {
            return Complex64::new(0.0, 0.0);
        }
        scale_pow2(self.mantissa, self.exponent)
    }

    /// Plain complex value, or an overflow error if it is not representable.
    pub fn try_to_complex(&self) -> Result<Complex64> {
        let c = self.to_complex();
        if c.re.is_finite() && c.im.is_finite() {
            Ok(c)
        } else {
            Err(Error::Overflow(format!("scaled value {self} exceeds the double range")))
        }
    }

    /// Natural logarithm (principal branch). `-inf` real part for zero.
    pub fn ln(&self) -> Complex64 {
        let l = self.mantissa.ln();
        Complex64::new(l.re + self.exponent as f64 * LN_2, l.im)
    }

    /// `log2 |self|`.
    pub fn log2_abs(&self) -> f64 {
        self.mantissa.norm().log2() + self.exponent as f64
    }

    /// `|self|` as a scaled real number.
    pub fn abs(&self) -> Self {
        Self::new(Complex64::new(self.mantissa.norm(), 0.0), self.exponent)
    }

    pub fn conj(&self) -> Self {
        Self { mantissa: self.mantissa.conj(), exponent: self.exponent }
    }

    pub fn scale(&self, x: f64) -> Self {
        Self::new(self.mantissa * x, self.exponent)
    }

    pub fn mul_complex(&self, c: Complex64) -> Self {
        Self::new(self.mantissa * c, self.exponent)
    }

    /// Compare moduli.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        self.log2_abs()
            .partial_cmp(&other.log2_abs())
            .unwrap_or(Ordering::Equal)
    }

    /// `|self - other| / max(|self|, |other|)`, zero when both vanish.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let diff = *self - *other;
        let scale = if self.cmp_abs(other) == Ordering::Less { other } else { self };
        if scale.is_zero() {
            return 0.0;
        }
        (diff / *scale).to_complex().norm()
    }
}

impl Default for ScaledComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<Complex64> for ScaledComplex {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl From<f64> for ScaledComplex {
    fn from(x: f64) -> Self {
        Self::from_real(x)
    }
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i) * 2^{}", self.mantissa.re, self.mantissa.im, self.exponent)
    }
}

impl Add for ScaledComplex {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return rhs;
        }
        let (big, small) = if self.exponent >= rhs.exponent { (self, rhs) } else { (rhs, self) };
        let gap = big.exponent - small.exponent;
        if gap > ADD_CUTOFF {
            return big;
        }
        Self::new(big.mantissa + scale_pow2(small.mantissa, -gap), big.exponent)
    }
}

impl AddAssign for ScaledComplex {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Neg for ScaledComplex {
    type Output = Self;

    fn neg(self) -> Self {
        Self { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Sub for ScaledComplex {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for ScaledComplex {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl MulAssign for ScaledComplex {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Div for ScaledComplex {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        Self::new(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}
