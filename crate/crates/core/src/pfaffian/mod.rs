//! Pfaffians of complex skew-symmetric matrices and the k-point correlation
//! functions they assemble.

mod correlation;

pub use correlation::{cocycle_invariance_check, correlation_k};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::ScaledComplex;

/// Largest order accepted by [`pfaffian`].
pub const MAX_ORDER: usize = 200;

/// A pivot below this multiple of the largest entry counts as zero.
const SINGULAR_THRESHOLD: f64 = 1e-14;

const BALANCE_SWEEPS: usize = 60;

/// Dense complex skew-symmetric matrix of even order.
///
/// Only the strict upper triangle is supplied; the lower triangle is its
/// negation by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    order: usize,
    data: Vec<Complex64>,
}

impl SkewMatrix {
    /// Build from `f(i, j)` for `i < j`.
    pub fn from_upper(order: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_order(order)?;
        let mut data = vec![Complex64::new(0.0, 0.0); order * order];
        for i in 0..order {
            for j in i + 1..order {
                let v = f(i, j);
                data[i * order + j] = v;
                data[j * order + i] = -v;
            }
        }
        Ok(Self { order, data })
    }

    /// Build from a dense row-major matrix, rejecting it unless `A + A^T` vanishes to `tol` (relative to the largest entry).
    pub fn from_dense(order: usize, entries: &[Complex64], tol: f64) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::Precondition(format!(
                "{} entries for a {order} x {order} matrix",
                entries.len()
            )));
        }
        let scale = entries.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for i in 0..order {
            for j in i..order {
                let s = (entries[i * order + j] + entries[j * order + i]).norm();
                if s > tol * scale {
                    return Err(Error::Precondition(format!("entry ({i}, {j}) breaks skew symmetry by {s:e}")));
                }
            }
        }
        Self::from_upper(order, |i, j| entries[i * order + j])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.order + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn check_order(order: usize) -> Result<()> {
    if order % 2 == 1 {
        return Err(Error::Precondition(format!("Pfaffian needs even order, got {order}")));
    }
    if order > MAX_ORDER {
        return Err(Error::Precondition(format!("order {order} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// A Pfaffian value with its conditioning flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pfaffian {
    pub value: ScaledComplex,
    /// Set when a pivot fell below the singularity threshold; `value` is then zero.
    pub singular: bool,
}

/// Pfaffian by skew Gaussian elimination with partial pivoting (Parlett-Reid).
///
/// Each step eliminates two rows and columns at once, so the pivots multiply
/// directly into the Pfaffian; every row-column interchange flips the sign.
pub fn pfaffian(a: &SkewMatrix) -> Result<Pfaffian> {
    let n = a.order;
    let mut m = a.data.clone();
    let threshold = SINGULAR_THRESHOLD * a.max_abs();
    let mut value = ScaledComplex::ONE;
    let singular = Pfaffian { value: ScaledComplex::ZERO, singular: true };
    if n > 0 && threshold == 0.0 {
        return Ok(singular);
    }
    let at = |i: usize, j: usize| i * n + j;
    for k in (0..n).step_by(2) {
        let (mut kp, mut best) = (k + 1, 0.0);
        for i in k + 1..n {
            let v = m[at(i, k)].norm();
            if v > best {
                kp = i;
                best = v;
            }
        }
        if best <= threshold {
            return Ok(singular);
        }
        if kp != k + 1 {
            for c in 0..n {
                m.swap(at(k + 1, c), at(kp, c));
            }
            for r in 0..n {
                m.swap(at(r, k + 1), at(r, kp));
            }
            value = -value;
        }
        let pivot = m[at(k, k + 1)];
        value *= ScaledComplex::from_complex(pivot);
        // A[k+2.., k+2..] += tau x u^T - u x tau^T, tau = A[k, k+2..] / pivot, u = A[k+2.., k+1]
        let tau: Vec<Complex64> = (k + 2..n).map(|j| m[at(k, j)] / pivot).collect();
        let u: Vec<Complex64> = (k + 2..n).map(|i| m[at(i, k + 1)]).collect();
        for (ii, i) in (k + 2..n).enumerate() {
            for (jj, j) in (k + 2..n).enumerate() {
                m[at(i, j)] += tau[ii] * u[jj] - u[ii] * tau[jj];
            }
        }
    }
    Ok(Pfaffian { value, singular: false })
}

/// Largest order accepted by [`pfaffian_by_matchings`].
pub const MAX_MATCHING_ORDER: usize = 12;

/// Pfaffian as the signed sum over perfect matchings, by expansion along the
/// first row. Exponential cost; used as an independent reference.
pub fn pfaffian_by_matchings(a: &SkewMatrix) -> Result<Complex64> {
    if a.order > MAX_MATCHING_ORDER {
        return Err(Error::Precondition(format!("matching expansion limited to order {MAX_MATCHING_ORDER}")));
    }
    fn expand(a: &SkewMatrix, idx: &[usize]) -> Complex64 {
        if idx.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for k in 1..idx.len() {
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&i| i != idx[k]).collect();
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * a.get(idx[0], idx[k]) * expand(a, &rest);
        }
        total
    }
    let idx: Vec<usize> = (0..a.order).collect();
    Ok(expand(a, &idx))
}

/// Pfaffian of a skew matrix whose strict upper triangle is given in scaled form.
///
/// Row `i` and column `i` are multiplied by `2^{-s_i}` before elimination so
/// that entries of wildly different magnitude land near unit size; the factor
/// `2^{sum s_i}` is restored afterwards. Entries whose scaled value would
/// underflow are flushed to zero.
pub fn pfaffian_scaled(order: usize, upper: impl Fn(usize, usize) -> ScaledComplex) -> Result<Pfaffian> {
    check_order(order)?;
    let mut log = vec![vec![None; order]; order];
    for i in 0..order {
        for j in i + 1..order {
            let v = upper(i, j);
            if !v.is_zero() {
                log[i][j] = Some(v.log2_abs());
                log[j][i] = log[i][j];
            }
        }
    }
    // damped balancing towards max_j (log|a_ij| - s_i - s_j) = 0 in every row
    let mut s = vec![0.0f64; order];
    for _ in 0..BALANCE_SWEEPS {
        let next: Vec<f64> = (0..order)
            .map(|i| {
                let top = (0..order).filter_map(|j| log[i][j].map(|l| l - s[j])).fold(f64::NEG_INFINITY, f64::max);
                if top.is_finite() { 0.5 * (s[i] + top) } else { s[i] }
            })
            .collect();
        s = next;
    }
    let shift: Vec<i64> = s.iter().map(|&x| x.round() as i64).collect();
    let a = SkewMatrix::from_upper(order, |i, j| {
        let v = upper(i, j);
        ScaledComplex::new(v.mantissa(), v.exponent() - shift[i] - shift[j]).to_complex()
    })?;
    let mut pf = pfaffian(&a)?;
    if !pf.singular {
        let total: i64 = shift.iter().sum();
        pf.value = pf.value * ScaledComplex::new(Complex64::new(1.0, 0.0), total);
    }
    Ok(pf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::Mat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_skew(rng: &mut ChaCha8Rng, n: usize) -> SkewMatrix {
        SkewMatrix::from_upper(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap()
    }

    fn det(a: &SkewMatrix) -> Complex64 {
        let n = a.order();
        Mat::<Complex64>::from_fn(n, n, |i, j| a.get(i, j)).determinant()
    }

    #[test]
    fn small_closed_forms() {
        let a = SkewMatrix::from_upper(2, |_, _| c(0.3, -2.0)).unwrap();
        assert_eq!(pfaffian(&a).unwrap().value.to_complex(), c(0.3, -2.0));
        let v = [c(1.0, 2.0), c(-0.5, 0.1), c(3.0, 0.0), c(0.7, -1.1), c(2.0, 2.0), c(-1.0, 0.4)];
        let a = SkewMatrix::from_upper(4, |i, j| {
            v[match (i, j) {
                (0, 1) => 0,
                (0, 2) => 1,
                (0, 3) => 2,
                (1, 2) => 3,
                (1, 3) => 4,
                _ => 5,
            }]
        })
        .unwrap();
        let expect = v[0] * v[5] - v[1] * v[4] + v[2] * v[3];
        assert!((pfaffian(&a).unwrap().value.to_complex() - expect).norm() < 1e-14);
        let empty = SkewMatrix::from_upper(0, |_, _| c(0.0, 0.0)).unwrap();
        assert_eq!(pfaffian(&empty).unwrap().value.to_complex(), c(1.0, 0.0));
    }

    #[test]
    fn matches_matching_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let n = 2 * (1 + trial % 4);
            let a = random_skew(&mut rng, n);
            let fast = pfaffian(&a).unwrap().value.to_complex();
            let slow = pfaffian_by_matchings(&a).unwrap();
            assert!((fast - slow).norm() <= 1e-12 * slow.norm(), "order {n}: {fast} vs {slow}");
        }
    }

    #[test]
    fn square_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in (2..=40).step_by(2) {
            let a = random_skew(&mut rng, n);
            let pf = pfaffian(&a).unwrap().value.to_complex();
            let d = det(&a);
            assert!((pf * pf - d).norm() <= 1e-10 * d.norm(), "order {n}");
        }
    }

    #[test]
    fn congruence_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in (2..=12).step_by(2) {
            let a = random_skew(&mut rng, n);
            let b = Mat::<Complex64>::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let am = Mat::<Complex64>::from_fn(n, n, |i, j| a.get(i, j));
            let bab = &b * &am * b.transpose();
            let t = SkewMatrix::from_upper(n, |i, j| bab[(i, j)]).unwrap();
            let lhs = pfaffian(&t).unwrap().value.to_complex();
            let rhs = b.determinant() * pfaffian(&a).unwrap().value.to_complex();
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm(), "order {n}");
        }
    }

    #[test]
    fn singular_matrices_flagged() {
        let z = SkewMatrix::from_upper(4, |_, _| c(0.0, 0.0)).unwrap();
        let pf = pfaffian(&z).unwrap();
        assert!(pf.singular && pf.value.is_zero());
        // rank 2: only the (0, 1) block is populated
        let r = SkewMatrix::from_upper(6, |i, j| if (i, j) == (0, 1) { c(1.0, 0.0) } else { c(0.0, 0.0) }).unwrap();
        assert!(pfaffian(&r).unwrap().singular);
        assert!(pfaffian(&random_skew(&mut ChaCha8Rng::seed_from_u64(1), 6)).unwrap().singular == false);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SkewMatrix::from_upper(3, |_, _| c(1.0, 0.0)).is_err());
        assert!(SkewMatrix::from_upper(202, |_, _| c(1.0, 0.0)).is_err());
        let sym = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        assert!(SkewMatrix::from_dense(2, &sym, 1e-12).is_err());
        let skew = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
        assert!(SkewMatrix::from_dense(2, &skew, 1e-12).is_ok());
    }

    #[test]
    fn scaled_entries_far_outside_double_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let n = 8;
        let a = random_skew(&mut rng, n);
        // D A D with D = diag(2^{e_i}) has Pfaffian 2^{sum e_i} Pf(A)
        let e: Vec<i64> = (0..n as i64).map(|i| 1500 * (i % 3) - 1400).collect();
        let pf = pfaffian_scaled(n, |i, j| ScaledComplex::new(a.get(i, j), e[i] + e[j])).unwrap();
        let expect = pfaffian(&a).unwrap().value * ScaledComplex::new(c(1.0, 0.0), e.iter().sum());
        assert!(pf.value.relative_distance(&expect) < 1e-12);
    }
}
