//! Limit extraction from finite-`N` data.
//!
//! [`fit_series`] fits `a + b / sqrt(N) + c / N` by least squares through a
//! Householder QR factorisation, [`rate_fit`] measures the log-log slope of an
//! error sequence.

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative size of the smallest `R` diagonal entry below which the design is rank deficient.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// RMS misfit over the samples.
    pub residual: f64,
}

impl SeriesFit {
    pub fn eval(&self, n: f64) -> f64 {
        self.a + self.b / n.sqrt() + self.c / n
    }
}

/// General fit of `sum_k coef_k N^{-exponents_k}`, returning the coefficients and the RMS misfit.
pub fn fit_powers(samples: &[(usize, f64)], exponents: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = samples.len();
    let k = exponents.len();
    if k == 0 || m < k {
        return Err(Error::RankDeficient(format!("{m} samples for {k} unknowns")));
    }
    if let Some(&(n, v)) = samples.iter().find(|(n, v)| *n == 0 || !v.is_finite()) {
        return Err(Error::Precondition(format!("invalid sample ({n}, {v})")));
    }
    // geometric-mean rescaling keeps the columns O(1)
    let g = (samples.iter().map(|&(n, _)| (n as f64).ln()).sum::<f64>() / m as f64).exp();
    let design = Mat::<f64>::from_fn(m, k, |i, j| (samples[i].0 as f64 / g).powf(-exponents[j]));
    let rhs = Mat::<f64>::from_fn(m, 1, |i, _| samples[i].1);

    let qr = design.qr();
    let r = qr.thin_R();
    let diag: Vec<f64> = (0..k).map(|j| r[(j, j)].abs()).collect();
    let big = diag.iter().cloned().fold(0.0, f64::max);
    if big == 0.0 || diag.iter().any(|&d| d <= RANK_TOLERANCE * big) {
        return Err(Error::RankDeficient(format!("design matrix R diagonal {diag:?}")));
    }
    let sol = qr.solve_lstsq(&rhs);
    let coef: Vec<f64> = (0..k).map(|j| sol[(j, 0)] * g.powf(exponents[j])).collect();

    let sq: f64 = samples
        .iter()
        .map(|&(n, v)| {
            let fit: f64 = coef.iter().zip(exponents).map(|(c, e)| c * (n as f64).powf(-e)).sum();
            (fit - v).powi(2)
        })
        .sum();
    Ok((coef, (sq / m as f64).sqrt()))
}

/// Fits `value ~ a + b N^{-1/2} + c N^{-1}`.
pub fn fit_series(samples: &[(usize, f64)]) -> Result<SeriesFit> {
    let mut distinct: Vec<usize> = samples.iter().map(|s| s.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::RankDeficient(format!("need 3 distinct N values, got {}", distinct.len())));
    }
    let (coef, residual) = fit_powers(samples, &[0.0, 0.5, 1.0])?;
    Ok(SeriesFit { a: coef[0], b: coef[1], c: coef[2], residual })
}

/// Least-squares slope of `ln error` against `ln N`.
pub fn rate_fit(samples: &[(usize, f64)]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::Precondition(format!("rate fit needs 3 points, got {}", samples.len())));
    }
    if let Some(&(n, e)) = samples.iter().find(|(n, e)| *n == 0 || !(*e > 0.0) || !e.is_finite()) {
        return Err(Error::Precondition(format!("nonpositive error {e} at N = {n}")));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(n, e)| ((n as f64).ln(), e.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::RankDeficient("all N values coincide".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}
