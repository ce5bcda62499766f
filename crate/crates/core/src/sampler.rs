//! Eigenvalues of random symplectic elliptic Ginibre matrices.
//!
//! A quaternion `N x N` matrix is stored as its `2N x 2N` complex image, with
//! every quaternion entry `a + b j` becoming the block `[[a, b], [-conj b, conj a]]`.
//! The matrix is `sqrt((1 + tau)/2) S + sqrt((1 - tau)/2) T` with `S` Hermitian
//! and `T` anti-Hermitian, both built from quaternion Gaussians whose real
//! components have standard deviation `1 / sqrt(2N)`. With that scale the
//! eigenvalues fill the ellipse with semi-axes `sqrt(2)(1 + tau)` and
//! `sqrt(2)(1 - tau)`.

use faer::Mat;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{edge_point, KernelContext};

/// Dense eigensolves above this size are refused.
pub const MAX_N: usize = 2000;
/// Largest allowed `|lambda_i - conj lambda_j|` for a conjugate pair.
pub const PAIRING_TOLERANCE: f64 = 1e-6;

/// Upper half-plane representatives of one spectrum; the full spectrum also holds their conjugates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueSample {
    pub n: usize,
    pub tau: f64,
    pub seed: u64,
    pub eigenvalues: Vec<Complex64>,
}

impl EigenvalueSample {
    pub fn full_spectrum(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.eigenvalues.iter().flat_map(|&z| [z, z.conj()])
    }

    /// Fraction of eigenvalues inside the droplet dilated by `1 + margin`.
    pub fn droplet_fraction(&self, margin: f64) -> f64 {
        let inside = self.eigenvalues.iter().filter(|&&z| in_droplet(self.tau, z, margin)).count();
        inside as f64 / self.eigenvalues.len() as f64
    }

    /// Semi-axes estimated as `2 sqrt(mean x^2)` and `2 sqrt(mean y^2)`, exact for a uniform ellipse.
    pub fn semi_axes(&self) -> (f64, f64) {
        let m = self.eigenvalues.len() as f64;
        let x2: f64 = self.eigenvalues.iter().map(|z| z.re * z.re).sum::<f64>() / m;
        let y2: f64 = self.eigenvalues.iter().map(|z| z.im * z.im).sum::<f64>() / m;
        (2.0 * x2.sqrt(), 2.0 * y2.sqrt())
    }

    pub fn min_imaginary(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im).fold(f64::INFINITY, f64::min)
    }
}

/// Whether `z` lies in the elliptic droplet dilated by `1 + margin`.
pub fn in_droplet(tau: f64, z: Complex64, margin: f64) -> bool {
    let a = edge_point(tau) * (1.0 + margin);
    let b = 2f64.sqrt() * (1.0 - tau) * (1.0 + margin);
    (z.re / a).powi(2) + (z.im / b).powi(2) <= 1.0
}

fn quaternion_gaussian(n: usize, rng: &mut ChaCha8Rng) -> Mat<Complex64> {
    let sd = 1.0 / (2.0 * n as f64).sqrt();
    let mut normal = || -> f64 { sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng) };
    let mut m = Mat::<Complex64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let a = Complex64::new(normal(), normal());
            let b = Complex64::new(normal(), normal());
            m[(2 * i, 2 * j)] = a;
            m[(2 * i, 2 * j + 1)] = b;
            m[(2 * i + 1, 2 * j)] = -b.conj();
            m[(2 * i + 1, 2 * j + 1)] = a.conj();
        }
    }
    m
}

/// The `2N x 2N` complex image of one random matrix.
pub fn sample_matrix(n: usize, tau: f64, seed: u64) -> Result<Mat<Complex64>> {
    if n == 0 || n > MAX_N {
        return Err(Error::Precondition(format!("N = {n} outside 1..={MAX_N}")));
    }
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Precondition(format!("tau = {tau} outside [0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g1 = quaternion_gaussian(n, &mut rng);
    let g2 = quaternion_gaussian(n, &mut rng);
    let (a, b) = (((1.0 + tau) / 4.0).sqrt(), ((1.0 - tau) / 4.0).sqrt());
    // sqrt((1+tau)/2) (G1 + G1^*)/sqrt2 + sqrt((1-tau)/2) (G2 - G2^*)/sqrt2
    Ok(Mat::from_fn(2 * n, 2 * n, |i, j| {
        a * (g1[(i, j)] + g1[(j, i)].conj()) + b * (g2[(i, j)] - g2[(j, i)].conj())
    }))
}

/// Greedy conjugate pairing: each upper half-plane eigenvalue, by decreasing
/// imaginary part, takes the closest unused lower half-plane one.
pub fn pair_conjugates(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut upper: Vec<Complex64> = spectrum.iter().copied().filter(|z| z.im > 0.0).collect();
    let mut lower: Vec<Complex64> = spectrum.iter().copied().filter(|z| z.im < 0.0).collect();
    if upper.len() != lower.len() || 2 * upper.len() != spectrum.len() {
        return Err(Error::Pairing(format!(
            "{} eigenvalues above, {} below and {} on the real axis",
            upper.len(),
            lower.len(),
            spectrum.len() - upper.len() - lower.len()
        )));
    }
    upper.sort_by(|a, b| b.im.total_cmp(&a.im));
    lower.sort_by(|a, b| a.im.total_cmp(&b.im));
    let mut used = vec![false; lower.len()];
    for z in &upper {
        let target = z.conj();
        let (best, dist) = lower
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, w)| (k, (w - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("as many lower as upper eigenvalues");
        if dist > PAIRING_TOLERANCE {
            return Err(Error::Pairing(format!("{z} has no conjugate partner (closest at distance {dist:e})")));
        }
        used[best] = true;
    }
    Ok(upper)
}

/// Draw one matrix and return its upper half-plane eigenvalues.
pub fn sample(n: usize, tau: f64, seed: u64) -> Result<EigenvalueSample> {
    let m = sample_matrix(n, tau, seed)?;
    let spectrum = m.eigenvalues().map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let eigenvalues = pair_conjugates(&spectrum)?;
    Ok(EigenvalueSample { n, tau, seed, eigenvalues })
}

/// Eigenvalues mapped to microscopic coordinates around `p`.
pub fn rescaled_cloud(sample: &EigenvalueSample, p: f64) -> Result<Vec<Complex64>> {
    let ctx = KernelContext::new(sample.n, sample.tau, p)?;
    Ok(sample.eigenvalues.iter().map(|&z| ctx.rescale(z)).collect())
}

/// Pearson statistic and p-value for equal-area radial bins of the disc of radius `r_max` (`tau = 0`).
pub fn radial_chi_square(samples: &[EigenvalueSample], r_max: f64, bins: usize) -> Result<(f64, f64)> {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    if bins < 2 {
        return Err(Error::Precondition("need at least two bins".into()));
    }
    let mut counts = vec![0usize; bins];
    for s in samples {
        for z in &s.eigenvalues {
            let t = z.norm_sqr() / (r_max * r_max);
            if t < 1.0 {
                counts[(t * bins as f64) as usize] += 1;
            }
        }
    }
    let total: usize = counts.iter().sum();
    let expected = total as f64 / bins as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((bins - 1) as f64).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok((stat, 1.0 - dist.cdf(stat)))
}
