//! Self-check suites behind the `check` subcommand.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernel::{cd_residual, cd_residual_perturbed, cocycle, edge_point, kappa_n, transformed_residual, KernelContext};
use crate::pfaffian::{cocycle_invariance_check, pfaffian, pfaffian_by_matchings, SkewMatrix};
use crate::skew::{prekernel_via_sop, verify_skew_orthogonality};

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_residual, tolerance, pass: max_residual <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Random `(z, w)` pairs per `(N, tau, p)` cell of the residual grids.
    pub samples_per_cell: usize,
    pub seed: u64,
    /// Replace the CD residual by its probe variant, which must fail.
    pub perturb: bool,
    pub tolerance: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { samples_per_cell: 10, seed: 1, perturb: false, tolerance: 1e-9 }
    }
}

/// Cells `N in {1, 5, 50, 200}`, `tau in {0, 0.3, 0.7}`, `p in {0, 1, edge, 3}`.
pub fn residual_grid() -> Vec<(usize, f64, f64)> {
    let mut cells = Vec::new();
    for n in [1usize, 5, 50, 200] {
        for tau in [0.0, 0.3, 0.7] {
            for p in [0.0, 1.0, edge_point(tau), 3.0] {
                cells.push((n, tau, p));
            }
        }
    }
    cells
}

fn random_point(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn grid_max(opts: &CheckOptions, f: impl Fn(&KernelContext, Complex64, Complex64) -> Result<f64>) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = 0.0f64;
    for (n, tau, p) in residual_grid() {
        let ctx = KernelContext::new(n, tau, p)?;
        for _ in 0..opts.samples_per_cell {
            let (z, w) = (random_point(&mut rng), random_point(&mut rng));
            worst = worst.max(f(&ctx, z, w)?);
        }
    }
    Ok(worst)
}

fn sop_agreement(seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, tau) = (4, 0.3);
    let mut worst = 0.0f64;
    for p in [0.0, 1.0, edge_point(tau)] {
        let ctx = KernelContext::new(n, tau, p)?;
        for _ in 0..10 {
            let (z, w) = (random_point(&mut rng), random_point(&mut rng));
            worst = worst.max(prekernel_via_sop(n, tau, p, z, w)?.relative_distance(&kappa_n(&ctx, z, w)?));
        }
    }
    Ok(worst)
}

fn pfaffian_oracle(seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let order = 2 * (1 + trial % 4);
        let a = SkewMatrix::from_upper(order, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })?;
        let fast = pfaffian(&a)?.value.to_complex();
        let slow = pfaffian_by_matchings(&a)?;
        worst = worst.max((fast - slow).norm() / slow.norm());
    }
    Ok(worst)
}

fn cocycle_suite() -> Result<f64> {
    let points = [Complex64::new(0.2, 0.5), Complex64::new(-0.6, 1.1), Complex64::new(0.9, 0.3)];
    let mut worst = 0.0f64;
    for (n, tau, p) in [(120, 1.0 / 3.0, edge_point(1.0 / 3.0)), (80, 0.5, 0.0)] {
        let ctx = KernelContext::new(n, tau, p)?;
        worst = worst.max(cocycle_invariance_check(&ctx, &points, |z| Complex64::from_polar(1.0, 0.7 * z.im))?);
        worst = worst.max(cocycle_invariance_check(&ctx, &points, |z| cocycle(&ctx, z))?);
    }
    Ok(worst)
}

/// Run every suite.
pub fn run_checks(opts: &CheckOptions) -> Result<CheckReport> {
    let tol = opts.tolerance;
    let cd = if opts.perturb {
        grid_max(opts, cd_residual_perturbed)?
    } else {
        grid_max(opts, cd_residual)?
    };
    let checks = vec![
        CheckResult::new("cd_residual", cd, tol),
        CheckResult::new("transformed_residual", grid_max(opts, transformed_residual)?, tol),
        CheckResult::new("skew_orthogonality", verify_skew_orthogonality(4, 0.3, 3)?, tol),
        CheckResult::new("sop_prekernel", sop_agreement(opts.seed)?, 1e-10),
        CheckResult::new("pfaffian_oracle", pfaffian_oracle(opts.seed)?, 1e-12),
        CheckResult::new("cocycle_invariance", cocycle_suite()?, 1e-10),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(CheckReport { checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes_and_probe_fails() {
        let opts = CheckOptions { samples_per_cell: 2, ..Default::default() };
        let report = run_checks(&opts).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.checks.len(), 6);
        let bad = run_checks(&CheckOptions { perturb: true, ..opts }).unwrap();
        assert!(!bad.pass);
        assert!(!bad.checks[0].pass && bad.checks[1..].iter().all(|c| c.pass));
    }
}
