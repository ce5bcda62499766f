use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for recognising `|p| = sqrt(2)(1 + tau)` as the edge.
const EDGE_TOLERANCE: f64 = 1e-12;

/// Position of the rescaling centre relative to the droplet's real section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Bulk,
    EdgeRight,
    EdgeLeft,
    Outside,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Bulk => "bulk",
            Regime::EdgeRight => "edge_right",
            Regime::EdgeLeft => "edge_left",
            Regime::Outside => "outside",
        };
        f.write_str(s)
    }
}

/// Right end `sqrt(2)(1 + tau)` of the droplet on the real axis.
pub fn edge_point(tau: f64) -> f64 {
    2f64.sqrt() * (1.0 + tau)
}

pub fn classify(tau: f64, p: f64) -> Regime {
    let e = edge_point(tau);
    let a = p.abs();
    if (a - e).abs() <= EDGE_TOLERANCE * e {
        if p > 0.0 {
            Regime::EdgeRight
        } else {
            Regime::EdgeLeft
        }
    } else if a < e {
        Regime::Bulk
    } else {
        Regime::Outside
    }
}

/// The elliptic potential `(|zeta|^2 - tau Re zeta^2) / (1 - tau^2)`.
pub fn potential_q(tau: f64, zeta: Complex64) -> f64 {
    zeta.re * zeta.re / (1.0 + tau) + zeta.im * zeta.im / (1.0 - tau)
}

/// Matrix size, non-Hermiticity and rescaling centre, with the derived constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelContext {
    n: usize,
    tau: f64,
    p: f64,
    delta: f64,
    theta: f64,
}

impl KernelContext {
    /// The normal angle is `pi` at the left edge and `0` everywhere else.
    pub fn new(n: usize, tau: f64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("N must be positive".into()));
        }
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::Precondition(format!("tau = {tau} outside [0, 1)")));
        }
        if !p.is_finite() {
            return Err(Error::Precondition(format!("p = {p} is not finite")));
        }
        let theta = if classify(tau, p) == Regime::EdgeLeft { PI } else { 0.0 };
        Ok(Self { n, tau, p, delta: 1.0 / (2.0 * (1.0 - tau * tau)), theta })
    }

    /// Centre on the moving point `sqrt(2)(1 + tau) - a sqrt(2 (1 - tau^2) / N)`.
    pub fn moving(n: usize, tau: f64, a: f64) -> Result<Self> {
        let p = edge_point(tau) - a * (2.0 * (1.0 - tau * tau) / n as f64).sqrt();
        Self::new(n, tau, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn regime(&self) -> Regime {
        classify(self.tau, self.p)
    }

    /// `e^{i theta}` for the two admissible angles, kept exact.
    fn normal(&self) -> f64 {
        if self.theta == 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Centre used by the kernel formulas.
    ///
    /// Rotating by `theta = pi` about `p` is the reflection `zeta -> -zeta`,
    /// under which the ensemble is invariant, so the left edge uses `|p|`.
    pub fn kernel_center(&self) -> f64 {
        self.p * self.normal()
    }

    /// `sqrt(N delta)`, the microscopic scale.
    pub fn scale(&self) -> f64 {
        (self.n as f64 * self.delta).sqrt()
    }

    pub fn rescale(&self, zeta: Complex64) -> Complex64 {
        self.normal() * self.scale() * (zeta - self.p)
    }

    pub fn inverse_rescale(&self, z: Complex64) -> Complex64 {
        self.p + self.normal() * z / self.scale()
    }

    /// `N Q(p + z / sqrt(N delta))` for the kernel centre.
    pub fn scaled_potential(&self, z: Complex64) -> f64 {
        let zeta = self.kernel_center() + z / self.scale();
        self.n as f64 * potential_q(self.tau, zeta)
    }

    /// `sqrt(N) p + sqrt(2 (1 - tau^2)) z`, the argument of the weighted Hermite terms.
    pub fn weighted_argument(&self, z: Complex64) -> Complex64 {
        (self.n as f64).sqrt() * self.kernel_center() + (2.0 * (1.0 - self.tau * self.tau)).sqrt() * z
    }
}
