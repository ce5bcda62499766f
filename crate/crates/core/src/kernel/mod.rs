//! Finite-`N` kernels of the rescaled symplectic elliptic Ginibre ensemble.
//!
//! All functions take a [`KernelContext`] fixing `N`, `tau` and the centre `p`,
//! and return values as [`ScaledComplex`](crate::hermite::ScaledComplex) so that
//! the Gaussian prefactors, which reach `e^{±5000}`, are combined in the exponent.

mod complex;
mod context;
mod density;
mod prekernel;
mod residual;
mod transformed;

pub use complex::{cal_k, complex_cd_residual, complex_kernel_s};
pub use context::{classify, edge_point, potential_q, KernelContext, Regime};
pub use density::one_point_density;
pub use prekernel::{kappa_n, prekernel_f, prekernel_f_tau0};
pub use residual::{cd_residual, cd_residual_perturbed, transformed_residual, PROBE_PERTURBATION};
pub(crate) use transformed::weighted_kernel_matrix;
pub use transformed::{cocycle, e1, e2, kappa_hat, kappa_tilde, log_omega_n, omega_n, r_n, shifted_argument};
