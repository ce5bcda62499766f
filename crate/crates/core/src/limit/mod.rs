//! Limiting kernels and densities of the rescaled process along the real axis.

mod densities;
mod kernels;
mod quadrature;

pub use densities::{bulk_density, edge_density, edge_density_correction};
pub use kernels::{
    exp_times_erfc, kappa_a, kappa_a_with, kappa_bulk, kappa_edge, kappa_edge_sub, kappa_edge_with, r_half,
    r_limit, ARGUMENT_BOUND,
};
pub use quadrature::{integrate, EdgeQuadratureSpec};
