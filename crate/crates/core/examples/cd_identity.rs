// Residuals of the differential identity for the finite kernel across regimes.

use symplectic_ginibre::kernel::{cd_residual, cd_residual_perturbed, edge_point, transformed_residual, KernelContext};
use symplectic_ginibre::Complex64;

fn main() {
    let (z, w) = (Complex64::new(0.4, -0.7), Complex64::new(-1.1, 0.3));
    for tau in [0.0, 0.3, 0.7] {
        for p in [0.0, 1.0, edge_point(tau), 3.0] {
            let ctx = KernelContext::new(50, tau, p).expect("valid context");
            println!(
                "tau {tau:.1} p {p:.3} ({}): cd {:.1e}, transformed {:.1e}, perturbed {:.1e}",
                ctx.regime(),
                cd_residual(&ctx, z, w).expect("residual"),
                transformed_residual(&ctx, z, w).expect("residual"),
                cd_residual_perturbed(&ctx, z, w).expect("residual"),
            );
        }
    }
}
