// Convergence of the rescaled kernel at the right edge, with and without the first correction.

use symplectic_ginibre::analysis::rate_fit;
use symplectic_ginibre::kernel::{edge_point, kappa_tilde, KernelContext};
use symplectic_ginibre::limit::{kappa_edge, kappa_edge_sub};
use symplectic_ginibre::Complex64;

fn main() {
    let tau = 1.0 / 3.0;
    let (z, w) = (Complex64::new(0.2, 0.5), Complex64::new(-0.3, 0.8));
    let lim = kappa_edge(z, w).expect("edge kernel");
    let sub = kappa_edge_sub(tau, z, w).expect("correction");
    println!("kappa_edge = {lim:.10}, kappa^(1/2) = {sub:.10}");
    let mut errs = Vec::new();
    for n in [250, 500, 1000, 2000, 4000] {
        let ctx = KernelContext::new(n, tau, edge_point(tau)).expect("valid context");
        let k = kappa_tilde(&ctx, z, w).expect("kernel").to_complex();
        let sq = (n as f64).sqrt();
        let (e0, e1) = ((k - lim).norm(), (k - lim - sub / sq).norm());
        println!("N {n:>5}: |k - lim| {e0:.3e}, with correction {e1:.3e}");
        errs.push((n, e1));
    }
    println!("slope of corrected error: {:.3}", rate_fit(&errs).expect("fit"));
}
