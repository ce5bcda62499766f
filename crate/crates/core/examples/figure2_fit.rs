// Extrapolating the edge density and its first correction from four finite N.

use symplectic_ginibre::analysis::fit_series;
use symplectic_ginibre::kernel::{edge_point, one_point_density, KernelContext};
use symplectic_ginibre::limit::{edge_density, edge_density_correction};
use symplectic_ginibre::Complex64;

fn main() {
    let tau = 1.0 / 3.0;
    let ns = [2000, 3000, 4000, 5000];
    let ctxs: Vec<_> = ns.iter().map(|&n| KernelContext::new(n, tau, edge_point(tau)).expect("context")).collect();
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "Re z", "R", "fit a", "R_half", "fit corr");
    for x in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let z = Complex64::new(x, 2.0);
        let r = edge_density(z).expect("limit");
        let half = edge_density_correction(tau, z).expect("correction");
        let rn: Vec<_> = ctxs.iter().zip(ns).map(|(c, n)| (n, one_point_density(c, z).expect("density"))).collect();
        let fit = fit_series(&rn).expect("fit");
        let scaled: Vec<_> = rn.iter().map(|&(n, v)| (n, (n as f64).sqrt() * (v - r))).collect();
        let corr = fit_series(&scaled).expect("fit");
        println!("{x:>5.1} {r:>12.6} {:>12.6} {half:>12.6} {:>12.6}", fit.a, corr.a);
    }
}
