// Finite-N one-point density near the origin against the bulk profile `4 y F(2y)`.

use symplectic_ginibre::kernel::{one_point_density, KernelContext};
use symplectic_ginibre::limit::bulk_density;
use symplectic_ginibre::Complex64;

fn main() {
    let ctx = KernelContext::new(300, 0.4, 0.0).expect("valid context");
    println!("{:>6} {:>14} {:>14} {:>10}", "y", "R_N", "4yF(2y)", "diff");
    for i in 0..=10 {
        let y = 0.25 * i as f64;
        let r = one_point_density(&ctx, Complex64::new(0.3, y)).expect("density");
        let lim = bulk_density(y);
        println!("{y:>6.2} {r:>14.10} {lim:>14.10} {:>10.1e}", (r - lim).abs());
    }
}
