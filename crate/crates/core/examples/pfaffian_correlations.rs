// Pfaffian evaluation and k-point correlation functions.

use symplectic_ginibre::kernel::{one_point_density, KernelContext};
use symplectic_ginibre::pfaffian::{correlation_k, pfaffian, pfaffian_by_matchings, SkewMatrix};
use symplectic_ginibre::Complex64;

fn main() {
    let a = SkewMatrix::from_upper(6, |i, j| Complex64::new((i + 2 * j) as f64 * 0.1, (i * j) as f64 * 0.05))
        .expect("skew matrix");
    let fast = pfaffian(&a).expect("pfaffian").value.to_complex();
    println!("Pf (elimination) = {fast:.12}, Pf (matchings) = {:.12}", pfaffian_by_matchings(&a).expect("pf"));

    let ctx = KernelContext::new(200, 0.5, 0.0).expect("valid context");
    let z = Complex64::new(0.0, 0.6);
    let r1 = one_point_density(&ctx, z).expect("density");
    println!("R_1 at {z} = {r1:.8}");
    for d in [0.05, 0.2, 0.5, 1.0, 3.0] {
        let w = z + Complex64::new(d, 0.0);
        let r2 = correlation_k(&ctx, &[z, w]).expect("correlation");
        let rw = one_point_density(&ctx, w).expect("density");
        println!("|z - w| = {d:.2}: R_2 / (R_1 R_1) = {:.6}", r2 / (r1 * rw));
    }
}
