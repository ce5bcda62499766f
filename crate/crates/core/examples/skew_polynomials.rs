// Skew-orthogonal polynomials: coefficients, norms and the orthogonality defect.

use symplectic_ginibre::skew::{q, r_norm, skew_inner, verify_skew_orthogonality};

fn main() {
    let (n, tau) = (4, 0.3);
    for m in 0..6 {
        let p = q(m, n, tau).expect("polynomial");
        let c: Vec<f64> = p.coeffs().iter().map(|c| c.re).collect();
        println!("q_{m}: {c:.5?}");
    }
    for k in 0..3 {
        let (a, b) = (q(2 * k, n, tau).expect("q"), q(2 * k + 1, n, tau).expect("q"));
        let s = skew_inner(&a, &b, n, tau).expect("inner product");
        println!("<q_{}, q_{}> = {:.12e}, r_{k} = {:.12e}", 2 * k, 2 * k + 1, s.re, r_norm(k, n, tau));
    }
    println!("max defect (r_0 units): {:.2e}", verify_skew_orthogonality(n, tau, 3).expect("check"));
}
