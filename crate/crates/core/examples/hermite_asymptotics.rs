// Strong asymptotics of high-degree Hermite polynomials outside the droplet.

use symplectic_ginibre::hermite::{hermite_scaled, AsymptoticFrame};
use symplectic_ginibre::Complex64;

fn main() {
    let f = AsymptoticFrame::new(2.0, 1.0 / 3.0).expect("frame");
    println!("x0 = {:.6}, curvature = {:.6}", f.x0, f.kappa_t);
    for z in [Complex64::new(1.2 * f.x0, 0.0), Complex64::new(0.4 * f.x0, 0.9)] {
        let mut prev = None;
        for n in [100, 200, 400, 800] {
            let exact = hermite_scaled(2 * n, z * f.argument_scale(n)).expect("hermite");
            let err = f.hermite_asymptotic(n, 0, z).expect("asymptotic").relative_distance(&exact);
            let ratio = prev.map_or(String::new(), |p: f64| format!(" (ratio {:.3})", p / err));
            println!("z = {z:.3}, N = {n:>4}: relative error {err:.3e}{ratio}");
            prev = Some(err);
        }
    }
}
