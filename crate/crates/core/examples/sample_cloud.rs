// Random matrix samples against the elliptic law.

use symplectic_ginibre::kernel::edge_point;
use symplectic_ginibre::sampler::{rescaled_cloud, sample};

fn main() {
    for tau in [0.0, 0.5] {
        let s = sample(200, tau, 7).expect("sample");
        let (a, b) = s.semi_axes();
        println!(
            "tau {tau}: {} pairs, droplet fraction {:.3}, semi-axes {a:.3} / {b:.3} (limit {:.3} / {:.3}), min Im {:.2e}",
            s.eigenvalues.len(),
            s.droplet_fraction(0.02),
            edge_point(tau),
            2f64.sqrt() * (1.0 - tau),
            s.min_imaginary(),
        );
        let edge = rescaled_cloud(&s, edge_point(tau)).expect("rescale");
        let near = edge.iter().filter(|z| z.norm() < 2.0).count();
        println!("  {near} eigenvalues within distance 2 of the edge in microscopic units");
    }
}
