// Complex error functions.

use symplectic_ginibre::special::{dawson, erfc, erfcx, faddeeva};
use symplectic_ginibre::Complex64;

fn main() {
    for z in [Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(-3.0, 0.5), Complex64::new(0.0, 6.0)] {
        println!(
            "z = {z}: w = {:.15e}, erfc = {:.15e}, erfcx = {:.15e}, F = {:.15e}",
            faddeeva(z).expect("w"),
            erfc(z).expect("erfc"),
            erfcx(z).expect("erfcx"),
            dawson(z).expect("dawson"),
        );
    }
}
