//! Hermite polynomials at large degree and argument.
//!
//! Values are carried as [`ScaledComplex`] (mantissa plus binary exponent) so
//! that `H_k` with `k` in the thousands and arguments of size `sqrt(k)` never
//! overflow. The [`strong`] submodule holds the strong-asymptotics apparatus
//! (`g`, `psi`, `Omega`) used to check the large-degree behaviour.

mod inequality;
mod recurrence;
mod scaled;
pub mod strong;

pub use inequality::{hermite_inequality_holds, hermite_inequality_v2_holds};
pub use recurrence::{
    double_factorial_ratios, hermite_scaled, hermite_sequence_scaled, monomial_sequence,
    weighted_hermite_term, weighted_sequence, MAX_DEGREE,
};
pub use scaled::ScaledComplex;
pub use strong::AsymptoticFrame;
