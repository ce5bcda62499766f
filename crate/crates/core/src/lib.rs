pub mod analysis;
pub mod checks;
pub mod cli;
pub mod error;
pub mod hermite;
pub mod kernel;
pub mod limit;
pub mod pfaffian;
pub mod sampler;
pub mod skew;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
