pub mod census;
#[cfg(feature = "cli")]
pub mod cli;
pub mod divpoly;
pub mod error;
pub mod exactnum;
pub mod families;
pub mod galois;
mod par;
pub mod polylab;
pub mod torsion;
pub mod weierstrass;

pub use error::{Error, Result};
