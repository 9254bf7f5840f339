pub mod arith;
pub mod base_change;
pub mod cli;
pub mod dihedral_reps;
pub mod error;
pub mod parity_engine;
pub mod regulator;
pub mod surgery;
pub mod tate;
pub mod weierstrass;

pub use error::{Error, Result};
