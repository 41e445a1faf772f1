//! Truncated templicial modules over exact coefficient rings.

pub mod cli;
pub mod coeff;
pub mod constructors;
pub mod deform;
pub mod error;
pub mod kan;
pub mod necklace;
pub mod quiver;
pub mod templicial;

pub use error::{Error, Result};
