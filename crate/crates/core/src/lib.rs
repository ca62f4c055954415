//! Exact Weyl character ring arithmetic for simply-laced root systems.

pub mod branchrules;
pub mod cli;
pub mod error;
pub mod hermitian;
pub mod hpz;
pub mod limits;
pub mod rootsys;
pub mod tensor;
pub mod weights;
pub mod weyl;

pub use error::{Error, Result};
pub use rootsys::{build_root_system, RootSystem, Series, SystemId, Weight};
