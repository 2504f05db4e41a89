pub mod algebra;
pub mod bloch;
pub mod error;
pub mod lattice;
pub mod report;
pub mod syzygy;
pub mod truncation;

pub use error::{Error, Result};
