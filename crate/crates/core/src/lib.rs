pub mod arith;
pub mod cli;
pub mod error;
pub mod gb;
pub mod linalg;
pub mod ore;
pub mod series;
pub mod shape;

pub use error::{Error, Result};
