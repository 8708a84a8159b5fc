//! Exact computations with linear pencils of tropical plane curves.

pub mod compat;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod oracle;
pub mod pencil;
pub mod primitives;
pub mod random;
pub mod stable;
pub mod subdivision;
pub mod tree;

pub use error::{Error, Result};
