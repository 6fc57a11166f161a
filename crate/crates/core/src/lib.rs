//! Arithmetic height functions over finitely generated fields ℚ(z1, …, zd).

pub mod arakelov;
pub mod archimedean;
pub mod elliptic;
pub mod error;
pub mod exec;
pub mod heights;
pub mod northcott;
pub mod polyring;

pub use error::{Error, Result};
pub use exec::Execution;
