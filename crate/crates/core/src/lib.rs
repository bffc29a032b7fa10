pub mod error;
pub mod frequency;
pub mod bounds;
pub mod capacity;
pub mod geometry;
pub mod imbedding;
pub mod optimize;
pub mod oracle;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
