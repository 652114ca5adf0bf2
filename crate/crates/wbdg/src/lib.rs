pub mod basis;
pub mod dg;
pub mod error;
pub mod mesh;
pub mod models;
pub mod pinn;
pub mod quad;

pub use error::{Error, Result};
