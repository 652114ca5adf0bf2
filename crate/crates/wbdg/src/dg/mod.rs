//! Discontinuous Galerkin discretization: SSPRK time steppers and the
//! 1D semi-discrete driver.

pub mod driver1d;
pub mod time;

pub use driver1d::{numerical_flux, Boundary, Driver1d, Run, Scheme, Side};
pub use time::Integrator;
