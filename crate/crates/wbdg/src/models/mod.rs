pub mod advection;
pub mod euler_poisson;
pub mod sw1d;
pub mod sw2d;

pub use advection::Advection;
pub use euler_poisson::{EulerPoisson, PressureLaw};
pub use sw1d::{Regime, Sw1d, Topo};
pub use sw2d::Sw2d;

/// A 1D balance law as the DG core sees it: flux, pointwise source, local
/// characteristic speed, and the global wave-speed bound used for the time
/// step. `grav` carries the gravitational field value for models that need
/// one (zero otherwise).
pub trait Model1D {
    fn n_vars(&self) -> usize;
    fn flux(&self, x: f64, u: &[f64], out: &mut [f64]);
    fn source(&self, x: f64, u: &[f64], grav: f64, out: &mut [f64]);
    fn has_source(&self) -> bool;
    fn needs_gravity(&self) -> bool {
        false
    }
    fn max_abs_speed(&self, x: f64, u: &[f64]) -> f64;
    fn wave_speed_bound(&self) -> f64;
    /// Gauss-Lobatto node count for degree q, large enough to integrate the
    /// priors this model produces. Exact priors need a little extra care.
    fn quadrature_size(&self, q: usize, exact_prior: bool) -> usize;
    fn admissible(&self, u: &[f64]) -> bool {
        u.iter().all(|v| v.is_finite())
    }
}

/// Multiplicative steady-state perturbation (1 + eps sin 2 pi x).
pub fn perturb_sin(eps: f64, x: f64) -> f64 {
    1.0 + eps * (2.0 * std::f64::consts::PI * x).sin()
}

/// Bump added to the 2D water height in the perturbation experiment.
pub fn sw2d_bump(x1: f64, x2: f64) -> f64 {
    -0.02 * (-2.0 * ((x1 + 2.0).powi(2) + (x2 + 2.0).powi(2))).exp()
}

pub(crate) fn check_box(name: &str, value: f64, lo: f64, hi: f64) -> crate::Result<()> {
    if value < lo || value > hi || !value.is_finite() {
        return Err(crate::Error::Config(format!(
            "{name} = {value} outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}
