use super::check_box;
use crate::pinn::{Grad2, Scalar, SteadyProblem2d};
use crate::Result;

pub const G: f64 = 9.81;

pub const MU_BOX: [(f64, f64); 3] = [(0.25, 0.75), (0.1, 0.4), (0.5, 1.25)];
pub const MU_MID: [f64; 3] = [0.5, 0.25, 0.875];

/// 2D shallow water on [-3, 3]^2 over a radial bump, with a rotational
/// steady state: mu = (alpha, Gamma, r0), Z = Gamma exp(alpha (r0^2 - r^2)).
#[derive(Debug, Clone)]
pub struct Sw2d {
    pub alpha: f64,
    pub amp: f64,
    pub r0: f64,
}

impl Sw2d {
    pub fn new(alpha: f64, amp: f64, r0: f64) -> Sw2d {
        Sw2d { alpha, amp, r0 }
    }

    pub fn validate(&self) -> Result<()> {
        check_box("alpha", self.alpha, MU_BOX[0].0, MU_BOX[0].1)?;
        check_box("Gamma", self.amp, MU_BOX[1].0, MU_BOX[1].1)?;
        check_box("r0", self.r0, MU_BOX[2].0, MU_BOX[2].1)
    }

    pub fn domain() -> ((f64, f64), (f64, f64)) {
        ((-3.0, 3.0), (-3.0, 3.0))
    }

    /// Topography with both partials.
    pub fn topography(&self, x1: f64, x2: f64) -> Grad2<f64> {
        let r2 = Grad2::<f64>::var_x(x1).powi(2) + Grad2::<f64>::var_y(x2).powi(2);
        (-r2).shift(self.r0 * self.r0).scale(self.alpha).exp().scale(self.amp)
    }

    /// The consistent steady pair (h, u): rotational flow around the bump.
    pub fn steady_pair(&self, x1: f64, x2: f64) -> (Grad2<f64>, Grad2<f64>) {
        let z = self.topography(x1, x2);
        let z2 = z * z;
        let h = -(z + (z2 * z2).scale(self.alpha / (8.0 * G))).shift(-2.0);
        let u = z2.scale(self.alpha);
        (h, u)
    }

    /// Conserved steady state (h, Q1, Q2) at a point.
    pub fn steady(&self, x1: f64, x2: f64) -> [f64; 3] {
        let (h, u) = self.steady_pair(x1, x2);
        [h.v, x2 * h.v * u.v, -x1 * h.v * u.v]
    }

    pub fn flux_x(&self, u: &[f64], out: &mut [f64]) {
        let (h, q1, q2) = (u[0], u[1], u[2]);
        out[0] = q1;
        out[1] = q1 * q1 / h + 0.5 * G * h * h;
        out[2] = q1 * q2 / h;
    }

    pub fn flux_y(&self, u: &[f64], out: &mut [f64]) {
        let (h, q1, q2) = (u[0], u[1], u[2]);
        out[0] = q2;
        out[1] = q1 * q2 / h;
        out[2] = q2 * q2 / h + 0.5 * G * h * h;
    }

    pub fn source(&self, x1: f64, x2: f64, u: &[f64], out: &mut [f64]) {
        let z = self.topography(x1, x2);
        out[0] = 0.0;
        out[1] = -G * u[0] * z.gx;
        out[2] = -G * u[0] * z.gy;
    }

    pub fn max_speed_x(&self, u: &[f64]) -> f64 {
        (u[1] / u[0]).abs() + (G * u[0]).sqrt()
    }

    pub fn max_speed_y(&self, u: &[f64]) -> f64 {
        (u[2] / u[0]).abs() + (G * u[0]).sqrt()
    }

    pub fn admissible(&self, u: &[f64]) -> bool {
        u.iter().all(|v| v.is_finite()) && u[0] > 0.0
    }
}

/// Steady-prior training problem for 2D shallow water: two networks, one
/// for the height and one for the angular speed factor, fitted jointly with
/// a residual loss and a data loss against the closed-form pair.
#[derive(Debug, Clone, Default)]
pub struct Sw2dProblem;

impl Sw2dProblem {
    fn with_mu(mu: &[f64]) -> Sw2d {
        Sw2d::new(mu[0], mu[1], mu[2])
    }
}

impl SteadyProblem2d for Sw2dProblem {
    fn domain(&self) -> ((f64, f64), (f64, f64)) {
        Sw2d::domain()
    }

    fn mu_box(&self) -> Vec<(f64, f64)> {
        MU_BOX.to_vec()
    }

    fn compose<R: Scalar>(&self, mu: &[f64], x: (f64, f64), raw: &[Grad2<R>]) -> Vec<Grad2<R>> {
        let z = Self::with_mu(mu).topography(x.0, x.1).lift::<R>();
        let h = -(z * raw[0] * raw[0]).shift(-2.0);
        let u = z * raw[1];
        vec![h, u]
    }

    fn residual<R: Scalar>(&self, mu: &[f64], x: (f64, f64), fields: &[Grad2<R>]) -> Vec<R> {
        let model = Self::with_mu(mu);
        let z = model.topography(x.0, x.1);
        let (h, u) = (fields[0], fields[1]);
        let x1 = Grad2::<R>::var_x(x.0);
        let x2 = Grad2::<R>::var_y(x.1);
        let q1 = x2 * h * u;
        let q2 = -(x1 * h * u);
        let gh2 = (h * h).scale(0.5 * G);
        let m11 = q1 * q1 / h + gh2;
        let m12 = q1 * q2 / h;
        let m22 = q2 * q2 / h + gh2;
        vec![
            q1.gx + q2.gy,
            m11.gx + m12.gy + h.v.scale(G * z.gx),
            m12.gx + m22.gy + h.v.scale(G * z.gy),
        ]
    }

    fn data_targets(&self, mu: &[f64], x: (f64, f64)) -> Vec<f64> {
        let (h, u) = Self::with_mu(mu).steady_pair(x.0, x.1);
        vec![h.v, u.v]
    }

    fn prior_components<R: Scalar>(
        &self,
        _mu: &[f64],
        x: (f64, f64),
        fields: &[Grad2<R>],
    ) -> Vec<Grad2<R>> {
        let (h, u) = (fields[0], fields[1]);
        let hu = h * u;
        let q1 = hu * Grad2::var_y(x.1);
        let q2 = -(hu * Grad2::var_x(x.0));
        vec![h, q1, q2]
    }

    fn model_tag(&self) -> String {
        "sw2d".to_string()
    }

    fn boundary_tag(&self) -> String {
        "two_minus_z_hsq_and_z_u".to_string()
    }
}
