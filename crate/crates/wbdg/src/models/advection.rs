use super::{check_box, Model1D};
use crate::pinn::{Dual2, Scalar, SteadyProblem1d};
use crate::Result;

/// Linear advection with a quadratic balance source:
/// du/dt + du/dx = alpha u + beta u^2, on (0, 1), unit wave speed.
#[derive(Debug, Clone)]
pub struct Advection {
    pub alpha: f64,
    pub beta: f64,
    pub u0: f64,
    pub with_source: bool,
}

pub const MU_BOX: [(f64, f64); 3] = [(0.5, 1.0), (0.5, 1.0), (0.1, 0.2)];
pub const MU_MID: [f64; 3] = [0.75, 0.75, 0.15];

impl Advection {
    pub fn new(alpha: f64, beta: f64, u0: f64) -> Advection {
        Advection {
            alpha,
            beta,
            u0,
            with_source: true,
        }
    }

    /// Source-free variant for unsteady runs.
    pub fn homogeneous() -> Advection {
        Advection {
            alpha: MU_MID[0],
            beta: MU_MID[1],
            u0: MU_MID[2],
            with_source: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_box("alpha", self.alpha, MU_BOX[0].0, MU_BOX[0].1)?;
        check_box("beta", self.beta, MU_BOX[1].0, MU_BOX[1].1)?;
        check_box("u0", self.u0, MU_BOX[2].0, MU_BOX[2].1)
    }

    /// Closed-form steady solution u_eq(x).
    pub fn steady(&self, x: f64) -> f64 {
        let denom = (self.alpha + self.beta * self.u0) * (-self.alpha * x).exp()
            - self.beta * self.u0;
        self.alpha * self.u0 / denom
    }

    /// Steady solution with first and second derivatives.
    pub fn steady_dual(&self, x: f64) -> Dual2<f64> {
        let xd = Dual2::<f64>::var(x);
        let denom = xd.scale(-self.alpha).exp().scale(self.alpha + self.beta * self.u0)
            .shift(-self.beta * self.u0);
        denom.recip().scale(self.alpha * self.u0)
    }
}

impl Model1D for Advection {
    fn n_vars(&self) -> usize {
        1
    }

    fn flux(&self, _x: f64, u: &[f64], out: &mut [f64]) {
        out[0] = u[0];
    }

    fn source(&self, _x: f64, u: &[f64], _grav: f64, out: &mut [f64]) {
        out[0] = if self.with_source {
            self.alpha * u[0] + self.beta * u[0] * u[0]
        } else {
            0.0
        };
    }

    fn has_source(&self) -> bool {
        self.with_source
    }

    fn max_abs_speed(&self, _x: f64, _u: &[f64]) -> f64 {
        1.0
    }

    fn wave_speed_bound(&self) -> f64 {
        1.0
    }

    fn quadrature_size(&self, q: usize, exact_prior: bool) -> usize {
        if exact_prior {
            // One extra node keeps the projection residual of the enriched
            // steady state at rounding level through q = 3.
            (q + 3).max(5)
        } else {
            (q + 2).max(3)
        }
    }
}

/// Steady-prior training problem for the advection model, mu = (alpha,
/// beta, u0). Boundary operator: u = u0 + x u_theta, pinning u(0) = u0.
#[derive(Debug, Clone, Default)]
pub struct AdvectionProblem;

impl SteadyProblem1d for AdvectionProblem {
    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn mu_box(&self) -> Vec<(f64, f64)> {
        MU_BOX.to_vec()
    }

    fn compose<R: Scalar>(&self, mu: &[f64], x: f64, raw: &[Dual2<R>]) -> Vec<Dual2<R>> {
        vec![(Dual2::<R>::var(x) * raw[0]).shift(mu[2])]
    }

    fn residual<R: Scalar>(&self, mu: &[f64], _x: f64, fields: &[Dual2<R>]) -> Vec<R> {
        let u = fields[0];
        vec![u.d1 - u.v.scale(mu[0]) - (u.v * u.v).scale(mu[1])]
    }

    fn prior_components<R: Scalar>(
        &self,
        _mu: &[f64],
        _x: f64,
        fields: &[Dual2<R>],
    ) -> Vec<Dual2<R>> {
        vec![fields[0]]
    }

    fn model_tag(&self) -> String {
        "advection".to_string()
    }

    fn boundary_tag(&self) -> String {
        "u0_plus_x".to_string()
    }
}
