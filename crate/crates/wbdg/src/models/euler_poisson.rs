use super::{check_box, Model1D};
use crate::error::Error;
use crate::pinn::{Dual2, Scalar, SteadyProblem1d};
use crate::Result;

pub const GRAV_CONST: f64 = 1.0;
pub const FOUR_PI_G: f64 = 4.0 * std::f64::consts::PI * GRAV_CONST;

pub const POLY_BOX: [(f64, f64); 2] = [(2.0, 5.0), (1.5, 3.5)];
pub const TEMP_BOX: [(f64, f64); 2] = [(2.0, 5.0), (0.5, 1.5)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PressureLaw {
    Polytropic { kappa: f64, gamma: f64 },
    Temperature { kappa: f64, alpha: f64 },
    IdealGas { gamma: f64 },
}

/// Radial Euler equations with self-gravity on r in (0, 1):
/// d/dt (rho, Q, E) + d/dr F = -(2/r) (Q, Q^2/rho, (E+p)Q/rho)
///                             + (0, -rho d_r phi, -Q d_r phi),
/// with (1/r^2) d_r (r^2 d_r phi) = 4 pi G rho.
#[derive(Debug, Clone)]
pub struct EulerPoisson {
    pub law: PressureLaw,
    pub gravity: bool,
}

impl EulerPoisson {
    pub fn polytropic(kappa: f64, gamma: f64) -> EulerPoisson {
        EulerPoisson {
            law: PressureLaw::Polytropic { kappa, gamma },
            gravity: true,
        }
    }

    pub fn temperature(kappa: f64, alpha: f64) -> EulerPoisson {
        EulerPoisson {
            law: PressureLaw::Temperature { kappa, alpha },
            gravity: true,
        }
    }

    /// Ideal-gas blast-wave configuration: no gravity.
    pub fn blast() -> EulerPoisson {
        EulerPoisson {
            law: PressureLaw::IdealGas { gamma: 1.4 },
            gravity: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.law {
            PressureLaw::Polytropic { kappa, gamma } => {
                check_box("kappa", kappa, POLY_BOX[0].0, POLY_BOX[0].1)?;
                check_box("gamma", gamma, POLY_BOX[1].0, POLY_BOX[1].1)
            }
            PressureLaw::Temperature { kappa, alpha } => {
                check_box("kappa", kappa, TEMP_BOX[0].0, TEMP_BOX[0].1)?;
                check_box("alpha", alpha, TEMP_BOX[1].0, TEMP_BOX[1].1)
            }
            PressureLaw::IdealGas { .. } => Ok(()),
        }
    }

    pub fn pressure(&self, r: f64, u: &[f64]) -> f64 {
        match self.law {
            PressureLaw::Polytropic { kappa, gamma } => kappa * u[0].powf(gamma),
            PressureLaw::Temperature { kappa, alpha } => kappa * u[0] * (-alpha * r).exp(),
            PressureLaw::IdealGas { gamma } => {
                (gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
            }
        }
    }

    fn sound_speed(&self, r: f64, u: &[f64]) -> f64 {
        match self.law {
            PressureLaw::Polytropic { kappa, gamma } => {
                (kappa * gamma * u[0].powf(gamma - 1.0)).sqrt()
            }
            PressureLaw::Temperature { kappa, alpha } => (kappa * (-alpha * r).exp()).sqrt(),
            PressureLaw::IdealGas { gamma } => (gamma * self.pressure(r, u) / u[0]).sqrt(),
        }
    }

    /// Total energy of a steady (velocity-free) state of density rho at r.
    pub fn energy_of_density(&self, r: f64, rho: f64) -> f64 {
        match self.law {
            PressureLaw::Polytropic { kappa, gamma } => kappa * rho.powf(gamma) / (gamma - 1.0),
            // E = p/(gamma_E - 1) with gamma_E = 2 for the temperature law
            PressureLaw::Temperature { kappa, alpha } => kappa * rho * (-alpha * r).exp(),
            PressureLaw::IdealGas { gamma } => {
                self.pressure(r, &[rho, 0.0, 0.0]) / (gamma - 1.0)
            }
        }
    }

    /// Steady density profile: the closed form for the polytropic gamma = 2
    /// case, otherwise a fine RK4 integration of the hydrostatic ODE.
    pub fn steady(&self) -> Result<EpSteady> {
        if let PressureLaw::Polytropic { kappa, gamma } = self.law {
            if gamma == 2.0 {
                return Ok(EpSteady::Sinc {
                    abar: (2.0 * std::f64::consts::PI * GRAV_CONST / kappa).sqrt(),
                });
            }
        }
        self.steady_rk4(100_000)
    }

    /// RK4 integration of the steady ODE recast first-order:
    /// polytropic   rho' = -4 pi G m / (r^2 kappa gamma rho^(gamma-2)),  m' = r^2 rho
    /// temperature  rho' = (w/r^2 - kappa T') rho / (kappa T),           w' = -4 pi G r^2 rho
    /// from rho(0) = 1, with the r = 0 limits rho'(0) = 0 resp. alpha.
    pub fn steady_rk4(&self, steps: usize) -> Result<EpSteady> {
        let (kappa, temp_alpha, gamma, is_temp) = match self.law {
            PressureLaw::Polytropic { kappa, gamma } => (kappa, 0.0, gamma, false),
            PressureLaw::Temperature { kappa, alpha } => (kappa, alpha, 0.0, true),
            PressureLaw::IdealGas { .. } => {
                return Err(Error::SteadySolve(
                    "ideal-gas law has no hydrostatic profile here".to_string(),
                ))
            }
        };
        // The 1/r^2 ratio amplifies stage errors in the accumulated integral
        // near the axis, so the first SUBDIVIDED intervals are integrated in
        // SUBSTEPS pieces each, and within the very first piece the ratio is
        // replaced by its series value r rho / 3.
        const SUBDIVIDED: usize = 64;
        const SUBSTEPS: usize = 64;
        let dr = 1.0 / steps as f64;
        let h0 = dr / SUBSTEPS as f64;
        let rhs = |r: f64, rho: f64, acc: f64| -> (f64, f64) {
            // acc is m (polytropic) or w (temperature)
            let over_r2 = if r < 0.75 * h0 {
                let lead = r * rho / 3.0;
                if is_temp {
                    -FOUR_PI_G * lead
                } else {
                    lead
                }
            } else {
                acc / (r * r)
            };
            if is_temp {
                let t = (-temp_alpha * r).exp();
                let dt = -temp_alpha * t;
                let drho = (over_r2 - kappa * dt) * rho / (kappa * t);
                (drho, -FOUR_PI_G * r * r * rho)
            } else {
                let drho = -FOUR_PI_G * over_r2 / (kappa * gamma * rho.powf(gamma - 2.0));
                (drho, r * r * rho)
            }
        };
        let step = |r: f64, h: f64, rho: f64, acc: f64| -> (f64, f64) {
            let (k1r, k1a) = rhs(r, rho, acc);
            let (k2r, k2a) = rhs(r + 0.5 * h, rho + 0.5 * h * k1r, acc + 0.5 * h * k1a);
            let (k3r, k3a) = rhs(r + 0.5 * h, rho + 0.5 * h * k2r, acc + 0.5 * h * k2a);
            let (k4r, k4a) = rhs(r + h, rho + h * k3r, acc + h * k3a);
            (
                rho + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
                acc + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
            )
        };
        let mut rho = 1.0;
        let mut acc = 0.0;
        let mut rho_out = Vec::with_capacity(steps + 1);
        let mut drho_out = Vec::with_capacity(steps + 1);
        rho_out.push(1.0);
        drho_out.push(if is_temp { temp_alpha } else { 0.0 });
        for i in 0..steps {
            let r = i as f64 * dr;
            if i < SUBDIVIDED {
                for j in 0..SUBSTEPS {
                    (rho, acc) = step(r + j as f64 * h0, h0, rho, acc);
                }
            } else {
                (rho, acc) = step(r, dr, rho, acc);
            }
            if rho <= 0.0 || !rho.is_finite() {
                return Err(Error::SteadySolve(format!(
                    "steady density vanished near r = {}",
                    r + dr
                )));
            }
            rho_out.push(rho);
            drho_out.push(rhs(r + dr, rho, acc).0);
        }
        Ok(EpSteady::Table {
            dr,
            rho: rho_out,
            drho: drho_out,
        })
    }
}

/// Steady density profile, evaluable at any radius with its derivative.
#[derive(Debug, Clone)]
pub enum EpSteady {
    Sinc { abar: f64 },
    Table { dr: f64, rho: Vec<f64>, drho: Vec<f64> },
}

impl EpSteady {
    pub fn eval(&self, r: f64) -> (f64, f64) {
        match self {
            EpSteady::Sinc { abar } => {
                let a = *abar;
                let ar = a * r;
                if ar.abs() < 1e-4 {
                    let ar2 = ar * ar;
                    (
                        1.0 - ar2 / 6.0 + ar2 * ar2 / 120.0,
                        -a * ar / 3.0 + a * ar * ar2 / 30.0,
                    )
                } else {
                    (ar.sin() / ar, ar.cos() / r - ar.sin() / (a * r * r))
                }
            }
            EpSteady::Table { dr, rho, drho } => {
                let n = rho.len() - 1;
                let pos = (r / dr).clamp(0.0, n as f64);
                let i = (pos.floor() as usize).min(n - 1);
                let s = pos - i as f64;
                // cubic Hermite on [r_i, r_{i+1}]
                let (y0, y1) = (rho[i], rho[i + 1]);
                let (m0, m1) = (drho[i] * dr, drho[i + 1] * dr);
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                let val = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
                let d00 = 6.0 * s2 - 6.0 * s;
                let d10 = 3.0 * s2 - 4.0 * s + 1.0;
                let d01 = -6.0 * s2 + 6.0 * s;
                let d11 = 3.0 * s2 - 2.0 * s;
                let deriv = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / dr;
                (val, deriv)
            }
        }
    }
}

impl Model1D for EulerPoisson {
    fn n_vars(&self) -> usize {
        3
    }

    fn flux(&self, x: f64, u: &[f64], out: &mut [f64]) {
        let p = self.pressure(x, u);
        let vel = u[1] / u[0];
        out[0] = u[1];
        out[1] = u[1] * vel + p;
        out[2] = vel * (u[2] + p);
    }

    fn source(&self, x: f64, u: &[f64], grav: f64, out: &mut [f64]) {
        // The geometric terms carry a 1/r factor. The quadrature node at the
        // axis r = 0 would amplify any stray momentum there by 1/r, while the
        // symmetric continuation has Q(0) = 0, so the axis contribution is
        // dropped instead of clamped.
        let geo = if x > 0.0 { -2.0 / x } else { 0.0 };
        let p = self.pressure(x, u);
        let vel = u[1] / u[0];
        out[0] = geo * u[1];
        out[1] = geo * u[1] * vel - u[0] * grav;
        out[2] = geo * vel * (u[2] + p) - u[1] * grav;
    }

    fn has_source(&self) -> bool {
        true
    }

    fn needs_gravity(&self) -> bool {
        self.gravity
    }

    fn max_abs_speed(&self, x: f64, u: &[f64]) -> f64 {
        (u[1] / u[0]).abs() + self.sound_speed(x, u)
    }

    fn wave_speed_bound(&self) -> f64 {
        match self.law {
            PressureLaw::Polytropic { gamma, .. } => 1.0 + gamma.sqrt(),
            PressureLaw::Temperature { kappa, .. } => 1.0 + kappa.sqrt(),
            PressureLaw::IdealGas { .. } => 3.0,
        }
    }

    fn quadrature_size(&self, q: usize, _exact_prior: bool) -> usize {
        q + 2
    }

    fn admissible(&self, u: &[f64]) -> bool {
        if !u.iter().all(|v| v.is_finite()) || u[0] <= 0.0 {
            return false;
        }
        match self.law {
            PressureLaw::IdealGas { .. } => u[2] - 0.5 * u[1] * u[1] / u[0] > 0.0,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpLawKind {
    Polytropic,
    Temperature,
}

/// Steady-prior training problem for Euler-Poisson, mu = (kappa, gamma) or
/// (kappa, alpha). The network models the density; the boundary operator
/// pins rho(0) = 1 and the central slope.
#[derive(Debug, Clone)]
pub struct EpProblem {
    pub law: EpLawKind,
}

impl SteadyProblem1d for EpProblem {
    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn mu_box(&self) -> Vec<(f64, f64)> {
        match self.law {
            EpLawKind::Polytropic => POLY_BOX.to_vec(),
            EpLawKind::Temperature => TEMP_BOX.to_vec(),
        }
    }

    fn compose<R: Scalar>(&self, mu: &[f64], x: f64, raw: &[Dual2<R>]) -> Vec<Dual2<R>> {
        let r2 = Dual2::<R>::var(x).powi(2);
        match self.law {
            EpLawKind::Polytropic => vec![(r2 * raw[0]).shift(1.0)],
            EpLawKind::Temperature => {
                let linear = Dual2::<R>::var(x).scale(mu[1]).shift(1.0);
                vec![linear + r2 * raw[0]]
            }
        }
    }

    fn residual<R: Scalar>(&self, mu: &[f64], x: f64, fields: &[Dual2<R>]) -> Vec<R> {
        let r = x;
        let rho = fields[0];
        let kappa = mu[0];
        match self.law {
            EpLawKind::Polytropic => {
                let gamma = mu[1];
                let kg = kappa * gamma;
                let t1 = (rho.v.powf_const(gamma - 2.0) * rho.d1).scale(2.0 * r * kg);
                let t2 = (rho.v.powf_const(gamma - 3.0) * rho.d1 * rho.d1)
                    .scale(r * r * kg * (gamma - 2.0));
                let t3 = (rho.v.powf_const(gamma - 2.0) * rho.d2).scale(r * r * kg);
                let t4 = rho.v.scale(FOUR_PI_G * r * r);
                vec![t1 + t2 + t3 + t4]
            }
            EpLawKind::Temperature => {
                let alpha = mu[1];
                let t = (-alpha * r).exp();
                let dt = -alpha * t;
                let d2t = alpha * alpha * t;
                let slope = rho.d1 / rho.v;
                let a1 = slope.scale(2.0 * r * kappa * t) + slope.scale(r * r * kappa * dt);
                let a2 = ((rho.d2 * rho.v - rho.d1 * rho.d1) / (rho.v * rho.v))
                    .scale(r * r * kappa * t);
                let b = R::constant(2.0 * r * kappa * dt + r * r * kappa * d2t);
                let grav = rho.v.scale(FOUR_PI_G * r * r);
                vec![a1 + a2 + b + grav]
            }
        }
    }

    fn prior_components<R: Scalar>(
        &self,
        mu: &[f64],
        x: f64,
        fields: &[Dual2<R>],
    ) -> Vec<Dual2<R>> {
        let rho = fields[0];
        let kappa = mu[0];
        let energy = match self.law {
            EpLawKind::Polytropic => {
                let gamma = mu[1];
                rho.powf_const(gamma).scale(kappa / (gamma - 1.0))
            }
            EpLawKind::Temperature => {
                let t = Dual2::<R>::var(x).scale(-mu[1]).exp();
                (rho * t).scale(kappa)
            }
        };
        vec![rho, Dual2::constant(1.0), energy]
    }

    fn n_components(&self) -> usize {
        3
    }

    fn model_tag(&self) -> String {
        match self.law {
            EpLawKind::Polytropic => "ep_polytropic".to_string(),
            EpLawKind::Temperature => "ep_temperature".to_string(),
        }
    }

    fn boundary_tag(&self) -> String {
        match self.law {
            EpLawKind::Polytropic => "one_plus_r2".to_string(),
            EpLawKind::Temperature => "one_plus_ar_plus_r2".to_string(),
        }
    }
}
