use super::{check_box, Model1D};
use crate::error::Error;
use crate::pinn::{Dual2, Scalar, SteadyProblem1d};
use crate::Result;

pub const G: f64 = 9.81;
const BUMP_RADIUS: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topo {
    Gaussian,
    Compact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Sub,
    Super,
    Trans,
}

/// Bump profile omega(y) with derivatives.
fn bump(topo: Topo, y: Dual2<f64>) -> Dual2<f64> {
    match topo {
        Topo::Gaussian => (y * y).scale(-50.0).exp().scale(0.25),
        Topo::Compact => {
            let t = y.scale(1.0 / BUMP_RADIUS);
            let inner = -(t * t).shift(-1.0);
            if inner.v <= 1e-12 {
                Dual2::constant(0.0)
            } else {
                inner.recip().scale(-1.0).shift(1.0).exp()
            }
        }
    }
}

/// 1D shallow water over parameterized topography on (0, 1):
/// d/dt (h, Q) + d/dx (Q, Q^2/h + g h^2/2) = (0, -g h dZ/dx).
#[derive(Debug, Clone)]
pub struct Sw1d {
    pub regime: Regime,
    pub topo: Topo,
    pub h0: f64,
    pub q0: f64,
    pub alpha: f64,
    pub beta: f64,
    e_ref: f64,
    h_crit: f64,
    h_left: f64,
    h_right: f64,
    lambda: f64,
}

pub fn mu_box(regime: Regime) -> Vec<(f64, f64)> {
    match regime {
        Regime::Sub => vec![(0.5, 1.5), (0.5, 1.5), (2.0, 3.0), (3.0, 4.0)],
        Regime::Super => vec![(0.5, 1.5), (0.5, 1.5), (0.5, 0.75), (4.0, 5.0)],
        Regime::Trans => vec![(0.75, 1.25), (0.5, 1.5), (2.0, 3.0)],
    }
}

/// mu layout per regime: Sub/Super (alpha, beta, h0, Q0); Trans (alpha, beta, Q0).
pub fn mu_mid(regime: Regime) -> Vec<f64> {
    mu_box(regime)
        .iter()
        .map(|&(lo, hi)| 0.5 * (lo + hi))
        .collect()
}

impl Sw1d {
    pub fn new(regime: Regime, topo: Topo, mu: &[f64]) -> Result<Sw1d> {
        let (alpha, beta, h0, q0) = match regime {
            Regime::Sub | Regime::Super => (mu[0], mu[1], mu[2], mu[3]),
            Regime::Trans => (mu[0], mu[1], f64::NAN, mu[2]),
        };
        let h_crit = (q0 * q0 / G).powf(1.0 / 3.0);
        let mut model = Sw1d {
            regime,
            topo,
            h0,
            q0,
            alpha,
            beta,
            e_ref: 0.0,
            h_crit,
            h_left: 0.0,
            h_right: 0.0,
            lambda: 0.0,
        };
        match regime {
            Regime::Sub | Regime::Super => {
                model.e_ref = model.energy(h0, model.topography(0.0).v);
                model.h_left = h0;
                model.h_right = model.steady_h(1.0)?;
                model.lambda = q0 / h0 + (G * h0).sqrt();
            }
            Regime::Trans => {
                model.e_ref = model.energy(h_crit, model.topography(0.5).v);
                model.h_left = model.subcritical_root(model.topography(0.0).v)?;
                model.h_right = model.supercritical_root(model.topography(1.0).v)?;
                let h_r = model.h_right;
                model.lambda = q0 / h_r + (G * h_r).sqrt();
            }
        }
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let bx = mu_box(self.regime);
        match self.regime {
            Regime::Sub | Regime::Super => {
                check_box("alpha", self.alpha, bx[0].0, bx[0].1)?;
                check_box("beta", self.beta, bx[1].0, bx[1].1)?;
                check_box("h0", self.h0, bx[2].0, bx[2].1)?;
                check_box("Q0", self.q0, bx[3].0, bx[3].1)
            }
            Regime::Trans => {
                check_box("alpha", self.alpha, bx[0].0, bx[0].1)?;
                check_box("beta", self.beta, bx[1].0, bx[1].1)?;
                check_box("Q0", self.q0, bx[2].0, bx[2].1)
            }
        }
    }

    /// Z(x) with first and second derivatives.
    pub fn topography(&self, x: f64) -> Dual2<f64> {
        let y = Dual2::<f64>::var(x).shift(-0.5).scale(self.alpha);
        bump(self.topo, y).scale(self.beta)
    }

    pub fn energy(&self, h: f64, z: f64) -> f64 {
        self.q0 * self.q0 / (2.0 * h * h) + G * (h + z)
    }

    pub fn h_crit(&self) -> f64 {
        self.h_crit
    }

    pub fn boundary_heights(&self) -> (f64, f64) {
        (self.h_left, self.h_right)
    }

    pub fn froude(&self, h: f64) -> f64 {
        (self.q0 * self.q0 / (G * h * h * h)).sqrt()
    }

    fn bernoulli_root(&self, z: f64, bracket: (f64, f64), init: f64) -> Result<f64> {
        let f = |h: f64| self.q0 * self.q0 / (2.0 * h * h) + G * (h + z) - self.e_ref;
        let df = |h: f64| G - self.q0 * self.q0 / (h * h * h);
        let (mut lo, mut hi) = bracket;
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            return Ok(lo);
        }
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo * fhi > 0.0 {
            // At the transcritical crest both roots merge at h_crit; accept
            // the bracket edge when the residual there is only roundoff.
            let edge = if flo.abs() < fhi.abs() { lo } else { hi };
            if f(edge).abs() <= 1e-9 * self.e_ref.abs() {
                return Ok(edge);
            }
            return Err(Error::SteadySolve(format!(
                "no Bernoulli root in [{lo}, {hi}] for z = {z}"
            )));
        }
        // Drive the residual to a few ulps of e_ref; basis enrichment with
        // the steady height needs the root at close to full precision.
        let tol = 8.0 * f64::EPSILON * self.e_ref.abs();
        let mut h = init.clamp(lo, hi);
        let mut best = (f64::INFINITY, h);
        for _ in 0..100 {
            let fh = f(h);
            if fh.abs() < best.0 {
                best = (fh.abs(), h);
            }
            if fh.abs() <= tol {
                return Ok(h);
            }
            if fh * flo > 0.0 {
                lo = h;
            } else {
                hi = h;
            }
            let step = fh / df(h);
            let next = h - step;
            h = if next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
            if (hi - lo).abs() <= 1e-15 * h.abs() {
                return Ok(h);
            }
        }
        // Roundoff in f can level off above tol; accept the best iterate
        // when its residual is clearly just noise.
        if best.0 <= 1e-9 * self.e_ref.abs() {
            return Ok(best.1);
        }
        Err(Error::SteadySolve(format!(
            "Bernoulli Newton stalled at x-level z = {z}"
        )))
    }

    fn subcritical_root(&self, z: f64) -> Result<f64> {
        let upper = if self.h0.is_finite() {
            10.0 * self.h0
        } else {
            self.e_ref / G + 1.0
        };
        let init = if self.h0.is_finite() { self.h0 } else { upper / 2.0 };
        self.bernoulli_root(z, (self.h_crit, upper), init)
    }

    fn supercritical_root(&self, z: f64) -> Result<f64> {
        self.bernoulli_root(z, (1e-6, self.h_crit), 0.5 * self.h_crit)
    }

    /// Steady water height at x for the configured regime.
    pub fn steady_h(&self, x: f64) -> Result<f64> {
        let z = self.topography(x).v;
        match self.regime {
            Regime::Sub => self.subcritical_root(z),
            Regime::Super => self.supercritical_root(z),
            Regime::Trans => {
                if x < 0.5 {
                    self.subcritical_root(z)
                } else if x > 0.5 {
                    self.supercritical_root(z)
                } else {
                    Ok(self.h_crit)
                }
            }
        }
    }

    /// Steady height with derivatives from the implicit Bernoulli relation:
    /// h' = -Z' / (1 - Fr^2).
    pub fn steady_h_dual(&self, x: f64) -> Result<Dual2<f64>> {
        let h = self.steady_h(x)?;
        let z = self.topography(x);
        let fr2 = self.q0 * self.q0 / (G * h * h * h);
        let d = 1.0 - fr2;
        let h1 = -z.d1 / d;
        // differentiate d = 1 - Q0^2/(g h^3): d' = 3 Fr^2 h'/h
        let dprime = 3.0 * fr2 * h1 / h;
        let h2 = (-z.d2 * d + z.d1 * dprime) / (d * d);
        Ok(Dual2::new(h, h1, h2))
    }
}

impl Model1D for Sw1d {
    fn n_vars(&self) -> usize {
        2
    }

    fn flux(&self, _x: f64, u: &[f64], out: &mut [f64]) {
        let (h, q) = (u[0], u[1]);
        out[0] = q;
        out[1] = q * q / h + 0.5 * G * h * h;
    }

    fn source(&self, x: f64, u: &[f64], _grav: f64, out: &mut [f64]) {
        let dz = self.topography(x).d1;
        out[0] = 0.0;
        out[1] = -G * u[0] * dz;
    }

    fn has_source(&self) -> bool {
        true
    }

    fn max_abs_speed(&self, _x: f64, u: &[f64]) -> f64 {
        (u[1] / u[0]).abs() + (G * u[0]).sqrt()
    }

    fn wave_speed_bound(&self) -> f64 {
        self.lambda
    }

    fn quadrature_size(&self, q: usize, _exact_prior: bool) -> usize {
        // The compact bump has large derivatives near its support boundary.
        match self.topo {
            Topo::Gaussian => q + 3,
            Topo::Compact => q + 6,
        }
    }

    fn admissible(&self, u: &[f64]) -> bool {
        u.iter().all(|v| v.is_finite()) && u[0] > 0.0
    }
}

/// Steady-prior training problem for 1D shallow water. The network models
/// the height; Q is constant in steady flow. Boundary operators pin the
/// inflow height (sub/super) or blend the transcritical end states.
#[derive(Debug, Clone)]
pub struct Sw1dProblem {
    pub regime: Regime,
    pub topo: Topo,
}

impl Sw1dProblem {
    fn q0(&self, mu: &[f64]) -> f64 {
        match self.regime {
            Regime::Sub | Regime::Super => mu[3],
            Regime::Trans => mu[2],
        }
    }

    fn topo_dual(&self, mu: &[f64], x: f64) -> Dual2<f64> {
        let y = Dual2::<f64>::var(x).shift(-0.5).scale(mu[0]);
        bump(self.topo, y).scale(mu[1])
    }
}

impl SteadyProblem1d for Sw1dProblem {
    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn mu_box(&self) -> Vec<(f64, f64)> {
        mu_box(self.regime)
    }

    fn compose<R: Scalar>(&self, mu: &[f64], x: f64, raw: &[Dual2<R>]) -> Vec<Dual2<R>> {
        let z = self.topo_dual(mu, x).lift::<R>();
        match self.regime {
            Regime::Sub | Regime::Super => {
                let h0 = mu[2];
                vec![(z * raw[0]).shift(h0)]
            }
            Regime::Trans => {
                let model = Sw1d::new(Regime::Trans, self.topo, mu)
                    .expect("transcritical end states");
                let (h_l, h_r) = model.boundary_heights();
                let ramp = Dual2::<f64>::var(x)
                    .shift(-0.5)
                    .scale(15.0)
                    .tanh()
                    .scale(-0.5 * (h_l - h_r))
                    .shift(h_r + 0.5 * (h_l - h_r));
                vec![ramp.lift::<R>() + z * raw[0]]
            }
        }
    }

    fn residual<R: Scalar>(&self, mu: &[f64], x: f64, fields: &[Dual2<R>]) -> Vec<R> {
        let q0 = self.q0(mu);
        let h = fields[0];
        let z = self.topo_dual(mu, x);
        let flux = h.recip().scale(q0 * q0) + (h * h).scale(0.5 * G);
        vec![flux.d1 + h.v.scale(G * z.d1)]
    }

    fn prior_components<R: Scalar>(
        &self,
        _mu: &[f64],
        _x: f64,
        fields: &[Dual2<R>],
    ) -> Vec<Dual2<R>> {
        vec![fields[0], Dual2::constant(1.0)]
    }

    fn n_components(&self) -> usize {
        2
    }

    fn model_tag(&self) -> String {
        let regime = match self.regime {
            Regime::Sub => "sub",
            Regime::Super => "super",
            Regime::Trans => "trans",
        };
        let topo = match self.topo {
            Topo::Gaussian => "gaussian",
            Topo::Compact => "compact",
        };
        format!("sw1d_{regime}_{topo}")
    }

    fn boundary_tag(&self) -> String {
        match self.regime {
            Regime::Sub | Regime::Super => "h0_plus_topo".to_string(),
            Regime::Trans => "tanh_ramp_plus_topo".to_string(),
        }
    }
}
