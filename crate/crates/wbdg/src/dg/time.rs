//! Explicit strong-stability-preserving Runge-Kutta steppers, one per basis
//! degree: forward Euler, SSPRK2, the five-stage third-order SSPRK3(5), and
//! Ketcheson's ten-stage fourth-order SSPRK4(10).

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Euler,
    Ssprk2,
    Ssprk35,
    Ssprk410,
}

impl Integrator {
    /// Integrator paired with the DG degree q, so the temporal order q + 1
    /// matches the spatial one.
    pub fn for_degree(q: usize) -> Integrator {
        match q {
            0 => Integrator::Euler,
            1 => Integrator::Ssprk2,
            2 => Integrator::Ssprk35,
            _ => Integrator::Ssprk410,
        }
    }

    pub fn order(self) -> usize {
        match self {
            Integrator::Euler => 1,
            Integrator::Ssprk2 => 2,
            Integrator::Ssprk35 => 3,
            Integrator::Ssprk410 => 4,
        }
    }

    /// Stability coefficient C_RK entering the time step formula.
    pub fn cfl_factor(self) -> f64 {
        match self {
            Integrator::Euler | Integrator::Ssprk2 => 1.0,
            Integrator::Ssprk35 => 2.65,
            Integrator::Ssprk410 => 3.0,
        }
    }

    pub fn stages(self) -> usize {
        match self {
            Integrator::Euler => 1,
            Integrator::Ssprk2 => 2,
            Integrator::Ssprk35 => 5,
            Integrator::Ssprk410 => 10,
        }
    }

    /// Advance u by one step of size dt for the autonomous system u' = L(u).
    pub fn step(self, u: &mut [f64], dt: f64, rhs: &mut dyn FnMut(&[f64], &mut [f64])) {
        match self {
            Integrator::Euler => euler(u, dt, rhs),
            Integrator::Ssprk2 => ssprk2(u, dt, rhs),
            Integrator::Ssprk35 => ssprk35(u, dt, rhs),
            Integrator::Ssprk410 => ssprk410(u, dt, rhs),
        }
    }
}

/// y += a x, elementwise.
fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn euler(u: &mut [f64], dt: f64, rhs: &mut dyn FnMut(&[f64], &mut [f64])) {
    let mut l = vec![0.0; u.len()];
    rhs(u, &mut l);
    axpy(u, dt, &l);
}

fn ssprk2(u: &mut [f64], dt: f64, rhs: &mut dyn FnMut(&[f64], &mut [f64])) {
    let n = u.len();
    let mut l = vec![0.0; n];
    rhs(u, &mut l);
    let mut u1 = u.to_vec();
    axpy(&mut u1, dt, &l);
    rhs(&u1, &mut l);
    axpy(&mut u1, dt, &l);
    for i in 0..n {
        u[i] = 0.5 * u[i] + 0.5 * u1[i];
    }
}

/// Five-stage third-order SSP scheme in Shu-Osher form.
fn ssprk35(u: &mut [f64], dt: f64, rhs: &mut dyn FnMut(&[f64], &mut [f64])) {
    const B10: f64 = 0.37726891511710;
    const A30: f64 = 0.56656131914033;
    const A32: f64 = 0.43343868085967;
    const B32: f64 = 0.16352294089771;
    const A40: f64 = 0.09299483444413;
    const A41: f64 = 0.00002090369620;
    const A43: f64 = 0.90698426185967;
    const B40: f64 = 0.00071997378654;
    const B43: f64 = 0.34217696850008;
    const A50: f64 = 0.00736132260920;
    const A51: f64 = 0.20127980325145;
    const A52: f64 = 0.00182955389682;
    const A54: f64 = 0.78952932024253;
    const B50: f64 = 0.00277719819460;
    const B51: f64 = 0.00001567934613;
    const B54: f64 = 0.29786487010104;

    let n = u.len();
    let mut l0 = vec![0.0; n];
    let mut l1 = vec![0.0; n];
    let mut l = vec![0.0; n];

    rhs(u, &mut l0);
    let mut u1 = u.to_vec();
    axpy(&mut u1, B10 * dt, &l0);

    rhs(&u1, &mut l1);
    let mut u2 = u1.clone();
    axpy(&mut u2, B10 * dt, &l1);

    rhs(&u2, &mut l);
    let mut u3 = vec![0.0; n];
    for i in 0..n {
        u3[i] = A30 * u[i] + A32 * u2[i] + B32 * dt * l[i];
    }

    rhs(&u3, &mut l);
    let mut u4 = vec![0.0; n];
    for i in 0..n {
        u4[i] = A40 * u[i] + A41 * u1[i] + A43 * u3[i] + dt * (B40 * l0[i] + B43 * l[i]);
    }

    rhs(&u4, &mut l);
    for i in 0..n {
        u[i] = A50 * u[i] + A51 * u1[i] + A52 * u2[i] + A54 * u4[i]
            + dt * (B50 * l0[i] + B51 * l1[i] + B54 * l[i]);
    }
}

/// Ketcheson's low-storage ten-stage fourth-order SSP scheme.
fn ssprk410(u: &mut [f64], dt: f64, rhs: &mut dyn FnMut(&[f64], &mut [f64])) {
    let n = u.len();
    let mut q1 = u.to_vec();
    let mut q2 = u.to_vec();
    let mut l = vec![0.0; n];
    let sixth = dt / 6.0;

    for _ in 0..5 {
        rhs(&q1, &mut l);
        axpy(&mut q1, sixth, &l);
    }
    for i in 0..n {
        q2[i] = (q2[i] + 9.0 * q1[i]) / 25.0;
        q1[i] = 15.0 * q2[i] - 5.0 * q1[i];
    }
    for _ in 0..4 {
        rhs(&q1, &mut l);
        axpy(&mut q1, sixth, &l);
    }
    rhs(&q1, &mut l);
    for i in 0..n {
        u[i] = q2[i] + 0.6 * q1[i] + 0.1 * dt * l[i];
    }
}
