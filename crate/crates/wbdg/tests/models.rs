use approx::{assert_abs_diff_eq, assert_relative_eq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wbdg::models::{
    advection, euler_poisson, perturb_sin, sw2d, sw2d_bump, Advection, EulerPoisson, Model1D,
    Regime, Sw1d, Sw2d, Topo,
};
use wbdg::models::advection::AdvectionProblem;
use wbdg::models::euler_poisson::{EpLawKind, EpProblem};
use wbdg::models::sw1d::Sw1dProblem;
use wbdg::models::sw2d::Sw2dProblem;
use wbdg::pinn::{Dual2, SteadyProblem1d, SteadyProblem2d};

const G: f64 = 9.81;

/// 6th-order central first derivative, the independent oracle for steady
/// relations.
fn fd6(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h)
        - 9.0 * f(x + 2.0 * h)
        + f(x + 3.0 * h))
        / (60.0 * h)
}

#[test]
fn topography_matches_stated_values() {
    let gauss = Sw1d::new(Regime::Sub, Topo::Gaussian, &[1.0, 1.0, 2.5, 3.5]).unwrap();
    assert_abs_diff_eq!(gauss.topography(0.5).v, 0.25, epsilon = 1e-15);

    let compact = Sw1d::new(Regime::Sub, Topo::Compact, &[1.0, 1.0, 2.5, 3.5]).unwrap();
    assert_abs_diff_eq!(compact.topography(0.5).v, 1.0, epsilon = 1e-15);
    // y = 0.1 inside the bump: omega = exp(1 - 1/(1 - (2/3)^2)) = exp(-0.8)
    assert_relative_eq!(
        compact.topography(0.6).v,
        (-0.8f64).exp(),
        max_relative = 1e-13
    );
    // outside the support: identically zero, derivative included
    for x in [0.655, 0.9, 0.0, 0.345] {
        let z = compact.topography(x);
        assert_eq!(z.v, 0.0);
        assert_eq!(z.d1, 0.0);
    }
}

#[test]
fn topography_derivatives_match_finite_differences() {
    for topo in [Topo::Gaussian, Topo::Compact] {
        let model = Sw1d::new(Regime::Sub, topo, &[1.2, 0.8, 2.5, 3.5]).unwrap();
        for x in [0.42, 0.5, 0.55, 0.61] {
            let z = model.topography(x);
            let h = 1e-5;
            let fd1 = (model.topography(x + h).v - model.topography(x - h).v) / (2.0 * h);
            let fd2 = (model.topography(x + h).v - 2.0 * z.v + model.topography(x - h).v)
                / (h * h);
            assert_relative_eq!(z.d1, fd1, max_relative = 1e-6, epsilon = 1e-8);
            assert_relative_eq!(z.d2, fd2, max_relative = 1e-4, epsilon = 1e-4);
        }
    }
}

#[test]
fn advection_steady_closed_form() {
    let m = Advection::new(0.75, 0.75, 0.15);
    assert_abs_diff_eq!(m.steady(0.0), 0.15, epsilon = 1e-15);

    let linear = Advection::new(0.8, 0.0, 0.12);
    for x in [0.0, 0.3, 1.0] {
        assert_relative_eq!(linear.steady(x), 0.12 * (0.8 * x).exp(), max_relative = 1e-14);
    }
}

fn rk4_scalar(f: impl Fn(f64, f64) -> f64, mut y: f64, x0: f64, x1: f64, steps: usize) -> f64 {
    let h = (x1 - x0) / steps as f64;
    let mut x = x0;
    for _ in 0..steps {
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(x + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x += h;
    }
    y
}

#[test]
fn advection_steady_agrees_with_ode_integration() {
    let m = Advection::new(0.75, 0.75, 0.15);
    let ode = rk4_scalar(|_, u| 0.75 * u + 0.75 * u * u, 0.15, 0.0, 1.0, 10_000);
    assert_abs_diff_eq!(m.steady(1.0), ode, epsilon = 1e-10);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = rng.random_range(0.5..1.0);
        let b = rng.random_range(0.5..1.0);
        let u0 = rng.random_range(0.1..0.2);
        let m = Advection::new(a, b, u0);
        let ode = rk4_scalar(|_, u| a * u + b * u * u, u0, 0.0, 1.0, 10_000);
        worst = worst.max((m.steady(1.0) - ode).abs());
    }
    assert!(worst <= 1e-9, "sup deviation {worst}");
}

#[test]
fn advection_steady_dual_matches_finite_differences() {
    let m = Advection::new(0.6, 0.9, 0.18);
    for x in [0.1, 0.5, 0.9] {
        let d = m.steady_dual(x);
        let h = 1e-5;
        assert_relative_eq!(d.v, m.steady(x), max_relative = 1e-14);
        assert_relative_eq!(
            d.d1,
            (m.steady(x + h) - m.steady(x - h)) / (2.0 * h),
            max_relative = 1e-8
        );
        assert_relative_eq!(
            d.d2,
            (m.steady(x + h) - 2.0 * m.steady(x) + m.steady(x - h)) / (h * h),
            max_relative = 1e-4
        );
    }
}

#[test]
fn flat_topography_gives_constant_steady_height() {
    for (regime, h0, q0) in [(Regime::Sub, 2.5, 3.5), (Regime::Super, 0.6, 4.5)] {
        let m = Sw1d::new(regime, Topo::Gaussian, &[1.0, 0.0, h0, q0]).unwrap();
        for x in [0.0, 0.3, 0.77, 1.0] {
            assert_relative_eq!(m.steady_h(x).unwrap(), h0, max_relative = 1e-12);
        }
    }
}

#[test]
fn transcritical_height_is_critical_at_crest() {
    let m = Sw1d::new(Regime::Trans, Topo::Gaussian, &[1.0, 1.0, 2.5]).unwrap();
    let h_c = (2.5f64 * 2.5 / G).powf(1.0 / 3.0);
    assert_relative_eq!(m.steady_h(0.5).unwrap(), h_c, max_relative = 1e-14);
    assert_relative_eq!(m.h_crit(), h_c, max_relative = 1e-14);

    let (h_l, h_r) = m.boundary_heights();
    assert!(h_l > h_c, "upstream subcritical");
    assert!(h_r < h_c, "downstream supercritical");
    // both boundary heights carry the critical energy level
    let e_c = m.energy(h_c, m.topography(0.5).v);
    assert_relative_eq!(m.energy(h_l, m.topography(0.0).v), e_c, max_relative = 1e-12);
    assert_relative_eq!(m.energy(h_r, m.topography(1.0).v), e_c, max_relative = 1e-12);
}

fn sw1d_fd_residual(m: &Sw1d, x: f64) -> f64 {
    let h = 1e-4;
    let flux = |x: f64| {
        let hh = m.steady_h(x).unwrap();
        m.q0 * m.q0 / hh + 0.5 * G * hh * hh
    };
    let z = |x: f64| m.topography(x).v;
    fd6(flux, x, h) + G * m.steady_h(x).unwrap() * fd6(z, x, h)
}

#[test]
fn sw1d_steady_solves_momentum_balance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sub = Sw1d::new(Regime::Sub, Topo::Gaussian, &[1.0, 1.0, 2.5, 3.5]).unwrap();
    for _ in 0..100 {
        let x = rng.random_range(0.01..0.99);
        assert!(sw1d_fd_residual(&sub, x).abs() <= 1e-8, "sub at x = {x}");
    }
    let sup = Sw1d::new(Regime::Super, Topo::Gaussian, &[1.0, 1.0, 0.6, 4.5]).unwrap();
    for _ in 0..100 {
        let x = rng.random_range(0.01..0.99);
        assert!(sw1d_fd_residual(&sup, x).abs() <= 1e-7, "super at x = {x}");
    }
    let trans = Sw1d::new(Regime::Trans, Topo::Gaussian, &[1.0, 1.0, 2.5]).unwrap();
    for _ in 0..100 {
        let x: f64 = rng.random_range(0.01..0.99);
        // keep the stencil on one side of the sonic point
        if (x - 0.5).abs() < 5e-4 {
            continue;
        }
        assert!(sw1d_fd_residual(&trans, x).abs() <= 1e-6, "trans at x = {x}");
    }
}

#[test]
fn sw1d_steady_dual_matches_finite_differences() {
    let m = Sw1d::new(Regime::Sub, Topo::Gaussian, &[1.0, 1.0, 2.5, 3.5]).unwrap();
    for x in [0.2, 0.5, 0.8] {
        let d = m.steady_h_dual(x).unwrap();
        let h = 1e-5;
        let fd1 = (m.steady_h(x + h).unwrap() - m.steady_h(x - h).unwrap()) / (2.0 * h);
        let fd2 = (m.steady_h(x + h).unwrap() - 2.0 * d.v + m.steady_h(x - h).unwrap())
            / (h * h);
        assert_relative_eq!(d.d1, fd1, max_relative = 1e-6, epsilon = 1e-8);
        assert_relative_eq!(d.d2, fd2, max_relative = 1e-3, epsilon = 1e-4);
    }
}

#[test]
fn ep_gamma_two_matches_analytic_profile() {
    let m = EulerPoisson::polytropic(2.0, 2.0);
    let analytic = m.steady().unwrap();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    assert_relative_eq!(
        analytic.eval(1.0).0,
        sqrt_pi.sin() / sqrt_pi,
        max_relative = 1e-14
    );
    assert_relative_eq!(analytic.eval(1e-9).0, 1.0, max_relative = 1e-12);

    let table = m.steady_rk4(100_000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let r = rng.random_range(0.0..1.0);
        worst = worst.max((table.eval(r).0 - analytic.eval(r).0).abs());
    }
    assert!(worst <= 1e-8, "RK4 vs analytic sup deviation {worst}");
}

#[test]
fn ep_temperature_profile_has_stated_central_slope() {
    let m = EulerPoisson::temperature(3.5, 0.5);
    let table = m.steady().unwrap();
    let (rho0, drho0) = table.eval(0.0);
    assert_abs_diff_eq!(rho0, 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(drho0, 0.5, epsilon = 1e-10);
    let fd = (table.eval(1e-6).0 - 1.0) / 1e-6;
    assert_abs_diff_eq!(fd, 0.5, epsilon = 1e-4);
}

/// Independent enclosed-mass integral via Simpson on a fine grid.
fn enclosed_mass(profile: &euler_poisson::EpSteady, r: f64, panels: usize) -> f64 {
    let h = r / panels as f64;
    let f = |s: f64| profile.eval(s).0 * s * s;
    let mut acc = f(0.0) + f(r);
    for i in 1..panels {
        let s = i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(s);
    }
    acc * h / 3.0
}

#[test]
fn ep_steady_solves_hydrostatic_balance() {
    let four_pi = 4.0 * std::f64::consts::PI;
    for m in [
        EulerPoisson::polytropic(3.5, 2.5),
        EulerPoisson::temperature(3.5, 0.5),
    ] {
        let profile = m.steady().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let r = rng.random_range(0.02..0.98);
            let pressure = |s: f64| m.pressure(s, &[profile.eval(s).0, 0.0, 0.0]);
            let dphi = four_pi * enclosed_mass(&profile, r, 2000) / (r * r);
            let res = fd6(pressure, r, 1e-4) + profile.eval(r).0 * dphi;
            assert!(res.abs() <= 1e-7, "residual {res} at r = {r}");
        }
    }
}

#[test]
fn sw2d_steady_values() {
    let m = Sw2d::new(0.5, 0.25, 0.875);
    let far = m.steady(30.0, 30.0);
    assert_abs_diff_eq!(far[0], 2.0, epsilon = 1e-14);
    assert_abs_diff_eq!(far[1], 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(far[2], 0.0, epsilon = 1e-14);
    assert_relative_eq!(m.topography(0.875, 0.0).v, 0.25, max_relative = 1e-14);
}

#[test]
fn sw2d_steady_solves_momentum_balance() {
    let m = Sw2d::new(0.5, 0.25, 0.875);
    let state = |x1: f64, x2: f64| m.steady(x1, x2);
    let h = 1e-4;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let x1 = rng.random_range(-3.0..3.0);
        let x2 = rng.random_range(-3.0..3.0);
        let hh = state(x1, x2)[0];

        let mass = fd6(|s| state(s, x2)[1], x1, h) + fd6(|s| state(x1, s)[2], x2, h);
        assert!(mass.abs() <= 1e-8, "mass residual {mass} at ({x1}, {x2})");

        let m11 = |s: f64| {
            let u = state(s, x2);
            u[1] * u[1] / u[0] + 0.5 * G * u[0] * u[0]
        };
        let m12y = |s: f64| {
            let u = state(x1, s);
            u[1] * u[2] / u[0]
        };
        let zx = fd6(|s| m.topography(s, x2).v, x1, h);
        let r1 = fd6(m11, x1, h) + fd6(m12y, x2, h) + G * hh * zx;
        assert!(r1.abs() <= 1e-8, "x-momentum residual {r1} at ({x1}, {x2})");

        let m12x = |s: f64| {
            let u = state(s, x2);
            u[1] * u[2] / u[0]
        };
        let m22 = |s: f64| {
            let u = state(x1, s);
            u[2] * u[2] / u[0] + 0.5 * G * u[0] * u[0]
        };
        let zy = fd6(|s| m.topography(x1, s).v, x2, h);
        let r2 = fd6(m12x, x1, h) + fd6(m22, x2, h) + G * hh * zy;
        assert!(r2.abs() <= 1e-8, "y-momentum residual {r2} at ({x1}, {x2})");
    }
}

#[test]
fn wave_speed_bounds_match_stated_values() {
    let sw = Sw1d::new(Regime::Sub, Topo::Gaussian, &[1.0, 1.0, 2.5, 3.5]).unwrap();
    assert_relative_eq!(
        sw.wave_speed_bound(),
        3.5 / 2.5 + (G * 2.5).sqrt(),
        max_relative = 1e-14
    );
    let ep = EulerPoisson::polytropic(3.0, 2.5);
    assert_relative_eq!(ep.wave_speed_bound(), 1.0 + 2.5f64.sqrt(), max_relative = 1e-14);
    let adv = Advection::new(0.75, 0.75, 0.15);
    assert_eq!(adv.wave_speed_bound(), 1.0);
}

#[test]
fn flux_values_match_stated_examples() {
    let sw = Sw1d::new(Regime::Sub, Topo::Gaussian, &[1.0, 1.0, 2.5, 3.5]).unwrap();
    let mut out = [0.0; 2];
    sw.flux(0.3, &[1.0, 0.0], &mut out);
    assert_abs_diff_eq!(out[0], 0.0);
    assert_abs_diff_eq!(out[1], 4.905, epsilon = 1e-12);

    let adv = Advection::new(0.75, 0.75, 0.15);
    let mut fu = [0.0];
    adv.flux(0.0, &[0.1], &mut fu);
    assert_eq!(fu[0], 0.1);

    let blast = EulerPoisson::blast();
    let state = [1.0, 0.0, 2.5];
    assert_relative_eq!(blast.pressure(0.1, &state), 1.0, max_relative = 1e-14);
    let mut fe = [0.0; 3];
    blast.flux(0.1, &state, &mut fe);
    assert_abs_diff_eq!(fe[0], 0.0);
    assert_abs_diff_eq!(fe[1], 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(fe[2], 0.0);
}

#[test]
fn perturbations_match_stated_values() {
    assert_eq!(perturb_sin(0.0, 0.77), 1.0);
    assert_relative_eq!(perturb_sin(1.0, 0.25), 2.0, max_relative = 1e-14);
    assert_relative_eq!(sw2d_bump(-2.0, -2.0), -0.02, max_relative = 1e-14);
}

#[test]
fn parameter_boxes_are_enforced() {
    assert!(Advection::new(0.75, 0.75, 0.15).validate().is_ok());
    assert!(Advection::new(0.3, 0.75, 0.15).validate().is_err());
    assert!(Sw1d::new(Regime::Sub, Topo::Gaussian, &[1.0, 1.0, 5.0, 3.5])
        .unwrap()
        .validate()
        .is_err());
    assert!(EulerPoisson::polytropic(2.0, 4.0).validate().is_err());
    assert!(Sw2d::new(0.5, 0.25, 2.0).validate().is_err());
}

// The residual formulas used in training must annihilate the exact steady
// solutions; this pins their sign and scaling conventions.

#[test]
fn advection_problem_residual_vanishes_on_steady_solution() {
    let problem = AdvectionProblem;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let mu = [
            rng.random_range(0.5..1.0),
            rng.random_range(0.5..1.0),
            rng.random_range(0.1..0.2),
        ];
        let m = Advection::new(mu[0], mu[1], mu[2]);
        let x = rng.random_range(0.0..1.0);
        let res = problem.residual(&mu, x, &[m.steady_dual(x)]);
        assert!(res[0].abs() <= 1e-12, "residual {} at x = {x}", res[0]);
    }
}

#[test]
fn sw1d_problem_residual_vanishes_on_steady_solution() {
    for (regime, mu) in [
        (Regime::Sub, vec![1.0, 1.0, 2.5, 3.5]),
        (Regime::Super, vec![1.0, 1.0, 0.6, 4.5]),
    ] {
        let problem = Sw1dProblem {
            regime,
            topo: Topo::Gaussian,
        };
        let model = Sw1d::new(regime, Topo::Gaussian, &mu).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let x = rng.random_range(0.0..1.0);
            let res = problem.residual(&mu, x, &[model.steady_h_dual(x).unwrap()]);
            assert!(res[0].abs() <= 1e-7, "{regime:?} residual {} at x = {x}", res[0]);
        }
    }
}

#[test]
fn ep_problem_residual_vanishes_on_analytic_solution() {
    let problem = EpProblem {
        law: EpLawKind::Polytropic,
    };
    let mu = [2.0, 2.0];
    let abar = (2.0 * std::f64::consts::PI).sqrt() / 2.0f64.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let r = rng.random_range(0.05..1.0);
        let x = Dual2::<f64>::var(r).scale(abar);
        let rho = x.sin() / x;
        let res = problem.residual(&mu, r, &[rho]);
        assert!(res[0].abs() <= 1e-9, "residual {} at r = {r}", res[0]);
    }
}

#[test]
fn ep_residual_formula_matches_direct_differentiation() {
    // Manufactured density: check the expanded residual against a single
    // finite difference of the flux-form expression evaluated with exact
    // derivatives.
    let four_pi = 4.0 * std::f64::consts::PI;
    let rho_of = |r: f64| {
        Dual2::<f64>::var(r).scale(3.0).sin().scale(0.1)
            + Dual2::<f64>::var(r).powi(2).scale(0.2).shift(1.0)
    };
    for (problem, mu) in [
        (
            EpProblem {
                law: EpLawKind::Polytropic,
            },
            [3.0, 2.7],
        ),
        (
            EpProblem {
                law: EpLawKind::Temperature,
            },
            [3.0, 0.8],
        ),
    ] {
        for r in [0.2, 0.5, 0.9] {
            let res = problem.residual(&mu, r, &[rho_of(r)])[0];
            let w = |s: f64| {
                let rho = rho_of(s);
                match problem.law {
                    EpLawKind::Polytropic => {
                        s * s * mu[0] * mu[1] * rho.v.powf(mu[1] - 2.0) * rho.d1
                    }
                    EpLawKind::Temperature => {
                        let t = (-mu[1] * s).exp();
                        let dt = -mu[1] * t;
                        s * s * mu[0] * (t / rho.v * rho.d1 + dt)
                    }
                }
            };
            let expected = fd6(w, r, 1e-4) + four_pi * r * r * rho_of(r).v;
            assert_relative_eq!(res, expected, max_relative = 1e-6, epsilon = 1e-7);
        }
    }
}

#[test]
fn sw2d_problem_residual_vanishes_on_steady_pair() {
    let problem = Sw2dProblem;
    let mu = sw2d::MU_MID;
    let model = Sw2d::new(mu[0], mu[1], mu[2]);
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..50 {
        let x = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let (h, u) = model.steady_pair(x.0, x.1);
        let res = problem.residual(&mu, x, &[h, u]);
        for (i, r) in res.iter().enumerate() {
            assert!(r.abs() <= 1e-10, "equation {i}: residual {r} at {x:?}");
        }
    }
}

#[test]
fn boundary_operators_pin_exact_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let raw = Dual2::<f64>::new(rng.random(), rng.random(), rng.random());

    let adv = AdvectionProblem;
    let mu = advection::MU_MID;
    let c = adv.compose(&mu, 0.0, &[raw]);
    assert_eq!(c[0].v, mu[2]);

    let ep_poly = EpProblem {
        law: EpLawKind::Polytropic,
    };
    let c = ep_poly.compose(&[3.0, 2.0], 0.0, &[raw]);
    assert_eq!(c[0].v, 1.0);
    assert_eq!(c[0].d1, 0.0);

    let ep_temp = EpProblem {
        law: EpLawKind::Temperature,
    };
    let c = ep_temp.compose(&[3.0, 0.8], 0.0, &[raw]);
    assert_eq!(c[0].v, 1.0);
    assert_eq!(c[0].d1, 0.8);

    let sw = Sw1dProblem {
        regime: Regime::Sub,
        topo: Topo::Compact,
    };
    let mu = [1.0, 1.0, 2.5, 3.5];
    // outside the compact support the composed height is exactly h0
    let c = sw.compose(&mu, 0.05, &[raw]);
    assert_eq!(c[0].v, 2.5);
    assert_eq!(c[0].d1, 0.0);

    let sw2 = Sw2dProblem;
    let raw2 = [
        wbdg::pinn::Grad2::<f64>::new(rng.random(), rng.random(), rng.random()),
        wbdg::pinn::Grad2::<f64>::new(rng.random(), rng.random(), rng.random()),
    ];
    let c = sw2.compose(&sw2d::MU_MID, (30.0, 0.0), &raw2);
    // the Gaussian topography tail is below 1e-190 this far out
    assert_eq!(c[0].v, 2.0);
    assert!(c[1].v.abs() < 1e-150);
}

#[test]
fn transcritical_composition_blends_end_states() {
    let problem = Sw1dProblem {
        regime: Regime::Trans,
        topo: Topo::Gaussian,
    };
    let mu = [1.0, 1.0, 2.5];
    let model = Sw1d::new(Regime::Trans, Topo::Gaussian, &mu).unwrap();
    let (h_l, h_r) = model.boundary_heights();
    let zero = Dual2::<f64>::constant(0.0);
    let left = problem.compose(&mu, 0.0, &[zero])[0].v;
    let right = problem.compose(&mu, 1.0, &[zero])[0].v;
    assert_relative_eq!(left, h_l, max_relative = 1e-5);
    assert_relative_eq!(right, h_r, max_relative = 1e-5);
}
