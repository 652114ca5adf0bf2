//! Semi-discrete DG operators for 1D balance laws and the explicit time
//! loop: per-cell volume, interface and source terms against the (possibly
//! enriched) local bases, Rusanov interface fluxes, ghost-state boundary
//! handling, and the CFL-limited SSPRK driver.

use nalgebra::{DMatrix, DVector};

use crate::basis::{basis_values, BasisSpec, CellBasis, Prior1d};
use crate::dg::time::Integrator;
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::models::euler_poisson::FOUR_PI_G;
use crate::models::Model1D;
use crate::quad::{cumulative_matrix, gauss_lobatto_rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Ghost states prescribed from a steady reference at the domain faces.
    Dirichlet,
    /// Ghost equals the interior trace (outflow).
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Discretization parameters for one run.
#[derive(Debug, Clone, Copy)]
pub struct Scheme {
    pub q: usize,
    pub n_q: usize,
    pub c_cfl: f64,
    pub integrator: Integrator,
    pub t_final: f64,
    pub boundary: Boundary,
}

impl Scheme {
    pub fn new(q: usize, n_q: usize, t_final: f64, boundary: Boundary) -> Scheme {
        Scheme {
            q,
            n_q,
            c_cfl: 0.1,
            integrator: Integrator::for_degree(q),
            t_final,
            boundary,
        }
    }

    pub fn with_cfl(mut self, c_cfl: f64) -> Scheme {
        self.c_cfl = c_cfl;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Run {
    pub state: Vec<f64>,
    pub t: f64,
    pub steps: usize,
}

/// Rusanov flux; fl and fr are scratch for the two physical fluxes.
fn rusanov_into(
    model: &dyn Model1D,
    x: f64,
    u_l: &[f64],
    u_r: &[f64],
    fl: &mut [f64],
    fr: &mut [f64],
    out: &mut [f64],
) {
    model.flux(x, u_l, fl);
    model.flux(x, u_r, fr);
    let s = model.max_abs_speed(x, u_l).max(model.max_abs_speed(x, u_r));
    for i in 0..out.len() {
        out[i] = 0.5 * (fl[i] + fr[i]) - 0.5 * s * (u_r[i] - u_l[i]);
    }
}

/// Rusanov flux between two states at position x.
pub fn numerical_flux(model: &dyn Model1D, x: f64, u_l: &[f64], u_r: &[f64]) -> Vec<f64> {
    let n = model.n_vars();
    let (mut fl, mut fr, mut out) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    rusanov_into(model, x, u_l, u_r, &mut fl, &mut fr, &mut out);
    out
}

struct Workspace {
    /// Reconstructed solution at all quadrature nodes, (cell, node, var).
    nodal: Vec<f64>,
    /// Gravitational field at all quadrature nodes (zeros when unused).
    grav: Vec<f64>,
    /// Numerical fluxes at all faces, (face, var).
    face_flux: Vec<f64>,
    fl: Vec<f64>,
    fr: Vec<f64>,
    val: Vec<f64>,
    acc: DMatrix<f64>,
    rhs_var: DVector<f64>,
}

pub struct Driver1d<'a> {
    pub model: &'a dyn Model1D,
    pub mesh: Mesh1D,
    pub scheme: Scheme,
    spec: BasisSpec,
    prior: &'a dyn Prior1d,
    /// Per-cell, per-variable basis tables.
    cells: Vec<Vec<CellBasis>>,
    n_vars: usize,
    n_b: usize,
    n_q: usize,
    lambda: f64,
    dirichlet: Option<(Vec<f64>, Vec<f64>)>,
    cum: Option<DMatrix<f64>>,
}

impl<'a> Driver1d<'a> {
    pub fn new(
        model: &'a dyn Model1D,
        mesh: Mesh1D,
        scheme: Scheme,
        spec: BasisSpec,
        prior: &'a dyn Prior1d,
        dirichlet: Option<(Vec<f64>, Vec<f64>)>,
    ) -> Result<Driver1d<'a>> {
        if scheme.q > 3 {
            return Err(Error::Config(format!(
                "basis degree q = {} exceeds the supported maximum 3",
                scheme.q
            )));
        }
        let n_vars = model.n_vars();
        if spec.uses_prior() && prior.n_vars() != n_vars {
            return Err(Error::Config(format!(
                "prior has {} components for a model with {} variables",
                prior.n_vars(),
                n_vars
            )));
        }
        if scheme.boundary == Boundary::Dirichlet {
            match &dirichlet {
                None => {
                    return Err(Error::Config(
                        "Dirichlet boundary needs prescribed face states".to_string(),
                    ))
                }
                Some((l, r)) => {
                    if l.len() != n_vars || r.len() != n_vars {
                        return Err(Error::Config(
                            "Dirichlet face states do not match the model arity".to_string(),
                        ));
                    }
                    if !model.admissible(l) || !model.admissible(r) {
                        return Err(Error::Config(
                            "Dirichlet face states are inadmissible".to_string(),
                        ));
                    }
                }
            }
        }
        let lambda = model.wave_speed_bound();
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::Config(format!(
                "wave speed bound {lambda} must be positive and finite"
            )));
        }

        let rule = gauss_lobatto_rule(scheme.n_q)?;
        let mut cells = Vec::with_capacity(mesh.cells());
        for k in 0..mesh.cells() {
            let (lo, hi) = mesh.cell(k);
            let mut per_var = Vec::with_capacity(n_vars);
            for var in 0..n_vars {
                let shape = |x: f64| prior.eval(var, x);
                per_var.push(CellBasis::build(spec, scheme.q, lo, hi, &rule, &shape, k)?);
            }
            cells.push(per_var);
        }
        let cum = model.needs_gravity().then(|| cumulative_matrix(&rule));

        Ok(Driver1d {
            model,
            mesh,
            scheme,
            spec,
            prior,
            cells,
            n_vars,
            n_b: scheme.q + 1,
            n_q: scheme.n_q,
            lambda,
            dirichlet,
            cum,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_basis(&self) -> usize {
        self.n_b
    }

    pub fn n_dofs(&self) -> usize {
        self.mesh.cells() * self.n_vars * self.n_b
    }

    pub fn basis(&self, cell: usize, var: usize) -> &CellBasis {
        &self.cells[cell][var]
    }

    fn idx(&self, cell: usize, var: usize) -> usize {
        (cell * self.n_vars + var) * self.n_b
    }

    pub fn coeffs<'s>(&self, state: &'s [f64], cell: usize, var: usize) -> &'s [f64] {
        let i = self.idx(cell, var);
        &state[i..i + self.n_b]
    }

    /// L2 projection of pointwise initial data f(x, var) onto the basis.
    pub fn project(&self, f: &dyn Fn(f64, usize) -> f64) -> Vec<f64> {
        let mut state = vec![0.0; self.n_dofs()];
        for k in 0..self.mesh.cells() {
            for var in 0..self.n_vars {
                let c = self.cells[k][var].project(&|x| f(x, var));
                let i = self.idx(k, var);
                state[i..i + self.n_b].copy_from_slice(c.as_slice());
            }
        }
        state
    }

    fn reconstruct_into(&self, state: &[f64], nodal: &mut [f64]) {
        for k in 0..self.mesh.cells() {
            for var in 0..self.n_vars {
                let c = self.coeffs(state, k, var);
                let vals = &self.cells[k][var].vals;
                for p in 0..self.n_q {
                    let mut acc = 0.0;
                    for (j, cj) in c.iter().enumerate() {
                        acc += vals[(p, j)] * cj;
                    }
                    nodal[(k * self.n_q + p) * self.n_vars + var] = acc;
                }
            }
        }
    }

    /// Solution values at every quadrature node, laid out (cell, node, var).
    pub fn nodal_values(&self, state: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.mesh.cells() * self.n_q * self.n_vars];
        self.reconstruct_into(state, &mut out);
        out
    }

    /// Solution values at an arbitrary point.
    pub fn evaluate(&self, state: &[f64], x: f64) -> Vec<f64> {
        let k = self.locate(x);
        let center = self.mesh.center(k);
        (0..self.n_vars)
            .map(|var| {
                let pv = if self.spec.uses_prior() {
                    self.prior.eval(var, x).0
                } else {
                    1.0
                };
                let vals = basis_values(self.spec, self.scheme.q, center, x, pv);
                let c = self.coeffs(state, k, var);
                vals.iter().zip(c).map(|(v, cj)| v * cj).sum()
            })
            .collect()
    }

    fn locate(&self, x: f64) -> usize {
        let kk = self.mesh.cells() as f64;
        let rel = (x - self.mesh.lo) / (self.mesh.hi - self.mesh.lo);
        ((rel * kk).floor() as isize).clamp(0, self.mesh.cells() as isize - 1) as usize
    }

    fn trace_left_of<'s>(&self, nodal: &'s [f64], cell: usize) -> &'s [f64] {
        let off = cell * self.n_q * self.n_vars;
        &nodal[off..off + self.n_vars]
    }

    fn trace_right_of<'s>(&self, nodal: &'s [f64], cell: usize) -> &'s [f64] {
        let off = (cell * self.n_q + self.n_q - 1) * self.n_vars;
        &nodal[off..off + self.n_vars]
    }

    fn face_left_state<'s>(&'s self, nodal: &'s [f64], face: usize) -> &'s [f64] {
        if face > 0 {
            return self.trace_right_of(nodal, face - 1);
        }
        match self.scheme.boundary {
            Boundary::Periodic => self.trace_right_of(nodal, self.mesh.cells() - 1),
            Boundary::Dirichlet => &self.dirichlet.as_ref().expect("validated").0,
            Boundary::Neumann => self.trace_left_of(nodal, 0),
        }
    }

    fn face_right_state<'s>(&'s self, nodal: &'s [f64], face: usize) -> &'s [f64] {
        if face < self.mesh.cells() {
            return self.trace_left_of(nodal, face);
        }
        match self.scheme.boundary {
            Boundary::Periodic => self.trace_left_of(nodal, 0),
            Boundary::Dirichlet => &self.dirichlet.as_ref().expect("validated").1,
            Boundary::Neumann => self.trace_right_of(nodal, self.mesh.cells() - 1),
        }
    }

    /// Ghost state entering the numerical flux at a domain face.
    pub fn boundary_state(&self, state: &[f64], side: Side) -> Vec<f64> {
        let nodal = self.nodal_values(state);
        match side {
            Side::Left => self.face_left_state(&nodal, 0).to_vec(),
            Side::Right => self.face_right_state(&nodal, self.mesh.cells()).to_vec(),
        }
    }

    /// Gravitational field d_r phi at the quadrature nodes: each value is
    /// 4 pi G / r^2 times the integral of s^2 rho_h(s) from the axis to r,
    /// accumulated cell by cell with the in-cell cumulative quadrature.
    fn gravity_into(&self, nodal: &[f64], grav: &mut [f64]) {
        let cum = self.cum.as_ref().expect("gravity needs a cumulative matrix");
        let n_q = self.n_q;
        let mut moment = vec![0.0; n_q];
        let mut enclosed = 0.0;
        for k in 0..self.mesh.cells() {
            let half = 0.5 * self.mesh.width(k);
            let nodes = &self.cells[k][0].nodes;
            for p in 0..n_q {
                let r = nodes[p];
                moment[p] = r * r * nodal[(k * n_q + p) * self.n_vars];
            }
            for p in 0..n_q {
                let mut part = 0.0;
                for j in 0..n_q {
                    part += cum[(p, j)] * moment[j];
                }
                let r = nodes[p];
                grav[k * n_q + p] = if r > 0.0 {
                    FOUR_PI_G * (enclosed + half * part) / (r * r)
                } else {
                    0.0
                };
            }
            let mut full = 0.0;
            for j in 0..n_q {
                full += cum[(n_q - 1, j)] * moment[j];
            }
            enclosed += half * full;
        }
    }

    /// Gravitational field at every quadrature node for the given state,
    /// laid out (cell, node). Zeros for models without gravity.
    pub fn gravity_field(&self, state: &[f64]) -> Vec<f64> {
        let mut grav = vec![0.0; self.mesh.cells() * self.n_q];
        if self.cum.is_some() {
            let nodal = self.nodal_values(state);
            self.gravity_into(&nodal, &mut grav);
        }
        grav
    }

    fn face_flux_ws(
        &self,
        nodal: &[f64],
        face: usize,
        fl: &mut [f64],
        fr: &mut [f64],
        out: &mut [f64],
    ) {
        let x = self.mesh.edges[face];
        let u_l = self.face_left_state(nodal, face);
        let u_r = self.face_right_state(nodal, face);
        rusanov_into(self.model, x, u_l, u_r, fl, fr, out);
    }

    /// Volume operator: quadrature of F(u_h) against the basis derivatives.
    pub fn volume_term(&self, state: &[f64], cell: usize) -> DMatrix<f64> {
        let nodal = self.nodal_values(state);
        let base = &self.cells[cell];
        let mut flux = vec![0.0; self.n_vars];
        let mut out = DMatrix::zeros(self.n_b, self.n_vars);
        for p in 0..self.n_q {
            let off = (cell * self.n_q + p) * self.n_vars;
            let x = base[0].nodes[p];
            self.model.flux(x, &nodal[off..off + self.n_vars], &mut flux);
            let w = base[0].weights[p];
            for var in 0..self.n_vars {
                for i in 0..self.n_b {
                    out[(i, var)] += w * flux[var] * base[var].ders[(p, i)];
                }
            }
        }
        out
    }

    /// Source operator: quadrature of S(x, u_h) against the basis values.
    pub fn source_term(&self, state: &[f64], cell: usize) -> DMatrix<f64> {
        let nodal = self.nodal_values(state);
        let mut grav = vec![0.0; self.mesh.cells() * self.n_q];
        if self.cum.is_some() {
            self.gravity_into(&nodal, &mut grav);
        }
        let base = &self.cells[cell];
        let mut src = vec![0.0; self.n_vars];
        let mut out = DMatrix::zeros(self.n_b, self.n_vars);
        if !self.model.has_source() {
            return out;
        }
        for p in 0..self.n_q {
            let off = (cell * self.n_q + p) * self.n_vars;
            let x = base[0].nodes[p];
            self.model.source(
                x,
                &nodal[off..off + self.n_vars],
                grav[cell * self.n_q + p],
                &mut src,
            );
            let w = base[0].weights[p];
            for var in 0..self.n_vars {
                for i in 0..self.n_b {
                    out[(i, var)] += w * src[var] * base[var].vals[(p, i)];
                }
            }
        }
        out
    }

    /// Interface operator: numerical flux at the right face against the
    /// right trace of the basis, minus the same at the left face.
    pub fn interface_term(&self, state: &[f64], cell: usize) -> DMatrix<f64> {
        let nodal = self.nodal_values(state);
        let n = self.n_vars;
        let (mut fl, mut fr) = (vec![0.0; n], vec![0.0; n]);
        let (mut g_l, mut g_r) = (vec![0.0; n], vec![0.0; n]);
        self.face_flux_ws(&nodal, cell, &mut fl, &mut fr, &mut g_l);
        self.face_flux_ws(&nodal, cell + 1, &mut fl, &mut fr, &mut g_r);
        let base = &self.cells[cell];
        let mut out = DMatrix::zeros(self.n_b, n);
        for var in 0..n {
            for i in 0..self.n_b {
                out[(i, var)] = g_r[var] * base[var].right[i] - g_l[var] * base[var].left[i];
            }
        }
        out
    }

    fn rhs_ws(&self, state: &[f64], ws: &mut Workspace, out: &mut [f64]) {
        self.reconstruct_into(state, &mut ws.nodal);
        if self.cum.is_some() {
            self.gravity_into(&ws.nodal, &mut ws.grav);
        }
        let kk = self.mesh.cells();
        let nv = self.n_vars;
        for face in 0..=kk {
            let slot = &mut ws.face_flux[face * nv..(face + 1) * nv];
            let x = self.mesh.edges[face];
            let u_l = if face > 0 {
                self.trace_right_of(&ws.nodal, face - 1)
            } else {
                self.face_left_state(&ws.nodal, 0)
            };
            let u_r = if face < kk {
                self.trace_left_of(&ws.nodal, face)
            } else {
                self.face_right_state(&ws.nodal, kk)
            };
            rusanov_into(self.model, x, u_l, u_r, &mut ws.fl, &mut ws.fr, slot);
        }

        let with_source = self.model.has_source();
        for k in 0..kk {
            let base = &self.cells[k];
            let weights = &base[0].weights;
            let nodes = &base[0].nodes;
            ws.acc.fill(0.0);
            for p in 0..self.n_q {
                let off = (k * self.n_q + p) * nv;
                let u_p = &ws.nodal[off..off + nv];
                let x = nodes[p];
                let w = weights[p];
                self.model.flux(x, u_p, &mut ws.fl);
                if with_source {
                    self.model
                        .source(x, u_p, ws.grav[k * self.n_q + p], &mut ws.val);
                    for var in 0..nv {
                        let cb = &base[var];
                        for i in 0..self.n_b {
                            ws.acc[(i, var)] +=
                                w * (ws.fl[var] * cb.ders[(p, i)] + ws.val[var] * cb.vals[(p, i)]);
                        }
                    }
                } else {
                    for var in 0..nv {
                        let cb = &base[var];
                        for i in 0..self.n_b {
                            ws.acc[(i, var)] += w * ws.fl[var] * cb.ders[(p, i)];
                        }
                    }
                }
            }
            for var in 0..nv {
                let cb = &base[var];
                let g_l = ws.face_flux[k * nv + var];
                let g_r = ws.face_flux[(k + 1) * nv + var];
                for i in 0..self.n_b {
                    ws.rhs_var[i] = ws.acc[(i, var)] - (g_r * cb.right[i] - g_l * cb.left[i]);
                }
                cb.solve_mass_in_place(&mut ws.rhs_var);
                let at = self.idx(k, var);
                out[at..at + self.n_b].copy_from_slice(ws.rhs_var.as_slice());
            }
        }
    }

    /// Time derivative of all coefficients: per cell and variable, the mass
    /// solve of volume - interface + source.
    pub fn semidiscrete_rhs(&self, state: &[f64]) -> Vec<f64> {
        let mut ws = self.workspace();
        let mut out = vec![0.0; self.n_dofs()];
        self.rhs_ws(state, &mut ws, &mut out);
        out
    }

    /// CFL time step before truncation to the final time.
    pub fn compute_dt(&self) -> f64 {
        self.scheme.c_cfl * self.scheme.integrator.cfl_factor() * self.mesh.min_width()
            / self.lambda
    }

    fn workspace(&self) -> Workspace {
        let kk = self.mesh.cells();
        Workspace {
            nodal: vec![0.0; kk * self.n_q * self.n_vars],
            grav: vec![0.0; kk * self.n_q],
            face_flux: vec![0.0; (kk + 1) * self.n_vars],
            fl: vec![0.0; self.n_vars],
            fr: vec![0.0; self.n_vars],
            val: vec![0.0; self.n_vars],
            acc: DMatrix::zeros(self.n_b, self.n_vars),
            rhs_var: DVector::zeros(self.n_b),
        }
    }

    fn health(&self, state: &[f64], ws: &mut Workspace, t: f64) -> Result<()> {
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        self.reconstruct_into(state, &mut ws.nodal);
        for k in 0..self.mesh.cells() {
            let weights = &self.cells[k][0].weights;
            let width = self.mesh.width(k);
            for var in 0..self.n_vars {
                let mut acc = 0.0;
                for p in 0..self.n_q {
                    acc += weights[p] * ws.nodal[(k * self.n_q + p) * self.n_vars + var];
                }
                ws.val[var] = acc / width;
            }
            if !self.model.admissible(&ws.val) {
                return Err(Error::Inadmissible {
                    t,
                    what: format!("cell {k} average"),
                });
            }
        }
        Ok(())
    }

    pub fn run(&self, state0: Vec<f64>) -> Result<Run> {
        self.run_observed(state0, &mut |_, _| {})
    }

    /// Advance the state to the final time, calling the observer after each
    /// completed step. The last step is truncated to land on T exactly.
    pub fn run_observed(
        &self,
        mut state: Vec<f64>,
        observe: &mut dyn FnMut(f64, &[f64]),
    ) -> Result<Run> {
        let mut ws = self.workspace();
        self.health(&state, &mut ws, 0.0)?;
        let dt0 = self.compute_dt();
        let t_final = self.scheme.t_final;
        let mut t = 0.0;
        let mut steps = 0usize;
        while t < t_final {
            let dt = dt0.min(t_final - t);
            if dt <= 1e-14 * t_final {
                break;
            }
            let integrator = self.scheme.integrator;
            integrator.step(&mut state, dt, &mut |s, out| self.rhs_ws(s, &mut ws, out));
            t += dt;
            steps += 1;
            self.health(&state, &mut ws, t)?;
            observe(t, &state);
        }
        Ok(Run { state, t, steps })
    }

    /// Discrete L2 distance between the reconstruction and a reference
    /// u_ref(x, var), one value per variable, using the run's quadrature.
    pub fn discrete_l2_error(&self, state: &[f64], reference: &dyn Fn(f64, usize) -> f64) -> Vec<f64> {
        let nodal = self.nodal_values(state);
        let mut acc = vec![0.0; self.n_vars];
        for k in 0..self.mesh.cells() {
            let cb = &self.cells[k][0];
            for p in 0..self.n_q {
                let x = cb.nodes[p];
                let w = cb.weights[p];
                for var in 0..self.n_vars {
                    let d = nodal[(k * self.n_q + p) * self.n_vars + var] - reference(x, var);
                    acc[var] += w * d * d;
                }
            }
        }
        acc.iter().map(|a| a.sqrt()).collect()
    }

    /// Error sampled at the quadrature nodes, as a root mean square per
    /// cell: sqrt(sum_{k,p} e(x_kp)^2 / K). The convergence experiments
    /// report this metric; it weighs all nodes equally instead of by
    /// quadrature weight.
    pub fn nodal_rms_error(&self, state: &[f64], reference: &dyn Fn(f64, usize) -> f64) -> Vec<f64> {
        let nodal = self.nodal_values(state);
        let mut acc = vec![0.0; self.n_vars];
        for k in 0..self.mesh.cells() {
            let cb = &self.cells[k][0];
            for p in 0..self.n_q {
                let x = cb.nodes[p];
                for var in 0..self.n_vars {
                    let d = nodal[(k * self.n_q + p) * self.n_vars + var] - reference(x, var);
                    acc[var] += d * d;
                }
            }
        }
        let kk = self.mesh.cells() as f64;
        acc.iter().map(|a| (a / kk).sqrt()).collect()
    }

    /// Global integral of each variable over the domain.
    pub fn total_integral(&self, state: &[f64]) -> Vec<f64> {
        let nodal = self.nodal_values(state);
        let mut acc = vec![0.0; self.n_vars];
        for k in 0..self.mesh.cells() {
            let cb = &self.cells[k][0];
            for p in 0..self.n_q {
                let w = cb.weights[p];
                for var in 0..self.n_vars {
                    acc[var] += w * nodal[(k * self.n_q + p) * self.n_vars + var];
                }
            }
        }
        acc
    }
}
