use nalgebra::linalg::LU;
use nalgebra::{DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::quad::{map_rule_to_cell, QuadRule};

/// Steady-state shape functions used to enrich the local bases. One
/// component per conserved variable; components that are identically one
/// leave that variable's basis classic.
pub trait Prior1d {
    fn n_vars(&self) -> usize;
    /// Value and x-derivative of the shape for one variable.
    fn eval(&self, var: usize, x: f64) -> (f64, f64);
}

/// Classic basis for every variable.
pub struct UnitPrior(pub usize);

impl Prior1d for UnitPrior {
    fn n_vars(&self) -> usize {
        self.0
    }

    fn eval(&self, _var: usize, _x: f64) -> (f64, f64) {
        (1.0, 0.0)
    }
}

pub type PriorFn = Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>;

/// Prior assembled from per-variable closures.
pub struct FnPrior1d {
    comps: Vec<PriorFn>,
}

impl FnPrior1d {
    pub fn new(comps: Vec<PriorFn>) -> Self {
        Self { comps }
    }
}

impl Prior1d for FnPrior1d {
    fn n_vars(&self) -> usize {
        self.comps.len()
    }

    fn eval(&self, var: usize, x: f64) -> (f64, f64) {
        (self.comps[var])(x)
    }
}

pub trait Prior2d {
    fn n_vars(&self) -> usize;
    /// Value and both partial derivatives of the shape for one variable.
    fn eval(&self, var: usize, x: f64, y: f64) -> (f64, f64, f64);
}

pub struct UnitPrior2d(pub usize);

impl Prior2d for UnitPrior2d {
    fn n_vars(&self) -> usize {
        self.0
    }

    fn eval(&self, _var: usize, _x: f64, _y: f64) -> (f64, f64, f64) {
        (1.0, 0.0, 0.0)
    }
}

pub type PriorFn2d = Box<dyn Fn(f64, f64) -> (f64, f64, f64) + Send + Sync>;

pub struct FnPrior2d {
    comps: Vec<PriorFn2d>,
}

impl FnPrior2d {
    pub fn new(comps: Vec<PriorFn2d>) -> Self {
        Self { comps }
    }
}

impl Prior2d for FnPrior2d {
    fn n_vars(&self) -> usize {
        self.comps.len()
    }

    fn eval(&self, var: usize, x: f64, y: f64) -> (f64, f64, f64) {
        (self.comps[var])(x, y)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BasisSpec {
    /// Taylor monomials (x - x_k)^j / j!.
    Classic,
    /// The constant mode is replaced by the prior shape.
    Additive,
    /// Every monomial is multiplied by the prior shape.
    Multiplicative,
}

impl BasisSpec {
    pub fn uses_prior(self) -> bool {
        !matches!(self, BasisSpec::Classic)
    }
}

/// Taylor monomials (x - c)^j / j! and their derivatives for j = 0..=q.
fn monomials(q: usize, c: f64, x: f64) -> (Vec<f64>, Vec<f64>) {
    let dx = x - c;
    let mut vals = vec![0.0; q + 1];
    let mut ders = vec![0.0; q + 1];
    vals[0] = 1.0;
    for j in 1..=q {
        vals[j] = vals[j - 1] * dx / j as f64;
        ders[j] = vals[j - 1];
    }
    (vals, ders)
}

/// Basis values at a point, given the prior value there. Reconstruction at
/// arbitrary points goes through this so callers only need prior values,
/// not derivatives.
pub fn basis_values(spec: BasisSpec, q: usize, center: f64, x: f64, prior_value: f64) -> Vec<f64> {
    let (mut vals, _) = monomials(q, center, x);
    match spec {
        BasisSpec::Classic => {}
        BasisSpec::Additive => vals[0] = prior_value,
        BasisSpec::Multiplicative => {
            for v in &mut vals {
                *v *= prior_value;
            }
        }
    }
    vals
}

fn basis_pair(
    spec: BasisSpec,
    q: usize,
    center: f64,
    x: f64,
    prior: (f64, f64),
) -> (Vec<f64>, Vec<f64>) {
    let (mut vals, mut ders) = monomials(q, center, x);
    match spec {
        BasisSpec::Classic => {}
        BasisSpec::Additive => {
            vals[0] = prior.0;
            ders[0] = prior.1;
        }
        BasisSpec::Multiplicative => {
            for j in 0..=q {
                ders[j] = prior.1 * vals[j] + prior.0 * ders[j];
                vals[j] *= prior.0;
            }
        }
    }
    (vals, ders)
}

struct FactoredMass {
    scale: DVector<f64>,
    lu: LU<f64, Dyn, Dyn>,
}

/// Factor a local mass matrix behind symmetric Jacobi scaling, so wildly
/// different mode magnitudes on fine cells do not poison the solve.
fn factor_mass(mass: &DMatrix<f64>, cell: usize) -> Result<FactoredMass> {
    let n = mass.nrows();
    let mut scale = DVector::zeros(n);
    for i in 0..n {
        let d = mass[(i, i)];
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::DegeneratePrior { cell });
        }
        scale[i] = 1.0 / d.sqrt();
    }
    let mut scaled = mass.clone();
    for i in 0..n {
        for j in 0..n {
            scaled[(i, j)] *= scale[i] * scale[j];
        }
    }
    let lu = LU::new(scaled);
    let u = lu.u();
    for i in 0..n {
        if u[(i, i)].abs() < 1e-12 {
            return Err(Error::DegeneratePrior { cell });
        }
    }
    Ok(FactoredMass { scale, lu })
}

fn mass_solve(f: &FactoredMass, rhs: &DVector<f64>) -> DVector<f64> {
    let mut out = rhs.clone();
    mass_solve_in_place(f, &mut out);
    out
}

fn mass_solve_in_place(f: &FactoredMass, rhs: &mut DVector<f64>) {
    rhs.component_mul_assign(&f.scale);
    let ok = f.lu.solve_mut(rhs);
    debug_assert!(ok, "pivots checked at factorization");
    rhs.component_mul_assign(&f.scale);
}

/// Per-cell, per-variable basis tables and factored mass matrix.
pub struct CellBasis {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
    /// Physical quadrature nodes on the cell.
    pub nodes: Vec<f64>,
    /// Physical quadrature weights, Jacobian included.
    pub weights: Vec<f64>,
    /// Basis values at the quadrature nodes, n_q rows by q + 1 columns.
    pub vals: DMatrix<f64>,
    /// Basis x-derivatives at the quadrature nodes.
    pub ders: DMatrix<f64>,
    /// Basis values at the left and right cell faces.
    pub left: DVector<f64>,
    pub right: DVector<f64>,
    pub mass: DMatrix<f64>,
    factored: FactoredMass,
}

impl CellBasis {
    pub fn build(
        spec: BasisSpec,
        q: usize,
        lo: f64,
        hi: f64,
        rule: &QuadRule,
        prior: &dyn Fn(f64) -> (f64, f64),
        cell: usize,
    ) -> Result<Self> {
        let center = 0.5 * (lo + hi);
        let n_q = rule.len();
        let n_b = q + 1;
        let mapped = map_rule_to_cell(rule, lo, hi);
        let (nodes, weights) = (mapped.nodes, mapped.weights);

        let mut vals = DMatrix::zeros(n_q, n_b);
        let mut ders = DMatrix::zeros(n_q, n_b);
        let eval = |x: f64| {
            let pv = if spec.uses_prior() { prior(x) } else { (1.0, 0.0) };
            basis_pair(spec, q, center, x, pv)
        };
        for (p, &x) in nodes.iter().enumerate() {
            let (v, d) = eval(x);
            for j in 0..n_b {
                vals[(p, j)] = v[j];
                ders[(p, j)] = d[j];
            }
        }
        let left = DVector::from_vec(eval(lo).0);
        let right = DVector::from_vec(eval(hi).0);

        let mut mass = DMatrix::zeros(n_b, n_b);
        for p in 0..n_q {
            let w = weights[p];
            for i in 0..n_b {
                for j in 0..=i {
                    mass[(i, j)] += w * vals[(p, i)] * vals[(p, j)];
                }
            }
        }
        for i in 0..n_b {
            for j in i + 1..n_b {
                mass[(i, j)] = mass[(j, i)];
            }
        }
        let factored = factor_mass(&mass, cell)?;

        Ok(Self {
            lo,
            hi,
            center,
            nodes,
            weights,
            vals,
            ders,
            left,
            right,
            mass,
            factored,
        })
    }

    pub fn n_basis(&self) -> usize {
        self.mass.nrows()
    }

    pub fn solve_mass(&self, rhs: &DVector<f64>) -> DVector<f64> {
        mass_solve(&self.factored, rhs)
    }

    pub fn solve_mass_in_place(&self, rhs: &mut DVector<f64>) {
        mass_solve_in_place(&self.factored, rhs)
    }

    /// L2 projection of a pointwise function onto this cell's basis.
    pub fn project(&self, f: &dyn Fn(f64) -> f64) -> DVector<f64> {
        let n_b = self.n_basis();
        let mut rhs = DVector::zeros(n_b);
        for (p, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let fx = f(x);
            for i in 0..n_b {
                rhs[i] += w * fx * self.vals[(p, i)];
            }
        }
        self.solve_mass(&rhs)
    }

    /// Solution values at the quadrature nodes.
    pub fn values_at_nodes(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.vals * coeffs
    }

    pub fn trace_left(&self, coeffs: &DVector<f64>) -> f64 {
        self.left.dot(coeffs)
    }

    pub fn trace_right(&self, coeffs: &DVector<f64>) -> f64 {
        self.right.dot(coeffs)
    }

    /// Cell average of the represented solution.
    pub fn average(&self, coeffs: &DVector<f64>) -> f64 {
        let u = self.values_at_nodes(coeffs);
        let mut acc = 0.0;
        for (p, &w) in self.weights.iter().enumerate() {
            acc += w * u[p];
        }
        acc / (self.hi - self.lo)
    }
}

/// Exponent pairs (a, b) with a + b <= q in graded order.
pub fn taylor_exponents_2d(q: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for total in 0..=q {
        for a in (0..=total).rev() {
            out.push((a, total - a));
        }
    }
    out
}

fn basis_pair_2d(
    spec: BasisSpec,
    exps: &[(usize, usize)],
    q: usize,
    cx: f64,
    cy: f64,
    x: f64,
    y: f64,
    prior: (f64, f64, f64),
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (mx, dmx) = monomials(q, cx, x);
    let (my, dmy) = monomials(q, cy, y);
    let n_b = exps.len();
    let mut vals = vec![0.0; n_b];
    let mut dxs = vec![0.0; n_b];
    let mut dys = vec![0.0; n_b];
    for (i, &(a, b)) in exps.iter().enumerate() {
        vals[i] = mx[a] * my[b];
        dxs[i] = dmx[a] * my[b];
        dys[i] = mx[a] * dmy[b];
    }
    match spec {
        BasisSpec::Classic => {}
        BasisSpec::Additive => {
            vals[0] = prior.0;
            dxs[0] = prior.1;
            dys[0] = prior.2;
        }
        BasisSpec::Multiplicative => {
            for i in 0..n_b {
                dxs[i] = prior.1 * vals[i] + prior.0 * dxs[i];
                dys[i] = prior.2 * vals[i] + prior.0 * dys[i];
                vals[i] *= prior.0;
            }
        }
    }
    (vals, dxs, dys)
}

pub fn basis_values_2d(
    spec: BasisSpec,
    q: usize,
    cx: f64,
    cy: f64,
    x: f64,
    y: f64,
    prior_value: f64,
) -> Vec<f64> {
    let exps = taylor_exponents_2d(q);
    let (vals, _, _) = basis_pair_2d(spec, &exps, q, cx, cy, x, y, (prior_value, 0.0, 0.0));
    vals
}

/// Edge index order: left (x = lo), right (x = hi), bottom (y = lo),
/// top (y = hi).
pub const EDGE_LEFT: usize = 0;
pub const EDGE_RIGHT: usize = 1;
pub const EDGE_BOTTOM: usize = 2;
pub const EDGE_TOP: usize = 3;

pub struct CellBasis2d {
    pub center: (f64, f64),
    /// Tensor quadrature nodes, x varying fastest.
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    pub vals: DMatrix<f64>,
    pub ders_x: DMatrix<f64>,
    pub ders_y: DMatrix<f64>,
    /// Basis values at the edge quadrature nodes, one matrix per edge.
    pub edge_vals: [DMatrix<f64>; 4],
    pub edge_nodes: [Vec<(f64, f64)>; 4],
    /// Edge quadrature weights with the edge Jacobian included.
    pub edge_weights: [Vec<f64>; 4],
    pub mass: DMatrix<f64>,
    area: f64,
    factored: FactoredMass,
}

impl CellBasis2d {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        spec: BasisSpec,
        q: usize,
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
        rule: &QuadRule,
        prior: &dyn Fn(f64, f64) -> (f64, f64, f64),
        cell: usize,
    ) -> Result<Self> {
        let exps = taylor_exponents_2d(q);
        let n_b = exps.len();
        let cx = 0.5 * (x_lo + x_hi);
        let cy = 0.5 * (y_lo + y_hi);
        let mapped_x = map_rule_to_cell(rule, x_lo, x_hi);
        let mapped_y = map_rule_to_cell(rule, y_lo, y_hi);
        let (xs, wxs) = (mapped_x.nodes, mapped_x.weights);
        let (ys, wys) = (mapped_y.nodes, mapped_y.weights);
        let n_q = rule.len();

        let eval = |x: f64, y: f64| {
            let pv = if spec.uses_prior() {
                prior(x, y)
            } else {
                (1.0, 0.0, 0.0)
            };
            basis_pair_2d(spec, &exps, q, cx, cy, x, y, pv)
        };

        let n_pts = n_q * n_q;
        let mut nodes = Vec::with_capacity(n_pts);
        let mut weights = Vec::with_capacity(n_pts);
        let mut vals = DMatrix::zeros(n_pts, n_b);
        let mut ders_x = DMatrix::zeros(n_pts, n_b);
        let mut ders_y = DMatrix::zeros(n_pts, n_b);
        for (jy, (&y, &wy)) in ys.iter().zip(&wys).enumerate() {
            for (ix, (&x, &wx)) in xs.iter().zip(&wxs).enumerate() {
                let p = jy * n_q + ix;
                nodes.push((x, y));
                weights.push(wx * wy);
                let (v, dx, dy) = eval(x, y);
                for j in 0..n_b {
                    vals[(p, j)] = v[j];
                    ders_x[(p, j)] = dx[j];
                    ders_y[(p, j)] = dy[j];
                }
            }
        }

        let edge_defs: [(Vec<(f64, f64)>, &[f64]); 4] = [
            (ys.iter().map(|&y| (x_lo, y)).collect(), &wys),
            (ys.iter().map(|&y| (x_hi, y)).collect(), &wys),
            (xs.iter().map(|&x| (x, y_lo)).collect(), &wxs),
            (xs.iter().map(|&x| (x, y_hi)).collect(), &wxs),
        ];
        let mut edge_vals = [
            DMatrix::zeros(n_q, n_b),
            DMatrix::zeros(n_q, n_b),
            DMatrix::zeros(n_q, n_b),
            DMatrix::zeros(n_q, n_b),
        ];
        let mut edge_nodes: [Vec<(f64, f64)>; 4] = Default::default();
        let mut edge_weights: [Vec<f64>; 4] = Default::default();
        for (e, (pts, ws)) in edge_defs.iter().enumerate() {
            for (p, &(x, y)) in pts.iter().enumerate() {
                let (v, _, _) = eval(x, y);
                for j in 0..n_b {
                    edge_vals[e][(p, j)] = v[j];
                }
            }
            edge_nodes[e] = pts.clone();
            edge_weights[e] = ws.to_vec();
        }

        let mut mass = DMatrix::zeros(n_b, n_b);
        for p in 0..n_pts {
            let w = weights[p];
            for i in 0..n_b {
                for j in 0..=i {
                    mass[(i, j)] += w * vals[(p, i)] * vals[(p, j)];
                }
            }
        }
        for i in 0..n_b {
            for j in i + 1..n_b {
                mass[(i, j)] = mass[(j, i)];
            }
        }
        let factored = factor_mass(&mass, cell)?;

        Ok(Self {
            center: (cx, cy),
            nodes,
            weights,
            vals,
            ders_x,
            ders_y,
            edge_vals,
            edge_nodes,
            edge_weights,
            mass,
            area: (x_hi - x_lo) * (y_hi - y_lo),
            factored,
        })
    }

    pub fn n_basis(&self) -> usize {
        self.mass.nrows()
    }

    pub fn solve_mass(&self, rhs: &DVector<f64>) -> DVector<f64> {
        mass_solve(&self.factored, rhs)
    }

    pub fn project(&self, f: &dyn Fn(f64, f64) -> f64) -> DVector<f64> {
        let n_b = self.n_basis();
        let mut rhs = DVector::zeros(n_b);
        for (p, (&(x, y), &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let fv = f(x, y);
            for i in 0..n_b {
                rhs[i] += w * fv * self.vals[(p, i)];
            }
        }
        self.solve_mass(&rhs)
    }

    pub fn values_at_nodes(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.vals * coeffs
    }

    pub fn edge_values(&self, edge: usize, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.edge_vals[edge] * coeffs
    }

    pub fn average(&self, coeffs: &DVector<f64>) -> f64 {
        let u = self.values_at_nodes(coeffs);
        let mut acc = 0.0;
        for (p, &w) in self.weights.iter().enumerate() {
            acc += w * u[p];
        }
        acc / self.area
    }
}
