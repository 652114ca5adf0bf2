use super::dual::{Dual2, Grad2};
use super::encode::{encode_1d, encode_2d, to_dual2, to_grad2};
use super::net::Mlp;
use super::problem::{SteadyProblem1d, SteadyProblem2d};
use crate::basis::{Prior1d, Prior2d};

/// Steady-state prior backed by a trained network: net output composed
/// through the problem's boundary operator, then mapped to per-variable
/// components.
pub struct PinnPrior1d<P: SteadyProblem1d> {
    problem: P,
    net: Mlp,
    mu: Vec<f64>,
}

impl<P: SteadyProblem1d> PinnPrior1d<P> {
    pub fn new(problem: P, net: Mlp, mu: Vec<f64>) -> Self {
        Self { problem, net, mu }
    }
}

impl<P: SteadyProblem1d> Prior1d for PinnPrior1d<P> {
    fn n_vars(&self) -> usize {
        self.problem.n_components()
    }

    fn eval(&self, var: usize, x: f64) -> (f64, f64) {
        let input: Vec<Dual2<f64>> = encode_1d(self.problem.domain(), &self.problem.mu_box(), x, &self.mu)
            .into_iter()
            .map(to_dual2)
            .collect();
        let raw = self.net.forward2(&input);
        let fields = self.problem.compose(&self.mu, x, &raw);
        let comps = self.problem.prior_components(&self.mu, x, &fields);
        (comps[var].v, comps[var].d1)
    }
}

pub struct PinnPrior2d<P: SteadyProblem2d> {
    problem: P,
    nets: Vec<Mlp>,
    mu: Vec<f64>,
}

impl<P: SteadyProblem2d> PinnPrior2d<P> {
    pub fn new(problem: P, nets: Vec<Mlp>, mu: Vec<f64>) -> Self {
        assert_eq!(nets.len(), problem.n_nets());
        Self { problem, nets, mu }
    }
}

impl<P: SteadyProblem2d> Prior2d for PinnPrior2d<P> {
    fn n_vars(&self) -> usize {
        self.problem.n_components()
    }

    fn eval(&self, var: usize, x: f64, y: f64) -> (f64, f64, f64) {
        let input: Vec<Grad2<f64>> =
            encode_2d(self.problem.domain(), &self.problem.mu_box(), (x, y), &self.mu)
                .into_iter()
                .map(to_grad2)
                .collect();
        let raw: Vec<Grad2<f64>> = self
            .nets
            .iter()
            .map(|n| n.forward_grad2(&input)[0])
            .collect();
        let fields = self.problem.compose(&self.mu, (x, y), &raw);
        let comps = self.problem.prior_components(&self.mu, (x, y), &fields);
        (comps[var].v, comps[var].gx, comps[var].gy)
    }
}
