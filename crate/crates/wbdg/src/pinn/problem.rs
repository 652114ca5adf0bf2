use super::dual::{Dual2, Grad2};
use super::scalar::Scalar;

/// A 1D steady problem that a prior network is trained against: the
/// parameter box to sample, the boundary-operator composition that turns a
/// raw network output into physical steady fields, and the steady residual
/// those fields should annihilate. Generic over the scalar so the same
/// formulas drive loss evaluation (f64) and parameter gradients (Rev).
pub trait SteadyProblem1d {
    fn n_outputs(&self) -> usize {
        1
    }
    fn domain(&self) -> (f64, f64);
    fn mu_box(&self) -> Vec<(f64, f64)>;
    /// Compose the boundary operator: raw net outputs to physical fields.
    fn compose<R: Scalar>(&self, mu: &[f64], x: f64, raw: &[Dual2<R>]) -> Vec<Dual2<R>>;
    /// Steady residuals of the composed fields; zero iff the fields solve
    /// the steady problem.
    fn residual<R: Scalar>(&self, mu: &[f64], x: f64, fields: &[Dual2<R>]) -> Vec<R>;
    /// Per conserved variable: the prior component functions built from the
    /// composed fields, in state-vector order.
    fn prior_components<R: Scalar>(&self, mu: &[f64], x: f64, fields: &[Dual2<R>])
        -> Vec<Dual2<R>>;
    /// Number of entries `prior_components` returns.
    fn n_components(&self) -> usize {
        1
    }
    fn model_tag(&self) -> String;
    fn boundary_tag(&self) -> String;
}

/// 2D analogue with first-order derivatives and an optional data loss.
pub trait SteadyProblem2d {
    fn n_nets(&self) -> usize {
        2
    }
    fn domain(&self) -> ((f64, f64), (f64, f64));
    fn mu_box(&self) -> Vec<(f64, f64)>;
    fn compose<R: Scalar>(&self, mu: &[f64], x: (f64, f64), raw: &[Grad2<R>]) -> Vec<Grad2<R>>;
    fn residual<R: Scalar>(&self, mu: &[f64], x: (f64, f64), fields: &[Grad2<R>]) -> Vec<R>;
    /// Reference values the composed fields are fitted to in the data loss,
    /// in `compose` output order.
    fn data_targets(&self, mu: &[f64], x: (f64, f64)) -> Vec<f64>;
    /// Per conserved variable: prior component functions built from the
    /// composed fields, in state-vector order.
    fn prior_components<R: Scalar>(
        &self,
        mu: &[f64],
        x: (f64, f64),
        fields: &[Grad2<R>],
    ) -> Vec<Grad2<R>>;
    /// Number of entries `prior_components` returns.
    fn n_components(&self) -> usize {
        3
    }
    fn model_tag(&self) -> String;
    fn boundary_tag(&self) -> String;
}
