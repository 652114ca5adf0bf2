use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::adam::Adam;
use super::dual::{Dual2, Grad2};
use super::encode::{encode_1d, encode_2d};
use super::net::Mlp;
use super::problem::{SteadyProblem1d, SteadyProblem2d};
use super::rev::{gradient, tape_reset, Rev};
use super::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub epochs: usize,
    /// Collocation points drawn fresh each epoch.
    pub points: usize,
    pub lr0: f64,
    pub lr_decay: f64,
    pub lr_decay_every: usize,
    pub seed: u64,
    /// Stop once the epoch loss falls to this level.
    pub target_loss: Option<f64>,
    /// Data-fit points and weight; only 2D training uses them.
    pub data_points: usize,
    pub data_weight: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 5000,
            points: 5000,
            lr0: 1e-3,
            lr_decay: 0.5,
            lr_decay_every: 5000,
            seed: 0,
            target_loss: None,
            data_points: 0,
            data_weight: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrainRecord {
    pub epoch: usize,
    pub loss: f64,
    pub lr: f64,
}

pub fn lr_at(cfg: &TrainConfig, epoch: usize) -> f64 {
    cfg.lr0 * cfg.lr_decay.powi((epoch / cfg.lr_decay_every) as i32)
}

/// Mean squared residual over the samples and its parameter gradient,
/// accumulated into `grads` (cleared here). Exposed for gradient tests.
pub fn loss_and_grad_1d<P: SteadyProblem1d>(
    problem: &P,
    net: &Mlp,
    samples: &[(f64, Vec<f64>)],
    grads: &mut [f64],
) -> f64 {
    grads.fill(0.0);
    let domain = problem.domain();
    let mu_box = problem.mu_box();
    let inv = 1.0 / samples.len() as f64;
    let mut total = 0.0;
    for (x, mu) in samples {
        let input = encode_1d(domain, &mu_box, *x, mu);
        let trace = net.forward_traced(&input);
        tape_reset();
        let raw: Vec<Dual2<Rev>> = trace
            .output()
            .iter()
            .map(|t| Dual2::new(Rev::leaf(t[0]), Rev::leaf(t[1]), Rev::leaf(t[2])))
            .collect();
        let fields = problem.compose(mu, *x, &raw);
        let rs = problem.residual(mu, *x, &fields);
        let mut loss = rs[0] * rs[0];
        for r in &rs[1..] {
            loss = loss + *r * *r;
        }
        total += loss.val;
        let adj = gradient(loss);
        let seed: Vec<[f64; 3]> = raw
            .iter()
            .map(|d| {
                [
                    inv * d.v.adjoint(&adj),
                    inv * d.d1.adjoint(&adj),
                    inv * d.d2.adjoint(&adj),
                ]
            })
            .collect();
        net.backward_traced(&trace, &seed, grads);
    }
    total * inv
}

fn sample_mu(rng: &mut ChaCha8Rng, mu_box: &[(f64, f64)]) -> Vec<f64> {
    mu_box
        .iter()
        .map(|&(lo, hi)| rng.random_range(lo..hi))
        .collect()
}

/// Train a fresh network against a 1D steady problem. Returns the network
/// and the per-epoch loss history; the recorded loss is the one the epoch's
/// step was computed from.
pub fn train_1d<P: SteadyProblem1d>(
    problem: &P,
    sizes: &[usize],
    cfg: &TrainConfig,
) -> (Mlp, Vec<TrainRecord>) {
    let mut net = Mlp::xavier(sizes, cfg.seed);
    let mut adam = Adam::new(net.n_params(), cfg.lr0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut grads = vec![0.0; net.n_params()];
    let mut history = Vec::new();
    let domain = problem.domain();
    let mu_box = problem.mu_box();
    for epoch in 0..cfg.epochs {
        let samples: Vec<(f64, Vec<f64>)> = (0..cfg.points)
            .map(|_| {
                (
                    rng.random_range(domain.0..domain.1),
                    sample_mu(&mut rng, &mu_box),
                )
            })
            .collect();
        let loss = loss_and_grad_1d(problem, &net, &samples, &mut grads);
        adam.lr = lr_at(cfg, epoch);
        adam.step(net.params_mut(), &grads);
        history.push(TrainRecord {
            epoch,
            loss,
            lr: adam.lr,
        });
        if cfg.target_loss.is_some_and(|t| loss <= t) {
            break;
        }
    }
    (net, history)
}

/// Residual plus weighted data loss over both 2D networks; gradients per
/// network are accumulated into `grads` (cleared here).
pub fn loss_and_grad_2d<P: SteadyProblem2d>(
    problem: &P,
    nets: &[Mlp],
    res_samples: &[((f64, f64), Vec<f64>)],
    data_samples: &[((f64, f64), Vec<f64>)],
    data_weight: f64,
    grads: &mut [Vec<f64>],
) -> f64 {
    for g in grads.iter_mut() {
        g.fill(0.0);
    }
    let domain = problem.domain();
    let mu_box = problem.mu_box();
    let mut total = 0.0;

    let inv_res = 1.0 / res_samples.len().max(1) as f64;
    for (x, mu) in res_samples {
        let input = encode_2d(domain, &mu_box, *x, mu);
        let traces: Vec<_> = nets.iter().map(|n| n.forward_traced_grad(&input)).collect();
        tape_reset();
        let raw: Vec<Grad2<Rev>> = traces
            .iter()
            .map(|tr| {
                let t = tr.output()[0];
                Grad2::new(Rev::leaf(t[0]), Rev::leaf(t[1]), Rev::leaf(t[2]))
            })
            .collect();
        let fields = problem.compose(mu, *x, &raw);
        let rs = problem.residual(mu, *x, &fields);
        let mut loss = rs[0] * rs[0];
        for r in &rs[1..] {
            loss = loss + *r * *r;
        }
        total += loss.val * inv_res;
        let adj = gradient(loss);
        for (k, tr) in traces.iter().enumerate() {
            let g = &raw[k];
            let seed = [[
                inv_res * g.v.adjoint(&adj),
                inv_res * g.gx.adjoint(&adj),
                inv_res * g.gy.adjoint(&adj),
            ]];
            nets[k].backward_traced_grad(tr, &seed, &mut grads[k]);
        }
    }

    if !data_samples.is_empty() && data_weight > 0.0 {
        let inv_data = data_weight / data_samples.len() as f64;
        for (x, mu) in data_samples {
            let input = encode_2d(domain, &mu_box, *x, mu);
            let traces: Vec<_> = nets.iter().map(|n| n.forward_traced_grad(&input)).collect();
            tape_reset();
            let raw: Vec<Grad2<Rev>> = traces
                .iter()
                .map(|tr| {
                    let t = tr.output()[0];
                    Grad2::new(Rev::leaf(t[0]), Rev::leaf(t[1]), Rev::leaf(t[2]))
                })
                .collect();
            let fields = problem.compose(mu, *x, &raw);
            let targets = problem.data_targets(mu, *x);
            let mut loss: Option<Rev> = None;
            for (f, &t) in fields.iter().zip(&targets) {
                let d = f.v.shift(-t);
                let sq = d * d;
                loss = Some(match loss {
                    None => sq,
                    Some(acc) => acc + sq,
                });
            }
            let loss = loss.expect("data targets are nonempty");
            total += loss.val * inv_data;
            let adj = gradient(loss);
            for (k, tr) in traces.iter().enumerate() {
                let g = &raw[k];
                let seed = [[
                    inv_data * g.v.adjoint(&adj),
                    inv_data * g.gx.adjoint(&adj),
                    inv_data * g.gy.adjoint(&adj),
                ]];
                nets[k].backward_traced_grad(tr, &seed, &mut grads[k]);
            }
        }
    }

    total
}

/// Train the coupled 2D networks jointly.
pub fn train_2d<P: SteadyProblem2d>(
    problem: &P,
    sizes: &[usize],
    cfg: &TrainConfig,
) -> (Vec<Mlp>, Vec<TrainRecord>) {
    let n_nets = problem.n_nets();
    let mut nets: Vec<Mlp> = (0..n_nets)
        .map(|k| Mlp::xavier(sizes, cfg.seed.wrapping_add(k as u64)))
        .collect();
    let mut adams: Vec<Adam> = nets.iter().map(|n| Adam::new(n.n_params(), cfg.lr0)).collect();
    let mut grads: Vec<Vec<f64>> = nets.iter().map(|n| vec![0.0; n.n_params()]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut history = Vec::new();
    let ((x_lo, x_hi), (y_lo, y_hi)) = problem.domain();
    let mu_box = problem.mu_box();
    for epoch in 0..cfg.epochs {
        let mut draw = |n: usize| -> Vec<((f64, f64), Vec<f64>)> {
            (0..n)
                .map(|_| {
                    (
                        (
                            rng.random_range(x_lo..x_hi),
                            rng.random_range(y_lo..y_hi),
                        ),
                        sample_mu(&mut rng, &mu_box),
                    )
                })
                .collect()
        };
        let res_samples = draw(cfg.points);
        let data_samples = draw(cfg.data_points);
        let loss = loss_and_grad_2d(
            problem,
            &nets,
            &res_samples,
            &data_samples,
            cfg.data_weight,
            &mut grads,
        );
        let lr = lr_at(cfg, epoch);
        for (k, net) in nets.iter_mut().enumerate() {
            adams[k].lr = lr;
            adams[k].step(net.params_mut(), &grads[k]);
        }
        history.push(TrainRecord { epoch, loss, lr });
        if cfg.target_loss.is_some_and(|t| loss <= t) {
            break;
        }
    }
    (nets, history)
}
