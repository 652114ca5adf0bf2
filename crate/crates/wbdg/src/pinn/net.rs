use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dual::{Dual2, Grad2};
use super::scalar::Scalar;

/// Fully connected tanh network over a flat parameter buffer. Layer l maps
/// sizes[l] inputs to sizes[l + 1] outputs; every layer but the last is
/// followed by tanh. Weights are stored row-major, then the bias, layer by
/// layer, so the optimizer can treat the whole net as one slice.
pub struct Mlp {
    sizes: Vec<usize>,
    params: Vec<f64>,
    offsets: Vec<(usize, usize)>,
}

fn layout(sizes: &[usize]) -> (Vec<(usize, usize)>, usize) {
    let mut offsets = Vec::with_capacity(sizes.len() - 1);
    let mut at = 0;
    for l in 0..sizes.len() - 1 {
        let (rows, cols) = (sizes[l + 1], sizes[l]);
        offsets.push((at, at + rows * cols));
        at += rows * cols + rows;
    }
    (offsets, at)
}

impl Mlp {
    /// Glorot-uniform weights, zero biases, deterministic in the seed.
    pub fn xavier(sizes: &[usize], seed: u64) -> Self {
        assert!(sizes.len() >= 2, "need at least one layer");
        let (offsets, n) = layout(sizes);
        let mut params = vec![0.0; n];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for l in 0..sizes.len() - 1 {
            let (rows, cols) = (sizes[l + 1], sizes[l]);
            let limit = (6.0 / (rows + cols) as f64).sqrt();
            let (w_off, _) = offsets[l];
            for w in &mut params[w_off..w_off + rows * cols] {
                *w = rng.random_range(-limit..limit);
            }
        }
        Self {
            sizes: sizes.to_vec(),
            params,
            offsets,
        }
    }

    /// Rebuild a network from per-layer weight and bias data.
    pub fn from_layers(sizes: &[usize], layers: impl Iterator<Item = (Vec<f64>, Vec<f64>)>) -> Self {
        let (offsets, n) = layout(sizes);
        let mut params = vec![0.0; n];
        for (l, (w, b)) in layers.enumerate() {
            let (rows, cols) = (sizes[l + 1], sizes[l]);
            assert_eq!(w.len(), rows * cols);
            assert_eq!(b.len(), rows);
            let (w_off, b_off) = offsets[l];
            params[w_off..w_off + w.len()].copy_from_slice(&w);
            params[b_off..b_off + b.len()].copy_from_slice(&b);
        }
        Self {
            sizes: sizes.to_vec(),
            params,
            offsets,
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n_layers(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn layer_dims(&self, l: usize) -> (usize, usize) {
        (self.sizes[l + 1], self.sizes[l])
    }

    pub fn layer_weights(&self, l: usize) -> &[f64] {
        let (rows, cols) = self.layer_dims(l);
        let (w_off, _) = self.offsets[l];
        &self.params[w_off..w_off + rows * cols]
    }

    pub fn layer_bias(&self, l: usize) -> &[f64] {
        let (rows, _) = self.layer_dims(l);
        let (_, b_off) = self.offsets[l];
        &self.params[b_off..b_off + rows]
    }

    /// Forward pass carrying value and derivatives with respect to the
    /// seeded inputs. Used with plain f64 for prior evaluation and with Rev
    /// for tests; training uses the traced pass below.
    pub fn forward2<R: Scalar>(&self, input: &[Dual2<R>]) -> Vec<Dual2<R>> {
        assert_eq!(input.len(), self.sizes[0]);
        let mut a = input.to_vec();
        for l in 0..self.n_layers() {
            let (rows, cols) = self.layer_dims(l);
            let w = self.layer_weights(l);
            let b = self.layer_bias(l);
            let mut z = Vec::with_capacity(rows);
            for i in 0..rows {
                let row = &w[i * cols..(i + 1) * cols];
                let mut acc = a[0].scale(row[0]);
                for j in 1..cols {
                    acc = acc + a[j].scale(row[j]);
                }
                z.push(acc.shift(b[i]));
            }
            if l + 1 < self.n_layers() {
                for v in &mut z {
                    *v = v.tanh();
                }
            }
            a = z;
        }
        a
    }

    /// Same pass over 2D gradient triples.
    pub fn forward_grad2<R: Scalar>(&self, input: &[Grad2<R>]) -> Vec<Grad2<R>> {
        assert_eq!(input.len(), self.sizes[0]);
        let mut a = input.to_vec();
        for l in 0..self.n_layers() {
            let (rows, cols) = self.layer_dims(l);
            let w = self.layer_weights(l);
            let b = self.layer_bias(l);
            let mut z = Vec::with_capacity(rows);
            for i in 0..rows {
                let row = &w[i * cols..(i + 1) * cols];
                let mut acc = a[0].scale(row[0]);
                for j in 1..cols {
                    acc = acc + a[j].scale(row[j]);
                }
                z.push(acc.shift(b[i]));
            }
            if l + 1 < self.n_layers() {
                for v in &mut z {
                    *v = v.tanh();
                }
            }
            a = z;
        }
        a
    }
}

/// Activations recorded by a traced forward pass, enough to run the manual
/// reverse pass for parameter gradients. Triples are (value, first, second
/// x-derivative) in 1D and (value, d/dx, d/dy) in 2D; the linear algebra is
/// identical, only the tanh rule differs.
pub struct Trace {
    input: Vec<[f64; 3]>,
    pre: Vec<Vec<[f64; 3]>>,
    post: Vec<Vec<[f64; 3]>>,
}

impl Trace {
    pub fn output(&self) -> &[[f64; 3]] {
        self.pre.last().expect("at least one layer")
    }
}

fn forward_linear(
    a: &[[f64; 3]],
    w: &[f64],
    b: &[f64],
    rows: usize,
    cols: usize,
) -> Vec<[f64; 3]> {
    let mut z = vec![[0.0; 3]; rows];
    for i in 0..rows {
        let row = &w[i * cols..(i + 1) * cols];
        let mut s = [0.0, 0.0, 0.0];
        for (aj, &wj) in a.iter().zip(row) {
            s[0] += wj * aj[0];
            s[1] += wj * aj[1];
            s[2] += wj * aj[2];
        }
        z[i] = [s[0] + b[i], s[1], s[2]];
    }
    z
}

impl Mlp {
    /// Traced forward pass on second-order 1D triples.
    pub fn forward_traced(&self, input: &[[f64; 3]]) -> Trace {
        assert_eq!(input.len(), self.sizes[0]);
        let n_l = self.n_layers();
        let mut pre = Vec::with_capacity(n_l);
        let mut post = Vec::with_capacity(n_l - 1);
        let mut a = input.to_vec();
        for l in 0..n_l {
            let (rows, cols) = self.layer_dims(l);
            let mut z = forward_linear(&a, self.layer_weights(l), self.layer_bias(l), rows, cols);
            pre.push(z.clone());
            if l + 1 < n_l {
                for zi in &mut z {
                    let t = zi[0].tanh();
                    let s = 1.0 - t * t;
                    *zi = [t, s * zi[1], s * zi[2] - 2.0 * t * s * zi[1] * zi[1]];
                }
                post.push(z.clone());
            }
            a = z;
        }
        Trace {
            input: input.to_vec(),
            pre,
            post,
        }
    }

    /// Traced forward pass on 2D gradient triples.
    pub fn forward_traced_grad(&self, input: &[[f64; 3]]) -> Trace {
        assert_eq!(input.len(), self.sizes[0]);
        let n_l = self.n_layers();
        let mut pre = Vec::with_capacity(n_l);
        let mut post = Vec::with_capacity(n_l - 1);
        let mut a = input.to_vec();
        for l in 0..n_l {
            let (rows, cols) = self.layer_dims(l);
            let mut z = forward_linear(&a, self.layer_weights(l), self.layer_bias(l), rows, cols);
            pre.push(z.clone());
            if l + 1 < n_l {
                for zi in &mut z {
                    let t = zi[0].tanh();
                    let s = 1.0 - t * t;
                    *zi = [t, s * zi[1], s * zi[2]];
                }
                post.push(z.clone());
            }
            a = z;
        }
        Trace {
            input: input.to_vec(),
            pre,
            post,
        }
    }

    fn backward_common(
        &self,
        trace: &Trace,
        seed: &[[f64; 3]],
        grads: &mut [f64],
        second_order: bool,
    ) {
        assert_eq!(grads.len(), self.n_params());
        let n_l = self.n_layers();
        let mut zbar = seed.to_vec();
        for l in (0..n_l).rev() {
            let (rows, cols) = self.layer_dims(l);
            let (w_off, b_off) = self.offsets[l];
            let a: &[[f64; 3]] = if l == 0 {
                &trace.input
            } else {
                &trace.post[l - 1]
            };
            for i in 0..rows {
                let zb = zbar[i];
                let base = w_off + i * cols;
                for (j, aj) in a.iter().enumerate() {
                    grads[base + j] += zb[0] * aj[0] + zb[1] * aj[1] + zb[2] * aj[2];
                }
                grads[b_off + i] += zb[0];
            }
            if l == 0 {
                break;
            }
            let w = self.layer_weights(l);
            let mut abar = vec![[0.0; 3]; cols];
            for i in 0..rows {
                let zb = zbar[i];
                let row = &w[i * cols..(i + 1) * cols];
                for (ab, &wij) in abar.iter_mut().zip(row) {
                    ab[0] += wij * zb[0];
                    ab[1] += wij * zb[1];
                    ab[2] += wij * zb[2];
                }
            }
            let zprev = &trace.pre[l - 1];
            let tprev = &trace.post[l - 1];
            zbar = vec![[0.0; 3]; cols];
            for j in 0..cols {
                let t = tprev[j][0];
                let s = 1.0 - t * t;
                let u = -2.0 * t * s;
                let [av, a1, a2] = abar[j];
                zbar[j] = if second_order {
                    let (z1, z2) = (zprev[j][1], zprev[j][2]);
                    let uprime = -2.0 * s * s + 4.0 * t * t * s;
                    [
                        av * s + a1 * u * z1 + a2 * (u * z2 + uprime * z1 * z1),
                        a1 * s + a2 * 2.0 * u * z1,
                        a2 * s,
                    ]
                } else {
                    let (gx, gy) = (zprev[j][1], zprev[j][2]);
                    [av * s + a1 * u * gx + a2 * u * gy, a1 * s, a2 * s]
                };
            }
        }
    }

    /// Reverse pass matching `forward_traced`: accumulate into `grads` the
    /// parameter gradient of sum_i seed[i] . output_triple[i].
    pub fn backward_traced(&self, trace: &Trace, seed: &[[f64; 3]], grads: &mut [f64]) {
        self.backward_common(trace, seed, grads, true);
    }

    /// Reverse pass matching `forward_traced_grad`.
    pub fn backward_traced_grad(&self, trace: &Trace, seed: &[[f64; 3]], grads: &mut [f64]) {
        self.backward_common(trace, seed, grads, false);
    }
}
