use super::scalar::Scalar;
use std::cell::RefCell;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Reverse-mode scalar on a thread-local tape. Intended for the short
/// post-network part of a residual computation: make leaves for the network
/// outputs, run the residual formula, then pull leaf adjoints with
/// `gradient`. Reset the tape before each sample.
#[derive(Clone, Copy, Debug)]
pub struct Rev {
    pub val: f64,
    idx: usize,
}

#[derive(Clone, Copy)]
struct Node {
    parents: [(usize, f64); 2],
    n: u8,
}

thread_local! {
    static TAPE: RefCell<Vec<Node>> = const { RefCell::new(Vec::new()) };
}

pub fn tape_reset() {
    TAPE.with(|t| t.borrow_mut().clear());
}

pub fn tape_len() -> usize {
    TAPE.with(|t| t.borrow().len())
}

fn push(node: Node, val: f64) -> Rev {
    let idx = TAPE.with(|t| {
        let mut tape = t.borrow_mut();
        tape.push(node);
        tape.len() - 1
    });
    Rev { val, idx }
}

fn push0(val: f64) -> Rev {
    push(
        Node {
            parents: [(0, 0.0); 2],
            n: 0,
        },
        val,
    )
}

fn push1(val: f64, parent: usize, partial: f64) -> Rev {
    push(
        Node {
            parents: [(parent, partial), (0, 0.0)],
            n: 1,
        },
        val,
    )
}

fn push2(val: f64, pa: (usize, f64), pb: (usize, f64)) -> Rev {
    push(
        Node {
            parents: [pa, pb],
            n: 2,
        },
        val,
    )
}

impl Rev {
    pub fn leaf(val: f64) -> Rev {
        push0(val)
    }

    /// Adjoint of this node after a `gradient` sweep.
    pub fn adjoint(self, adjoints: &[f64]) -> f64 {
        adjoints[self.idx]
    }
}

/// Adjoints of every tape node with respect to `output`.
pub fn gradient(output: Rev) -> Vec<f64> {
    TAPE.with(|t| {
        let tape = t.borrow();
        let mut adj = vec![0.0; tape.len()];
        adj[output.idx] = 1.0;
        for i in (0..=output.idx).rev() {
            let a = adj[i];
            if a == 0.0 {
                continue;
            }
            let node = tape[i];
            for k in 0..node.n as usize {
                let (p, w) = node.parents[k];
                adj[p] += a * w;
            }
        }
        adj
    })
}

impl Add for Rev {
    type Output = Rev;
    fn add(self, rhs: Rev) -> Rev {
        push2(self.val + rhs.val, (self.idx, 1.0), (rhs.idx, 1.0))
    }
}

impl Sub for Rev {
    type Output = Rev;
    fn sub(self, rhs: Rev) -> Rev {
        push2(self.val - rhs.val, (self.idx, 1.0), (rhs.idx, -1.0))
    }
}

impl Mul for Rev {
    type Output = Rev;
    fn mul(self, rhs: Rev) -> Rev {
        push2(self.val * rhs.val, (self.idx, rhs.val), (rhs.idx, self.val))
    }
}

impl Div for Rev {
    type Output = Rev;
    fn div(self, rhs: Rev) -> Rev {
        let val = self.val / rhs.val;
        push2(
            val,
            (self.idx, 1.0 / rhs.val),
            (rhs.idx, -val / rhs.val),
        )
    }
}

impl Neg for Rev {
    type Output = Rev;
    fn neg(self) -> Rev {
        push1(-self.val, self.idx, -1.0)
    }
}

impl Scalar for Rev {
    fn constant(c: f64) -> Rev {
        push0(c)
    }
    fn value(self) -> f64 {
        self.val
    }
    fn scale(self, c: f64) -> Rev {
        push1(c * self.val, self.idx, c)
    }
    fn shift(self, c: f64) -> Rev {
        push1(self.val + c, self.idx, 1.0)
    }
    fn recip(self) -> Rev {
        let val = 1.0 / self.val;
        push1(val, self.idx, -val * val)
    }
    fn powi(self, n: i32) -> Rev {
        let val = self.val.powi(n);
        let partial = if n == 0 {
            0.0
        } else {
            n as f64 * self.val.powi(n - 1)
        };
        push1(val, self.idx, partial)
    }
    fn powf_const(self, p: f64) -> Rev {
        let val = self.val.powf(p);
        push1(val, self.idx, p * self.val.powf(p - 1.0))
    }
    fn tanh(self) -> Rev {
        let t = self.val.tanh();
        push1(t, self.idx, 1.0 - t * t)
    }
    fn exp(self) -> Rev {
        let e = self.val.exp();
        push1(e, self.idx, e)
    }
    fn ln(self) -> Rev {
        push1(self.val.ln(), self.idx, 1.0 / self.val)
    }
    fn sqrt(self) -> Rev {
        let s = self.val.sqrt();
        push1(s, self.idx, 0.5 / s)
    }
    fn sin(self) -> Rev {
        push1(self.val.sin(), self.idx, self.val.cos())
    }
    fn cos(self) -> Rev {
        push1(self.val.cos(), self.idx, -self.val.sin())
    }
}
