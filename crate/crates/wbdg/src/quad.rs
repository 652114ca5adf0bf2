use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Quadrature rule: nodes and weights, either on the reference interval
/// [-1, 1] or mapped to a cell.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// P_m(x) and P_{m-1}(x) via the three-term recurrence.
fn legendre_pair(m: usize, x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut p_prev = 0.0;
    for k in 0..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Gauss-Lobatto rule with n nodes on [-1, 1], exact through degree 2n - 3.
///
/// Interior nodes are the roots of P'_{n-1}, found by Newton iteration from
/// Chebyshev-Lobatto initial guesses. The node set is symmetrized so that
/// xi[p] == -xi[n-1-p] bitwise and the endpoints are exactly -1 and 1.
pub fn gauss_lobatto_rule(n: usize) -> Result<QuadRule> {
    if !(2..=12).contains(&n) {
        return Err(Error::QuadratureSize(n));
    }
    let m = n - 1;
    let mf = m as f64;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[n - 1] = 1.0;

    for p in 1..n - 1 {
        let mut x = -(std::f64::consts::PI * p as f64 / mf).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (pm, pm_prev) = legendre_pair(m, x);
            let dp = mf * (x * pm - pm_prev) / (x * x - 1.0);
            let d2p = (2.0 * x * dp - mf * (mf + 1.0) * pm) / (1.0 - x * x);
            let step = dp / d2p;
            x -= step;
            if step.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureNewton { n, node: p });
        }
        nodes[p] = x;
    }

    let snapshot = nodes.clone();
    for p in 1..n - 1 {
        nodes[p] = 0.5 * (snapshot[p] - snapshot[n - 1 - p]);
    }

    let scale = 2.0 / (n as f64 * mf);
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (pm, _) = legendre_pair(m, x);
            scale / (pm * pm)
        })
        .collect();
    let w_snapshot = weights.clone();
    for p in 0..n {
        weights[p] = 0.5 * (w_snapshot[p] + w_snapshot[n - 1 - p]);
    }

    Ok(QuadRule { nodes, weights })
}

/// Affine map of a reference rule to the cell (lo, hi). The first and last
/// nodes land exactly on lo and hi.
pub fn map_rule_to_cell(rule: &QuadRule, lo: f64, hi: f64) -> QuadRule {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut nodes: Vec<f64> = rule.nodes.iter().map(|&xi| mid + half * xi).collect();
    let last = nodes.len() - 1;
    nodes[0] = lo;
    nodes[last] = hi;
    let weights = rule.weights.iter().map(|&w| w * half).collect();
    QuadRule { nodes, weights }
}

/// Quadrature of f over (lo, hi) with the given reference rule.
pub fn integrate_on_cell(rule: &QuadRule, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mapped = map_rule_to_cell(rule, lo, hi);
    mapped
        .nodes
        .iter()
        .zip(&mapped.weights)
        .map(|(&x, &w)| w * f(x))
        .sum()
}

fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|j| {
            let mut b = 1.0;
            for i in 0..n {
                if i != j {
                    b /= nodes[j] - nodes[i];
                }
            }
            b
        })
        .collect()
}

fn lagrange_values(nodes: &[f64], bary: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    for j in 0..n {
        if x == nodes[j] {
            let mut v = vec![0.0; n];
            v[j] = 1.0;
            return v;
        }
    }
    let terms: Vec<f64> = (0..n).map(|j| bary[j] / (x - nodes[j])).collect();
    let denom: f64 = terms.iter().sum();
    terms.iter().map(|t| t / denom).collect()
}

/// Cumulative integration matrix C for the rule's own node set on [-1, 1]:
/// (C v)[p] = integral from -1 to nodes[p] of the interpolant through the
/// nodal values v. Exact for polynomials of degree n - 1.
pub fn cumulative_matrix(rule: &QuadRule) -> DMatrix<f64> {
    let n = rule.len();
    let bary = barycentric_weights(&rule.nodes);
    let mut c = DMatrix::zeros(n, n);
    for p in 1..n {
        let sub = map_rule_to_cell(rule, -1.0, rule.nodes[p]);
        for (x, w) in sub.nodes.iter().zip(&sub.weights) {
            let ell = lagrange_values(&rule.nodes, &bary, *x);
            for j in 0..n {
                c[(p, j)] += w * ell[j];
            }
        }
    }
    c
}
