use super::dual::{Dual2, Grad2};
use super::scalar::Scalar;

/// Map a physical value into [-1, 1]; returns the mapped value and the
/// derivative of the map, so network derivatives come out with respect to
/// the physical coordinate.
pub fn norm_to_unit(v: f64, lo: f64, hi: f64) -> (f64, f64) {
    let scale = 2.0 / (hi - lo);
    ((v - lo) * scale - 1.0, scale)
}

/// Input triples (value, d/dx, d2/dx2) for a 1D collocation point: the
/// spatial coordinate is seeded with the map derivative, parameters are
/// constants.
pub fn encode_1d(domain: (f64, f64), mu_box: &[(f64, f64)], x: f64, mu: &[f64]) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(1 + mu.len());
    let (xh, dx) = norm_to_unit(x, domain.0, domain.1);
    out.push([xh, dx, 0.0]);
    for (&m, &(lo, hi)) in mu.iter().zip(mu_box) {
        out.push([norm_to_unit(m, lo, hi).0, 0.0, 0.0]);
    }
    out
}

/// Input triples (value, d/dx1, d/dx2) for a 2D collocation point.
pub fn encode_2d(
    domain: ((f64, f64), (f64, f64)),
    mu_box: &[(f64, f64)],
    x: (f64, f64),
    mu: &[f64],
) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(2 + mu.len());
    let (x1, d1) = norm_to_unit(x.0, domain.0 .0, domain.0 .1);
    let (x2, d2) = norm_to_unit(x.1, domain.1 .0, domain.1 .1);
    out.push([x1, d1, 0.0]);
    out.push([x2, 0.0, d2]);
    for (&m, &(lo, hi)) in mu.iter().zip(mu_box) {
        out.push([norm_to_unit(m, lo, hi).0, 0.0, 0.0]);
    }
    out
}

pub fn to_dual2<R: Scalar>(t: [f64; 3]) -> Dual2<R> {
    Dual2::new(R::constant(t[0]), R::constant(t[1]), R::constant(t[2]))
}

pub fn to_grad2<R: Scalar>(t: [f64; 3]) -> Grad2<R> {
    Grad2::new(R::constant(t[0]), R::constant(t[1]), R::constant(t[2]))
}
