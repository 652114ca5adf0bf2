use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use wbdg::mesh::{build_mesh_2d, Mesh1D};
use wbdg::quad::{cumulative_matrix, gauss_lobatto_rule, integrate_on_cell, map_rule_to_cell};

fn assert_rule(n: usize, nodes: &[f64], weights: &[f64]) {
    let rule = gauss_lobatto_rule(n).unwrap();
    for (got, want) in rule.nodes.iter().zip(nodes) {
        assert_abs_diff_eq!(got, want, epsilon = 1e-15);
    }
    for (got, want) in rule.weights.iter().zip(weights) {
        assert_abs_diff_eq!(got, want, epsilon = 1e-15);
    }
}

#[test]
fn small_rules_match_known_tables() {
    assert_rule(2, &[-1.0, 1.0], &[1.0, 1.0]);
    assert_rule(3, &[-1.0, 0.0, 1.0], &[1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]);
    let r5 = (0.2f64).sqrt();
    assert_rule(
        4,
        &[-1.0, -r5, r5, 1.0],
        &[1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0],
    );
    let r37 = (3.0f64 / 7.0).sqrt();
    assert_rule(
        5,
        &[-1.0, -r37, 0.0, r37, 1.0],
        &[0.1, 49.0 / 90.0, 32.0 / 45.0, 49.0 / 90.0, 0.1],
    );
}

#[test]
fn endpoints_are_exact_and_nodes_symmetric() {
    for n in 2..=12 {
        let rule = gauss_lobatto_rule(n).unwrap();
        assert_eq!(rule.nodes[0], -1.0);
        assert_eq!(rule.nodes[n - 1], 1.0);
        for p in 0..n {
            assert_eq!(rule.nodes[p], -rule.nodes[n - 1 - p]);
            assert_eq!(rule.weights[p], rule.weights[n - 1 - p]);
        }
        if n % 2 == 1 {
            assert_eq!(rule.nodes[n / 2], 0.0);
        }
    }
}

#[test]
fn weights_sum_to_two() {
    for n in 2..=12 {
        let rule = gauss_lobatto_rule(n).unwrap();
        let sum: f64 = rule.weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-13, "n = {n}: sum = {sum}");
    }
}

#[test]
fn exact_for_monomials_through_degree_2n_minus_3() {
    for n in 2..=12 {
        let rule = gauss_lobatto_rule(n).unwrap();
        for d in 0..=(2 * n - 3) {
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| w * x.powi(d as i32))
                .sum();
            let want = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
            assert!(
                (got - want).abs() <= 1e-12,
                "n = {n}, degree {d}: got {got}, want {want}"
            );
        }
    }
}

#[test]
fn degree_2n_minus_2_is_not_exact() {
    let rule = gauss_lobatto_rule(3).unwrap();
    let got: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| w * x.powi(4))
        .sum();
    assert!((got - 0.4).abs() > 0.2);
}

#[test]
fn rejects_out_of_range_sizes() {
    assert!(gauss_lobatto_rule(0).is_err());
    assert!(gauss_lobatto_rule(1).is_err());
    assert!(gauss_lobatto_rule(13).is_err());
}

#[test]
fn mapped_rule_hits_cell_edges_bitwise() {
    let rule = gauss_lobatto_rule(6).unwrap();
    let lo = 0.1 + 0.2;
    let hi = 0.7;
    let mapped = map_rule_to_cell(&rule, lo, hi);
    assert_eq!(mapped.nodes[0], lo);
    assert_eq!(mapped.nodes[5], hi);
    let wsum: f64 = mapped.weights.iter().sum();
    assert_abs_diff_eq!(wsum, hi - lo, epsilon = 1e-14);
}

#[test]
fn integrates_quadratic_on_small_cell() {
    let rule = gauss_lobatto_rule(3).unwrap();
    let got = integrate_on_cell(&rule, 0.0, 0.1, |x| x * x);
    assert_abs_diff_eq!(got, 1.0 / 3000.0, epsilon = 1e-18);
}

#[test]
fn composite_integration_of_smooth_function() {
    let rule = gauss_lobatto_rule(10).unwrap();
    let mesh = Mesh1D::uniform(0.0, 1.0, 20).unwrap();
    let got: f64 = (0..mesh.cells())
        .map(|k| {
            let (lo, hi) = mesh.cell(k);
            integrate_on_cell(&rule, lo, hi, |x| (2.0 * std::f64::consts::PI * x).sin().exp())
        })
        .sum();
    // Integral over one period of exp(sin), the modified Bessel value I_0(1).
    let want = 1.2660658777520084;
    assert_abs_diff_eq!(got, want, epsilon = 1e-13);
}

#[test]
fn cumulative_matrix_reproduces_antiderivatives() {
    for n in [4usize, 8, 12] {
        let rule = gauss_lobatto_rule(n).unwrap();
        let c = cumulative_matrix(&rule);
        for d in 0..n {
            let v: Vec<f64> = rule.nodes.iter().map(|&x| x.powi(d as i32)).collect();
            for p in 0..n {
                let got: f64 = (0..n).map(|j| c[(p, j)] * v[j]).sum();
                let xp = rule.nodes[p];
                let df = d as f64;
                let want = (xp.powi(d as i32 + 1) - (-1.0f64).powi(d as i32 + 1)) / (df + 1.0);
                assert!(
                    (got - want).abs() <= 1e-13,
                    "n = {n}, degree {d}, node {p}: got {got}, want {want}"
                );
            }
        }
    }
}

#[test]
fn cumulative_matrix_first_row_is_zero() {
    let rule = gauss_lobatto_rule(5).unwrap();
    let c = cumulative_matrix(&rule);
    for j in 0..5 {
        assert_eq!(c[(0, j)], 0.0);
    }
}

#[test]
fn uniform_mesh_tiles_domain() {
    let mesh = Mesh1D::uniform(0.0, 1.0, 7).unwrap();
    assert_eq!(mesh.cells(), 7);
    assert_eq!(mesh.edges[0], 0.0);
    assert_eq!(mesh.edges[7], 1.0);
    let total: f64 = (0..7).map(|k| mesh.width(k)).sum();
    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-15);
    for k in 0..7 {
        assert!(mesh.edges[k] < mesh.edges[k + 1]);
        assert_abs_diff_eq!(mesh.center(k), (mesh.edges[k] + mesh.edges[k + 1]) / 2.0);
    }
    assert!(mesh.min_width() > 0.0);
}

#[test]
fn mesh_rejects_bad_input() {
    assert!(Mesh1D::uniform(0.0, 1.0, 0).is_err());
    assert!(Mesh1D::uniform(1.0, 0.0, 4).is_err());
    assert!(Mesh1D::uniform(0.0, f64::NAN, 4).is_err());
}

#[test]
fn mesh_2d_indexing_is_row_major_in_y() {
    let mesh = build_mesh_2d(-3.0, 3.0, 4, -3.0, 3.0, 3).unwrap();
    assert_eq!(mesh.cells(), 12);
    assert_eq!(mesh.index(0, 0), 0);
    assert_eq!(mesh.index(3, 0), 3);
    assert_eq!(mesh.index(0, 1), 4);
    assert_eq!(mesh.index(3, 2), 11);
    assert_eq!(mesh.x.edges[0], -3.0);
    assert_eq!(mesh.y.edges[3], 3.0);
}

proptest! {
    #[test]
    fn mapped_weights_sum_to_cell_width(
        n in 2usize..=12,
        lo in -10.0f64..10.0,
        width in 1e-3f64..5.0,
    ) {
        let rule = gauss_lobatto_rule(n).unwrap();
        let hi = lo + width;
        let mapped = map_rule_to_cell(&rule, lo, hi);
        let wsum: f64 = mapped.weights.iter().sum();
        prop_assert!((wsum - width).abs() < 1e-12 * width.max(1.0));
        for x in &mapped.nodes {
            prop_assert!(*x >= lo - 1e-12 && *x <= hi + 1e-12);
        }
        for p in 1..n {
            prop_assert!(mapped.nodes[p] > mapped.nodes[p - 1]);
        }
    }

    #[test]
    fn mesh_edges_ascend_and_telescope(
        cells in 1usize..200,
        lo in -5.0f64..5.0,
        width in 1e-2f64..10.0,
    ) {
        let hi = lo + width;
        let mesh = Mesh1D::uniform(lo, hi, cells).unwrap();
        prop_assert_eq!(mesh.edges[0], lo);
        prop_assert_eq!(mesh.edges[cells], hi);
        let mut total = 0.0;
        for k in 0..cells {
            prop_assert!(mesh.edges[k + 1] > mesh.edges[k]);
            total += mesh.width(k);
        }
        prop_assert!((total - width).abs() <= 1e-12 * width.max(1.0));
    }

    #[test]
    fn linear_functions_integrate_exactly(
        n in 2usize..=12,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        lo in -2.0f64..2.0,
        width in 1e-2f64..3.0,
    ) {
        let rule = gauss_lobatto_rule(n).unwrap();
        let hi = lo + width;
        let got = integrate_on_cell(&rule, lo, hi, |x| a * x + b);
        let want = a * (hi * hi - lo * lo) / 2.0 + b * width;
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
}
