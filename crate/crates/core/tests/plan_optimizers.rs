//! Minimizers checked against dense grid scans.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use planar_search::cone_search::{bouncing_cost, cone_objective, cone_prefactor, minimize_cone, THETA_MARGIN};
use planar_search::spiral_core::{length_factor, unit_cost};
use planar_search::wedge_search::{alpha_of_lambda, k_of_lambda, ln_wedge_cost, minimize_wedge, wedge_cost};
use proptest::prelude::*;

fn cone_grid_min(phi: f64, n: usize) -> f64 {
    let (lo, hi) = (phi + THETA_MARGIN, FRAC_PI_2 + 0.5 * phi - THETA_MARGIN);
    (0..n)
        .map(|i| cone_objective(phi, lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .fold(f64::INFINITY, f64::min)
}

fn wedge_grid_min(phi: f64, n: usize) -> f64 {
    // log-uniform in lambda - 1 over [1e-6, 1e3]
    (0..n)
        .map(|i| 1.0 + 10f64.powf(-6.0 + 9.0 * i as f64 / (n - 1) as f64))
        .map(|l| ln_wedge_cost(phi, l))
        .fold(f64::INFINITY, f64::min)
        .exp()
}

#[test]
fn cone_matches_million_point_grid() {
    for phi in [FRAC_PI_4, FRAC_PI_2] {
        let plan = minimize_cone(phi).unwrap();
        let grid = cone_grid_min(phi, 1_000_000);
        assert!(plan.f_phi <= grid * (1.0 + 1e-12));
        assert!((plan.f_phi - grid).abs() < 1e-8, "{phi}: {} vs {grid}", plan.f_phi);
    }
}

#[test]
fn cone_at_tiny_angle() {
    let phi = 1e-6;
    let plan = minimize_cone(phi).unwrap();
    let (lo, hi) = (phi + THETA_MARGIN, FRAC_PI_2 + 0.5 * phi - THETA_MARGIN);
    let grid = (0..100_000)
        .map(|i| lo + (hi - lo) * i as f64 / 99_999.0)
        .filter_map(|t| bouncing_cost(phi, t).ok())
        .fold(f64::INFINITY, f64::min);
    assert!(plan.cost < 1.01 * grid);
}

#[test]
fn cone_global_minimum_on_sweep() {
    for j in 0..200 {
        let phi = 0.01 + (PI - 0.02) * j as f64 / 199.0;
        let plan = minimize_cone(phi).unwrap();
        let grid = cone_grid_min(phi, 10_000);
        assert!(plan.f_phi <= grid * (1.0 + 1e-9), "phi = {phi}");
        assert!(plan.beta > 1.0);
        let alt = plan.alpha * plan.beta.powi(3) / (plan.beta - 1.0);
        assert!((plan.cost / alt - 1.0).abs() < 1e-10);
        assert!((plan.cost / (cone_prefactor(phi) * plan.f_phi) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn wedge_below_single_spiral_on_sweep() {
    let u1 = unit_cost(1);
    for j in 0..500 {
        let phi = 0.005 + (PI - 0.01) * j as f64 / 499.0;
        let plan = minimize_wedge(phi).unwrap();
        assert!(plan.r_phi < u1, "phi = {phi}: {}", plan.r_phi);
        assert!(plan.k_lambda > 0.0 && plan.k_lambda.is_finite());
    }
}

#[test]
fn wedge_matches_lambda_grid() {
    for phi in [0.05, FRAC_PI_4, 2.0, PI - 0.05, PI - 0.005] {
        let plan = minimize_wedge(phi).unwrap();
        let grid = wedge_grid_min(phi, 100_000);
        assert!(plan.r_phi <= grid * (1.0 + 1e-9), "phi = {phi}: {} vs {grid}", plan.r_phi);
    }
}

#[test]
fn wedge_cost_continuous_towards_pi() {
    let rs: Vec<f64> = (0..50).map(|j| minimize_wedge(PI - 0.5 + 0.49 * j as f64 / 49.0).unwrap().r_phi).collect();
    for w in rs.windows(2) {
        assert!((w[1] - w[0]).abs() < 0.05);
    }
}

#[test]
fn optimal_k_curve_is_finite() {
    for j in 0..100 {
        let phi = 0.005 + (PI - 0.01) * j as f64 / 99.0;
        let plan = minimize_wedge(phi).unwrap();
        let gap = (plan.k_lambda * phi).exp() - plan.lambda_star;
        assert!(gap.is_finite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wedge_dual_forms(phi in 0.01f64..3.1, lambda in 1.001f64..20.0) {
        let k = k_of_lambda(phi, lambda).unwrap();
        let a = alpha_of_lambda(phi, lambda);
        let direct = (lambda - 1.0) / (2.0 * lambda * (1.0 - phi.cos())).sqrt();
        prop_assert!((a - direct).abs() < 1e-12 * a.max(1.0));
        let alt = (2.0 * PI * k - lambda.ln()) / (2.0 * PI - phi);
        prop_assert!((a - alt).abs() < 1e-12 * a.max(1.0));
        let p = wedge_cost(phi, lambda).unwrap();
        prop_assert!(k > lambda.ln() / (2.0 * PI));
        if p.is_finite() {
            let chord = (lambda * lambda - 2.0 * lambda * phi.cos() + 1.0).sqrt();
            let form1 = chord / (lambda - 1.0) * (2.0 * PI * k).exp();
            let form2 = length_factor(a) * (2.0 * PI * k).exp();
            prop_assert!((form1 / p - 1.0).abs() < 1e-10);
            prop_assert!((form2 / p - 1.0).abs() < 1e-10);
        }
    }
}
