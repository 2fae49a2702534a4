use std::f64::consts::{FRAC_PI_2, PI};

use planar_search::cone_search::cone_prefactor;
use planar_search::hybrid::{
    combined_bound, cost_curve, crossover_speed, gamma_of_phi, gamma_sweep, hybrid_bound, hybrid_plan, invert_gamma,
};
use planar_search::spiral_core::unit_cost;

#[test]
fn balanced_cost_forms_agree() {
    for j in 0..200 {
        let phi = 0.005 + (PI - 0.01) * j as f64 / 199.0;
        let p = hybrid_plan(phi).unwrap();
        let alt = cone_prefactor(phi) * p.cone.f_phi / p.gamma;
        assert!((alt / p.wedge.r_phi - 1.0).abs() < 1e-9, "phi = {phi}");
        assert!(p.gamma > 0.0);
    }
}

#[test]
fn gamma_covers_the_useful_range() {
    let u1 = unit_cost(1);
    let threshold = (unit_cost(2) / u1).powi(2);
    let sweep = gamma_sweep(500).unwrap();
    let min = sweep.iter().map(|p| p.gamma).fold(f64::INFINITY, f64::min);
    let max = sweep.iter().map(|p| p.gamma).fold(f64::NEG_INFINITY, f64::max);
    assert!(min < 1.0 / u1 + 0.02);
    assert!(min > 1.0 / u1);
    assert!(max > threshold);
    // The smallest gamma approaches 1/U_1 as the cone closes.
    assert!(gamma_of_phi(1e-4).unwrap() - 1.0 / u1 < 1e-3);
    let increasing = sweep.windows(2).filter(|w| w[1].gamma > w[0].gamma).count();
    assert_eq!(increasing, sweep.len() - 1);
    assert!(sweep.iter().all(|p| p.phi < FRAC_PI_2));
}

#[test]
fn slow_agent_floor() {
    let u1 = unit_cost(1);
    for j in 0..50 {
        let c = 1e-4 + (1.0 / u1 - 1e-4) * j as f64 / 50.0;
        let p = combined_bound(c).unwrap();
        assert_eq!(p.combined, u1, "c = {c}");
    }
    assert!(invert_gamma(1e-4).is_none());
}

#[test]
fn hybrid_improves_between_thresholds() {
    let u1 = unit_cost(1);
    let cross = crossover_speed().unwrap();
    for j in 0..50 {
        let c = 0.06 + (cross - 0.001 - 0.06) * j as f64 / 49.0;
        let p = combined_bound(c).unwrap();
        assert!(p.combined < u1, "c = {c}");
        assert!(p.combined < p.spiral_bound);
    }
}

#[test]
fn crossover_straddle() {
    let cross = crossover_speed().unwrap();
    for j in 1..=25 {
        let d = 1e-4 * j as f64;
        let (below, _) = hybrid_bound(cross - d).unwrap();
        assert!(below < unit_cost(2) / (cross - d).sqrt());
        let (above, _) = hybrid_bound(cross + d).unwrap();
        assert!(above >= unit_cost(2) / (cross + d).sqrt());
    }
}

#[test]
fn curve_combined_never_above_spiral() {
    let curve = cost_curve(0.01, 1.0, 400).unwrap();
    assert_eq!(curve.len(), 400);
    assert_eq!(curve[399].c, 1.0);
    for p in &curve {
        assert!(p.combined <= p.spiral_bound);
        assert_eq!(p.hybrid_bound.is_some(), p.phi_used.is_some());
    }
}
