//! Two agents, one slow and one fast.
//!
//! The slow agent (speed `c`) bounces inside a cone of angle `phi` while the
//! unit-speed agent runs the shortcut spiral in the complementary wedge.
//! The cone angle is chosen so both halves cost the same, which happens when
//! `c = gamma(phi)`.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone_search::{cone_prefactor, minimize_cone, ConePlan};
use crate::scalar_num::{find_root, Bracket};
use crate::spiral_core::{participation_factor, unit_cost};
use crate::wedge_search::{minimize_wedge, WedgePlan};
use crate::{Result, SearchError};

/// Uniform cone angles scanned in `(0, pi/2)` when inverting `gamma`.
pub const GAMMA_GRID: usize = 2000;

/// Extra log-spaced cone angles below the first uniform one, where `gamma`
/// approaches `1 / U_1` steeply.
pub const GAMMA_FINE_POINTS: usize = 40;

/// Smallest cone angle considered for the inversion.
pub const GAMMA_MIN_PHI: f64 = 1e-4;

/// Largest accepted residual `|gamma(phi) - c|` after inversion.
pub const INVERSION_RESIDUAL: f64 = 1e-9;

/// Endpoints of the default `gamma` sweep.
pub const SWEEP_RANGE: (f64, f64) = (0.005, FRAC_PI_2 - 0.005);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridPlan {
    pub phi: f64,
    pub gamma: f64,
    pub cone: ConePlan,
    pub wedge: WedgePlan,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostCurvePoint {
    pub c: f64,
    pub spiral_bound: f64,
    pub hybrid_bound: Option<f64>,
    pub combined: f64,
    pub phi_used: Option<f64>,
}

/// Cone and wedge plans for one cone angle.
pub fn hybrid_plan(phi: f64) -> Result<HybridPlan> {
    let cone = minimize_cone(phi)?;
    let wedge = minimize_wedge(phi)?;
    Ok(HybridPlan {
        phi,
        gamma: cone.cost / wedge.r_phi,
        cone,
        wedge,
        cost: wedge.r_phi,
    })
}

/// Speed at which a bouncing agent in the cone matches the wedge cost.
pub fn gamma_of_phi(phi: f64) -> Result<f64> {
    Ok(hybrid_plan(phi)?.gamma)
}

struct GammaTable {
    phis: Vec<f64>,
    gammas: Vec<f64>,
}

fn gamma_table() -> &'static GammaTable {
    static TABLE: OnceLock<GammaTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let step = FRAC_PI_2 / GAMMA_GRID as f64;
        let ratio = step / GAMMA_MIN_PHI;
        let mut phis: Vec<f64> = (0..GAMMA_FINE_POINTS)
            .map(|i| GAMMA_MIN_PHI * ratio.powf(i as f64 / GAMMA_FINE_POINTS as f64))
            .collect();
        phis.extend((1..GAMMA_GRID).map(|j| step * j as f64));
        let gammas = phis
            .par_iter()
            .map(|&phi| gamma_of_phi(phi).expect("angles in (0, pi/2) are valid"))
            .collect();
        GammaTable { phis, gammas }
    })
}

/// Cone angle in `(0, pi/2)` with `gamma(phi) = c`.
///
/// Every sign change of `gamma - c` on the scan grid is refined; among the
/// roots the one with the smallest wedge cost wins. `None` when no scanned
/// angle brackets `c`.
pub fn invert_gamma(c: f64) -> Option<f64> {
    if !(c > 0.0 && c < 1.0) {
        return None;
    }
    let table = gamma_table();
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for j in 0..table.phis.len() - 1 {
        let (ga, gb) = (table.gammas[j] - c, table.gammas[j + 1] - c);
        let phi = if ga == 0.0 {
            table.phis[j]
        } else if ga.signum() == gb.signum() || gb == 0.0 {
            continue;
        } else {
            let bracket = Bracket::new(table.phis[j], table.phis[j + 1], 1e-15).ok()?;
            match find_root(|x| gamma_of_phi(x).map_or(f64::NAN, |g| g - c), &bracket) {
                Ok(x) => x,
                Err(e) => {
                    log::warn!("gamma inversion for c = {c} failed on a bracket: {e}");
                    continue;
                }
            }
        };
        let Ok(plan) = hybrid_plan(phi) else { continue };
        if (plan.gamma - c).abs() < INVERSION_RESIDUAL {
            roots.push((phi, plan.cost));
        } else {
            log::warn!("gamma inversion for c = {c} left residual {}", plan.gamma - c);
        }
    }
    if roots.len() > 1 {
        log::info!("gamma(phi) = {c} has {} solutions; keeping the cheapest", roots.len());
    }
    roots
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))
        .map(|(phi, _)| phi)
}

/// Hybrid cost for slow speed `c`, with the cone angle used.
pub fn hybrid_bound(c: f64) -> Option<(f64, f64)> {
    let phi = invert_gamma(c)?;
    let plan = hybrid_plan(phi).ok()?;
    Some((plan.cost, phi))
}

/// Best spiral cost for speeds `(1, c)`.
pub fn spiral_bound(c: f64) -> f64 {
    let threshold = participation_factor(1).expect("l = 1 is valid");
    if c <= threshold {
        unit_cost(1)
    } else {
        unit_cost(2) / c.sqrt()
    }
}

pub fn combined_bound(c: f64) -> Result<CostCurvePoint> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(SearchError::domain(format!("slow speed must lie in (0, 1], got {c}")));
    }
    let spiral = spiral_bound(c);
    let hybrid = hybrid_bound(c);
    let combined = match hybrid {
        Some((h, _)) if h < spiral => h,
        _ => spiral,
    };
    Ok(CostCurvePoint {
        c,
        spiral_bound: spiral,
        hybrid_bound: hybrid.map(|h| h.0),
        combined,
        phi_used: hybrid.map(|h| h.1),
    })
}

/// Combined bound on the log grid `c_min (c_max / c_min)^{i / steps}`,
/// `i = 1..=steps`.
pub fn cost_curve(c_min: f64, c_max: f64, steps: usize) -> Result<Vec<CostCurvePoint>> {
    if !(c_min > 0.0 && c_min < c_max && c_max <= 1.0) || steps == 0 {
        return Err(SearchError::domain(format!(
            "curve needs 0 < c_min < c_max <= 1 and steps >= 1, got ({c_min}, {c_max}, {steps})"
        )));
    }
    let ratio = c_max / c_min;
    (1..=steps)
        .into_par_iter()
        .map(|i| {
            let c = if i == steps {
                c_max
            } else {
                c_min * ratio.powf(i as f64 / steps as f64)
            };
            combined_bound(c)
        })
        .collect()
}

/// Slow speed above which two spiral agents beat the hybrid.
pub fn crossover_speed() -> Result<f64> {
    let gap = |c: f64| match hybrid_bound(c) {
        Some((h, _)) => h - unit_cost(2) / c.sqrt(),
        None => f64::NAN,
    };
    find_root(gap, &Bracket::new(0.2667, 0.30, 1e-13)?).map_err(|e| match e {
        SearchError::Bracket { .. } | SearchError::NonFinite { .. } => {
            SearchError::Consistency(format!("crossover speed not bracketed: {e}"))
        }
        other => other,
    })
}

/// `gamma` and both costs on `points` uniform angles over [`SWEEP_RANGE`].
pub fn gamma_sweep(points: usize) -> Result<Vec<HybridPlan>> {
    if points < 2 {
        return Err(SearchError::domain("sweep needs at least two points"));
    }
    let (lo, hi) = SWEEP_RANGE;
    (0..points)
        .into_par_iter()
        .map(|i| hybrid_plan(lo + (hi - lo) * i as f64 / (points - 1) as f64))
        .collect()
}

/// Cone cost at speed `c` written through `gamma`, equal to the wedge cost
/// when `c = gamma(phi)`.
pub fn cone_cost_at_speed(plan: &HybridPlan, c: f64) -> f64 {
    cone_prefactor(plan.phi) * plan.cone.f_phi / c
}
