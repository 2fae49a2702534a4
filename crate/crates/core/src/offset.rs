//! Off-Set spirals for agents of different speeds.
//!
//! The `nu` fastest agents follow copies of one logarithmic spiral with
//! expansion factor `k`, each shifted by a phase chosen so that every agent
//! has the same worst-case cost. Agent `i` reaches parameter `t` at time
//! `A(k) e^{kt}` while sitting at `<c_i e^{kt}, t + phi_i>`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::spiral_core::{kappa_n, length_factor, ln_length_factor, participation_factor, unit_cost};
use crate::{Result, SearchError};

/// Slowest accepted speed relative to the fastest agent.
pub const MIN_SPEED: f64 = 1e-12;

/// Validated agent speeds: sorted non-increasing, leading speed exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedProfile {
    speeds: Vec<f64>,
    // ln_prefix[l] = sum of ln c_i for i < l
    ln_prefix: Vec<f64>,
}

impl SpeedProfile {
    /// Sorts (with a warning when the input was unordered) and normalizes by
    /// the fastest speed.
    pub fn new(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(SearchError::domain("speed profile is empty"));
        }
        if let Some(bad) = raw.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(SearchError::domain(format!("speeds must be finite and positive, got {bad}")));
        }
        let mut speeds = raw.to_vec();
        if speeds.windows(2).any(|w| w[0] < w[1]) {
            log::warn!("speed profile was not non-increasing; sorting it");
            speeds.sort_by(|a, b| b.total_cmp(a));
        }
        let top = speeds[0];
        for c in speeds.iter_mut() {
            *c /= top;
        }
        speeds[0] = 1.0;
        if let Some(slow) = speeds.iter().find(|c| **c < MIN_SPEED) {
            return Err(SearchError::domain(format!(
                "relative speed {slow} is below the supported minimum {MIN_SPEED}"
            )));
        }
        let mut ln_prefix = Vec::with_capacity(speeds.len() + 1);
        ln_prefix.push(0.0);
        let mut acc = 0.0;
        for c in &speeds {
            acc += c.ln();
            ln_prefix.push(acc);
        }
        Ok(Self { speeds, ln_prefix })
    }

    /// `n` agents of unit speed.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(&vec![1.0; n])
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn len(&self) -> usize {
        self.speeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speeds.is_empty()
    }

    fn ln_geometric_mean(&self, l: usize) -> f64 {
        if l == 0 {
            0.0
        } else {
            self.ln_prefix[l] / l as f64
        }
    }
}

/// Parameters of an Off-Set spiral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetPlan {
    pub speeds: Vec<f64>,
    /// Index of the slowest participating agent.
    pub mu: usize,
    /// Number of participating agents, `mu + 1`.
    pub nu: usize,
    pub k: f64,
    /// `phases[0] = 2 pi` down to `phases[nu] = 0`.
    pub phases: Vec<f64>,
    pub predicted_cost: f64,
}

/// The three forms of the participation test for the slowest chosen agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParticipationCheck {
    /// `c_{nu-1} >= e^{-2 pi k / nu} G_nu`
    pub exponential: bool,
    /// `c_{nu-1} >= e^{-2 pi k / (nu-1)} G_{nu-1}`, vacuous when `nu = 1`
    pub alternate: bool,
    /// `c_{nu-1} >= p_{nu-1} G_{nu-1}`, vacuous when `nu = 1`
    pub threshold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentCostBreakdown {
    /// Entry `i` is the cost of agent `(i + 1) mod nu`.
    pub per_agent: Vec<f64>,
}

impl AgentCostBreakdown {
    pub fn spread(&self) -> f64 {
        let max = self.per_agent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.per_agent.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// Radii `(lo, hi]` on ray 0 first exposed by `agent` in period `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExposureInterval {
    pub agent: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Geometric mean of the first `l` speeds; 1 for `l = 0`.
pub fn geometric_mean(profile: &SpeedProfile, l: usize) -> Result<f64> {
    if l > profile.len() {
        return Err(SearchError::domain(format!(
            "geometric mean over {l} agents requested from a profile of {}",
            profile.len()
        )));
    }
    Ok(profile.ln_geometric_mean(l).exp())
}

fn ln_unit_over_mean(profile: &SpeedProfile, i: usize) -> f64 {
    let k = kappa_n(i as u64).expect("i >= 1");
    ln_length_factor(k) + 2.0 * PI * k / i as f64 - profile.ln_geometric_mean(i)
}

/// Number of participants minimizing `U_i / G_i`, ties going to more agents.
fn best_participant_count(profile: &SpeedProfile) -> usize {
    let mut best = 1;
    let mut best_value = f64::INFINITY;
    for i in 1..=profile.len() {
        let v = ln_unit_over_mean(profile, i);
        if v <= best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

/// Upper bound `min_i U_i / G_i` on the cost of the profile.
pub fn spiral_upper_bound(profile: &SpeedProfile) -> f64 {
    let nu = best_participant_count(profile);
    unit_cost(nu as u64) / profile.ln_geometric_mean(nu).exp()
}

/// Evaluates the participation test for the slowest of `nu` agents.
pub fn participation_check(profile: &SpeedProfile, nu: usize) -> Result<ParticipationCheck> {
    if nu == 0 || nu > profile.len() {
        return Err(SearchError::domain(format!(
            "participant count {nu} outside 1..={}",
            profile.len()
        )));
    }
    let k = kappa_n(nu as u64)?;
    let ln_c = profile.speeds[nu - 1].ln();
    let exponential = ln_c >= -2.0 * PI * k / nu as f64 + profile.ln_geometric_mean(nu);
    let (alternate, threshold) = if nu == 1 {
        (true, true)
    } else {
        let l = nu - 1;
        let ln_g = profile.ln_geometric_mean(l);
        (
            ln_c >= -2.0 * PI * k / l as f64 + ln_g,
            ln_c >= participation_factor(l as u64)?.ln() + ln_g,
        )
    };
    Ok(ParticipationCheck {
        exponential,
        alternate,
        threshold,
    })
}

/// Chooses the participants, expansion factor and phases.
pub fn select_parameters(profile: &SpeedProfile) -> Result<OffsetPlan> {
    if profile.is_empty() {
        return Err(SearchError::domain("speed profile is empty"));
    }
    let nu = best_participant_count(profile);
    let k = kappa_n(nu as u64)?;
    let ln_g_nu = profile.ln_geometric_mean(nu);

    let mut phases: Vec<f64> = (0..=nu)
        .map(|j| {
            let base = 2.0 * PI * (nu - j) as f64 / nu as f64;
            base - (j as f64 / k) * (profile.ln_geometric_mean(j) - ln_g_nu)
        })
        .collect();
    phases[0] = 2.0 * PI;
    phases[nu] = 0.0;

    let plan = OffsetPlan {
        speeds: profile.speeds.clone(),
        mu: nu - 1,
        nu,
        k,
        phases,
        predicted_cost: unit_cost(nu as u64) / ln_g_nu.exp(),
    };

    let check = participation_check(profile, nu)?;
    if check.exponential != check.alternate {
        log::warn!("participation test forms disagree for nu = {nu}: {check:?}");
    }
    if !check.exponential {
        return Err(SearchError::Consistency(format!(
            "selected agent {} fails the participation test",
            nu - 1
        )));
    }
    validate_plan(&plan, profile)?;
    Ok(plan)
}

/// Checks phase ordering and the exposure condition of every consecutive pair.
pub fn validate_plan(plan: &OffsetPlan, profile: &SpeedProfile) -> Result<()> {
    check_shapes(plan, profile)?;
    let nu = plan.nu;
    if plan.phases[0] != 2.0 * PI || plan.phases[nu] != 0.0 {
        return Err(SearchError::Consistency("phases must run from 2 pi down to 0".into()));
    }
    if let Some(j) = (0..nu).find(|&j| plan.phases[j] < plan.phases[j + 1]) {
        return Err(SearchError::Consistency(format!("phases increase at index {j}")));
    }
    for i in 0..nu {
        let lhs = speed_at(profile, nu, i).ln() - plan.k * plan.phases[i];
        let rhs = speed_at(profile, nu, i + 1).ln() - plan.k * plan.phases[i + 1];
        // A tie in the participant choice leaves one interval empty.
        if lhs > rhs + 1e-12 * rhs.abs().max(1.0) {
            return Err(SearchError::Consistency(format!(
                "exposure condition fails between agents {i} and {}",
                (i + 1) % nu
            )));
        }
        if lhs >= rhs {
            log::warn!("agent {} exposes an empty interval", (i + 1) % nu);
        }
    }
    Ok(())
}

fn check_shapes(plan: &OffsetPlan, profile: &SpeedProfile) -> Result<()> {
    if plan.nu == 0 || plan.nu > profile.len() || plan.phases.len() != plan.nu + 1 || plan.mu + 1 != plan.nu {
        return Err(SearchError::domain(format!(
            "plan with nu = {} and {} phases does not fit a profile of {} agents",
            plan.nu,
            plan.phases.len(),
            profile.len()
        )));
    }
    if plan.speeds.len() != profile.len() {
        return Err(SearchError::domain("plan and profile list different numbers of agents"));
    }
    Ok(())
}

// c_nu is identified with c_0 = 1.
fn speed_at(profile: &SpeedProfile, nu: usize, i: usize) -> f64 {
    profile.speeds[i % nu]
}

/// Worst-case cost of each participating agent.
pub fn agent_costs(plan: &OffsetPlan, profile: &SpeedProfile) -> Result<AgentCostBreakdown> {
    check_shapes(plan, profile)?;
    let a = length_factor(plan.k);
    let per_agent = (0..plan.nu)
        .map(|i| a / profile.speeds[i] * (plan.k * (plan.phases[i] - plan.phases[i + 1])).exp())
        .collect();
    Ok(AgentCostBreakdown { per_agent })
}

/// Radial intervals on ray 0 exposed during period `s`, in increasing order.
/// Together they tile `(e^{2 pi k (s-1)}, e^{2 pi k s}]`.
pub fn exposure_intervals(plan: &OffsetPlan, profile: &SpeedProfile, s: i64) -> Result<Vec<ExposureInterval>> {
    check_shapes(plan, profile)?;
    let nu = plan.nu;
    let shift = 2.0 * PI * plan.k * s as f64;
    let edge = |i: usize| (speed_at(profile, nu, i).ln() + shift - plan.k * plan.phases[i]).exp();
    Ok((0..nu)
        .map(|i| ExposureInterval {
            agent: (i + 1) % nu,
            lo: edge(i),
            hi: edge(i + 1),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(s: &[f64]) -> SpeedProfile {
        SpeedProfile::new(s).unwrap()
    }

    #[test]
    fn geometric_means() {
        let ones = SpeedProfile::uniform(5).unwrap();
        for l in 0..=5 {
            assert!((geometric_mean(&ones, l).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((geometric_mean(&profile(&[1.0, 0.25]), 2).unwrap() - 0.5).abs() < 1e-15);
        let g = geometric_mean(&profile(&[1.0, 0.9, 0.2]), 3).unwrap();
        assert!((g - 0.18f64.cbrt()).abs() < 1e-14);
        assert!((g - 0.564622).abs() < 5e-7);
        assert!(geometric_mean(&ones, 6).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(SpeedProfile::new(&[]).is_err());
        assert!(SpeedProfile::new(&[1.0, 0.0]).is_err());
        assert!(SpeedProfile::new(&[1.0, -0.5]).is_err());
        assert!(SpeedProfile::new(&[1.0, f64::NAN]).is_err());
        assert!(SpeedProfile::new(&[1.0, 1e-13]).is_err());
        let p = profile(&[0.5, 2.0, 1.0]);
        assert_eq!(p.speeds(), &[1.0, 0.5, 0.25]);
    }

    #[test]
    fn uniform_profile_reduces_to_unit_spiral() {
        for n in 1..=8 {
            let p = SpeedProfile::uniform(n).unwrap();
            let plan = select_parameters(&p).unwrap();
            assert_eq!(plan.nu, n);
            for (j, phi) in plan.phases.iter().enumerate() {
                assert!((phi - 2.0 * PI * (n - j) as f64 / n as f64).abs() < 1e-12);
            }
            assert!((plan.predicted_cost / unit_cost(n as u64) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_speed_threshold() {
        let u1 = unit_cost(1);
        let u2 = unit_cost(2);
        let below = select_parameters(&profile(&[1.0, 0.26])).unwrap();
        assert_eq!(below.nu, 1);
        assert!((below.predicted_cost - u1).abs() < 1e-12);
        let above = select_parameters(&profile(&[1.0, 0.27])).unwrap();
        assert_eq!(above.nu, 2);
        assert!((above.predicted_cost - u2 / 0.27f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn three_speed_example() {
        let p = profile(&[1.0, 0.9, 0.2]);
        let plan = select_parameters(&p).unwrap();
        assert_eq!(plan.nu, 2);
        assert_eq!(plan.mu, 1);
        // Direct arithmetic on U_i / G_i.
        let direct: Vec<f64> = (1..=3)
            .map(|i| unit_cost(i as u64) / geometric_mean(&p, i).unwrap())
            .collect();
        assert!(direct[1] < direct[0] && direct[1] < direct[2]);
        assert!((plan.predicted_cost - direct[1]).abs() < 1e-12);
        assert!((plan.predicted_cost - 9.4116).abs() < 5e-4);
    }

    #[test]
    fn upper_bound_examples() {
        assert!((spiral_upper_bound(&SpeedProfile::uniform(3).unwrap()) - 6.22135).abs() < 5e-5);
        assert!((spiral_upper_bound(&profile(&[1.0, 0.5])) - 8.928_516_954_106_769 / 0.5f64.sqrt()).abs() < 1e-10);
        assert!((spiral_upper_bound(&profile(&[1.0, 1e-6])) - 17.28935).abs() < 5e-5);
    }

    #[test]
    fn agent_costs_equalize() {
        let p = profile(&[1.0, 0.9]);
        let plan = select_parameters(&p).unwrap();
        let costs = agent_costs(&plan, &p).unwrap();
        assert!(costs.spread() <= 1.0 + 1e-9);
        let product: f64 = costs.per_agent.iter().product();
        let a = length_factor(plan.k);
        let expected = a * a * (2.0 * PI * plan.k).exp() / 0.9;
        assert!((product / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_agent_costs() {
        let p = SpeedProfile::uniform(4).unwrap();
        let plan = select_parameters(&p).unwrap();
        for c in agent_costs(&plan, &p).unwrap().per_agent {
            assert!((c / unit_cost(4) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn agent_costs_reject_mismatch() {
        let plan = select_parameters(&SpeedProfile::uniform(3).unwrap()).unwrap();
        assert!(agent_costs(&plan, &SpeedProfile::uniform(2).unwrap()).is_err());
    }

    #[test]
    fn two_agent_intervals() {
        let p = SpeedProfile::uniform(2).unwrap();
        let plan = select_parameters(&p).unwrap();
        let k = plan.k;
        let iv = exposure_intervals(&plan, &p, 0).unwrap();
        assert_eq!(iv.len(), 2);
        assert_eq!(iv[0].agent, 1);
        assert!((iv[0].lo - (-2.0 * PI * k).exp()).abs() < 1e-15);
        assert!((iv[0].hi - (-PI * k).exp()).abs() < 1e-15);
        assert_eq!(iv[1].agent, 0);
        assert!((iv[1].hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn intervals_tile_one_period() {
        let p = profile(&[1.0, 0.8, 0.7, 0.65]);
        let plan = select_parameters(&p).unwrap();
        for s in -2..=2 {
            let iv = exposure_intervals(&plan, &p, s).unwrap();
            let period = 2.0 * PI * plan.k;
            assert!((iv[0].lo / (period * (s - 1) as f64).exp() - 1.0).abs() < 1e-12);
            assert!((iv.last().unwrap().hi / (period * s as f64).exp() - 1.0).abs() < 1e-12);
            for w in iv.windows(2) {
                assert_eq!(w[0].hi, w[1].lo);
                assert!(w[0].lo < w[0].hi);
            }
        }
    }

    #[test]
    fn participation_forms_agree() {
        for raw in [[1.0, 0.9, 0.2], [1.0, 0.5, 0.45], [1.0, 1.0, 1.0]] {
            let p = profile(&raw);
            for nu in 1..=3 {
                let c = participation_check(&p, nu).unwrap();
                assert_eq!(c.exponential, c.alternate, "{raw:?} nu = {nu}");
            }
        }
    }
}
