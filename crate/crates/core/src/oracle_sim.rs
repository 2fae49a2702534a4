//! Brute-force worst-case cost of concrete trajectories.
//!
//! Every agent is described as a path made of line segments and exact
//! logarithmic-spiral pieces, preceded by an analytic tail standing in for
//! the infinitely many turns near the origin. For a ray the oracle lists the
//! points where each agent crosses it, in path order, and a target at radius
//! `x` is exposed at the first crossing with radius at least `x`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::cone_search::ConePlan;
use crate::hybrid::{hybrid_plan, invert_gamma, HybridPlan};
use crate::offset::{select_parameters, validate_plan, OffsetPlan, SpeedProfile};
use crate::spiral_core::length_factor;
use crate::wedge_search::WedgePlan;
use crate::{Polar, Result, SearchError};

/// Relative offset of the probes placed on both sides of every crossing.
pub const PROBE_OFFSET: f64 = 1e-9;

/// Relative slack when comparing a crossing radius with a target radius.
const RADIUS_SLACK: f64 = 1e-12;

/// Relative size of the neglected path before the first simulated piece.
const TAIL_FRACTION: f64 = 1e-9;

const ENDPOINT_SLACK: f64 = 1e-12;

const REFINE_LEVELS: u32 = 2;
const REFINE_STEPS: i32 = 10;

/// Targets on `angles` uniform rays and `radii` log-uniform radii spanning
/// one period of the strategy, multiplied by `base_period_scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetGrid {
    pub angles: usize,
    pub radii: usize,
    pub base_period_scale: f64,
}

impl TargetGrid {
    pub fn new(angles: usize, radii: usize) -> Result<Self> {
        Self::with_scale(angles, radii, 1.0)
    }

    pub fn with_scale(angles: usize, radii: usize, base_period_scale: f64) -> Result<Self> {
        if angles < 8 || radii < 8 {
            return Err(SearchError::domain(format!(
                "target grid needs at least 8 angles and 8 radii, got {angles} x {radii}"
            )));
        }
        if !(base_period_scale > 0.0 && base_period_scale.is_finite()) {
            return Err(SearchError::domain(format!(
                "period scale must be positive, got {base_period_scale}"
            )));
        }
        Ok(Self {
            angles,
            radii,
            base_period_scale,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalReport {
    pub strategy_id: String,
    pub grid: TargetGrid,
    pub empirical_cost: f64,
    pub analytic_cost: f64,
    /// `(analytic - empirical) / analytic`
    pub relative_gap: f64,
    pub worst_target: Polar,
}

impl EmpiricalReport {
    /// The grid may only undershoot the analytic supremum.
    pub fn undershoots(&self) -> bool {
        self.empirical_cost <= self.analytic_cost * (1.0 + 1e-9)
    }
}

/// One piece of a path. Spiral points are `<e^{alpha t + beta}, t>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Segment { from: [f64; 2], to: [f64; 2] },
    Spiral { alpha: f64, beta: f64, t0: f64, t1: f64 },
}

impl Piece {
    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment { from, to } => (to[0] - from[0]).hypot(to[1] - from[1]),
            Piece::Spiral { alpha, beta, t0, t1 } => {
                length_factor(alpha) * ((alpha * t1 + beta).exp() - (alpha * t0 + beta).exp())
            }
        }
    }

    /// Crossings of the ray at angle `psi` as `(radius, length from the
    /// piece start)`, in path order.
    fn crossings(&self, psi: f64, out: &mut Vec<(f64, f64)>) {
        match *self {
            Piece::Segment { from, to } => {
                let d = [psi.cos(), psi.sin()];
                let e = [to[0] - from[0], to[1] - from[1]];
                let denom = cross(e, d);
                if denom == 0.0 {
                    return;
                }
                // Shared endpoints of consecutive segments must not slip
                // through rounding on both sides.
                let u = -cross(from, d) / denom;
                if !(-ENDPOINT_SLACK..=1.0 + ENDPOINT_SLACK).contains(&u) {
                    return;
                }
                let u = u.clamp(0.0, 1.0);
                let p = [from[0] + u * e[0], from[1] + u * e[1]];
                let r = p[0] * d[0] + p[1] * d[1];
                if r > 0.0 {
                    out.push((r, u * e[0].hypot(e[1])));
                }
            }
            Piece::Spiral { alpha, beta, t0, t1 } => {
                let start = (alpha * t0 + beta).exp();
                let mut t = psi + 2.0 * PI * ((t0 - psi) / (2.0 * PI)).ceil();
                while t <= t1 {
                    let r = (alpha * t + beta).exp();
                    out.push((r, length_factor(alpha) * (r - start)));
                    t += 2.0 * PI;
                }
            }
        }
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// A path travelled at constant speed.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pieces: Vec<Piece>,
    /// Path length at the start of each piece, tail included.
    starts: Vec<f64>,
    pub speed: f64,
}

impl Trajectory {
    /// `tail` is the exact length of everything travelled before the first piece.
    pub fn new(pieces: Vec<Piece>, tail: f64, speed: f64) -> Result<Self> {
        if !(speed > 0.0) {
            return Err(SearchError::domain(format!("agent speed must be positive, got {speed}")));
        }
        let mut starts = Vec::with_capacity(pieces.len());
        let mut acc = tail;
        for p in &pieces {
            starts.push(acc);
            acc += p.length();
        }
        Ok(Self { pieces, starts, speed })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Crossings of ray `psi` as `(radius, time)` in path order.
    pub fn crossings(&self, psi: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut local = Vec::new();
        for (piece, start) in self.pieces.iter().zip(&self.starts) {
            local.clear();
            piece.crossings(psi, &mut local);
            out.extend(local.iter().map(|&(r, l)| (r, (start + l) / self.speed)));
        }
        out
    }
}

/// Crossings of one ray by every agent.
#[derive(Debug, Clone)]
pub struct RayExposure {
    pub angle: f64,
    // Per agent: (running max radius, time) in path order.
    agents: Vec<Vec<(f64, f64)>>,
    radii: Vec<f64>,
}

impl RayExposure {
    pub fn new(angle: f64, trajectories: &[Trajectory]) -> Self {
        let mut radii = Vec::new();
        let agents = trajectories
            .iter()
            .map(|traj| {
                let mut running = 0.0_f64;
                traj.crossings(angle)
                    .into_iter()
                    .map(|(r, time)| {
                        radii.push(r);
                        running = running.max(r);
                        (running, time)
                    })
                    .collect()
            })
            .collect();
        radii.sort_by(f64::total_cmp);
        Self { angle, agents, radii }
    }

    /// Every crossing radius on this ray, ascending.
    pub fn crossing_radii(&self) -> &[f64] {
        &self.radii
    }

    /// Earliest time any agent exposes the target at radius `x`.
    pub fn exposure_time(&self, x: f64) -> Result<f64> {
        let need = x * (1.0 - RADIUS_SLACK);
        self.agents
            .iter()
            .filter_map(|list| {
                let idx = list.partition_point(|&(running, _)| running < need);
                list.get(idx).map(|&(_, time)| time)
            })
            .min_by(f64::total_cmp)
            .ok_or(SearchError::Horizon {
                radius: x,
                angle: self.angle,
            })
    }
}

/// A trajectory family with a known analytic worst-case cost.
pub trait SearchStrategy: Sync {
    fn id(&self) -> String;
    /// Target angles `[lo, hi)`.
    fn angular_domain(&self) -> (f64, f64);
    /// Radii `(lo, hi]` of one multiplicative period.
    fn period(&self) -> (f64, f64);
    fn analytic_cost(&self) -> f64;
    /// Agents whose crossings cover targets with radii in `[r_min, r_max]`.
    fn agents(&self, r_min: f64, r_max: f64) -> Result<Vec<Trajectory>>;
}

/// Off-Set spiral, including the unit-speed case.
#[derive(Debug, Clone)]
pub struct OffsetStrategy {
    pub plan: OffsetPlan,
    pub profile: SpeedProfile,
    uniform: bool,
}

impl OffsetStrategy {
    pub fn new(profile: SpeedProfile) -> Result<Self> {
        let plan = select_parameters(&profile)?;
        Ok(Self {
            plan,
            profile,
            uniform: false,
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let mut s = Self::new(SpeedProfile::uniform(n)?)?;
        s.uniform = true;
        Ok(s)
    }

    pub fn from_plan(plan: OffsetPlan, profile: SpeedProfile) -> Result<Self> {
        validate_plan(&plan, &profile)?;
        Ok(Self {
            plan,
            profile,
            uniform: false,
        })
    }
}

impl SearchStrategy for OffsetStrategy {
    fn id(&self) -> String {
        if self.uniform {
            format!("uniform-{}", self.profile.len())
        } else {
            "offset".into()
        }
    }

    fn angular_domain(&self) -> (f64, f64) {
        (0.0, 2.0 * PI)
    }

    fn period(&self) -> (f64, f64) {
        ((-2.0 * PI * self.plan.k).exp(), 1.0)
    }

    fn analytic_cost(&self) -> f64 {
        self.plan.predicted_cost
    }

    fn agents(&self, r_min: f64, r_max: f64) -> Result<Vec<Trajectory>> {
        let k = self.plan.k;
        let turn = 2.0 * PI * k;
        (0..self.plan.nu)
            .map(|i| {
                let c = self.profile.speeds()[i];
                let phase = self.plan.phases[i];
                // Radius c e^{k (u - phase)} at angle u.
                let beta = c.ln() - k * phase;
                let u0 = ((r_min * TAIL_FRACTION).ln() - beta) / k;
                let u1 = (r_max.ln() + 2.0 * turn - beta) / k;
                let piece = Piece::Spiral {
                    alpha: k,
                    beta,
                    t0: u0,
                    t1: u1,
                };
                let tail = length_factor(k) * (k * u0 + beta).exp();
                Trajectory::new(vec![piece], tail, c)
            })
            .collect()
    }
}

/// Bouncing trajectory in a cone, at any speed.
#[derive(Debug, Clone)]
pub struct ConeStrategy {
    pub plan: ConePlan,
    pub speed: f64,
}

impl ConeStrategy {
    pub fn new(plan: ConePlan) -> Self {
        Self { plan, speed: 1.0 }
    }

    fn trajectory(&self, r_min: f64, r_max: f64) -> Result<Trajectory> {
        let ln_b = self.plan.beta.ln();
        let lead = (self.plan.alpha * self.plan.beta / (self.plan.beta - 1.0)).ln();
        let i_min = (((r_min * TAIL_FRACTION).ln() - lead) / ln_b).floor() as i64;
        let i_max = (r_max.ln() / ln_b).ceil() as i64 + 4;
        let pieces = (i_min..i_max)
            .map(|i| Piece::Segment {
                from: self.plan.vertex(i).to_cartesian(),
                to: self.plan.vertex(i + 1).to_cartesian(),
            })
            .collect();
        Trajectory::new(pieces, self.plan.path_length_to(i_min), self.speed)
    }
}

impl SearchStrategy for ConeStrategy {
    fn id(&self) -> String {
        "cone".into()
    }

    fn angular_domain(&self) -> (f64, f64) {
        (0.0, self.plan.phi)
    }

    fn period(&self) -> (f64, f64) {
        (1.0, self.plan.beta * self.plan.beta)
    }

    fn analytic_cost(&self) -> f64 {
        self.plan.cost / self.speed
    }

    fn agents(&self, r_min: f64, r_max: f64) -> Result<Vec<Trajectory>> {
        Ok(vec![self.trajectory(r_min, r_max)?])
    }
}

/// Shortcut spiral in the complement of a cone.
#[derive(Debug, Clone)]
pub struct WedgeStrategy {
    pub plan: WedgePlan,
}

impl WedgeStrategy {
    pub fn new(plan: WedgePlan) -> Self {
        Self { plan }
    }

    fn trajectory(&self, r_min: f64, r_max: f64) -> Result<Trajectory> {
        let p = &self.plan;
        let turn = 2.0 * PI * p.k_lambda;
        let e = turn.exp();
        let lead = (p.period_length(0) / (e - 1.0)).ln();
        let s_min = (((r_min * TAIL_FRACTION).ln() - lead) / turn).floor() as i64;
        let s_max = (r_max.ln() / turn).ceil() as i64 + 2;
        let mut pieces = Vec::with_capacity(2 * (s_max - s_min + 1) as usize);
        for s in s_min..=s_max {
            let base = turn * s as f64;
            pieces.push(Piece::Segment {
                from: Polar::new(base.exp(), 0.0).to_cartesian(),
                to: Polar::new(p.lambda_star * base.exp(), p.phi).to_cartesian(),
            });
            pieces.push(Piece::Spiral {
                alpha: p.alpha_lambda,
                beta: p.spiral_offset(s),
                t0: p.phi,
                t1: 2.0 * PI,
            });
        }
        let tail = p.period_length(0) * (turn * s_min as f64).exp() / (e - 1.0);
        Trajectory::new(pieces, tail, 1.0)
    }
}

impl SearchStrategy for WedgeStrategy {
    fn id(&self) -> String {
        "wedge".into()
    }

    fn angular_domain(&self) -> (f64, f64) {
        (self.plan.phi, 2.0 * PI)
    }

    fn period(&self) -> (f64, f64) {
        (1.0, self.plan.period_ratio())
    }

    fn analytic_cost(&self) -> f64 {
        self.plan.r_phi
    }

    fn agents(&self, r_min: f64, r_max: f64) -> Result<Vec<Trajectory>> {
        Ok(vec![self.trajectory(r_min, r_max)?])
    }
}

/// Slow agent bouncing in the cone plus unit-speed agent in the wedge.
#[derive(Debug, Clone)]
pub struct HybridStrategy {
    pub plan: HybridPlan,
    pub speed: f64,
}

impl HybridStrategy {
    /// Hybrid for slow speed `c`, with the cone angle from the inversion.
    pub fn new(c: f64) -> Result<Self> {
        let phi = invert_gamma(c).ok_or_else(|| {
            SearchError::domain(format!("no cone angle in (0, pi/2) balances slow speed {c}"))
        })?;
        Ok(Self {
            plan: hybrid_plan(phi)?,
            speed: c,
        })
    }

    fn cone(&self) -> ConeStrategy {
        ConeStrategy {
            plan: self.plan.cone,
            speed: self.speed,
        }
    }
}

impl SearchStrategy for HybridStrategy {
    fn id(&self) -> String {
        "hybrid".into()
    }

    fn angular_domain(&self) -> (f64, f64) {
        (0.0, 2.0 * PI)
    }

    fn period(&self) -> (f64, f64) {
        // Covers a full period of both agents.
        let b2 = self.plan.cone.beta * self.plan.cone.beta;
        (1.0, b2.max(self.plan.wedge.period_ratio()))
    }

    fn analytic_cost(&self) -> f64 {
        (self.plan.cone.cost / self.speed).max(self.plan.wedge.r_phi)
    }

    fn agents(&self, r_min: f64, r_max: f64) -> Result<Vec<Trajectory>> {
        Ok(vec![
            self.cone().trajectory(r_min, r_max)?,
            WedgeStrategy::new(self.plan.wedge).trajectory(r_min, r_max)?,
        ])
    }
}

/// Closed-form earliest exposure of `target` by an Off-Set team.
pub fn offset_exposure_time(plan: &OffsetPlan, profile: &SpeedProfile, target: Polar) -> Result<f64> {
    if !(target.radius > 0.0) {
        return Err(SearchError::domain(format!("target radius must be positive, got {}", target.radius)));
    }
    if plan.nu == 0 || plan.nu > profile.len() || plan.phases.len() != plan.nu + 1 {
        return Err(SearchError::domain("plan does not fit the profile"));
    }
    let k = plan.k;
    let best = (0..plan.nu)
        .map(|i| {
            let c = profile.speeds()[i];
            let base = target.angle - plan.phases[i];
            let t_min = (target.radius / c).ln() / k;
            let mut t = base + 2.0 * PI * ((t_min - base) / (2.0 * PI)).ceil();
            if c * (k * t).exp() < target.radius * (1.0 - RADIUS_SLACK) {
                t += 2.0 * PI;
            }
            length_factor(k) * (k * t).exp()
        })
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

/// Earliest exposure of `target` by a single trajectory.
pub fn polyline_exposure_time(traj: &Trajectory, target: Polar) -> Result<f64> {
    RayExposure::new(target.angle, std::slice::from_ref(traj)).exposure_time(target.radius)
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    value: f64,
    angle: f64,
    radius: f64,
}

// Larger value first, then smaller angle, then smaller radius.
fn rank(a: &Sample, b: &Sample) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(b.angle.total_cmp(&a.angle))
        .then(b.radius.total_cmp(&a.radius))
}

fn best_of(samples: impl Iterator<Item = Sample>) -> Option<Sample> {
    samples.max_by(rank)
}

/// Worst normalized cost on one ray over the given radii, plus probes around
/// every crossing inside `[lo, hi]`.
fn worst_on_ray(ray: &RayExposure, radii: &[f64], lo: f64, hi: f64) -> Result<Option<Sample>> {
    let probes = ray
        .crossing_radii()
        .iter()
        .filter(|&&r| r >= lo && r <= hi)
        .flat_map(|&r| [r * (1.0 - PROBE_OFFSET), r * (1.0 + PROBE_OFFSET)]);
    let mut best: Option<Sample> = None;
    for x in radii.iter().copied().chain(probes) {
        let s = Sample {
            value: ray.exposure_time(x)? / x,
            angle: ray.angle,
            radius: x,
        };
        if best.map_or(true, |b| rank(&s, &b) == Ordering::Greater) {
            best = Some(s);
        }
    }
    Ok(best)
}

/// Maximum of (earliest exposure time) / (target radius) over the grid,
/// followed by two finer passes around the worst target.
pub fn empirical_search_cost(strategy: &dyn SearchStrategy, grid: &TargetGrid) -> Result<EmpiricalReport> {
    let (a_lo, a_hi) = strategy.angular_domain();
    let (p_lo, p_hi) = strategy.period();
    let scale = grid.base_period_scale;
    let (r_lo, r_hi) = (p_lo * scale, p_hi * scale);
    let step_ratio = (p_hi / p_lo).powf(1.0 / grid.radii as f64);
    let agents = strategy.agents(r_lo / (step_ratio * step_ratio), r_hi * step_ratio * step_ratio)?;

    let radii: Vec<f64> = (1..=grid.radii)
        .map(|j| {
            if j == grid.radii {
                r_hi
            } else {
                r_lo * (p_hi / p_lo).powf(j as f64 / grid.radii as f64)
            }
        })
        .collect();
    let angle_step = (a_hi - a_lo) / grid.angles as f64;

    let coarse: Vec<Option<Sample>> = (0..grid.angles)
        .into_par_iter()
        .map(|a| {
            let ray = RayExposure::new(a_lo + angle_step * a as f64, &agents);
            worst_on_ray(&ray, &radii, r_lo, r_hi)
        })
        .collect::<Result<_>>()?;
    let mut best = best_of(coarse.into_iter().flatten())
        .ok_or_else(|| SearchError::Consistency("empty target grid".into()))?;

    for level in 1..=REFINE_LEVELS {
        let div = 10f64.powi(level as i32);
        let a_sub = angle_step / div;
        let r_sub = step_ratio.powf(1.0 / div);
        let center = best;
        let radii: Vec<f64> = (-REFINE_STEPS..=REFINE_STEPS)
            .map(|m| center.radius * r_sub.powi(m))
            .collect();
        let (lo, hi) = (radii[0], radii[radii.len() - 1]);
        let angles: Vec<f64> = (-REFINE_STEPS..=REFINE_STEPS)
            .map(|m| center.angle + a_sub * m as f64)
            .filter(|&a| a >= a_lo && a < a_hi)
            .collect();
        let fine: Vec<Option<Sample>> = angles
            .par_iter()
            .map(|&angle| worst_on_ray(&RayExposure::new(angle, &agents), &radii, lo, hi))
            .collect::<Result<_>>()?;
        if let Some(s) = best_of(fine.into_iter().flatten()) {
            if rank(&s, &best) == Ordering::Greater {
                best = s;
            }
        }
    }

    let analytic = strategy.analytic_cost();
    Ok(EmpiricalReport {
        strategy_id: strategy.id(),
        grid: *grid,
        empirical_cost: best.value,
        analytic_cost: analytic,
        relative_gap: (analytic - best.value) / analytic,
        worst_target: Polar::new(best.radius, best.angle),
    })
}
