//! Shortcut spiral for the complement of a cone of angle `phi`.
//!
//! In period `s` the agent walks the chord from `X_s = <e^{2 pi k s}, 0>` to
//! `Y_s = <lambda e^{2 pi k s}, phi>` across the cone, then follows a
//! logarithmic spiral through the wedge back to ray 0 at `X_{s+1}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::scalar_num::{minimize_open_right, ARG_TOL};
use crate::spiral_core::length_factor;
use crate::{Polar, Result, SearchError};

/// Lower end of the `lambda` search interval.
pub const LAMBDA_MIN: f64 = 1.0 + 1e-6;

/// Initial upper end of the `lambda` search interval.
pub const LAMBDA_START_HI: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgePlan {
    pub phi: f64,
    pub lambda_star: f64,
    pub k_lambda: f64,
    pub alpha_lambda: f64,
    pub r_phi: f64,
}

fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi < PI {
        Ok(())
    } else {
        Err(SearchError::domain(format!("cone angle must lie in (0, pi), got {phi}")))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 1.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(SearchError::domain(format!("chord ratio must exceed 1, got {lambda}")))
    }
}

/// Spiral exponent `(lambda - 1) / sqrt(2 lambda (1 - cos phi))`.
pub fn alpha_of_lambda(phi: f64, lambda: f64) -> f64 {
    (lambda - 1.0) / (2.0 * lambda.sqrt() * (0.5 * phi).sin())
}

/// Chord length `|X_0 Y_0| = sqrt(lambda^2 - 2 lambda cos phi + 1)`.
pub fn chord_length(phi: f64, lambda: f64) -> f64 {
    let s = (0.5 * phi).sin();
    ((lambda - 1.0).powi(2) + 4.0 * lambda * s * s).sqrt()
}

/// Expansion factor that makes the cost independent of the target angle.
pub fn k_of_lambda(phi: f64, lambda: f64) -> Result<f64> {
    check_phi(phi)?;
    check_lambda(lambda)?;
    Ok(k_unchecked(phi, lambda))
}

fn k_unchecked(phi: f64, lambda: f64) -> f64 {
    lambda.ln() / (2.0 * PI) + alpha_of_lambda(phi, lambda) * (1.0 - phi / (2.0 * PI))
}

/// Natural log of the cost `|X_0 Y_0| / (lambda - 1) * e^{2 pi k_lambda}`.
/// The cost itself overflows for small `phi` and moderate `lambda`.
pub fn ln_wedge_cost(phi: f64, lambda: f64) -> f64 {
    chord_length(phi, lambda).ln() - (lambda - 1.0).ln() + 2.0 * PI * k_unchecked(phi, lambda)
}

/// Cost of the shortcut spiral with chord ratio `lambda`.
pub fn wedge_cost(phi: f64, lambda: f64) -> Result<f64> {
    check_phi(phi)?;
    check_lambda(lambda)?;
    Ok(ln_wedge_cost(phi, lambda).exp())
}

/// Best chord ratio for the wedge.
pub fn minimize_wedge(phi: f64) -> Result<WedgePlan> {
    check_phi(phi)?;
    let min = minimize_open_right(|l| ln_wedge_cost(phi, l), LAMBDA_MIN, LAMBDA_START_HI, ARG_TOL)?;
    if !min.competing.is_empty() {
        log::warn!(
            "wedge angle {phi}: chord ratio {} competes with {:?}",
            min.argmin,
            min.competing
        );
    }
    let lambda = min.argmin;
    Ok(WedgePlan {
        phi,
        lambda_star: lambda,
        k_lambda: k_unchecked(phi, lambda),
        alpha_lambda: alpha_of_lambda(phi, lambda),
        r_phi: min.value.exp(),
    })
}

impl WedgePlan {
    /// Plan for a given chord ratio rather than the optimal one.
    pub fn with_lambda(phi: f64, lambda: f64) -> Result<Self> {
        Ok(Self {
            phi,
            lambda_star: lambda,
            k_lambda: k_of_lambda(phi, lambda)?,
            alpha_lambda: alpha_of_lambda(phi, lambda),
            r_phi: wedge_cost(phi, lambda)?,
        })
    }

    /// Radial growth per period, `e^{2 pi k}`.
    pub fn period_ratio(&self) -> f64 {
        (2.0 * PI * self.k_lambda).exp()
    }

    /// Log-offset of the spiral in period `s`.
    pub fn spiral_offset(&self, s: i64) -> f64 {
        2.0 * PI * self.k_lambda * s as f64 + self.lambda_star.ln() - self.alpha_lambda * self.phi
    }

    /// Path length of period `s`: the chord plus the spiral arc.
    pub fn period_length(&self, s: i64) -> f64 {
        let scale = (2.0 * PI * self.k_lambda * s as f64).exp();
        chord_length(self.phi, self.lambda_star) * scale
            + length_factor(self.alpha_lambda) * (self.period_ratio() - self.lambda_star) * scale
    }

    /// Time at which `p_{s+1}(psi)` is reached.
    pub fn exposure_time(&self, s: i64, psi: f64) -> Result<f64> {
        if !(psi >= self.phi && psi <= 2.0 * PI) {
            return Err(SearchError::domain(format!(
                "target angle {psi} outside the wedge [{}, 2 pi]",
                self.phi
            )));
        }
        let (k, a, lambda) = (self.k_lambda, self.alpha_lambda, self.lambda_star);
        let e = self.period_ratio();
        let af = length_factor(a);
        let residual = chord_length(self.phi, lambda) - af * (lambda - 1.0);
        let scale = (2.0 * PI * k * (s + 1) as f64).exp();
        Ok(scale * (af * lambda * (a * (psi - self.phi)).exp() + e / (e - 1.0) * residual))
    }
}

/// Sampled shortcut trajectory for periods `s_min..=s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortcutTrajectory {
    pub phi: f64,
    pub k: f64,
    pub lambda: f64,
    pub alpha: f64,
    /// Points in path order. Spiral samples carry their unreduced angle in
    /// `[phi, 2 pi]`.
    pub points: Vec<Polar>,
}

impl ShortcutTrajectory {
    pub fn polyline_length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| {
                let (p, q) = (w[0].to_cartesian(), w[1].to_cartesian());
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .sum()
    }
}

pub fn shortcut_points(plan: &WedgePlan, s_min: i64, s_max: i64, samples_per_period: usize) -> Result<ShortcutTrajectory> {
    if s_min > s_max {
        return Err(SearchError::domain(format!("empty period range {s_min}..={s_max}")));
    }
    if samples_per_period < 2 {
        return Err(SearchError::domain("need at least two samples per period"));
    }
    let span = 2.0 * PI - plan.phi;
    let last = samples_per_period - 1;
    let mut points = Vec::with_capacity((s_max - s_min + 1) as usize * (samples_per_period + 1) + 1);
    points.push(Polar::new((2.0 * PI * plan.k_lambda * s_min as f64).exp(), 0.0));
    for s in s_min..=s_max {
        let offset = plan.spiral_offset(s);
        let base = (2.0 * PI * plan.k_lambda * s as f64).exp();
        points.push(Polar::new(plan.lambda_star * base, plan.phi));
        for j in 1..last {
            let t = plan.phi + span * j as f64 / last as f64;
            points.push(Polar::new((plan.alpha_lambda * t + offset).exp(), t));
        }
        points.push(Polar::new((2.0 * PI * plan.k_lambda * (s + 1) as f64).exp(), 2.0 * PI));
    }
    Ok(ShortcutTrajectory {
        phi: plan.phi,
        k: plan.k_lambda,
        lambda: plan.lambda_star,
        alpha: plan.alpha_lambda,
        points,
    })
}
