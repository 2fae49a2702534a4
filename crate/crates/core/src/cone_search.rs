//! Bouncing search inside a cone of angle `phi`.
//!
//! A single unit-speed agent zig-zags between the two boundary rays, hitting
//! them at radii `beta^i` alternately on ray 0 and ray `phi`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::scalar_num::{minimize_scalar, Bracket};
use crate::{Polar, Result, SearchError};

/// Distance kept from the open ends of the `theta` interval.
pub const THETA_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConePlan {
    pub phi: f64,
    pub theta_star: f64,
    pub alpha: f64,
    pub beta: f64,
    pub f_phi: f64,
    pub cost: f64,
}

/// Bounce points `vertices[j]` with index `i_min + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BounceVertices {
    pub i_min: i64,
    pub vertices: Vec<Polar>,
}

fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi < PI {
        Ok(())
    } else {
        Err(SearchError::domain(format!("cone angle must lie in (0, pi), got {phi}")))
    }
}

fn check_theta(phi: f64, theta: f64) -> Result<()> {
    check_phi(phi)?;
    if theta > phi && theta < FRAC_PI_2 + 0.5 * phi {
        Ok(())
    } else {
        Err(SearchError::domain(format!(
            "bounce angle {theta} outside ({phi}, {})",
            FRAC_PI_2 + 0.5 * phi
        )))
    }
}

/// Growth ratio `sin(theta) / sin(theta - phi)` of consecutive bounce radii.
pub fn growth_ratio(phi: f64, theta: f64) -> f64 {
    theta.sin() / (theta - phi).sin()
}

/// Objective `(sin theta / sin(theta - phi))^2 / cos(theta - phi/2)`.
pub fn cone_objective(phi: f64, theta: f64) -> f64 {
    let b = growth_ratio(phi, theta);
    b * b / (theta - 0.5 * phi).cos()
}

/// `sin(phi) / (2 sin(phi/2))`, which equals `cos(phi/2)`.
pub fn cone_prefactor(phi: f64) -> f64 {
    phi.sin() / (2.0 * (0.5 * phi).sin())
}

/// Cost `alpha beta^3 / (beta - 1)` of bouncing with angle `theta`.
pub fn bouncing_cost(phi: f64, theta: f64) -> Result<f64> {
    check_theta(phi, theta)?;
    let alpha = phi.sin() / theta.sin();
    let beta = growth_ratio(phi, theta);
    Ok(alpha * beta.powi(3) / (beta - 1.0))
}

/// Best bouncing angle for the cone.
pub fn minimize_cone(phi: f64) -> Result<ConePlan> {
    check_phi(phi)?;
    let bracket = Bracket::with_default_tol(phi + THETA_MARGIN, FRAC_PI_2 + 0.5 * phi - THETA_MARGIN)?;
    let min = minimize_scalar(|t| cone_objective(phi, t), &bracket)?;
    if !min.competing.is_empty() {
        log::warn!(
            "cone angle {phi}: bounce angle {} competes with {:?}",
            min.argmin,
            min.competing
        );
    }
    let theta = min.argmin;
    Ok(ConePlan {
        phi,
        theta_star: theta,
        alpha: phi.sin() / theta.sin(),
        beta: growth_ratio(phi, theta),
        f_phi: min.value,
        cost: cone_prefactor(phi) * min.value,
    })
}

impl ConePlan {
    /// Bounce point with index `i`.
    pub fn vertex(&self, i: i64) -> Polar {
        let angle = if i.rem_euclid(2) == 0 { 0.0 } else { self.phi };
        Polar::new(self.beta.powi(i as i32), angle)
    }

    /// Length of the segment ending at vertex `i`, `alpha beta^i`.
    pub fn segment_length(&self, i: i64) -> f64 {
        self.alpha * self.beta.powi(i as i32)
    }

    /// Length of the whole trajectory up to vertex `i`.
    pub fn path_length_to(&self, i: i64) -> f64 {
        self.alpha * self.beta.powi(i as i32 + 1) / (self.beta - 1.0)
    }
}

pub fn bounce_vertices(plan: &ConePlan, i_min: i64, i_max: i64) -> Result<BounceVertices> {
    if i_min > i_max {
        return Err(SearchError::domain(format!("empty vertex range {i_min}..={i_max}")));
    }
    Ok(BounceVertices {
        i_min,
        vertices: (i_min..=i_max).map(|i| plan.vertex(i)).collect(),
    })
}
