//! Unit-speed logarithmic spirals.
//!
//! A team of `n` unit-speed agents following `<e^{kt}, t + 2*pi*i/n>` has a
//! worst-case normalized cost of `A(k) e^{2 pi k / n}`, where
//! `A(k) = sqrt(1 + k^2) / k`. The best expansion factor is the positive root
//! of `k^3 + k = n / (2 pi)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::scalar_num::cardano_depressed_root;
use crate::{Result, SearchError};

/// Optimal expansion factor and cost for `n` unit-speed agents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSpiralSolution {
    pub n: u64,
    pub kappa: f64,
    pub cost: f64,
}

impl UnitSpiralSolution {
    pub fn new(n: u64) -> Result<Self> {
        let kappa = kappa_n(n)?;
        Ok(Self {
            n,
            kappa,
            cost: spiral_cost(kappa, n)?,
        })
    }
}

/// Curve `t -> <e^{alpha t + beta}, t + phase>` in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralArc {
    pub alpha: f64,
    pub beta: f64,
    pub phase: f64,
}

impl SpiralArc {
    pub fn new(alpha: f64, beta: f64, phase: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(SearchError::domain(format!("spiral exponent must be positive, got {alpha}")));
        }
        Ok(Self { alpha, beta, phase })
    }

    pub fn radius_at(&self, t: f64) -> f64 {
        (self.alpha * t + self.beta).exp()
    }
}

/// Length-to-radius factor `sqrt(1 + x^2) / x` of a spiral with exponent `x`.
pub fn length_factor(x: f64) -> f64 {
    (1.0 + x * x).sqrt() / x
}

/// Natural log of [`length_factor`], accurate for large `x`.
pub fn ln_length_factor(x: f64) -> f64 {
    0.5 * (1.0 / (x * x)).ln_1p()
}

/// Expansion factor `kappa_n`, the positive root of `k^3 + k = n / (2 pi)`.
pub fn kappa_n(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(SearchError::domain("agent count must be at least 1"));
    }
    cardano_depressed_root(n as f64 / (2.0 * PI))
}

/// Optimal cost of `n` unit-speed agents. Zero agents cost `+inf`.
pub fn unit_cost(n: u64) -> f64 {
    match kappa_n(n) {
        Ok(k) => length_factor(k) * (2.0 * PI * k / n as f64).exp(),
        Err(_) => f64::INFINITY,
    }
}

/// Cost of `n` unit-speed agents spread evenly on spirals with exponent `k`.
pub fn spiral_cost(k: f64, n: u64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(SearchError::domain(format!("spiral exponent must be positive, got {k}")));
    }
    if n == 0 {
        return Err(SearchError::domain("agent count must be at least 1"));
    }
    Ok(length_factor(k) * (2.0 * PI * k / n as f64).exp())
}

/// Length of the arc from the origin to the point with parameter `y`.
pub fn arc_length(arc: &SpiralArc, y: f64) -> Result<f64> {
    if !(arc.alpha > 0.0) {
        return Err(SearchError::domain(format!(
            "spiral exponent must be positive, got {}",
            arc.alpha
        )));
    }
    Ok(length_factor(arc.alpha) * (arc.alpha * y + arc.beta).exp())
}

/// Ratio `H(l)` comparing the cost growth between `l` and `l + 1` agents.
/// Never below one.
pub fn h_ratio(l: u64) -> Result<f64> {
    if l == 0 {
        return Err(SearchError::domain("h_ratio needs l >= 1"));
    }
    let k0 = kappa_n(l)?;
    let k1 = kappa_n(l + 1)?;
    let ln = l as f64 * (ln_length_factor(k1) - ln_length_factor(k0)) + 2.0 * PI * (k1 - k0);
    Ok(ln.exp())
}

/// Threshold `(U_{l+1} / U_l)^{l+1}` on the relative speed above which an
/// extra agent helps.
pub fn participation_factor(l: u64) -> Result<f64> {
    if l == 0 {
        return Err(SearchError::domain("participation_factor needs l >= 1"));
    }
    Ok((ln_unit_cost_ratio(l)? * (l + 1) as f64).exp())
}

fn ln_unit_cost_ratio(l: u64) -> Result<f64> {
    let k0 = kappa_n(l)?;
    let k1 = kappa_n(l + 1)?;
    let ln0 = ln_length_factor(k0) + 2.0 * PI * k0 / l as f64;
    let ln1 = ln_length_factor(k1) + 2.0 * PI * k1 / (l + 1) as f64;
    Ok(ln1 - ln0)
}
