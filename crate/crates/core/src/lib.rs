//! Planar point search with agents of heterogeneous speeds.
//!
//! The crate provides the analytic search-cost machinery for several
//! trajectory families together with a brute-force oracle that measures the
//! worst-case normalized cost of concrete trajectories:
//!
//! - [`spiral_core`]: unit-speed logarithmic spirals for `n` agents.
//! - [`offset`]: speed-dependent phase offsets for agents of arbitrary speeds.
//! - [`cone_search`]: the bouncing trajectory for a cone of angle `phi`.
//! - [`wedge_search`]: the shortcut spiral for the complement of a cone.
//! - [`hybrid`]: one slow agent in the cone, one unit-speed agent in the wedge.
//! - [`oracle_sim`]: empirical worst-case cost over dense target grids.
//!
//! All costs are dimensionless (time divided by target distance); radii are in
//! abstract length units and agent speeds are fractions of the fastest agent.

pub mod cone_search;
mod error;
pub mod format;
pub mod hybrid;
pub mod offset;
pub mod oracle_sim;
pub mod scalar_num;
pub mod spiral_core;
pub mod wedge_search;

pub use error::{Result, SearchError};

/// Polar coordinates `<radius, angle>` with the angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Polar {
    pub radius: f64,
    pub angle: f64,
}

impl Polar {
    pub fn new(radius: f64, angle: f64) -> Self {
        Self { radius, angle }
    }

    pub fn to_cartesian(self) -> [f64; 2] {
        let (s, c) = self.angle.sin_cos();
        [self.radius * c, self.radius * s]
    }
}
