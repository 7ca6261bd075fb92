//! Integrators for the linear set differential equation `D_H X = A X`.
//!
//! Every solution is a nonnegative Minkowski combination of the orbit
//! `A^k X0`, so the polygon summand of a body is carried exactly through
//! orbit weights while the trigonometric part is evolved natively
//! (coefficients for the spectral path, grid samples for RK4).

mod conjugate;
mod flows;
mod trajectory;

pub use conjugate::{conjugate_to_orthogonal, solve_reflection_1d};
pub use flows::{
    orbit_combination, picard_tail_bound, solve_picard, solve_rk4, solve_spectral, solve_spectral_trajectory,
    spectral_orbit_weights, volume_bound_constant, PicardConfig, DEFAULT_RK4_STEP,
};
pub use trajectory::{Integrator, Trajectory};

use crate::body2d::{Body2D, LinearOp2};
use crate::error::Result;

/// Integrator choice with its numerical parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Spectral,
    Rk4 { step: f64 },
    Picard { iterations: usize, steps: usize },
}

impl Method {
    pub fn integrator(&self) -> Integrator {
        match self {
            Method::Spectral => Integrator::Spectral,
            Method::Rk4 { .. } => Integrator::Rk4,
            Method::Picard { .. } => Integrator::Picard,
        }
    }
}

/// Runs one trajectory through the chosen integrator.
pub fn simulate(x0: &Body2D, op: &LinearOp2, times: &[f64], method: Method) -> Result<Trajectory> {
    match method {
        Method::Spectral => solve_spectral_trajectory(x0, op, times),
        Method::Rk4 { step } => solve_rk4(x0, op, times, step),
        Method::Picard { iterations, steps } => {
            let horizon = times.last().copied().unwrap_or(0.0);
            let cfg = PicardConfig::new(horizon, iterations, steps, times.to_vec())?;
            solve_picard(x0, op, &cfg)
        }
    }
}
