use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::body2d::Body2D;
use crate::error::{Error, Result};
use crate::geomfun::{area, hausdorff, inradius_circumradius};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Spectral,
    Rk4,
    Picard,
}

impl std::fmt::Display for Integrator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Integrator::Spectral => "spectral",
            Integrator::Rk4 => "rk4",
            Integrator::Picard => "picard",
        })
    }
}

/// Bodies sampled along a solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub bodies: Vec<Body2D>,
    pub integrator: Integrator,
}

/// Relative slack for the monotone-diameter check.
const DIAM_RTOL: f64 = 1e-9;

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if let Some(&t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::NegativeTime(t));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonIncreasingTimes);
    }
    Ok(())
}

impl Trajectory {
    /// Builds and validates a trajectory: increasing times, convex bodies and
    /// nondecreasing diameter.
    pub fn new(times: Vec<f64>, bodies: Vec<Body2D>, integrator: Integrator) -> Result<Self> {
        let tr = Self { times, bodies, integrator };
        tr.validate()?;
        Ok(tr)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.bodies.len() {
            return Err(Error::InvalidConfig("times and bodies differ in length".into()));
        }
        check_times(&self.times)?;
        let mut prev: Option<f64> = None;
        for (&t, b) in self.times.iter().zip(&self.bodies) {
            let min_curvature = b.min_curvature();
            if min_curvature < -b.tol_convex() || !min_curvature.is_finite() {
                return Err(Error::ConvexityViolated { t, min_curvature });
            }
            let d = b.diameter();
            if let Some(before) = prev {
                if d < before * (1.0 - DIAM_RTOL) {
                    return Err(Error::DiameterDecreased { t, before, after: d });
                }
            }
            prev = Some(d);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&Body2D> {
        self.bodies.last()
    }

    /// Largest grid sup-norm distance between matching samples.
    pub fn sup_distance(&self, other: &Trajectory) -> Result<f64> {
        if self.times != other.times {
            return Err(Error::InvalidConfig("trajectories sampled at different times".into()));
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.bodies.iter().zip(&other.bodies) {
            worst = worst.max(hausdorff(a, b)?);
        }
        Ok(worst)
    }

    /// CSV with columns `t,V,r,R,diam` and `|H_p|` for each requested mode.
    pub fn write_csv<W: Write>(&self, out: W, modes: &[usize]) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string(), "V".into(), "r".into(), "R".into(), "diam".into()];
        header.extend(modes.iter().map(|p| format!("|H_{p}|")));
        w.write_record(&header)?;
        for (&t, b) in self.times.iter().zip(&self.bodies) {
            let radii = inradius_circumradius(b)?;
            let mut row = vec![t, area(b), radii.r, radii.big_r, b.diameter()];
            row.extend(modes.iter().map(|&p| b.fourier_coefficient(p).norm()));
            w.write_record(row.iter().map(|v| format!("{v:.17e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path, modes: &[usize]) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f), modes)
    }
}
