use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body2d::{Body2D, LinearOp2, OpKind, Resolution};
use crate::error::{Error, Result};
use crate::sde::{Method, DEFAULT_RK4_STEP};

use super::random::{random_body_with, DEFAULT_RANDOM_MODES};

pub const SEED_ENV: &str = "SETFLOW_SEED";

/// JSON description of a body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodySpec {
    Fourier {
        #[serde(rename = "H0")]
        h0: f64,
        #[serde(default)]
        coeffs: Vec<[f64; 2]>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    /// Minkowski sum of the terms.
    Sum {
        terms: Vec<BodySpec>,
    },
    Random {
        seed: u64,
        #[serde(default = "default_modes")]
        modes: usize,
        roughness: f64,
    },
}

fn default_modes() -> usize {
    DEFAULT_RANDOM_MODES
}

impl BodySpec {
    pub fn build(&self, res: Resolution) -> Result<Body2D> {
        match self {
            BodySpec::Fourier { h0, coeffs } => {
                let c: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
                Body2D::from_fourier_with(res, *h0, &c)
            }
            BodySpec::Polygon { vertices } => Body2D::from_polygon_with(res, vertices),
            BodySpec::Sum { terms } => {
                let bodies = terms.iter().map(|t| t.build(res)).collect::<Result<Vec<_>>>()?;
                let weighted: Vec<(f64, &Body2D)> = bodies.iter().map(|b| (1.0, b)).collect();
                Body2D::combination(&weighted)
            }
            BodySpec::Random { seed, modes, roughness } => random_body_with(res, *seed, *modes, *roughness),
        }
    }

    /// Exact description of a body. A polygon summand that is a point is
    /// folded into `H_1`; a segment summand has no JSON form.
    pub fn from_body(x: &Body2D) -> Result<Self> {
        let poly = x.polygon();
        let mut coeffs: Vec<Complex64> = x.trig_coeffs().to_vec();
        let trig_zero = x.trig_h0() == 0.0 && coeffs.iter().all(|c| c.norm() == 0.0);
        let fourier = |h0: f64, coeffs: &[Complex64]| BodySpec::Fourier {
            h0,
            coeffs: coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        match poly.vertices().len() {
            1 => {
                let b = poly.vertices()[0];
                coeffs[0] += Complex64::new(b.x, -b.y) / 2.0;
                Ok(fourier(x.trig_h0(), &coeffs))
            }
            2 => Err(Error::NotRepresentable("segment summand".into())),
            _ => {
                let polygon = BodySpec::Polygon {
                    vertices: poly.vertices().iter().map(|v| [v.x, v.y]).collect(),
                };
                if trig_zero {
                    Ok(polygon)
                } else {
                    Ok(BodySpec::Sum { terms: vec![fourier(x.trig_h0(), &coeffs), polygon] })
                }
            }
        }
    }
}

/// JSON description of an operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OperatorSpec {
    Rotation { angle: f64 },
    /// Rotation by `2π/m`.
    RotationOrder { m: usize },
    Reflection { axis: f64 },
    Matrix { rows: [[f64; 2]; 2] },
}

impl OperatorSpec {
    pub fn build(&self) -> Result<LinearOp2> {
        match self {
            OperatorSpec::Rotation { angle } => Ok(LinearOp2::rotation(*angle)),
            OperatorSpec::RotationOrder { m } if *m >= 1 => Ok(LinearOp2::rotation_order(*m)),
            OperatorSpec::RotationOrder { m } => Err(Error::InvalidConfig(format!("rotation order {m}"))),
            OperatorSpec::Reflection { axis } => Ok(LinearOp2::reflection(*axis)),
            OperatorSpec::Matrix { rows } => Ok(LinearOp2::from_rows(*rows)),
        }
    }

    pub fn from_op(op: &LinearOp2) -> Self {
        match op.kind() {
            OpKind::Rotation { angle } => OperatorSpec::Rotation { angle },
            OpKind::Reflection { axis } => OperatorSpec::Reflection { axis },
            OpKind::General => OperatorSpec::Matrix { rows: op.rows() },
        }
    }
}

/// Fourier-mode perturbation `Σ a_i cos(p_i θ + φ_i)` with phases drawn from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub modes: Vec<usize>,
    pub amplitudes: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl PerturbationSpec {
    pub fn none() -> Self {
        Self { modes: Vec::new(), amplitudes: Vec::new(), seed: 0 }
    }

    pub fn single(mode: usize, amplitude: f64, seed: u64) -> Self {
        Self { modes: vec![mode], amplitudes: vec![amplitude], seed }
    }

    pub fn validate(&self, degree: usize) -> Result<()> {
        if self.modes.len() != self.amplitudes.len() {
            return Err(Error::InvalidConfig("perturbation modes and amplitudes differ in length".into()));
        }
        if let Some(p) = self.modes.iter().find(|&&p| p > degree) {
            return Err(Error::InvalidConfig(format!("perturbation mode {p} exceeds degree {degree}")));
        }
        Ok(())
    }

    pub fn phases(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.modes.iter().map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect()
    }

    /// `X + scale · Σ a_i cos(p_i θ + φ_i)`; fails if the result is not convex.
    pub fn apply(&self, x: &Body2D, scale: f64) -> Result<Body2D> {
        let res = x.resolution();
        self.validate(res.degree)?;
        let mut h0 = x.trig_h0();
        let mut coeffs = x.trig_coeffs().to_vec();
        for ((&p, &a), phi) in self.modes.iter().zip(&self.amplitudes).zip(self.phases()) {
            let a = a * scale;
            if p == 0 {
                h0 += a * phi.cos();
            } else {
                coeffs[p - 1] += Complex64::from_polar(a / 2.0, phi);
            }
        }
        Body2D::new(res, h0, coeffs, x.polygon().clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorChoice {
    #[default]
    Spectral,
    Rk4,
    Picard,
}

/// Full experiment description, read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Order of the operator (`A^m = I`).
    pub m: usize,
    pub operator: OperatorSpec,
    #[serde(rename = "X0_star")]
    pub x0_star: BodySpec,
    pub perturbation: PerturbationSpec,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Sample times; defaults to a uniform grid with `sample_step`.
    #[serde(default)]
    pub sample_times: Vec<f64>,
    #[serde(default = "default_sample_step")]
    pub sample_step: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub integrator: IntegratorChoice,
    #[serde(default = "default_rk4_step")]
    pub rk4_step: f64,
    #[serde(default = "default_picard_iterations")]
    pub picard_iterations: usize,
    #[serde(default = "default_picard_steps")]
    pub picard_steps: usize,
    #[serde(default)]
    pub resolution: Option<ResolutionSpec>,
    /// Initial offsets for the stability ladder.
    #[serde(default = "default_ladder")]
    pub ladder: Vec<f64>,
    /// Membership tolerance for the attraction manifold.
    #[serde(default = "default_tol_m")]
    pub tol_m: f64,
    /// Run attraction experiments even when the perturbation leaves the manifold.
    #[serde(default)]
    pub allow_outside_manifold: bool,
    /// Fourier modes whose normalized amplitudes are tracked.
    #[serde(default)]
    pub track_modes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionSpec {
    pub degree: usize,
    pub grid: usize,
}

fn default_sample_step() -> f64 {
    0.1
}
fn default_rk4_step() -> f64 {
    DEFAULT_RK4_STEP
}
fn default_picard_iterations() -> usize {
    20
}
fn default_picard_steps() -> usize {
    400
}
fn default_ladder() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3, 1e-4]
}
fn default_tol_m() -> f64 {
    super::TOL_M
}

impl ExperimentConfig {
    /// Config with defaults for everything but the essentials.
    pub fn new(m: usize, operator: OperatorSpec, x0_star: BodySpec, perturbation: PerturbationSpec, horizon: f64) -> Self {
        Self {
            m,
            operator,
            x0_star,
            perturbation,
            horizon,
            sample_times: Vec::new(),
            sample_step: default_sample_step(),
            output: None,
            integrator: IntegratorChoice::Spectral,
            rk4_step: default_rk4_step(),
            picard_iterations: default_picard_iterations(),
            picard_steps: default_picard_steps(),
            resolution: None,
            ladder: default_ladder(),
            tol_m: default_tol_m(),
            allow_outside_manifold: false,
            track_modes: Vec::new(),
        }
    }

    /// Reads a JSON config; `SETFLOW_SEED` overrides the perturbation seed.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: Self = serde_json::from_str(&text)?;
        cfg.apply_env()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.perturbation.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be positive".into()));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidConfig(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.sample_step > 0.0) {
            return Err(Error::InvalidConfig("sample_step must be positive".into()));
        }
        let res = self.resolution()?;
        self.perturbation.validate(res.degree)?;
        if self.sample_times.iter().any(|&t| !(0.0..=self.horizon).contains(&t)) {
            return Err(Error::InvalidConfig("sample times must lie in [0, T]".into()));
        }
        if self.sample_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingTimes);
        }
        if self.ladder.iter().any(|&r| !(r > 0.0)) {
            return Err(Error::InvalidConfig("ladder offsets must be positive".into()));
        }
        Ok(())
    }

    pub fn resolution(&self) -> Result<Resolution> {
        match self.resolution {
            Some(r) => Resolution::new(r.degree, r.grid),
            None => Ok(Resolution::default()),
        }
    }

    pub fn times(&self) -> Vec<f64> {
        if !self.sample_times.is_empty() {
            return self.sample_times.clone();
        }
        let n = (self.horizon / self.sample_step - 1e-9).ceil() as usize;
        (0..=n).map(|i| (i as f64 * self.sample_step).min(self.horizon)).collect()
    }

    pub fn method(&self) -> Method {
        match self.integrator {
            IntegratorChoice::Spectral => Method::Spectral,
            IntegratorChoice::Rk4 => Method::Rk4 { step: self.rk4_step },
            IntegratorChoice::Picard => Method::Picard { iterations: self.picard_iterations, steps: self.picard_steps },
        }
    }

    pub fn op(&self) -> Result<LinearOp2> {
        self.operator.build()
    }

    pub fn x0_star(&self) -> Result<Body2D> {
        self.x0_star.build(self.resolution()?)
    }

    pub fn x0(&self) -> Result<Body2D> {
        self.perturbation.apply(&self.x0_star()?, 1.0)
    }
}
