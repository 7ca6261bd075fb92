use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body2d::{minkowski_sum, scale_translate, Body2D, ConvexPolygon, Resolution};
use crate::error::{Error, Result};

pub const MAX_REJECTIONS: usize = 1000;

/// Default number of random modes for [`random_body`].
pub const DEFAULT_RANDOM_MODES: usize = 8;

/// Smooth random body on the default grid; see [`random_body_with`].
pub fn random_body(seed: u64, modes: usize, roughness: f64) -> Result<Body2D> {
    random_body_with(Resolution::default(), seed, modes, roughness)
}

/// `H0 = 1` plus modes `p = 2..=modes` with `H_p = roughness/p² · (U + iU)`,
/// `U ~ Uniform[−1, 1]`, redrawn until the curvature invariant holds.
pub fn random_body_with(res: Resolution, seed: u64, modes: usize, roughness: f64) -> Result<Body2D> {
    if modes > res.degree {
        return Err(Error::InvalidConfig(format!("{modes} random modes exceed degree {}", res.degree)));
    }
    if !(roughness >= 0.0) {
        return Err(Error::InvalidConfig(format!("roughness must be nonnegative, got {roughness}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let coeffs: Vec<Complex64> = (1..=modes)
            .map(|p| {
                if p < 2 {
                    return Complex64::new(0.0, 0.0);
                }
                let a = roughness / (p * p) as f64;
                Complex64::new(a * rng.random_range(-1.0..=1.0), a * rng.random_range(-1.0..=1.0))
            })
            .collect();
        match Body2D::from_fourier_with(res, 1.0, &coeffs) {
            Ok(b) => return Ok(b),
            Err(Error::NotConvex { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed(MAX_REJECTIONS))
}

/// Convex polygon with `k` vertices: sorted random angles on the unit circle,
/// sheared and stretched by a random linear map.
pub fn random_polygon(seed: u64, k: usize) -> Result<ConvexPolygon> {
    if k < 3 {
        return Err(Error::DegenerateInput(format!("polygon needs at least 3 vertices, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let mut angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let (sx, sy) = (rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
        let shear = rng.random_range(-0.5..0.5);
        let pts: Vec<[f64; 2]> = angles
            .iter()
            .map(|a| {
                let (s, c) = a.sin_cos();
                [sx * c + shear * s, sy * s]
            })
            .collect();
        match ConvexPolygon::from_vertices(&pts) {
            Ok(p) if p.area() > 1e-3 => return Ok(p),
            Ok(_) | Err(Error::NonConvexInput(_)) | Err(Error::DegenerateInput(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed(MAX_REJECTIONS))
}

/// Random smooth body plus a random polygon summand and a random translation.
pub fn random_hybrid(seed: u64) -> Result<Body2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let smooth = random_body(seed, DEFAULT_RANDOM_MODES, rng.random_range(0.0..0.1))?;
    let smooth = scale_translate(&smooth, rng.random_range(0.2..1.5), nalgebra::Vector2::zeros())?;
    let k = rng.random_range(3..9);
    let poly = random_polygon(rng.random(), k)?;
    let vertices: Vec<[f64; 2]> = poly.vertices().iter().map(|v| [v.x, v.y]).collect();
    let poly = Body2D::from_polygon(&vertices)?;
    let body = minkowski_sum(&smooth, &scale_translate(&poly, rng.random_range(0.1..1.5), nalgebra::Vector2::zeros())?)?;
    let b = nalgebra::Vector2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    scale_translate(&body, 1.0, b)
}
