//! Geometric functionals of planar bodies: area, mixed area, Brunn–Minkowski
//! deficit, Hausdorff distance, the homothety-quotient shape metric and the
//! inscribed/circumscribed radii.

pub mod lp;

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::body2d::{scale_translate, unit, Body2D, ConvexPolygon};
use crate::error::{Error, Result};
use lp::Lp3;

/// Mixed area of two trigonometric parts,
/// `½∫F(G+G'') = π(F0 G0 − Σ 2(p²−1) Re(F_p conj G_p))`.
/// This is exactly what the uniform-grid trapezoid rule returns, since the
/// integrand has degree `2N < M`.
fn trig_trig(x: &Body2D, y: &Body2D) -> f64 {
    let mut acc = x.trig_h0() * y.trig_h0();
    for (i, (f, g)) in x.trig_coeffs().iter().zip(y.trig_coeffs()).enumerate() {
        let p = (i + 1) as f64;
        acc -= 2.0 * (p * p - 1.0) * (f * g.conj()).re;
    }
    PI * acc
}

/// `½ Σ_{e ∈ Q} |e| T(n_e)` for the trigonometric part `T` of `x`.
fn trig_poly(x: &Body2D, q: &ConvexPolygon) -> f64 {
    q.edges().iter().map(|&(nu, len)| len * x.trig_support(nu)).sum::<f64>() / 2.0
}

/// Mixed area `S[X, Y]`.
pub fn mixed_area(x: &Body2D, y: &Body2D) -> Result<f64> {
    x.same_grid(y)?;
    Ok(mixed_area_unchecked(x, y))
}

fn mixed_area_unchecked(x: &Body2D, y: &Body2D) -> f64 {
    trig_trig(x, y) + trig_poly(x, y.polygon()) + trig_poly(y, x.polygon()) + x.polygon().mixed_area(y.polygon())
}

/// Area `V[X] = S[X, X]`.
pub fn area(x: &Body2D) -> f64 {
    mixed_area_unchecked(x, x)
}

/// Brunn–Minkowski quantities for `n = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeficitReport {
    #[serde(rename = "V1")]
    pub v1: f64,
    #[serde(rename = "VX")]
    pub vx: f64,
    #[serde(rename = "VY")]
    pub vy: f64,
    pub delta: f64,
}

/// `Δ[X,Y] = S[X,Y]² / (V[X] V[Y]) − 1`.
pub fn deficit(x: &Body2D, y: &Body2D) -> Result<DeficitReport> {
    let v1 = mixed_area(x, y)?;
    let vx = area(x);
    let vy = area(y);
    if !(vx > 0.0) {
        return Err(Error::DegenerateBody { area: vx });
    }
    if !(vy > 0.0) {
        return Err(Error::DegenerateBody { area: vy });
    }
    Ok(DeficitReport { v1, vx, vy, delta: v1 * v1 / (vx * vy) - 1.0 })
}

/// `max_j |H_X(θ_j) − H_Y(θ_j)|`.
pub fn hausdorff(x: &Body2D, y: &Body2D) -> Result<f64> {
    x.same_grid(y)?;
    Ok(x
        .support_samples()
        .iter()
        .zip(y.support_samples())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// A body rescaled to unit area.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeRep {
    pub body: Body2D,
    pub source_volume: f64,
}

impl ShapeRep {
    pub fn new(x: &Body2D) -> Result<Self> {
        let v = area(x);
        if !(v > 0.0) {
            return Err(Error::DegenerateBody { area: v });
        }
        let body = scale_translate(x, 1.0 / v.sqrt(), Vector2::zeros())?;
        Ok(Self { body, source_volume: v })
    }
}

/// Shape distance `ρ = min_x d_H(X̃, Ỹ + x)` on the grid, with the optimal
/// translation `x`. Ties go to the lexicographically smallest `x`.
pub fn shape_metric(x: &Body2D, y: &Body2D) -> Result<(f64, Vector2<f64>)> {
    x.same_grid(y)?;
    let xs = ShapeRep::new(x)?.body.support_samples();
    let ys = ShapeRep::new(y)?.body.support_samples();
    let res = x.resolution();
    let mut lp = Lp3::with_capacity(2 * res.grid);
    for (j, (a, b)) in xs.iter().zip(&ys).enumerate() {
        let u = unit(res.angle(j));
        let d = a - b;
        lp.push([u.x, u.y, -1.0], d);
        lp.push([-u.x, -u.y, -1.0], -d);
    }
    let sol = lp.minimize_lex([0.0, 0.0, 1.0], &[0, 1], 1e-13)?;
    let t = Vector2::new(sol.z[0], sol.z[1]);
    // The lexicographic passes may move ε inside the slack; report the exact
    // sup-norm at the returned translation.
    let rho = xs
        .iter()
        .zip(&ys)
        .enumerate()
        .map(|(j, (a, b))| (a - b - t.dot(&unit(res.angle(j)))).abs())
        .fold(0.0, f64::max);
    Ok((rho, t))
}

/// Inscribed and circumscribed radii with their centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Radii {
    pub r: f64,
    pub big_r: f64,
    pub incenter: Vector2<f64>,
    pub circumcenter: Vector2<f64>,
}

const CUT_TOL: f64 = 1e-12;
const MAX_CUTS: usize = 60;

/// Golden-section search for the minimum of `f` on `[a, b]`.
fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Continuous minimizer of `f` over the circle: dense sampling, then a
/// golden-section refinement around the best sample.
fn circle_min(f: &dyn Fn(f64) -> f64, samples: usize) -> (f64, f64) {
    let step = TAU / samples as f64;
    let (k, _) = (0..samples)
        .map(|k| (k, f(k as f64 * step)))
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
    let th0 = k as f64 * step;
    let (th, v) = golden_min(f, th0 - step, th0 + step);
    let v0 = f(th0);
    if v0 <= v {
        (th0, v0)
    } else {
        (th, v)
    }
}

/// Solves the semi-infinite radius LP by cutting planes. `row(θ)` returns the
/// constraint for direction θ, `slack(z, θ)` its slack at `z`. Returns the
/// last LP vertex with its worst continuous slack; with second-order contact
/// the loop converges only linearly, so it stops after `MAX_CUTS` cuts.
fn cutting_planes(
    initial: impl Iterator<Item = f64>,
    row: &dyn Fn(f64) -> ([f64; 3], f64),
    slack: &dyn Fn(&nalgebra::Vector3<f64>, f64) -> f64,
    c: [f64; 3],
    samples: usize,
    scale: f64,
) -> Result<(nalgebra::Vector3<f64>, f64)> {
    let mut lp = Lp3::new();
    for th in initial {
        let (g, h) = row(th);
        lp.push(g, h);
    }
    let mut cuts = 0;
    loop {
        let z = lp.minimize(c)?.z;
        let (th, s) = circle_min(&|t| slack(&z, t), samples);
        if s >= -CUT_TOL * scale || cuts == MAX_CUTS {
            return Ok((z, s.min(0.0)));
        }
        let (g, h) = row(th);
        lp.push(g, h);
        cuts += 1;
    }
}

/// Inradius `r` and circumradius `R`, with centers.
///
/// Both are semi-infinite LPs over all directions. They start from the grid
/// (and, for `r`, the polygon edge normals) and add the worst continuous
/// direction until the violation is below `1e-12` relative. The radii are
/// the exact ones about the final centers, so the disks are always inscribed
/// and circumscribed.
pub fn inradius_circumradius(x: &Body2D) -> Result<Radii> {
    let res = x.resolution();
    let scale = x.mean_support().abs().max(1e-300);
    let samples = 8 * res.grid;

    let in_row = |th: f64| {
        let u = unit(th);
        ([u.x, u.y, 1.0], x.support(th))
    };
    let in_slack = |z: &nalgebra::Vector3<f64>, th: f64| {
        let u = unit(th);
        x.support(th) - u.x * z[0] - u.y * z[1] - z[2]
    };
    let normals: Vec<f64> = x.polygon().edges().iter().map(|e| e.0).collect();
    let (inner, in_gap) = cutting_planes(
        res.directions().into_iter().chain(normals),
        &in_row,
        &in_slack,
        [0.0, 0.0, -1.0],
        samples,
        scale,
    )?;

    let out_row = |th: f64| {
        let u = unit(th);
        ([-u.x, -u.y, -1.0], -x.support(th))
    };
    let out_slack = |z: &nalgebra::Vector3<f64>, th: f64| {
        let u = unit(th);
        u.x * z[0] + u.y * z[1] + z[2] - x.support(th)
    };
    let (outer, out_gap) = cutting_planes(
        res.directions().into_iter(),
        &out_row,
        &out_slack,
        [0.0, 0.0, 1.0],
        samples,
        scale,
    )?;

    let r = inner[2] + in_gap;
    if !(r > 0.0) {
        return Err(Error::DegenerateBody { area: area(x) });
    }
    Ok(Radii {
        r,
        big_r: outer[2] - out_gap,
        incenter: Vector2::new(inner[0], inner[1]),
        circumcenter: Vector2::new(outer[0], outer[1]),
    })
}
