//! Planar convex compacts represented by their support functions.
//!
//! A [`Body2D`] stores `H(θ) = T(θ) + h_P(θ)` where `T` is a real
//! trigonometric polynomial of degree `N` and `P` is an exact convex polygon
//! (a point for smooth bodies). Both parts are closed under Minkowski
//! addition, positive scaling and orthogonal maps, so the algebra stays
//! exact; polygons never go through a truncated Fourier series.

mod interval;
mod linop;
mod polygon;

use std::f64::consts::TAU;

use nalgebra::Vector2;
use num_complex::Complex64;

pub use interval::Interval1D;
pub use linop::{LinearOp2, OpKind};
pub use polygon::ConvexPolygon;

use crate::error::{Error, Result};

pub const DEFAULT_DEGREE: usize = 32;
pub const DEFAULT_GRID: usize = 128;

/// Relative convexity tolerance: `tol_convex = CONVEX_RTOL · |H0|`.
pub const CONVEX_RTOL: f64 = 1e-9;

/// Truncation degree `N` and number of sampling directions `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Resolution {
    pub degree: usize,
    pub grid: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Self { degree: DEFAULT_DEGREE, grid: DEFAULT_GRID }
    }
}

impl Resolution {
    pub fn new(degree: usize, grid: usize) -> Result<Self> {
        let res = Self { degree, grid };
        res.validate()?;
        Ok(res)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::BadResolution("degree must be at least 1".into()));
        }
        if !self.grid.is_multiple_of(2) || self.grid < 2 * self.degree + 2 {
            return Err(Error::BadResolution(format!(
                "grid {} must be even and at least 2N + 2 = {}",
                self.grid,
                2 * self.degree + 2
            )));
        }
        Ok(())
    }

    /// Grid directions `θ_j = 2πj/M`.
    pub fn directions(&self) -> Vec<f64> {
        (0..self.grid).map(|j| self.angle(j)).collect()
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.grid as f64
    }

    fn twiddles(&self) -> Vec<Complex64> {
        (0..self.grid).map(|j| Complex64::from_polar(1.0, self.angle(j))).collect()
    }
}

impl std::fmt::Display for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={}, M={}", self.degree, self.grid)
    }
}

/// Samples `H0 + Σ 2 Re(c_p e^{ipθ_j})` on the grid.
fn trig_samples(res: &Resolution, h0: f64, coeffs: &[Complex64]) -> Vec<f64> {
    let m = res.grid;
    let tw = res.twiddles();
    (0..m)
        .map(|j| {
            let mut acc = h0;
            for (i, c) in coeffs.iter().enumerate() {
                let p = i + 1;
                acc += 2.0 * (c * tw[(j * p) % m]).re;
            }
            acc
        })
        .collect()
}

fn trig_eval(h0: f64, coeffs: &[Complex64], theta: f64) -> f64 {
    let step = Complex64::from_polar(1.0, theta);
    let mut e = step;
    let mut acc = h0;
    for c in coeffs {
        acc += 2.0 * (c * e).re;
        e *= step;
    }
    acc
}

/// Discrete Fourier projection of grid samples onto degree `res.degree`.
fn project(res: &Resolution, samples: &[f64]) -> (f64, Vec<Complex64>) {
    let m = res.grid;
    let tw = res.twiddles();
    let h0 = samples.iter().sum::<f64>() / m as f64;
    let coeffs = (1..=res.degree)
        .map(|p| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, s) in samples.iter().enumerate() {
                acc += tw[(j * p) % m].conj() * *s;
            }
            acc / m as f64
        })
        .collect();
    (h0, coeffs)
}

/// Planar convex body with nonempty interior.
#[derive(Clone, Debug, PartialEq)]
pub struct Body2D {
    res: Resolution,
    h0: f64,
    coeffs: Vec<Complex64>,
    polygon: ConvexPolygon,
}

impl Body2D {
    /// Validating constructor: curvature invariant and positive area.
    pub fn new(res: Resolution, h0: f64, coeffs: Vec<Complex64>, polygon: ConvexPolygon) -> Result<Self> {
        let body = Self::from_parts(res, h0, coeffs, polygon)?;
        body.check_convex()?;
        let area = crate::geomfun::area(&body);
        let scale = body.mean_support().abs().max(f64::MIN_POSITIVE);
        if !(area > 1e-14 * scale * scale) {
            return Err(Error::DegenerateBody { area });
        }
        Ok(body)
    }

    fn from_parts(res: Resolution, h0: f64, mut coeffs: Vec<Complex64>, polygon: ConvexPolygon) -> Result<Self> {
        res.validate()?;
        if coeffs.len() > res.degree {
            if coeffs[res.degree..].iter().any(|c| *c != Complex64::new(0.0, 0.0)) {
                return Err(Error::BadResolution(format!(
                    "{} coefficients given for degree {}",
                    coeffs.len(),
                    res.degree
                )));
            }
            coeffs.truncate(res.degree);
        }
        coeffs.resize(res.degree, Complex64::new(0.0, 0.0));
        if !h0.is_finite() || coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::DegenerateInput("non-finite Fourier coefficient".into()));
        }
        Ok(Self { res, h0, coeffs, polygon })
    }

    /// Unchecked assembly from parts; callers validate convexity themselves.
    pub(crate) fn from_raw(res: Resolution, h0: f64, coeffs: Vec<Complex64>, polygon: ConvexPolygon) -> Self {
        debug_assert_eq!(coeffs.len(), res.degree);
        Self { res, h0, coeffs, polygon }
    }

    /// Unchecked assembly from grid samples of a degree-`N` trigonometric part.
    pub(crate) fn from_trig_samples(res: Resolution, samples: &[f64], polygon: ConvexPolygon) -> Self {
        let (h0, coeffs) = project(&res, samples);
        Self { res, h0, coeffs, polygon }
    }

    /// The point `{0}`. Not a valid body on its own, only a summand.
    #[cfg(test)]
    pub(crate) fn zero(res: Resolution) -> Self {
        Self { res, h0: 0.0, coeffs: vec![Complex64::new(0.0, 0.0); res.degree], polygon: ConvexPolygon::origin() }
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::disk_with(Resolution::default(), radius)
    }

    pub fn disk_with(res: Resolution, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::NonPositiveScale(radius));
        }
        Self::new(res, radius, Vec::new(), ConvexPolygon::origin())
    }

    /// Body from `H0` and `H_1..H_k` (`k ≤ N`, missing modes are zero).
    pub fn from_fourier(h0: f64, coeffs: &[Complex64]) -> Result<Self> {
        Self::from_fourier_with(Resolution::default(), h0, coeffs)
    }

    pub fn from_fourier_with(res: Resolution, h0: f64, coeffs: &[Complex64]) -> Result<Self> {
        Self::new(res, h0, coeffs.to_vec(), ConvexPolygon::origin())
    }

    pub fn from_polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        Self::from_polygon_with(Resolution::default(), vertices)
    }

    pub fn from_polygon_with(res: Resolution, vertices: &[[f64; 2]]) -> Result<Self> {
        let poly = ConvexPolygon::from_vertices(vertices)?;
        Self::new(res, 0.0, Vec::new(), poly)
    }

    /// `[0,1]²`.
    pub fn unit_square() -> Self {
        Self::from_polygon(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).expect("unit square")
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    /// Constant term of the trigonometric part.
    pub fn trig_h0(&self) -> f64 {
        self.h0
    }

    /// `H_1..H_N` of the trigonometric part.
    pub fn trig_coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        &self.polygon
    }

    /// True when the polygon summand is a single point.
    pub fn is_smooth(&self) -> bool {
        self.polygon.is_point()
    }

    /// Same body on another grid. Fails if nonzero modes would be dropped.
    pub fn with_resolution(&self, res: Resolution) -> Result<Self> {
        Self::from_parts(res, self.h0, self.coeffs.clone(), self.polygon.clone())
    }

    /// Mean support value `H0` of the whole body.
    pub fn mean_support(&self) -> f64 {
        self.h0 + self.polygon.fourier_coefficient(0).re
    }

    /// Fourier coefficient `H_p` of the whole support function.
    pub fn fourier_coefficient(&self, p: usize) -> Complex64 {
        let trig = match p {
            0 => Complex64::new(self.h0, 0.0),
            p if p <= self.res.degree => self.coeffs[p - 1],
            _ => Complex64::new(0.0, 0.0),
        };
        trig + self.polygon.fourier_coefficient(p as i64)
    }

    /// `H(θ)` at an arbitrary direction.
    pub fn support(&self, theta: f64) -> f64 {
        trig_eval(self.h0, &self.coeffs, theta) + self.polygon.support_at(theta)
    }

    /// Trigonometric part `T(θ)` alone.
    pub fn trig_support(&self, theta: f64) -> f64 {
        trig_eval(self.h0, &self.coeffs, theta)
    }

    /// `h(v)` for an arbitrary (not necessarily unit) vector.
    pub fn support_vec(&self, v: Vector2<f64>) -> f64 {
        let r = v.norm();
        if r == 0.0 {
            return 0.0;
        }
        r * trig_eval(self.h0, &self.coeffs, v.y.atan2(v.x)) + self.polygon.support(v)
    }

    pub fn trig_samples(&self) -> Vec<f64> {
        trig_samples(&self.res, self.h0, &self.coeffs)
    }

    /// `H(θ_j)` on the grid.
    pub fn support_samples(&self) -> Vec<f64> {
        let mut s = self.trig_samples();
        for (j, v) in s.iter_mut().enumerate() {
            *v += self.polygon.support_at(self.res.angle(j));
        }
        s
    }

    /// Curvature radius `H + H''` of the trigonometric part on the grid. The
    /// polygon contributes only nonnegative point masses.
    pub fn curvature_samples(&self) -> Vec<f64> {
        let curv: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let p = (i + 1) as f64;
                c * (1.0 - p * p)
            })
            .collect();
        trig_samples(&self.res, self.h0, &curv)
    }

    pub fn min_curvature(&self) -> f64 {
        self.curvature_samples().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn tol_convex(&self) -> f64 {
        CONVEX_RTOL * self.mean_support().abs()
    }

    pub fn check_convex(&self) -> Result<()> {
        let min_curvature = self.min_curvature();
        let tolerance = self.tol_convex();
        if min_curvature < -tolerance || !min_curvature.is_finite() {
            return Err(Error::NotConvex { min_curvature, tolerance });
        }
        Ok(())
    }

    /// Grid estimate of the diameter, `max_j H(θ_j) + H(θ_j + π)`.
    pub fn diameter(&self) -> f64 {
        let s = self.support_samples();
        let half = self.res.grid / 2;
        (0..half).map(|j| s[j] + s[j + half]).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Steiner point, the translation-covariant center `(2 Re H_1, −2 Im H_1)`.
    pub fn steiner_point(&self) -> Vector2<f64> {
        let h1 = self.fourier_coefficient(1);
        Vector2::new(2.0 * h1.re, -2.0 * h1.im)
    }

    /// Sup-norm error, on the grid, of replacing the support function by its
    /// degree-`N` discrete Fourier projection. Zero for smooth bodies.
    pub fn truncation_residual(&self) -> f64 {
        if self.polygon.is_point() {
            return 0.0;
        }
        let poly: Vec<f64> = (0..self.res.grid).map(|j| self.polygon.support_at(self.res.angle(j))).collect();
        let (h0, c) = project(&self.res, &poly);
        trig_samples(&self.res, h0, &c)
            .iter()
            .zip(&poly)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Checks that both bodies share a resolution.
    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.res != other.res {
            return Err(Error::GridMismatch {
                left: self.res.to_string(),
                right: other.res.to_string(),
            });
        }
        Ok(())
    }

    /// Nonnegative Minkowski combination `Σ λ_i X_i` on a common grid.
    pub fn combination(terms: &[(f64, &Body2D)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::DegenerateInput("empty combination".into()))?
            .1;
        let res = first.res;
        let mut h0 = 0.0;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); res.degree];
        let mut polys = Vec::with_capacity(terms.len());
        for &(w, b) in terms {
            first.same_grid(b)?;
            if !(w >= 0.0) {
                return Err(Error::NonPositiveScale(w));
            }
            h0 += w * b.h0;
            for (c, d) in coeffs.iter_mut().zip(&b.coeffs) {
                *c += d * w;
            }
            polys.push((w, &b.polygon));
        }
        let polygon = ConvexPolygon::combination(&polys);
        Ok(Self { res, h0, coeffs, polygon })
    }
}

/// `X + Y`.
pub fn minkowski_sum(x: &Body2D, y: &Body2D) -> Result<Body2D> {
    Body2D::combination(&[(1.0, x), (1.0, y)])
}

/// `λX + b`.
pub fn scale_translate(x: &Body2D, lambda: f64, b: Vector2<f64>) -> Result<Body2D> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonPositiveScale(lambda));
    }
    Ok(Body2D {
        res: x.res,
        h0: lambda * x.h0,
        coeffs: x.coeffs.iter().map(|c| c * lambda).collect(),
        polygon: x.polygon.scale(lambda).translate(b),
    })
}

/// `AX`, with support function `h_{AX}(p) = h_X(Aᵀp)`.
///
/// Rotations and reflections act exactly on the coefficients. A general
/// invertible map resamples the trigonometric part and projects it back to
/// degree `N`, so the result is re-checked for convexity.
pub fn apply_op(a: &LinearOp2, x: &Body2D) -> Result<Body2D> {
    let polygon = x.polygon.linear_map(a.matrix());
    match a.kind() {
        OpKind::Rotation { angle } => {
            let coeffs = x
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * Complex64::from_polar(1.0, -((i + 1) as f64) * angle))
                .collect();
            Ok(Body2D { res: x.res, h0: x.h0, coeffs, polygon })
        }
        OpKind::Reflection { axis } => {
            let coeffs = x
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.conj() * Complex64::from_polar(1.0, -2.0 * ((i + 1) as f64) * axis))
                .collect();
            Ok(Body2D { res: x.res, h0: x.h0, coeffs, polygon })
        }
        OpKind::General => {
            let det = a.determinant();
            let scale = a.matrix().abs().max();
            if !(det.abs() > 1e-12 * scale * scale) {
                return Err(Error::SingularOperator { det });
            }
            let at = a.matrix().transpose();
            let samples: Vec<f64> = (0..x.res.grid)
                .map(|j| {
                    let th = x.res.angle(j);
                    let v = at * Vector2::new(th.cos(), th.sin());
                    v.norm() * trig_eval(x.h0, &x.coeffs, v.y.atan2(v.x))
                })
                .collect();
            let (h0, coeffs) = project(&x.res, &samples);
            let body = Body2D { res: x.res, h0, coeffs, polygon };
            body.check_convex()?;
            Ok(body)
        }
    }
}

/// Index shift `k` with `Aᵀu(θ_j) = u(θ_{j−k})` for a rotation, or the
/// reflection index `c` with `Aᵀu(θ_j) = u(θ_{c−j})`, when `A` permutes the grid.
pub(crate) fn grid_permutation(a: &LinearOp2, res: &Resolution) -> Result<Vec<usize>> {
    let m = res.grid;
    let step = TAU / m as f64;
    let snap = |x: f64| -> Result<i64> {
        let r = x.round();
        if (x - r).abs() > 1e-9 {
            return Err(Error::GridIncompatible { grid: m });
        }
        Ok(r as i64)
    };
    let m_i = m as i64;
    match a.kind() {
        OpKind::Rotation { angle } => {
            let k = snap(angle / step)?;
            Ok((0..m_i).map(|j| (j - k).rem_euclid(m_i) as usize).collect())
        }
        OpKind::Reflection { axis } => {
            let c = snap(2.0 * axis / step)?;
            Ok((0..m_i).map(|j| (c - j).rem_euclid(m_i) as usize).collect())
        }
        OpKind::General => Err(Error::GridIncompatible { grid: m }),
    }
}

/// Angle of a direction, in `[0, 2π)`.
pub fn direction_angle(u: Vector2<f64>) -> f64 {
    u.y.atan2(u.x).rem_euclid(TAU)
}

/// Unit vector `u(θ)`.
pub fn unit(theta: f64) -> Vector2<f64> {
    Vector2::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomfun::area;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn bumpy() -> Body2D {
        Body2D::from_fourier(
            1.0,
            &[
                Complex64::new(0.1, -0.2),
                Complex64::new(0.03, 0.01),
                Complex64::new(-0.01, 0.015),
                Complex64::new(0.0, 0.004),
            ],
        )
        .unwrap()
    }

    #[test]
    fn resolution_rules() {
        assert!(Resolution::new(32, 128).is_ok());
        assert!(Resolution::new(32, 64).is_err());
        assert!(Resolution::new(8, 19).is_err());
        assert!(Resolution::new(0, 8).is_err());
    }

    #[test]
    fn polygon_areas() {
        assert_relative_eq!(area(&Body2D::unit_square()), 1.0, epsilon = 1e-14);
        let hex: Vec<[f64; 2]> = (0..6)
            .map(|k| {
                let a = TAU * k as f64 / 6.0;
                [a.cos(), a.sin()]
            })
            .collect();
        let h = Body2D::from_polygon(&hex).unwrap();
        assert_relative_eq!(area(&h), 3.0 * 3f64.sqrt() / 2.0, epsilon = 1e-13);
        assert!(h.truncation_residual() > 0.0);
        assert!(matches!(
            Body2D::from_polygon(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]),
            Err(Error::NonConvexInput(_))
        ));
    }

    #[test]
    fn nonconvex_fourier_rejected() {
        let r = Body2D::from_fourier(1.0, &[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)]);
        assert!(matches!(r, Err(Error::NotConvex { .. })));
        assert!(matches!(Body2D::from_fourier(0.0, &[]), Err(Error::DegenerateBody { .. })));
    }

    #[test]
    fn sums_and_steiner() {
        let x = bumpy();
        let o = Body2D::zero(x.resolution());
        let same = minkowski_sum(&x, &o).unwrap();
        let d = same
            .support_samples()
            .iter()
            .zip(x.support_samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(d < 1e-15);
        let b1 = Body2D::disk(1.0).unwrap();
        assert_relative_eq!(area(&minkowski_sum(&b1, &b1).unwrap()), 4.0 * PI, epsilon = 1e-13);
        let steiner = minkowski_sum(&Body2D::unit_square(), &b1).unwrap();
        assert_relative_eq!(area(&steiner), 5.0 + PI, epsilon = 1e-13);
        let moved = scale_translate(&x, 1.0, Vector2::new(3.0, -1.0)).unwrap();
        assert_relative_eq!(area(&moved), area(&x), epsilon = 1e-13);
        let shift = moved.steiner_point() - x.steiner_point();
        assert_relative_eq!(shift.x, 3.0, epsilon = 1e-13);
        assert_relative_eq!(shift.y, -1.0, epsilon = 1e-13);
        assert!(matches!(scale_translate(&x, 0.0, Vector2::zeros()), Err(Error::NonPositiveScale(_))));
    }

    #[test]
    fn grid_mismatch_detected() {
        let a = Body2D::disk(1.0).unwrap();
        let b = Body2D::disk_with(Resolution::new(16, 64).unwrap(), 1.0).unwrap();
        assert!(matches!(minkowski_sum(&a, &b), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn quarter_turn_of_square() {
        let sq = Body2D::unit_square();
        let r = apply_op(&LinearOp2::rotation(FRAC_PI_2), &sq).unwrap();
        assert_relative_eq!(area(&r), 1.0, epsilon = 1e-14);
        assert_relative_eq!(r.support(0.0), sq.support(-FRAC_PI_2), epsilon = 1e-14);
    }

    #[test]
    fn rotation_order_returns_to_start() {
        let x = minkowski_sum(&bumpy(), &Body2D::unit_square()).unwrap();
        let a = LinearOp2::rotation_order(5);
        let mut y = x.clone();
        for _ in 0..5 {
            y = apply_op(&a, &y).unwrap();
        }
        for (c, d) in x.trig_coeffs().iter().zip(y.trig_coeffs()) {
            assert!((c - d).norm() < 1e-12);
        }
        for (u, v) in x.support_samples().iter().zip(y.support_samples()) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn ops_match_support_definition() {
        let x = minkowski_sum(&bumpy(), &Body2D::from_polygon(&[[0.0, 0.0], [0.5, 0.1], [0.2, 0.4]]).unwrap()).unwrap();
        for a in [LinearOp2::rotation(0.37), LinearOp2::reflection(1.1)] {
            let y = apply_op(&a, &x).unwrap();
            let at = a.matrix().transpose();
            for th in [0.0, 0.9, 2.5, 4.4] {
                assert_relative_eq!(y.support(th), x.support_vec(at * unit(th)), epsilon = 1e-13);
            }
        }
        let shear = LinearOp2::from_rows([[1.0, 0.2], [0.0, 1.0]]);
        let y = apply_op(&shear, &bumpy()).unwrap();
        let at = shear.matrix().transpose();
        for th in [0.0, 0.9, 2.5, 4.4] {
            assert_relative_eq!(y.support(th), bumpy().support_vec(at * unit(th)), epsilon = 1e-6);
        }
        let singular = LinearOp2::from_rows([[1.0, 2.0], [0.5, 1.0]]);
        assert!(matches!(apply_op(&singular, &x), Err(Error::SingularOperator { .. })));
    }

    #[test]
    fn grid_permutation_matches_rotation() {
        let res = Resolution::default();
        let x = bumpy();
        let a = LinearOp2::rotation(TAU * 3.0 / 128.0);
        let perm = grid_permutation(&a, &res).unwrap();
        let s = x.support_samples();
        let y = apply_op(&a, &x).unwrap().support_samples();
        for j in 0..res.grid {
            assert!((y[j] - s[perm[j]]).abs() < 1e-13);
        }
        assert!(grid_permutation(&LinearOp2::rotation(0.1), &res).is_err());
        let f = LinearOp2::reflection(TAU * 5.0 / 128.0);
        let perm = grid_permutation(&f, &res).unwrap();
        let y = apply_op(&f, &x).unwrap().support_samples();
        for j in 0..res.grid {
            assert!((y[j] - s[perm[j]]).abs() < 1e-13);
        }
    }
}
