use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Angles closer than this are treated as the same edge direction.
const ANGLE_MERGE: f64 = 1e-12;

/// Compact convex polygon stored counter-clockwise. `vertices[0]` is the
/// tail of the edge whose direction angle in `[0, 2π)` is smallest, and no two
/// consecutive edges are parallel.
///
/// One vertex is a point and two vertices a segment; both are valid
/// Minkowski summands even though they have no interior.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vector2<f64>>,
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn edge_angle(e: &Vector2<f64>) -> f64 {
    wrap_angle(e.y.atan2(e.x))
}

impl ConvexPolygon {
    pub fn point(p: Vector2<f64>) -> Self {
        Self { vertices: vec![p] }
    }

    pub fn origin() -> Self {
        Self::point(Vector2::zeros())
    }

    /// Strict constructor for user input: at least three vertices in strictly
    /// convex position, either orientation.
    pub fn from_vertices(points: &[[f64; 2]]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::DegenerateInput(format!(
                "polygon needs at least 3 vertices, got {}",
                points.len()
            )));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::DegenerateInput("non-finite vertex".into()));
        }
        let mut pts: Vec<Vector2<f64>> = points.iter().map(|p| Vector2::new(p[0], p[1])).collect();
        let n = pts.len();
        let cross = |i: usize| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let c = pts[(i + 2) % n];
            (b - a).perp(&(c - b))
        };
        let signs: Vec<f64> = (0..n).map(cross).collect();
        let scale = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
        let tol = 1e-14 * scale * scale;
        if signs.iter().any(|s| s.abs() <= tol) {
            return Err(Error::NonConvexInput("three consecutive vertices are collinear".into()));
        }
        let positive = signs[0] > 0.0;
        if signs.iter().any(|&s| (s > 0.0) != positive) {
            return Err(Error::NonConvexInput("turn direction changes".into()));
        }
        if !positive {
            pts.reverse();
        }
        // A star polygon turns consistently but winds more than once.
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = pts[(i + 1) % n] - pts[i];
            let e1 = pts[(i + 2) % n] - pts[(i + 1) % n];
            turning += e0.perp(&e1).atan2(e0.dot(&e1));
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::NonConvexInput(format!(
                "total turning {:.6} rad, polygon is self-intersecting",
                turning
            )));
        }
        let poly = Self::canonical(pts);
        if poly.area() <= 0.0 {
            return Err(Error::DegenerateInput("polygon has zero area".into()));
        }
        Ok(poly)
    }

    /// Rotates a counter-clockwise vertex list into canonical order.
    fn canonical(mut pts: Vec<Vector2<f64>>) -> Self {
        let n = pts.len();
        if n >= 2 {
            let first = (0..n)
                .min_by(|&i, &j| {
                    let ei = pts[(i + 1) % n] - pts[i];
                    let ej = pts[(j + 1) % n] - pts[j];
                    edge_angle(&ei).total_cmp(&edge_angle(&ej))
                })
                .unwrap_or(0);
            pts.rotate_left(first);
        }
        Self { vertices: pts }
    }

    /// Walks `edges` (sorted by direction angle, summing to zero) and places
    /// the result so that its support values in directions `e_x` and `e_y`
    /// equal `target`.
    fn from_sorted_edges(edges: &[(f64, Vector2<f64>)], target: Vector2<f64>) -> Self {
        let mut merged: Vec<(f64, Vector2<f64>)> = Vec::with_capacity(edges.len());
        for &(angle, e) in edges {
            if e.norm_squared() == 0.0 {
                continue;
            }
            match merged.last_mut() {
                Some((a, v)) if (angle - *a).abs() <= ANGLE_MERGE => *v += e,
                _ => merged.push((angle, e)),
            }
        }
        if merged.len() > 1 {
            let (first, last) = (merged[0].0, merged[merged.len() - 1].0);
            if (first + TAU - last).abs() <= ANGLE_MERGE {
                let tail = merged.pop().unwrap().1;
                merged[0].1 += tail;
            }
        }
        let mut vertices = Vec::with_capacity(merged.len().max(1));
        let mut cur = Vector2::zeros();
        vertices.push(cur);
        for (_, e) in merged.iter().take(merged.len().saturating_sub(1)) {
            cur += e;
            vertices.push(cur);
        }
        let walked = Self { vertices };
        let shift = Vector2::new(
            target.x - walked.support(Vector2::x()),
            target.y - walked.support(Vector2::y()),
        );
        walked.translate(shift)
    }

    fn sorted_edges(&self, weight: f64, out: &mut Vec<(f64, Vector2<f64>)>) {
        let n = self.vertices.len();
        if n < 2 {
            return;
        }
        for i in 0..n {
            let e = (self.vertices[(i + 1) % n] - self.vertices[i]) * weight;
            out.push((edge_angle(&e), e));
        }
    }

    /// Nonnegative Minkowski combination `Σ λ_i P_i`.
    pub fn combination(terms: &[(f64, &ConvexPolygon)]) -> Self {
        let mut target = Vector2::zeros();
        let mut edges = Vec::new();
        for &(w, p) in terms {
            debug_assert!(w >= 0.0);
            if w == 0.0 {
                continue;
            }
            target += Vector2::new(p.support(Vector2::x()), p.support(Vector2::y())) * w;
            p.sorted_edges(w, &mut edges);
        }
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self::from_sorted_edges(&edges, target)
    }

    pub fn vertices(&self) -> &[Vector2<f64>] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| v * lambda).collect(),
        }
    }

    pub fn translate(&self, b: Vector2<f64>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| v + b).collect(),
        }
    }

    /// Image under an invertible linear map.
    pub fn linear_map(&self, m: &Matrix2<f64>) -> Self {
        let mut pts: Vec<Vector2<f64>> = self.vertices.iter().map(|v| m * v).collect();
        if m.determinant() < 0.0 {
            pts.reverse();
        }
        Self::canonical(pts)
    }

    pub fn support(&self, u: Vector2<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(&u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn support_at(&self, theta: f64) -> f64 {
        self.support(Vector2::new(theta.cos(), theta.sin()))
    }

    /// Edges as `(outward normal angle, length)`.
    pub fn edges(&self) -> Vec<(f64, f64)> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let e = self.vertices[(i + 1) % n] - self.vertices[i];
                (wrap_angle(e.y.atan2(e.x) - PI / 2.0), e.norm())
            })
            .collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().iter().map(|e| e.1).sum()
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let o = self.vertices[0];
        let mut twice = 0.0;
        for i in 1..n - 1 {
            twice += (self.vertices[i] - o).perp(&(self.vertices[i + 1] - o));
        }
        twice / 2.0
    }

    /// Mixed area `S[self, other] = ½ Σ_{e ∈ other} |e| h_self(n_e)`.
    pub fn mixed_area(&self, other: &ConvexPolygon) -> f64 {
        other
            .edges()
            .iter()
            .map(|&(nu, len)| len * self.support_at(nu))
            .sum::<f64>()
            / 2.0
    }

    /// Exact Fourier coefficient `(1/2π) ∫ h(θ) e^{-ipθ} dθ` of the support
    /// function, integrated vertex by vertex over the normal cones.
    pub fn fourier_coefficient(&self, p: i64) -> Complex64 {
        let arc_integral = |k: f64, a: f64, b: f64| -> Complex64 {
            if k == 0.0 {
                Complex64::new(b - a, 0.0)
            } else {
                let i = Complex64::i();
                ((i * k * b).exp() - (i * k * a).exp()) / (i * k)
            }
        };
        let pf = p as f64;
        let cone = |z: Complex64, a: f64, b: f64| -> Complex64 {
            z.conj() * 0.5 * arc_integral(1.0 - pf, a, b) + z * 0.5 * arc_integral(-1.0 - pf, a, b)
        };
        let n = self.vertices.len();
        let to_c = |v: &Vector2<f64>| Complex64::new(v.x, v.y);
        let total = if n == 1 {
            cone(to_c(&self.vertices[0]), 0.0, TAU)
        } else {
            let normals: Vec<f64> = self.edges().iter().map(|e| e.0).collect();
            (0..n)
                .map(|i| {
                    let a = normals[(i + n - 1) % n];
                    let mut span = (normals[i] - a).rem_euclid(TAU);
                    if span == 0.0 {
                        span = TAU;
                    }
                    cone(to_c(&self.vertices[i]), a, a + span)
                })
                .sum()
        };
        total / TAU
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square() -> ConvexPolygon {
        ConvexPolygon::from_vertices(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let p = ConvexPolygon::from_vertices(&[[0.0, 1.0], [1.0, 1.0], [1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert_eq!(p, square());
        assert_relative_eq!(p.area(), 1.0);
    }

    #[test]
    fn collinear_and_reflex_inputs_rejected() {
        let col = ConvexPolygon::from_vertices(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert!(matches!(col, Err(Error::NonConvexInput(_))));
        let reflex = ConvexPolygon::from_vertices(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.5], [2.0, 2.0], [0.0, 2.0]]);
        assert!(matches!(reflex, Err(Error::NonConvexInput(_))));
        let star: Vec<[f64; 2]> = (0..5)
            .map(|k| {
                let a = TAU * (2 * k) as f64 / 5.0;
                [a.cos(), a.sin()]
            })
            .collect();
        assert!(matches!(ConvexPolygon::from_vertices(&star), Err(Error::NonConvexInput(_))));
        assert!(matches!(
            ConvexPolygon::from_vertices(&[[0.0, 0.0], [1.0, 0.0]]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn square_plus_segment_is_rectangle() {
        let seg = ConvexPolygon::combination(&[(1.0, &square())]);
        assert_eq!(seg, square());
        let s = ConvexPolygon {
            vertices: vec![Vector2::new(0.0, 0.0), Vector2::new(1.0, 0.0)],
        };
        let r = ConvexPolygon::combination(&[(1.0, &square()), (1.0, &s)]);
        assert_eq!(r.vertices().len(), 4);
        assert_relative_eq!(r.area(), 2.0, epsilon = 1e-15);
        assert_relative_eq!(r.perimeter(), 6.0, epsilon = 1e-15);
    }

    #[test]
    fn mixed_area_is_symmetric_and_matches_area() {
        let sq = square();
        let tri = ConvexPolygon::from_vertices(&[[0.0, 0.0], [2.0, 0.3], [0.4, 1.7]]).unwrap();
        assert_relative_eq!(sq.mixed_area(&sq), 1.0, epsilon = 1e-15);
        assert_relative_eq!(tri.mixed_area(&tri), tri.area(), epsilon = 1e-14);
        assert_relative_eq!(sq.mixed_area(&tri), tri.mixed_area(&sq), epsilon = 1e-14);
        // V(P+Q) = V(P) + 2S + V(Q)
        let sum = ConvexPolygon::combination(&[(1.0, &sq), (1.0, &tri)]);
        assert_relative_eq!(
            sum.area(),
            sq.area() + 2.0 * sq.mixed_area(&tri) + tri.area(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn fourier_coefficients_match_quadrature() {
        let tri = ConvexPolygon::from_vertices(&[[0.2, -0.1], [2.0, 0.3], [0.4, 1.7]]).unwrap();
        let k = 200_000;
        for p in [0_i64, 1, 2, 3, 7] {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..k {
                let th = TAU * (j as f64 + 0.5) / k as f64;
                acc += tri.support_at(th) * Complex64::from_polar(1.0, -(p as f64) * th);
            }
            acc /= k as f64;
            let exact = tri.fourier_coefficient(p);
            assert!((acc - exact).norm() < 1e-9, "p={p}: {acc} vs {exact}");
        }
        // H0 is the mean width over 2, i.e. perimeter / 2π.
        assert_relative_eq!(tri.fourier_coefficient(0).re, tri.perimeter() / TAU, epsilon = 1e-14);
        let pt = ConvexPolygon::point(Vector2::new(0.3, -0.7));
        let h1 = pt.fourier_coefficient(1);
        assert_relative_eq!(h1.re, 0.15, epsilon = 1e-15);
        assert_relative_eq!(h1.im, 0.35, epsilon = 1e-15);
    }

    #[test]
    fn reflection_keeps_orientation() {
        let tri = ConvexPolygon::from_vertices(&[[0.0, 0.0], [2.0, 0.3], [0.4, 1.7]]).unwrap();
        let flip = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let r = tri.linear_map(&flip);
        assert_relative_eq!(r.area(), tri.area(), epsilon = 1e-14);
        assert_relative_eq!(r.support_at(0.4), tri.support_at(-0.4), epsilon = 1e-14);
    }
}
