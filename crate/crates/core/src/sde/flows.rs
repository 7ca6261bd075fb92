use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::body2d::{apply_op, grid_permutation, Body2D, ConvexPolygon, LinearOp2, OpKind};
use crate::error::{Error, Result};
use crate::geomfun::mixed_area;

use super::trajectory::check_times;
use super::{Integrator, Trajectory};

pub const DEFAULT_RK4_STEP: f64 = 1.0 / 256.0;

/// Largest operator order searched for finite-order orbits.
const MAX_ORDER: usize = 4096;
const ORDER_TOL: f64 = 1e-9;

/// `Σ w_k A^k P`.
pub fn orbit_combination(p: &ConvexPolygon, op: &LinearOp2, weights: &[f64]) -> ConvexPolygon {
    let images: Vec<ConvexPolygon> = (0..weights.len()).map(|k| p.linear_map(op.power(k).matrix())).collect();
    let terms: Vec<(f64, &ConvexPolygon)> = weights.iter().copied().zip(images.iter()).collect();
    ConvexPolygon::combination(&terms)
}

/// Weights `c_k(t) = Σ_{n ≡ k (mod m)} tⁿ/n!`, so that
/// `exp(tA) = Σ_k c_k A^k` when `A^m = I`.
pub fn spectral_orbit_weights(m: usize, t: f64) -> Vec<f64> {
    let mut w = vec![0.0; m];
    let mut term = 1.0;
    let mut n = 0usize;
    loop {
        w[n % m] += term;
        n += 1;
        term *= t / n as f64;
        if n >= m && (term <= 1e-18 * w[0].max(1.0) || term == 0.0) {
            break;
        }
    }
    w
}

/// `exp(tA)` for a rotation `A`, i.e. `e^{t cos α} R(t sin α)`.
fn rotation_exp(alpha: f64, t: f64) -> Matrix2<f64> {
    let (s, c) = alpha.sin_cos();
    LinearOp2::rotation(t * s).matrix() * (t * c).exp()
}

fn convex_or_violation(body: Body2D, t: f64) -> Result<Body2D> {
    let min_curvature = body.min_curvature();
    if min_curvature < -body.tol_convex() || !min_curvature.is_finite() {
        return Err(Error::ConvexityViolated { t, min_curvature });
    }
    Ok(body)
}

/// Exact solution for a rotation `A` by angle α:
/// `H_p(t) = exp(t e^{−ipα}) H_p(0)`.
///
/// A polygon summand other than a single point needs `A` of finite order,
/// otherwise [`Error::NotRepresentable`].
pub fn solve_spectral(x0: &Body2D, op: &LinearOp2, t: f64) -> Result<Body2D> {
    let OpKind::Rotation { angle } = op.kind() else {
        return Err(Error::NotRotation);
    };
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let res = x0.resolution();
    let h0 = x0.trig_h0() * t.exp();
    let coeffs: Vec<Complex64> = x0
        .trig_coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let z = Complex64::from_polar(1.0, -((i + 1) as f64) * angle) * t;
            c * z.exp()
        })
        .collect();
    let poly = x0.polygon();
    let polygon = if poly.is_point() {
        poly.linear_map(&rotation_exp(angle, t))
    } else {
        let m = op.order(MAX_ORDER, ORDER_TOL).ok_or_else(|| {
            Error::NotRepresentable("polygon summand under a rotation of infinite order".into())
        })?;
        orbit_combination(poly, op, &spectral_orbit_weights(m, t))
    };
    convex_or_violation(Body2D::from_raw(res, h0, coeffs, polygon), t)
}

/// [`solve_spectral`] at each of `times`.
pub fn solve_spectral_trajectory(x0: &Body2D, op: &LinearOp2, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let bodies = times.iter().map(|&t| solve_spectral(x0, op, t)).collect::<Result<Vec<_>>>()?;
    Trajectory::new(times.to_vec(), bodies, Integrator::Spectral)
}

/// Classic RK4 on the grid samples `dH(θ_j)/dt = H(θ_{π(j)})` where
/// `Aᵀu(θ_j) = u(θ_{π(j)})`, with fixed step at most `step`; substeps are
/// shortened so that every output time is hit exactly.
pub fn solve_rk4(x0: &Body2D, op: &LinearOp2, times: &[f64], step: f64) -> Result<Trajectory> {
    check_times(times)?;
    if !(step > 0.0) {
        return Err(Error::InvalidConfig(format!("RK4 step must be positive, got {step}")));
    }
    let res = x0.resolution();
    let perm = grid_permutation(op, &res)?;
    let order = op.order(res.grid, ORDER_TOL).ok_or(Error::GridIncompatible { grid: res.grid })?;

    let n = res.grid;
    let mut y: Vec<f64> = x0.trig_samples();
    y.extend(std::iter::once(1.0).chain(std::iter::repeat_n(0.0, order - 1)));
    let apply = |v: &[f64], out: &mut [f64]| {
        for j in 0..n {
            out[j] = v[perm[j]];
        }
        for k in 0..order {
            out[n + k] = v[n + (k + order - 1) % order];
        }
    };
    let len = y.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);

    let mut t = 0.0;
    let mut bodies = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        let substeps = (span / step - 1e-9).ceil().max(0.0) as usize;
        if substeps > 0 {
            let h = span / substeps as f64;
            for _ in 0..substeps {
                apply(&y, &mut k1);
                for i in 0..len {
                    tmp[i] = y[i] + 0.5 * h * k1[i];
                }
                apply(&tmp, &mut k2);
                for i in 0..len {
                    tmp[i] = y[i] + 0.5 * h * k2[i];
                }
                apply(&tmp, &mut k3);
                for i in 0..len {
                    tmp[i] = y[i] + h * k3[i];
                }
                apply(&tmp, &mut k4);
                for i in 0..len {
                    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
        }
        t = target;
        let polygon = orbit_combination(x0.polygon(), op, &y[n..]);
        bodies.push(Body2D::from_trig_samples(res, &y[..n], polygon));
    }
    Trajectory::new(times.to_vec(), bodies, Integrator::Rk4)
}

/// Parameters of the Picard reference solver.
#[derive(Clone, Debug, PartialEq)]
pub struct PicardConfig {
    pub horizon: f64,
    pub iterations: usize,
    /// Uniform quadrature intervals on `[0, horizon]`.
    pub steps: usize,
    pub samples: Vec<f64>,
}

impl PicardConfig {
    pub fn new(horizon: f64, iterations: usize, steps: usize, samples: Vec<f64>) -> Result<Self> {
        let cfg = Self { horizon, iterations, steps, samples };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) {
            return Err(Error::InvalidConfig(format!("Picard horizon must be positive, got {}", self.horizon)));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("Picard needs at least one iteration".into()));
        }
        if self.steps < 2 {
            return Err(Error::InvalidConfig("Picard needs at least two quadrature steps".into()));
        }
        check_times(&self.samples)?;
        if self.samples.iter().any(|&t| t > self.horizon * (1.0 + 1e-12)) {
            return Err(Error::InvalidConfig("sample time beyond the Picard horizon".into()));
        }
        Ok(())
    }
}

/// Cumulative integral `∫_0^{t_i} f` on a nonuniform grid, integrating the
/// quadratic through three neighbouring nodes over each interval.
fn cumulative_quadratic(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut out = vec![0.0; n];
    let g = 0.5 / 3f64.sqrt();
    for i in 0..n - 1 {
        let (a, b) = (t[i], t[i + 1]);
        let nodes = if i + 2 < n { [i, i + 1, i + 2] } else if i >= 1 { [i - 1, i, i + 1] } else { [i, i + 1, i + 1] };
        let q = |x: f64| -> f64 {
            if nodes[1] == nodes[2] {
                let (x0, x1) = (t[nodes[0]], t[nodes[1]]);
                return f[nodes[0]] + (f[nodes[1]] - f[nodes[0]]) * (x - x0) / (x1 - x0);
            }
            let mut acc = 0.0;
            for (ia, &ja) in nodes.iter().enumerate() {
                let mut l = f[ja];
                for (ib, &jb) in nodes.iter().enumerate() {
                    if ia != ib {
                        l *= (x - t[jb]) / (t[ja] - t[jb]);
                    }
                }
                acc += l;
            }
            acc
        };
        let mid = 0.5 * (a + b);
        let h = b - a;
        out[i + 1] = out[i] + 0.5 * h * (q(mid - g * h) + q(mid + g * h));
    }
    out
}

/// The `iterations`-th Picard iterate `X_m(t) = X0 + ∫_0^t A X_{m−1}`, i.e.
/// `Σ_{j≤m} w_j(t) A^j X0` with `w_0 = 1` and `w_j = ∫ w_{j−1}` by quadrature.
pub fn solve_picard(x0: &Body2D, op: &LinearOp2, cfg: &PicardConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let mut nodes: Vec<f64> = (0..=cfg.steps).map(|i| cfg.horizon * i as f64 / cfg.steps as f64).collect();
    nodes.extend(cfg.samples.iter().copied());
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    let index_of = |t: f64| {
        nodes
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * (1.0 + t.abs()))
            .expect("sample times are quadrature nodes")
    };

    let mut weights = vec![vec![1.0; nodes.len()]];
    for j in 1..=cfg.iterations {
        let next = cumulative_quadratic(&nodes, &weights[j - 1]);
        weights.push(next);
    }
    let mut orbit = vec![x0.clone()];
    for j in 1..=cfg.iterations {
        orbit.push(apply_op(op, &orbit[j - 1])?);
    }

    let mut bodies = Vec::with_capacity(cfg.samples.len());
    for &t in &cfg.samples {
        let i = index_of(t);
        let terms: Vec<(f64, &Body2D)> = weights.iter().map(|w| w[i]).zip(orbit.iter()).collect();
        bodies.push(Body2D::combination(&terms)?);
    }
    Trajectory::new(cfg.samples.clone(), bodies, Integrator::Picard)
}

/// Factorial tail `(Σ_{j>m} tʲ/j!) · max_θ |H_{X0}(θ)|`, a bound on the sup-norm
/// distance between the `m`-th Picard iterate and the exact solution for
/// orthogonal `A`.
pub fn picard_tail_bound(x0: &Body2D, t: f64, m: usize) -> f64 {
    let mut term = 1.0;
    for j in 1..=m + 1 {
        term *= t / j as f64;
    }
    let mut tail = 0.0;
    let mut j = m + 1;
    while term > 1e-300 && (tail == 0.0 || term > 1e-18 * tail) {
        tail += term;
        j += 1;
        term *= t / j as f64;
    }
    let h = x0.support_samples().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    tail * h
}

/// `M[X0] = max_{0≤k<m} S[A^k X0, X0]`.
pub fn volume_bound_constant(x0: &Body2D, op: &LinearOp2, m: usize) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    let mut xk = x0.clone();
    for k in 0..m.max(1) {
        if k > 0 {
            xk = apply_op(op, &xk)?;
        }
        best = best.max(mixed_area(&xk, x0)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body2d::{minkowski_sum, Resolution};
    use crate::geomfun::{area, hausdorff};
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    fn blob() -> Body2D {
        Body2D::from_fourier(
            1.0,
            &[
                Complex64::new(0.05, 0.02),
                Complex64::new(0.04, -0.03),
                Complex64::new(0.01, 0.015),
                Complex64::new(-0.004, 0.003),
            ],
        )
        .unwrap()
    }

    fn hybrid() -> Body2D {
        minkowski_sum(&blob(), &Body2D::from_polygon(&[[0.0, 0.0], [0.6, 0.1], [0.2, 0.5]]).unwrap()).unwrap()
    }

    #[test]
    fn orbit_weights_sum_to_exponential() {
        for m in [1, 2, 3, 4, 7] {
            let w = spectral_orbit_weights(m, 1.7);
            assert_relative_eq!(w.iter().sum::<f64>(), 1.7f64.exp(), max_relative = 1e-15);
        }
        let w = spectral_orbit_weights(4, 2.0);
        let direct: f64 = (0..4).map(|q| (Complex64::i().powu(q) * 2.0).exp().re).sum::<f64>() / 4.0;
        assert_relative_eq!(w[0], direct, max_relative = 1e-14);
    }

    #[test]
    fn spectral_disk_grows_exponentially() {
        let d = Body2D::disk(1.0).unwrap();
        let op = LinearOp2::rotation(0.9);
        for t in [0.0, 0.5, 3.0] {
            let x = solve_spectral(&d, &op, t).unwrap();
            assert_relative_eq!(area(&x), (2.0 * t).exp() * PI, max_relative = 1e-14);
        }
        assert_eq!(solve_spectral(&blob(), &op, 0.0).unwrap(), blob());
        assert!(matches!(
            solve_spectral(&d, &LinearOp2::reflection(0.2), 1.0),
            Err(Error::NotRotation)
        ));
    }

    #[test]
    fn spectral_mode_amplitude() {
        let m = 6;
        let p = 2;
        let mut c = vec![Complex64::new(0.0, 0.0); p];
        c[p - 1] = Complex64::new(0.02, 0.01);
        let x = Body2D::from_fourier(1.0, &c).unwrap();
        let alpha = TAU / m as f64;
        let t = 1.3;
        let y = solve_spectral(&x, &LinearOp2::rotation(alpha), t).unwrap();
        let ratio = y.fourier_coefficient(p).norm() / x.fourier_coefficient(p).norm();
        assert_relative_eq!(ratio, (t * (p as f64 * alpha).cos()).exp(), max_relative = 1e-14);
    }

    #[test]
    fn integrators_agree_on_hybrid_body() {
        let x = hybrid();
        let op = LinearOp2::rotation_order(4);
        let times = [0.25, 0.5, 1.0];
        let spec = solve_spectral_trajectory(&x, &op, &times).unwrap();
        let rk = solve_rk4(&x, &op, &times, DEFAULT_RK4_STEP).unwrap();
        let cfg = PicardConfig::new(1.0, 20, 400, times.to_vec()).unwrap();
        let pic = solve_picard(&x, &op, &cfg).unwrap();
        assert!(spec.sup_distance(&rk).unwrap() < 1e-9);
        assert!(spec.sup_distance(&pic).unwrap() < 1e-6, "{}", spec.sup_distance(&pic).unwrap());
    }

    #[test]
    fn rk4_is_fourth_order() {
        let x = blob();
        let op = LinearOp2::rotation_order(8);
        let exact = solve_spectral(&x, &op, 1.0).unwrap();
        let err = |h: f64| {
            let tr = solve_rk4(&x, &op, &[1.0], h).unwrap();
            hausdorff(tr.last().unwrap(), &exact).unwrap()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.5, "{ratio}");
    }

    #[test]
    fn rk4_rejects_off_grid_rotation() {
        let r = solve_rk4(&blob(), &LinearOp2::rotation(0.1), &[1.0], DEFAULT_RK4_STEP);
        assert!(matches!(r, Err(Error::GridIncompatible { .. })));
        let res = Resolution::new(32, 96).unwrap();
        let x = blob().with_resolution(res).unwrap();
        assert!(solve_rk4(&x, &LinearOp2::rotation_order(3), &[0.5], DEFAULT_RK4_STEP).is_ok());
    }

    #[test]
    fn reflection_flow_rk4_matches_picard() {
        let x = hybrid();
        let op = LinearOp2::reflection(TAU * 5.0 / 128.0);
        let times = [0.5, 1.0];
        let rk = solve_rk4(&x, &op, &times, DEFAULT_RK4_STEP).unwrap();
        let cfg = PicardConfig::new(1.0, 20, 400, times.to_vec()).unwrap();
        let pic = solve_picard(&x, &op, &cfg).unwrap();
        assert!(rk.sup_distance(&pic).unwrap() < 1e-6);
    }

    #[test]
    fn picard_first_iterate_and_disk_series() {
        let x = blob();
        let alpha = 0.6;
        let op = LinearOp2::rotation(alpha);
        let t = 0.8;
        let cfg = PicardConfig::new(t, 1, 10, vec![t]).unwrap();
        let x1 = solve_picard(&x, &op, &cfg).unwrap();
        let y = x1.last().unwrap();
        for th in [0.0, 1.0, 2.0, 4.0] {
            assert_relative_eq!(y.support(th), x.support(th) + t * x.support(th - alpha), epsilon = 1e-13);
        }
        let d = Body2D::disk(1.0).unwrap();
        for k in [1, 3, 6] {
            let cfg = PicardConfig::new(1.0, k, 200, vec![1.0]).unwrap();
            let y = solve_picard(&d, &op, &cfg).unwrap();
            let partial: f64 = (0..=k).map(|l| 1.0 / (1..=l).map(|i| i as f64).product::<f64>()).sum();
            assert_relative_eq!(y.last().unwrap().mean_support(), partial, max_relative = 1e-8);
            assert!(picard_tail_bound(&d, 1.0, k) >= 1f64.exp() - partial - 1e-15);
        }
    }

    #[test]
    fn volume_bounds_on_hybrid() {
        let x = hybrid();
        let op = LinearOp2::rotation_order(3);
        let big_m = volume_bound_constant(&x, &op, 3).unwrap();
        let v0 = area(&x);
        for t in [0.5, 1.0, 2.0] {
            let v = area(&solve_spectral(&x, &op, t).unwrap());
            let e = (2.0 * t).exp();
            assert!(v >= v0 * e * (1.0 - 1e-12));
            assert!(v <= big_m * e * (1.0 + 1e-12));
        }
    }
}
