//! The comparison system `dξ/dt = Ωξ` for cross mixed areas
//! `ξ_k = (S[X, A^k X*] + S[X*, A^k X]) / 2` under a rotation of order `m`,
//! and closed forms for `S[X(t), X*(t)]`.

mod expm;

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Schur};
use serde::{Deserialize, Serialize};

pub use expm::expm;

use crate::body2d::{apply_op, Body2D, LinearOp2};
use crate::error::{Error, Result};
use crate::geomfun::mixed_area;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonSystem {
    pub m: usize,
    pub omega: DMatrix<f64>,
    pub parity: Parity,
}

/// `Ω` with `ω₁₂ = 2`, `ω_ij = 1` for `|i − j| = 1` otherwise, and `ω_m1 = 1`.
pub fn build_omega(m: usize) -> Result<ComparisonSystem> {
    if m < 3 {
        return Err(Error::BadOrder(m));
    }
    let mut omega = DMatrix::zeros(m, m);
    for i in 0..m - 1 {
        omega[(i, i + 1)] = 1.0;
        omega[(i + 1, i)] = 1.0;
    }
    omega[(0, 1)] = 2.0;
    omega[(m - 1, 0)] = 1.0;
    let parity = if m.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    Ok(ComparisonSystem { m, omega, parity })
}

/// Gap below which computed eigenvalues are treated as one multiple root.
const CLUSTER_GAP: f64 = 1e-5;

/// Distinct eigenvalues of `Ω`, in decreasing order.
///
/// `Ω` has Jordan blocks, so a multiple eigenvalue comes back from the
/// Schur form as a tight cloud of roots. Each cloud is replaced by its mean,
/// which is far better conditioned than the individual roots.
pub fn spectrum(sys: &ComparisonSystem) -> Vec<f64> {
    let mut ev = eigenvalues(&sys.omega);
    ev.sort_by(|a, b| b.re.total_cmp(&a.re));
    let mut out = Vec::new();
    let mut cluster = vec![ev[0]];
    for z in ev.into_iter().skip(1) {
        if (z - cluster[cluster.len() - 1]).norm() < CLUSTER_GAP {
            cluster.push(z);
        } else {
            out.push(cluster.iter().map(|c| c.re).sum::<f64>() / cluster.len() as f64);
            cluster = vec![z];
        }
    }
    out.push(cluster.iter().map(|c| c.re).sum::<f64>() / cluster.len() as f64);
    out
}

/// Eigenvalues via the real Schur form. Francis iterations can stall on the
/// exact symmetries of `Ω` (even `m ≥ 6`), so on failure the matrix is first
/// moved by a fixed well-conditioned similarity, which leaves the spectrum
/// unchanged.
fn eigenvalues(a: &DMatrix<f64>) -> Vec<nalgebra::Complex<f64>> {
    const MAX_ITER: usize = 2000;
    if let Some(s) = Schur::try_new(a.clone(), f64::EPSILON, MAX_ITER) {
        return s.complex_eigenvalues().iter().copied().collect();
    }
    let n = a.nrows();
    let p = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else {
            0.1 * (((i * 7 + j * 3) % 5) as f64 - 2.0) / (1.0 + (i + j) as f64)
        }
    });
    let pinv = p.clone().try_inverse().expect("diagonally dominant");
    Schur::try_new(&p * a * pinv, f64::EPSILON, MAX_ITER)
        .expect("Schur iteration converges after similarity")
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect()
}

/// `{2 cos(2πq/m) | q = 0..⌊m/2⌋}` in decreasing order.
pub fn predicted_spectrum(m: usize) -> Vec<f64> {
    (0..=m / 2).map(|q| 2.0 * (TAU * q as f64 / m as f64).cos()).collect()
}

/// The vector `ξ` of cross mixed areas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiState {
    pub xi: Vec<f64>,
}

impl XiState {
    /// `ξ_k = (S[X, A^k X*] + S[X*, A^k X]) / 2` for `k = 0..m−1`.
    pub fn from_bodies(x: &Body2D, x_star: &Body2D, op: &LinearOp2, m: usize) -> Result<Self> {
        let mut ax = x.clone();
        let mut axs = x_star.clone();
        let mut xi = Vec::with_capacity(m);
        for k in 0..m {
            if k > 0 {
                ax = apply_op(op, &ax)?;
                axs = apply_op(op, &axs)?;
            }
            xi.push(0.5 * (mixed_area(x, &axs)? + mixed_area(x_star, &ax)?));
        }
        Ok(Self { xi })
    }

    /// `ξ(0) = (s0, cross_1/2, …, cross_{m−1}/2)`.
    pub fn from_cross(s0: f64, cross: &[f64]) -> Self {
        let mut xi = vec![s0];
        xi.extend(cross.iter().map(|c| c / 2.0));
        Self { xi }
    }

    /// `s0 = ξ_0` and `cross_p = 2ξ_p`.
    pub fn cross(&self) -> (f64, Vec<f64>) {
        (self.xi[0], self.xi[1..].iter().map(|v| 2.0 * v).collect())
    }
}

/// `ξ(t) = exp(Ωt) ξ(0)`.
pub fn evolve_xi(sys: &ComparisonSystem, xi0: &XiState, t: f64) -> Result<XiState> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if xi0.xi.len() != sys.m {
        return Err(Error::InvalidConfig(format!("ξ has length {}, expected {}", xi0.xi.len(), sys.m)));
    }
    let e = expm(&(&sys.omega * t));
    let v = e * DVector::from_column_slice(&xi0.xi);
    Ok(XiState { xi: v.iter().copied().collect() })
}

/// `s0 = S[X0, X0*]` and `cross_p = S[X0, A^p X0*] + S[X0*, A^p X0]`, `p = 1..m−1`.
pub fn cross_terms(x0: &Body2D, x0_star: &Body2D, op: &LinearOp2, m: usize) -> Result<(f64, Vec<f64>)> {
    Ok(XiState::from_bodies(x0, x0_star, op, m)?.cross())
}

fn check_inputs(m: usize, cross: &[f64]) -> Result<()> {
    if m < 3 {
        return Err(Error::BadOrder(m));
    }
    if cross.len() != m - 1 {
        return Err(Error::InvalidConfig(format!("expected {} cross terms, got {}", m - 1, cross.len())));
    }
    Ok(())
}

/// Closed form of `S[X(t), X*(t)]`.
///
/// With `c_q = cos(2πq/m)`, each cross term carries the weight
/// `(m−p)·e^{2t} + 2 Σ_q ((m−p) cos(2πpq/m) + 2t sin(2πpq/m) sin(2πq/m)) e^{2t c_q}`,
/// plus `(m−p)(−1)^p e^{−2t}` for even `m`; `q` runs over `1..⌊(m−1)/2⌋`.
/// The `s0` coefficient is `(e^{2t} [+ e^{−2t}] + 2 Σ_q e^{2t c_q}) / m`.
/// For even `m` the leading term multiplies `S[X0, X0*]`, as in the odd case.
pub fn closed_form_s(m: usize, s0: f64, cross: &[f64], t: f64) -> Result<f64> {
    check_inputs(m, cross)?;
    let mf = m as f64;
    let even = m.is_multiple_of(2);
    let qmax = (m - 1) / 2;
    let angle = |k: usize| TAU * k as f64 / mf;
    let growth = |q: usize| (2.0 * t * angle(q).cos()).exp();
    let mut lead = (2.0 * t).exp() + 2.0 * (1..=qmax).map(growth).sum::<f64>();
    if even {
        lead += (-2.0 * t).exp();
    }
    let mut total = lead / mf * s0;
    for p in 1..m {
        let mp = (m - p) as f64;
        let mut w = mp * (2.0 * t).exp();
        if even {
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            w += mp * sign * (-2.0 * t).exp();
        }
        for q in 1..=qmax {
            let pq = angle(p * q);
            w += 2.0 * (mp * pq.cos() + 2.0 * t * pq.sin() * angle(q).sin()) * growth(q);
        }
        total += w * cross[p - 1] / (mf * mf);
    }
    Ok(total)
}

/// Leading coefficient of `e^{2t}` in [`closed_form_s`]:
/// `s0/m + Σ (m−p) cross_p / m²`.
pub fn asymptotic_s(m: usize, s0: f64, cross: &[f64]) -> Result<f64> {
    check_inputs(m, cross)?;
    let mf = m as f64;
    let tail: f64 = cross.iter().enumerate().map(|(i, c)| (m - i - 1) as f64 * c).sum();
    Ok(s0 / mf + tail / (mf * mf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn omega_patterns() {
        let s = build_omega(3).unwrap();
        assert_eq!(s.omega, DMatrix::from_row_slice(3, 3, &[0., 2., 0., 1., 0., 1., 1., 1., 0.]));
        let s = build_omega(4).unwrap();
        assert_eq!(
            s.omega,
            DMatrix::from_row_slice(4, 4, &[0., 2., 0., 0., 1., 0., 1., 0., 0., 1., 0., 1., 1., 0., 1., 0.])
        );
        for m in 3..10 {
            let s = build_omega(m).unwrap();
            for i in 0..m {
                assert_eq!(s.omega.row(i).sum(), 2.0);
            }
        }
        assert!(matches!(build_omega(2), Err(Error::BadOrder(2))));
    }

    #[test]
    fn spectra_match_cosines() {
        for m in 3..=12 {
            let got = spectrum(&build_omega(m).unwrap());
            let want = predicted_spectrum(m);
            assert_eq!(got.len(), want.len(), "m={m}: {got:?}");
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-9, "m={m}: {g} vs {w}");
            }
        }
        assert_eq!(predicted_spectrum(6).len(), 4);
    }

    #[test]
    fn perron_vector_grows_at_rate_two() {
        let sys = build_omega(5).unwrap();
        let ones = XiState { xi: vec![1.0; 5] };
        let out = evolve_xi(&sys, &ones, 1.5).unwrap();
        for v in out.xi {
            assert_relative_eq!(v, 3f64.exp(), max_relative = 1e-13);
        }
        assert_eq!(evolve_xi(&sys, &ones, 0.0).unwrap(), ones);
    }

    #[test]
    fn closed_form_matches_matrix_exponential() {
        for m in 3..=8 {
            let sys = build_omega(m).unwrap();
            let base: Vec<f64> = (0..m).map(|k| 1.0 + 0.3 * ((k * 7 % 5) as f64)).collect();
            let xi: Vec<f64> = (0..m).map(|k| base[k.min(m - k)]).collect();
            let state = XiState { xi };
            let (s0, cross) = state.cross();
            for t in [0.0, 0.5, 1.0, 2.0, 3.0] {
                let e = evolve_xi(&sys, &state, t).unwrap().xi[0];
                let c = closed_form_s(m, s0, &cross, t).unwrap();
                assert_relative_eq!(c, e, max_relative = 1e-12);
            }
            let lim = closed_form_s(m, s0, &cross, 20.0).unwrap() * (-40f64).exp();
            assert_relative_eq!(lim, asymptotic_s(m, s0, &cross).unwrap(), epsilon = 1e-6);
        }
    }

    #[test]
    fn disk_pair_is_exact() {
        for m in [3, 4, 5, 6] {
            let cross = vec![2.0 * PI; m - 1];
            for t in [0.0, 1.0, 2.5] {
                let c = closed_form_s(m, PI, &cross, t).unwrap();
                assert_relative_eq!(c, (2.0 * t).exp() * PI, max_relative = 1e-13);
            }
            assert_relative_eq!(asymptotic_s(m, PI, &cross).unwrap(), PI, max_relative = 1e-14);
        }
        assert!(matches!(closed_form_s(2, 1.0, &[1.0], 1.0), Err(Error::BadOrder(2))));
    }
}
