use serde::{Deserialize, Serialize};

use crate::body2d::{apply_op, Body2D, LinearOp2};
use crate::error::{Error, Result};
use crate::geomfun::shape_metric;

/// Tolerance on `A^m = I`.
pub const PERIOD_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

/// `Σ_{k<m} A^k X`.
pub fn rotational_sum(x: &Body2D, op: &LinearOp2, m: usize) -> Result<Body2D> {
    let mut orbit = Vec::with_capacity(m);
    let mut cur = x.clone();
    for k in 0..m {
        if k > 0 {
            cur = apply_op(op, &cur)?;
        }
        orbit.push(cur.clone());
    }
    let terms: Vec<(f64, &Body2D)> = orbit.iter().map(|b| (1.0, b)).collect();
    Body2D::combination(&terms)
}

/// Whether the rotational sums of `X0` and `X0*` have the same shape.
pub fn membership_in_m(x0: &Body2D, x0_star: &Body2D, op: &LinearOp2, m: usize, tol: f64) -> Result<Membership> {
    if m == 0 {
        return Err(Error::BadOrder(m));
    }
    let residual = op.periodicity_residual(m);
    if residual > PERIOD_TOL {
        return Err(Error::NotPeriodic { m, residual });
    }
    let (rho, _) = shape_metric(&rotational_sum(x0, op, m)?, &rotational_sum(x0_star, op, m)?)?;
    Ok(Membership { member: rho <= tol, residual: rho })
}

/// `|H_p(X0) − H_p(X0*)|` for `p = 0, m, 2m, …` up to the degree.
///
/// Only modes that survive a rotation of order `m` are compared, so a
/// dilation (mode 0) registers here but not in the shape metric.
pub fn fourier_condition_check(x0: &Body2D, x0_star: &Body2D, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::BadOrder(m));
    }
    x0.same_grid(x0_star)?;
    let degree = x0.resolution().degree;
    Ok((0..=degree)
        .step_by(m)
        .map(|p| (x0.fourier_coefficient(p) - x0_star.fourier_coefficient(p)).norm())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{random_body, PerturbationSpec, TOL_M};

    #[test]
    fn identical_bodies() {
        let x = random_body(4, 8, 0.1).unwrap();
        let op = LinearOp2::rotation_order(4);
        let mem = membership_in_m(&x, &x, &op, 4, TOL_M).unwrap();
        assert!(mem.member);
        assert!(mem.residual < 1e-14, "{}", mem.residual);
        assert!(fourier_condition_check(&x, &x, 4).unwrap().iter().all(|&r| r == 0.0));
    }

    #[test]
    fn filtered_and_surviving_modes() {
        let x = random_body(9, 8, 0.1).unwrap();
        let op = LinearOp2::rotation_order(4);
        let inside = PerturbationSpec { modes: vec![1, 2, 3, 5], amplitudes: vec![0.02; 4], seed: 1 }.apply(&x, 1.0).unwrap();
        let mem = membership_in_m(&inside, &x, &op, 4, TOL_M).unwrap();
        assert!(mem.member, "{}", mem.residual);
        assert!(fourier_condition_check(&inside, &x, 4).unwrap().iter().all(|&r| r < 1e-15));
        let outside = PerturbationSpec::single(4, 0.02, 1).apply(&x, 1.0).unwrap();
        let mem = membership_in_m(&outside, &x, &op, 4, TOL_M).unwrap();
        assert!(!mem.member);
        assert!(mem.residual > 1e-4);
    }

    #[test]
    fn rotational_sum_matches_direct_coefficients() {
        let x = random_body(2, 8, 0.1).unwrap();
        let s = rotational_sum(&x, &LinearOp2::rotation_order(3), 3).unwrap();
        for p in 0..12 {
            let expect = if p % 3 == 0 { x.fourier_coefficient(p) * 3.0 } else { 0.0.into() };
            assert!((s.fourier_coefficient(p) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn non_periodic_rejected() {
        let x = Body2D::disk(1.0).unwrap();
        let err = membership_in_m(&x, &x, &LinearOp2::rotation(1.0), 4, TOL_M).unwrap_err();
        assert!(matches!(err, Error::NotPeriodic { m: 4, .. }));
    }
}
