use nalgebra::{Complex, Matrix2};

use crate::body2d::{Interval1D, LinearOp2};
use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-10;

/// Exact solution of `D_H X = J X` with `J x = −x` on the line:
/// `[x1 cosh t − x2 sinh t, x2 cosh t − x1 sinh t]`.
pub fn solve_reflection_1d(x0: &Interval1D, t: f64) -> Result<Interval1D> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let (c, s) = (t.cosh(), t.sinh());
    let (x1, x2) = (x0.lo(), x0.hi());
    Interval1D::new(x1 * c - x2 * s, x2 * c - x1 * s)
}

/// Finds `T` and orthogonal `A1 = T⁻¹ A T` for a stable operator (all
/// eigenvalues on the unit circle, none defective).
pub fn conjugate_to_orthogonal(a: &LinearOp2) -> Result<(LinearOp2, LinearOp2)> {
    if a.is_orthogonal() {
        return Ok((LinearOp2::identity(), *a));
    }
    let m = a.matrix();
    let tr = m.trace();
    let det = m.determinant();
    let disc = tr * tr - 4.0 * det;
    let scale = 1.0 + m.abs().max();
    if disc < -UNIT_TOL * scale * scale {
        let re = tr / 2.0;
        let im = (-disc).sqrt() / 2.0;
        let modulus = det.sqrt();
        if (modulus - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotStableOperator(format!("complex eigenvalues of modulus {modulus}")));
        }
        let lambda = Complex::new(re, im);
        let (vx, vy) = if m[(0, 1)].abs() >= m[(1, 0)].abs() {
            (Complex::new(m[(0, 1)], 0.0), lambda - m[(0, 0)])
        } else {
            (lambda - m[(1, 1)], Complex::new(m[(1, 0)], 0.0))
        };
        let t = Matrix2::new(vx.re, vx.im, vy.re, vy.im);
        // A (v_r + i v_i) = λ (v_r + i v_i) gives T⁻¹AT = [[a, b], [−b, a]],
        // the rotation by −arg λ.
        let a1 = LinearOp2::rotation(-im.atan2(re));
        return Ok((LinearOp2::from_matrix(t), a1));
    }
    let root = disc.max(0.0).sqrt();
    let l1 = (tr + root) / 2.0;
    let l2 = (tr - root) / 2.0;
    for l in [l1, l2] {
        if (l.abs() - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotStableOperator(format!("real eigenvalue {l} off the unit circle")));
        }
    }
    if (l1 - l2).abs() <= UNIT_TOL {
        // A ≠ λI here, so the repeated eigenvalue has a Jordan block.
        return Err(Error::NotStableOperator(format!("defective eigenvalue {l1}")));
    }
    let eigvec = |l: f64| {
        let b = m - Matrix2::identity() * l;
        let v = if b[(0, 0)].abs() + b[(0, 1)].abs() >= b[(1, 0)].abs() + b[(1, 1)].abs() {
            nalgebra::Vector2::new(-b[(0, 1)], b[(0, 0)])
        } else {
            nalgebra::Vector2::new(-b[(1, 1)], b[(1, 0)])
        };
        v / v.norm()
    };
    // Eigenvalues are +1 and −1: in the basis (v₊, v₋) A is the reflection in the x-axis.
    let (plus, minus) = if l1 > l2 { (l1, l2) } else { (l2, l1) };
    let t = Matrix2::from_columns(&[eigvec(plus), eigvec(minus)]);
    Ok((LinearOp2::from_matrix(t), LinearOp2::reflection(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reflection_closed_form() {
        let x = solve_reflection_1d(&Interval1D::new(0.0, 1.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(x.lo(), -1f64.sinh(), epsilon = 1e-15);
        assert_relative_eq!(x.hi(), 1f64.cosh(), epsilon = 1e-15);
        let p = solve_reflection_1d(&Interval1D::point(2.0), 1.5).unwrap();
        assert_relative_eq!(p.lo(), 2.0 * (-1.5f64).exp(), epsilon = 1e-14);
        assert_eq!(p.lo(), p.hi());
        let x = solve_reflection_1d(&Interval1D::new(-0.3, 0.4).unwrap(), 2.0).unwrap();
        assert_relative_eq!(x.diameter() / 0.7, 2f64.exp(), max_relative = 1e-14);
        assert!(matches!(
            solve_reflection_1d(&Interval1D::point(0.0), -1.0),
            Err(Error::NegativeTime(_))
        ));
    }

    fn check_similarity(a: &LinearOp2) -> LinearOp2 {
        let (t, a1) = conjugate_to_orthogonal(a).unwrap();
        let back = t.matrix().try_inverse().unwrap() * a.matrix() * t.matrix();
        assert!((back - a1.matrix()).abs().max() < 1e-10, "{back} vs {}", a1.matrix());
        assert!(a1.is_orthogonal());
        a1
    }

    #[test]
    fn similar_rotation_recovered() {
        let p = Matrix2::new(1.3, 0.4, -0.2, 0.9);
        let alpha = 0.8;
        let a = LinearOp2::from_matrix(p * LinearOp2::rotation(alpha).matrix() * p.try_inverse().unwrap());
        let a1 = check_similarity(&a);
        let angle = a1.rotation_angle().unwrap();
        let wrapped = angle.min(std::f64::consts::TAU - angle);
        assert_relative_eq!(wrapped, alpha, epsilon = 1e-12);
    }

    #[test]
    fn similar_reflection_recovered() {
        let p = Matrix2::new(2.0, 1.0, 0.5, 1.5);
        let a = LinearOp2::from_matrix(p * LinearOp2::reflection(0.3).matrix() * p.try_inverse().unwrap());
        check_similarity(&a);
    }

    #[test]
    fn orthogonal_is_untouched_and_unstable_rejected() {
        let r = LinearOp2::rotation(1.0);
        let (t, a1) = conjugate_to_orthogonal(&r).unwrap();
        assert_eq!(t, LinearOp2::identity());
        assert_eq!(a1, r);
        let shear = LinearOp2::from_rows([[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(conjugate_to_orthogonal(&shear), Err(Error::NotStableOperator(_))));
        let grow = LinearOp2::from_rows([[1.1, 0.0], [0.0, 0.5]]);
        assert!(matches!(conjugate_to_orthogonal(&grow), Err(Error::NotStableOperator(_))));
        let spiral = LinearOp2::from_matrix(LinearOp2::rotation(0.5).matrix() * 1.01);
        assert!(matches!(conjugate_to_orthogonal(&spiral), Err(Error::NotStableOperator(_))));
    }
}
