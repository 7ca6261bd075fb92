use std::f64::consts::{PI, TAU};

use nalgebra::Matrix2;

use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OpKind {
    /// Counter-clockwise rotation by `angle` radians, normalized to `[0, 2π)`.
    Rotation { angle: f64 },
    /// Reflection across the line through the origin at angle `axis`.
    Reflection { axis: f64 },
    General,
}

/// Linear operator on the plane. Acts on bodies through `h_{AX}(p) = h_X(Aᵀp)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearOp2 {
    matrix: Matrix2<f64>,
    kind: OpKind,
}

impl LinearOp2 {
    pub fn identity() -> Self {
        Self::rotation(0.0)
    }

    pub fn rotation(angle: f64) -> Self {
        let angle = angle.rem_euclid(TAU);
        let (s, c) = angle.sin_cos();
        Self {
            matrix: Matrix2::new(c, -s, s, c),
            kind: OpKind::Rotation { angle },
        }
    }

    /// Rotation by `2π/m`.
    pub fn rotation_order(m: usize) -> Self {
        Self::rotation(TAU / m as f64)
    }

    pub fn reflection(axis: f64) -> Self {
        let axis = axis.rem_euclid(PI);
        let (s, c) = (2.0 * axis).sin_cos();
        Self {
            matrix: Matrix2::new(c, s, s, -c),
            kind: OpKind::Reflection { axis },
        }
    }

    /// Classifies an arbitrary matrix: orthogonal matrices become rotations
    /// or reflections, everything else is `General`.
    pub fn from_matrix(matrix: Matrix2<f64>) -> Self {
        let gram = matrix.transpose() * matrix;
        let orthogonal = (gram - Matrix2::identity()).abs().max() <= ORTHO_TOL;
        let kind = if !orthogonal {
            OpKind::General
        } else if matrix.determinant() > 0.0 {
            OpKind::Rotation {
                angle: matrix[(1, 0)].atan2(matrix[(0, 0)]).rem_euclid(TAU),
            }
        } else {
            OpKind::Reflection {
                axis: (matrix[(1, 0)].atan2(matrix[(0, 0)]) / 2.0).rem_euclid(PI),
            }
        };
        Self { matrix, kind }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::from_matrix(Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.matrix
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        let m = &self.matrix;
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn is_orthogonal(&self) -> bool {
        !matches!(self.kind, OpKind::General)
    }

    pub fn rotation_angle(&self) -> Option<f64> {
        match self.kind {
            OpKind::Rotation { angle } => Some(angle),
            _ => None,
        }
    }

    pub fn transpose(&self) -> Self {
        match self.kind {
            OpKind::Rotation { angle } => Self::rotation(-angle),
            OpKind::Reflection { .. } => *self,
            OpKind::General => Self::from_matrix(self.matrix.transpose()),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match self.kind {
            OpKind::General => {
                let det = self.determinant();
                self.matrix
                    .try_inverse()
                    .map(Self::from_matrix)
                    .ok_or(Error::SingularOperator { det })
            }
            _ => Ok(self.transpose()),
        }
    }

    /// `self ∘ other`, keeping exact angle bookkeeping for rotations.
    pub fn compose(&self, other: &Self) -> Self {
        match (self.kind, other.kind) {
            (OpKind::Rotation { angle: a }, OpKind::Rotation { angle: b }) => Self::rotation(a + b),
            _ => Self::from_matrix(self.matrix * other.matrix),
        }
    }

    pub fn power(&self, k: usize) -> Self {
        match self.kind {
            OpKind::Rotation { angle } => Self::rotation(angle * k as f64),
            OpKind::Reflection { .. } if k % 2 == 1 => *self,
            OpKind::Reflection { .. } => Self::identity(),
            OpKind::General => {
                let mut acc = Matrix2::identity();
                for _ in 0..k {
                    acc *= self.matrix;
                }
                Self::from_matrix(acc)
            }
        }
    }

    /// Max-entry distance of `A^m` from the identity.
    pub fn periodicity_residual(&self, m: usize) -> f64 {
        let mut acc = Matrix2::identity();
        for _ in 0..m {
            acc *= self.matrix;
        }
        (acc - Matrix2::identity()).abs().max()
    }

    /// Smallest `m ≤ max_order` with `A^m = I` to `tol`.
    pub fn order(&self, max_order: usize, tol: f64) -> Option<usize> {
        match self.kind {
            OpKind::Rotation { angle } => (1..=max_order).find(|&m| {
                let turns = angle * m as f64 / TAU;
                (turns - turns.round()).abs() * TAU <= tol
            }),
            OpKind::Reflection { .. } => Some(2),
            OpKind::General => (1..=max_order).find(|&m| self.periodicity_residual(m) <= tol),
        }
    }
}
