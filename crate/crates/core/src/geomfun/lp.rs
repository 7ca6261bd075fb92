//! Linear programs in three free variables:
//!
//! ```text
//! minimize cᵀz  subject to  G z ≤ h
//! ```
//!
//! with many constraint rows. The dual `min hᵀy, Gᵀy = −c, y ≥ 0` has only
//! three equality rows, so a dense tableau simplex on the dual is tiny. The
//! primal vertex is recovered from the three active constraints of the
//! optimal dual basis.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 10_000;

#[derive(Clone, Debug, Default)]
pub struct Lp3 {
    rows: Vec<[f64; 3]>,
    rhs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpSolution {
    pub z: Vector3<f64>,
    pub objective: f64,
    /// Indices of the three constraints that define the vertex.
    pub active: [usize; 3],
}

impl Lp3 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self { rows: Vec::with_capacity(n), rhs: Vec::with_capacity(n) }
    }

    /// Adds `g·z ≤ h`.
    pub fn push(&mut self, g: [f64; 3], h: f64) {
        self.rows.push(g);
        self.rhs.push(h);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest violation `g·z − h` over all rows.
    pub fn max_violation(&self, z: &Vector3<f64>) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(g, h)| g[0] * z[0] + g[1] * z[1] + g[2] * z[2] - h)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn minimize(&self, c: [f64; 3]) -> Result<LpSolution> {
        let n = self.rows.len();
        if n < 3 {
            return Err(Error::LpInfeasible("fewer than three constraints".into()));
        }
        let mut tab = Tableau::new(&self.rows, &self.rhs, c);
        tab.phase_one()?;
        tab.phase_two()?;
        let active = tab.basis_constraints()?;
        let mut g = Matrix3::zeros();
        let mut h = Vector3::zeros();
        for (r, &k) in active.iter().enumerate() {
            for col in 0..3 {
                g[(r, col)] = self.rows[k][col];
            }
            h[r] = self.rhs[k];
        }
        let z = g
            .lu()
            .solve(&h)
            .ok_or_else(|| Error::LpInfeasible("singular active set".into()))?;
        let objective = c[0] * z[0] + c[1] * z[1] + c[2] * z[2];
        Ok(LpSolution { z, objective, active })
    }

    /// Minimizes `c` and then breaks ties lexicographically: among points
    /// within `rtol · |optimum| + 1e-15` of the optimum, the smallest `z[i]`
    /// for each `i` in `order`, in turn.
    pub fn minimize_lex(&self, c: [f64; 3], order: &[usize], rtol: f64) -> Result<LpSolution> {
        let first = self.minimize(c)?;
        let tau = rtol * first.objective.abs() + 1e-15;
        let mut lp = self.clone();
        lp.push(c, first.objective + tau);
        let mut best = first;
        for &i in order {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            let sol = lp.minimize(e)?;
            lp.push(e, sol.z[i] + rtol * (1.0 + sol.z[i].abs()));
            best = LpSolution {
                z: sol.z,
                objective: c[0] * sol.z[0] + c[1] * sol.z[1] + c[2] * sol.z[2],
                active: sol.active,
            };
        }
        Ok(best)
    }
}

/// Dense tableau for `min hᵀy, A y = b, y ≥ 0` with `A = Gᵀ` (3 rows) plus
/// three artificial columns.
struct Tableau {
    /// 3 × (n + 3) constraint matrix.
    a: Vec<[f64; 3]>,
    b: [f64; 3],
    cost: Vec<f64>,
    basis: [usize; 3],
    n: usize,
}

impl Tableau {
    fn new(rows: &[[f64; 3]], rhs: &[f64], c: [f64; 3]) -> Self {
        let n = rows.len();
        let mut b = [-c[0], -c[1], -c[2]];
        let mut a: Vec<[f64; 3]> = rows.to_vec();
        for r in 0..3 {
            if b[r] < 0.0 {
                b[r] = -b[r];
                for col in a.iter_mut() {
                    col[r] = -col[r];
                }
            }
        }
        for r in 0..3 {
            let mut e = [0.0; 3];
            e[r] = 1.0;
            a.push(e);
        }
        let mut cost = rhs.to_vec();
        cost.extend([0.0; 3]);
        Self { a, b, cost, basis: [n, n + 1, n + 2], n }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[col][row];
        for c in self.a.iter_mut() {
            c[row] /= p;
        }
        self.b[row] /= p;
        for r in 0..3 {
            if r == row {
                continue;
            }
            let f = self.a[col][r];
            if f == 0.0 {
                continue;
            }
            for c in self.a.iter_mut() {
                c[r] -= f * c[row];
            }
            self.b[r] -= f * self.b[row];
        }
        self.basis[row] = col;
    }

    fn run(&mut self, cost: &[f64], allowed: usize) -> Result<()> {
        let mut degenerate = 0usize;
        for _ in 0..MAX_PIVOTS {
            let duals: [f64; 3] = [cost[self.basis[0]], cost[self.basis[1]], cost[self.basis[2]]];
            let bland = degenerate > 50;
            let mut enter = None;
            let mut best = -PIVOT_TOL;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let col = &self.a[j];
                let reduced = cost[j] - (duals[0] * col[0] + duals[1] * col[1] + duals[2] * col[2]);
                let scale = 1.0 + cost[j].abs();
                if reduced < -PIVOT_TOL * scale {
                    if bland {
                        enter = Some(j);
                        break;
                    }
                    if reduced < best {
                        best = reduced;
                        enter = Some(j);
                    }
                }
            }
            let Some(j) = enter else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..3 {
                let a = self.a[j][r];
                if a > PIVOT_TOL {
                    let ratio = self.b[r] / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - 1e-15 || (ratio <= lratio + 1e-15 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(Error::LpInfeasible("primal infeasible (dual unbounded)".into()));
            };
            if ratio <= 1e-15 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, j);
        }
        Err(Error::LpInfeasible("simplex pivot limit reached".into()))
    }

    fn phase_one(&mut self) -> Result<()> {
        let mut cost = vec![0.0; self.n + 3];
        for c in cost.iter_mut().skip(self.n) {
            *c = 1.0;
        }
        self.run(&cost, self.n + 3)?;
        let infeas: f64 = (0..3).filter(|&r| self.basis[r] >= self.n).map(|r| self.b[r]).sum();
        let scale = 1.0 + self.b.iter().map(|v| v.abs()).sum::<f64>();
        if infeas > 1e-10 * scale {
            return Err(Error::LpInfeasible("primal unbounded (dual infeasible)".into()));
        }
        // Drive remaining zero-level artificials out of the basis.
        for r in 0..3 {
            if self.basis[r] >= self.n {
                let col = (0..self.n)
                    .filter(|j| !self.basis.contains(j))
                    .max_by(|&i, &j| self.a[i][r].abs().total_cmp(&self.a[j][r].abs()));
                match col {
                    Some(j) if self.a[j][r].abs() > PIVOT_TOL => self.pivot(r, j),
                    _ => return Err(Error::LpInfeasible("rank-deficient constraint set".into())),
                }
            }
        }
        Ok(())
    }

    fn phase_two(&mut self) -> Result<()> {
        let cost = self.cost.clone();
        self.run(&cost, self.n)
    }

    fn basis_constraints(&self) -> Result<[usize; 3]> {
        if self.basis.iter().any(|&k| k >= self.n) {
            return Err(Error::LpInfeasible("artificial variable left in basis".into()));
        }
        Ok(self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    #[test]
    fn chebyshev_center_of_square() {
        // max r s.t. ⟨u_j, c⟩ + r ≤ h_j for the four sides of [0,1]².
        let mut lp = Lp3::new();
        lp.push([1.0, 0.0, 1.0], 1.0);
        lp.push([-1.0, 0.0, 1.0], 0.0);
        lp.push([0.0, 1.0, 1.0], 1.0);
        lp.push([0.0, -1.0, 1.0], 0.0);
        let s = lp.minimize([0.0, 0.0, -1.0]).unwrap();
        assert_relative_eq!(s.z[2], 0.5, epsilon = 1e-15);
        assert_relative_eq!(s.z[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(s.z[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn minimax_fit_on_circle() {
        // d_j = ⟨(0.3,−0.2),u_j⟩ + 1; the constant offset cannot be absorbed by x.
        let m = 64;
        let mut lp = Lp3::new();
        for j in 0..m {
            let th = TAU * j as f64 / m as f64;
            let (s, c) = th.sin_cos();
            let d = 0.3 * c - 0.2 * s + 1.0;
            lp.push([c, s, -1.0], d);
            lp.push([-c, -s, -1.0], -d);
        }
        let s = lp.minimize([0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(s.z[2], 1.0, epsilon = 1e-12);
        assert!(lp.max_violation(&s.z) < 1e-12);
    }

    #[test]
    fn lexicographic_tie_break() {
        // min ε with ε ≥ 1 and |x1| ≤ 2, |x2| ≤ 3: every x in the box is optimal.
        let mut lp = Lp3::new();
        lp.push([0.0, 0.0, -1.0], -1.0);
        lp.push([1.0, 0.0, 0.0], 2.0);
        lp.push([-1.0, 0.0, 0.0], 2.0);
        lp.push([0.0, 1.0, 0.0], 3.0);
        lp.push([0.0, -1.0, 0.0], 3.0);
        let s = lp.minimize_lex([0.0, 0.0, 1.0], &[0, 1], 0.0).unwrap();
        assert_relative_eq!(s.z[0], -2.0);
        assert_relative_eq!(s.z[1], -3.0);
        assert_relative_eq!(s.objective, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn unbounded_is_reported() {
        let mut lp = Lp3::new();
        lp.push([1.0, 0.0, 0.0], 1.0);
        lp.push([0.0, 1.0, 0.0], 1.0);
        lp.push([0.0, 0.0, 1.0], 1.0);
        assert!(matches!(lp.minimize([1.0, 0.0, 0.0]), Err(Error::LpInfeasible(_))));
    }
}
