use nalgebra::DMatrix;

/// Padé numerator coefficients `c_k = (2q−k)! q! / ((2q)! k! (q−k)!)` for `q = 6`.
fn pade_coeffs() -> [f64; 7] {
    let q = 6usize;
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    let mut c = [0.0; 7];
    for (k, ck) in c.iter_mut().enumerate() {
        *ck = fact(2 * q - k) * fact(q) / (fact(2 * q) * fact(k) * fact(q - k));
    }
    c
}

/// Matrix exponential by scaling and squaring with a diagonal (6,6) Padé
/// approximant, applied once `‖A/2^s‖₁ ≤ 1/2`.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm1 = (0..n).map(|j| a.column(j).abs().sum()).fold(0.0, f64::max);
    let s = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(s);
    let c = pade_coeffs();
    let id = DMatrix::<f64>::identity(n, n);
    let mut num = &id * c[0];
    let mut den = &id * c[0];
    let mut power = id.clone();
    for (k, ck) in c.iter().enumerate().skip(1) {
        power = &power * &scaled;
        num += &power * *ck;
        den += &power * (if k % 2 == 0 { *ck } else { -*ck });
    }
    let mut e = den.lu().solve(&num).expect("Padé denominator is nonsingular for ‖A‖ ≤ 1/2");
    for _ in 0..s {
        e = &e * &e;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_nalgebra_exp() {
        let a = DMatrix::from_row_slice(3, 3, &[0.1, 2.0, -0.3, 1.0, 0.0, 1.0, 1.0, 1.0, -0.7]);
        for t in [0.0, 0.3, 1.0, 3.0, 7.0] {
            let ours = expm(&(&a * t));
            let theirs = (&a * t).exp();
            let rel = (&ours - &theirs).abs().max() / theirs.abs().max();
            assert!(rel < 1e-13, "t={t}: {rel}");
        }
    }

    #[test]
    fn scalar_and_nilpotent() {
        let e = expm(&DMatrix::from_element(1, 1, 2.5));
        assert!((e[(0, 0)] - 2.5f64.exp()).abs() < 1e-13 * 2.5f64.exp());
        let jordan = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&(&jordan * 4.0));
        assert_eq!(e[(0, 0)], 1.0);
        assert!((e[(0, 1)] - 4.0).abs() < 1e-14);
    }
}
