//! Which perturbations of a body can be forgotten under a rotation of order m:
//! exactly those without Fourier modes at multiples of m.

use setflow::body2d::LinearOp2;
use setflow::lab::{fourier_condition_check, membership_in_m, random_body, PerturbationSpec, TOL_M};

fn main() -> setflow::Result<()> {
    let m = 4;
    let op = LinearOp2::rotation_order(m);
    let base = random_body(3, 8, 0.1)?;
    for p in 1..=8 {
        let x0 = PerturbationSpec::single(p, 0.004, 9).apply(&base, 1.0)?;
        let mem = membership_in_m(&x0, &base, &op, m, TOL_M)?;
        let worst = fourier_condition_check(&x0, &base, m)?.into_iter().fold(0.0, f64::max);
        println!("mode {p}: member = {:5}, residual = {:.2e}, max mode gap = {worst:.2e}", mem.member, mem.residual);
    }
    Ok(())
}
