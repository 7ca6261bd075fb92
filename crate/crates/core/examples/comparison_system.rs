//! Mixed areas between two solutions obey a linear system; compare its
//! closed form with the matrix exponential and with direct simulation.

use setflow::body2d::LinearOp2;
use setflow::compsys::{build_omega, closed_form_s, cross_terms, evolve_xi, predicted_spectrum, spectrum, XiState};
use setflow::geomfun::mixed_area;
use setflow::lab::random_body;
use setflow::sde::solve_spectral;

fn main() -> setflow::Result<()> {
    for m in [3, 4, 6] {
        let sys = build_omega(m)?;
        println!("m = {m}: spectrum {:?}", spectrum(&sys));
        println!("        predicted {:?}", predicted_spectrum(m));
    }

    let m = 5;
    let op = LinearOp2::rotation_order(m);
    let x0 = random_body(1, 8, 0.1)?;
    let xs = random_body(2, 8, 0.1)?;
    let (s0, cross) = cross_terms(&x0, &xs, &op, m)?;
    let sys = build_omega(m)?;
    let xi0 = XiState::from_cross(s0, &cross);
    println!("{:>4} {:>20} {:>20} {:>20}", "t", "closed form", "expm", "geometric");
    for t in [0.5, 1.0, 2.0, 3.0] {
        let closed = closed_form_s(m, s0, &cross, t)?;
        let expm = evolve_xi(&sys, &xi0, t)?.xi[0];
        let direct = mixed_area(&solve_spectral(&x0, &op, t)?, &solve_spectral(&xs, &op, t)?)?;
        println!("{t:4.1} {closed:20.12} {expm:20.12} {direct:20.12}");
    }
    Ok(())
}
