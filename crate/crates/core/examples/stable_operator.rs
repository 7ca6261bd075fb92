//! A non-orthogonal operator with `A⁴ = I` is conjugate to a rotation; the
//! flow is integrated in the rotated frame and mapped back.

use setflow::body2d::LinearOp2;
use setflow::lab::{evolve, random_body};
use setflow::sde::{conjugate_to_orthogonal, Method};

fn main() -> setflow::Result<()> {
    let a = LinearOp2::from_rows([[0.0, -2.0], [0.5, 0.0]]);
    println!("A^4 = I to {:.1e}", a.periodicity_residual(4));
    let (t, a1) = conjugate_to_orthogonal(&a)?;
    println!("T = {:?}\nT⁻¹AT = {:?}", t.rows(), a1.rows());

    let x0 = random_body(2, 6, 0.05)?;
    let times = [0.0, 0.5, 1.0];
    let spectral = evolve(&x0, &a, &times, Method::Spectral)?;
    let rk4 = evolve(&x0, &a, &times, Method::Rk4 { step: 1.0 / 256.0 })?;
    println!("sup |spectral − rk4| = {:.2e}", spectral.sup_distance(&rk4)?);
    Ok(())
}
