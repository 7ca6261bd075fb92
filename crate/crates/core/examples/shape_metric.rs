//! Shape distance after normalizing to unit area and optimizing the translation.

use nalgebra::Vector2;
use setflow::body2d::scale_translate;
use setflow::geomfun::shape_metric;
use setflow::lab::random_hybrid;
use setflow::Body2D;

fn main() -> setflow::Result<()> {
    let square = Body2D::unit_square();
    let disk = Body2D::disk(1.0)?;
    let (rho, x) = shape_metric(&square, &disk)?;
    println!("ρ(square, disk) = {rho:.10} at translation ({:.6}, {:.6})", x.x, x.y);

    let body = random_hybrid(7)?;
    for lambda in [0.1, 1.0, 10.0] {
        let copy = scale_translate(&body, lambda, Vector2::new(3.0, -1.0))?;
        println!("ρ(X, {lambda:>4}·X + b) = {:.2e}", shape_metric(&body, &copy)?.0);
    }

    let (a, b, c) = (random_hybrid(1)?, random_hybrid(2)?, random_hybrid(3)?);
    let ab = shape_metric(&a, &b)?.0;
    let bc = shape_metric(&b, &c)?.0;
    let ac = shape_metric(&a, &c)?.0;
    println!("triangle: ρ(a,c) = {ac:.6} ≤ ρ(a,b) + ρ(b,c) = {:.6}", ab + bc);
    Ok(())
}
