//! Minkowski sums, mixed areas and the Brunn–Minkowski deficit.

use setflow::body2d::{minkowski_sum, scale_translate};
use setflow::geomfun::{area, deficit, mixed_area};
use setflow::Body2D;

fn main() -> setflow::Result<()> {
    let square = Body2D::unit_square();
    let disk = Body2D::disk(1.0)?;
    let sum = minkowski_sum(&square, &disk)?;

    // Steiner: V[K + tB] = V[K] + 2t S[K, B] + t² V[B].
    let s = mixed_area(&square, &disk)?;
    println!("S[square, disk]     = {s:.15}  (perimeter / 2 = 2)");
    println!("V[square + disk]    = {:.15}", area(&sum));
    println!("1 + 2·2 + π         = {:.15}", 5.0 + std::f64::consts::PI);

    let d = deficit(&square, &disk)?;
    println!("Δ[square, disk]     = {:.15}  (4/π − 1 = {:.15})", d.delta, 4.0 / std::f64::consts::PI - 1.0);

    let copy = scale_translate(&square, 3.0, nalgebra::Vector2::new(-1.0, 2.0))?;
    println!("Δ[square, 3·square] = {:.3e}", deficit(&square, &copy)?.delta);
    Ok(())
}
