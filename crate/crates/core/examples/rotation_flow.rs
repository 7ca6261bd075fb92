//! One trajectory under a rotation of order 4 with all three integrators,
//! written as CSV to the temp directory.

use setflow::body2d::LinearOp2;
use setflow::lab::random_hybrid;
use setflow::sde::{simulate, Method};

fn main() -> setflow::Result<()> {
    let x0 = random_hybrid(11)?;
    let op = LinearOp2::rotation_order(4);
    let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();

    let spectral = simulate(&x0, &op, &times, Method::Spectral)?;
    let rk4 = simulate(&x0, &op, &times, Method::Rk4 { step: 1.0 / 256.0 })?;
    let picard = simulate(&x0, &op, &times, Method::Picard { iterations: 20, steps: 400 })?;
    println!("sup |spectral − rk4|    = {:.2e}", spectral.sup_distance(&rk4)?);
    println!("sup |spectral − picard| = {:.2e}", spectral.sup_distance(&picard)?);

    let path = std::env::temp_dir().join("rotation_flow.csv");
    spectral.write_csv_file(&path, &[1, 2, 4])?;
    println!("wrote {}", path.display());
    Ok(())
}
