//! Rotation by an irrational angle: every nonconstant mode decays relative to
//! the mean width, so the shape approaches a disk.

use setflow::lab::{random_body, run_hypothesis_probe};

fn main() -> setflow::Result<()> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let x0 = random_body(21, 8, 0.1)?;
    let times: Vec<f64> = (0..=40).map(|i| i as f64 * 0.5).collect();
    let rep = run_hypothesis_probe(golden, &x0, &times)?;
    for r in rep.records.iter().step_by(8) {
        println!("t = {:5.1}: ρ(X, disk) = {:.3e}", r.t, r.rho_ball);
    }
    for mr in &rep.mode_rates {
        println!("mode {}: rate {:.4}, predicted {:.4}", mr.p, mr.fitted.unwrap_or(f64::NAN), mr.predicted.unwrap_or(f64::NAN));
    }
    println!("monotone: {}", rep.monotone);
    Ok(())
}
