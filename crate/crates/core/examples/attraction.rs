//! A perturbation inside the attraction manifold dies out at rate
//! `1 − cos(2πp/m)`; one outside it settles at a positive distance.

use setflow::lab::{run_attraction, BodySpec, ExperimentConfig, OperatorSpec, PerturbationSpec};

fn main() -> setflow::Result<()> {
    let m = 4;
    let disk = BodySpec::Fourier { h0: 1.0, coeffs: vec![] };
    for p in [1, 2, 3] {
        let cfg = ExperimentConfig::new(
            m,
            OperatorSpec::RotationOrder { m },
            disk.clone(),
            PerturbationSpec::single(p, 0.05, 1),
            12.0,
        );
        let rep = run_attraction(&cfg)?;
        let rate = rep.mode_rates[0];
        println!(
            "p = {p}: ρ(12) = {:.2e}, ρ rate {:?}, mode rate {:.4} (predicted {:.4})",
            rep.final_rho,
            rep.rho_rate,
            rate.fitted.unwrap_or(f64::NAN),
            rate.predicted.unwrap_or(f64::NAN)
        );
    }

    let mut cfg =
        ExperimentConfig::new(m, OperatorSpec::RotationOrder { m }, disk, PerturbationSpec::single(4, 0.05, 1), 12.0);
    cfg.allow_outside_manifold = true;
    let rep = run_attraction(&cfg)?;
    println!(
        "p = 4: ρ(12) = {:.6} vs limit {:.6}; Δ(12) = {:.6e} vs limit {:.6e}",
        rep.final_rho,
        rep.rho_limit,
        rep.final_delta,
        rep.delta_limit.unwrap_or(f64::NAN)
    );
    Ok(())
}
