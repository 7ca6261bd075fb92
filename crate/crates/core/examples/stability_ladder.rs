//! Sup of the shape distance along a trajectory, for shrinking initial offsets.

use setflow::lab::{run_stability, write_outputs, BodySpec, ExperimentConfig, OperatorSpec, PerturbationSpec};

fn main() -> setflow::Result<()> {
    let cfg = ExperimentConfig::new(
        3,
        OperatorSpec::RotationOrder { m: 3 },
        BodySpec::Random { seed: 4, modes: 5, roughness: 0.02 },
        PerturbationSpec { modes: vec![2, 3], amplitudes: vec![0.02, 0.002], seed: 8 },
        10.0,
    );
    let rep = run_stability(&cfg)?;
    for rung in &rep.ladder {
        println!("ρ0 = {:.0e} (reached {:.3e}): sup ρ = {:.4e}", rung.rho0, rung.achieved_rho0, rung.sup_rho);
    }
    println!("monotone: {}, exponent: {:?}", rep.monotone, rep.exponent);
    println!("max Δ / (π R ρ): {:?}", rep.coupling_ratio);

    let path = std::env::temp_dir().join("stability.csv");
    write_outputs(&path, &rep.records, &rep)?;
    println!("wrote {}", path.display());
    Ok(())
}
