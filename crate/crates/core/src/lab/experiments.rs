use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body2d::{apply_op, Body2D, LinearOp2};
use crate::compsys::{asymptotic_s, cross_terms};
use crate::error::{Error, Result};
use crate::geomfun::{deficit, inradius_circumradius, shape_metric, ShapeRep};
use crate::sde::{conjugate_to_orthogonal, simulate, Method, Trajectory};

use super::config::{ExperimentConfig, PerturbationSpec};
use super::manifold::{membership_in_m, rotational_sum, Membership};

/// Window of `ρ` values used for decay-rate fits.
pub const RHO_FIT_WINDOW: (f64, f64) = (1e-6, 1e-2);

/// Floor below which normalized mode amplitudes are ignored by fits.
const MODE_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub t: f64,
    pub rho: f64,
    pub delta: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "S_cross")]
    pub s_cross: f64,
}

/// Runs `simulate`, conjugating a stable non-orthogonal operator to
/// orthogonal form first (`Y = T⁻¹X`, `X = TY`).
pub fn evolve(x0: &Body2D, op: &LinearOp2, times: &[f64], method: Method) -> Result<Trajectory> {
    if op.is_orthogonal() {
        return simulate(x0, op, times, method);
    }
    let (t, a1) = conjugate_to_orthogonal(op)?;
    let y0 = apply_op(&t.inverse()?, x0)?;
    let ys = simulate(&y0, &a1, times, method)?;
    let bodies = ys.bodies.iter().map(|y| apply_op(&t, y)).collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times: ys.times, bodies, integrator: ys.integrator })
}

/// One record per sample time comparing `X(t)` with `X*(t)`.
pub fn compare(x: &Trajectory, x_star: &Trajectory) -> Result<Vec<StabilityRecord>> {
    if x.times != x_star.times {
        return Err(Error::InvalidConfig("trajectories are sampled at different times".into()));
    }
    x.times
        .par_iter()
        .zip(x.bodies.par_iter().zip(&x_star.bodies))
        .map(|(&t, (a, b))| {
            let (rho, _) = shape_metric(a, b)?;
            let d = deficit(a, b)?;
            Ok(StabilityRecord { t, rho, delta: d.delta, v: d.vx, s_cross: d.v1 })
        })
        .collect()
}

/// Decay rate `−d log y / dt` by least squares; `None` with fewer than 3 points.
pub fn fit_decay_rate(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(_, y)| *y > 0.0).map(|&(t, y)| (t, y.ln())).collect();
    fit_slope(&pts).map(|s| -s)
}

fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Decay rate of `ρ(t)` fitted inside [`RHO_FIT_WINDOW`].
pub fn rho_decay_rate(records: &[StabilityRecord]) -> Option<f64> {
    let (lo, hi) = RHO_FIT_WINDOW;
    let pts: Vec<(f64, f64)> =
        records.iter().filter(|r| r.rho >= lo && r.rho <= hi).map(|r| (r.t, r.rho)).collect();
    fit_decay_rate(&pts)
}

fn write_csv(path: &Path, records: &[StabilityRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the records as CSV at `path` and the summary to `<stem>.summary.json`.
pub fn write_outputs<S: Serialize>(path: &Path, records: &[StabilityRecord], summary: &S) -> Result<()> {
    write_csv(path, records)?;
    let file = std::fs::File::create(path.with_extension("summary.json"))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), summary)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    /// Target initial offset.
    pub rho0: f64,
    /// Perturbation scale that produces it.
    pub scale: f64,
    /// Offset actually reached by the calibrated perturbation.
    pub achieved_rho0: f64,
    pub sup_rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    #[serde(skip)]
    pub records: Vec<StabilityRecord>,
    pub sup_rho: f64,
    pub ladder: Vec<LadderRung>,
    /// Slope of `log sup ρ` against `log ρ₀` over the ladder.
    pub exponent: Option<f64>,
    /// `sup ρ` does not grow as `ρ₀` shrinks.
    pub monotone: bool,
    /// `max (√(1+Δ) − 1) / (π R ρ)` along the trajectory, `R` the larger
    /// normalized circumradius; at most 1.
    pub coupling_ratio: Option<f64>,
}

/// Scale `s` with `ρ(X0* + s·perturbation, X0*) = rho0`, by secant iteration from `s = 0`.
pub fn calibrate_perturbation(x_star: &Body2D, pert: &PerturbationSpec, rho0: f64) -> Result<(f64, f64)> {
    let rho_at = |s: f64| -> Result<f64> { Ok(shape_metric(&pert.apply(x_star, s)?, x_star)?.0) };
    let peak = pert.amplitudes.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if !(peak > 0.0) {
        return Err(Error::InvalidConfig("perturbation does not change the shape".into()));
    }
    let probe = 1e-3 * x_star.mean_support() / peak;
    let unit = rho_at(probe)? / probe;
    if !(unit > 0.0) {
        return Err(Error::InvalidConfig("perturbation does not change the shape".into()));
    }
    let (mut s0, mut f0) = (0.0, -rho0);
    let mut s1 = rho0 / unit;
    let mut f1 = rho_at(s1)? - rho0;
    for _ in 0..12 {
        if f1.abs() <= 1e-9 * rho0 || f1 == f0 {
            break;
        }
        let s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
        (s0, f0) = (s1, f1);
        s1 = s2;
        f1 = rho_at(s1)? - rho0;
    }
    Ok((s1, f1 + rho0))
}

fn coupling_ratio(x: &Trajectory, x_star: &Trajectory, records: &[StabilityRecord]) -> Result<Option<f64>> {
    let ratios = records
        .par_iter()
        .zip(x.bodies.par_iter().zip(&x_star.bodies))
        .filter(|(r, _)| r.rho > 1e-12)
        .map(|(r, (a, b))| {
            let ra = inradius_circumradius(&ShapeRep::new(a)?.body)?.big_r;
            let rb = inradius_circumradius(&ShapeRep::new(b)?.body)?.big_r;
            Ok(((1.0 + r.delta).sqrt() - 1.0) / (std::f64::consts::PI * ra.max(rb) * r.rho))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().reduce(f64::max))
}

/// Trajectory comparison plus the `ρ₀` ladder.
pub fn run_stability(cfg: &ExperimentConfig) -> Result<StabilityReport> {
    cfg.validate()?;
    let op = cfg.op()?;
    let times = cfg.times();
    let method = cfg.method();
    let x_star = cfg.x0_star()?;
    let star = evolve(&x_star, &op, &times, method)?;
    let x = evolve(&cfg.x0()?, &op, &times, method)?;
    let records = compare(&x, &star)?;
    let coupling = coupling_ratio(&x, &star, &records)?;
    let sup = |rs: &[StabilityRecord]| rs.iter().map(|r| r.rho).fold(0.0, f64::max);

    let ladder = cfg
        .ladder
        .par_iter()
        .map(|&rho0| {
            let (scale, achieved) = calibrate_perturbation(&x_star, &cfg.perturbation, rho0)?;
            let traj = evolve(&cfg.perturbation.apply(&x_star, scale)?, &op, &times, method)?;
            Ok(LadderRung { rho0, scale, achieved_rho0: achieved, sup_rho: sup(&compare(&traj, &star)?) })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sorted = ladder.clone();
    sorted.sort_by(|a, b| b.rho0.total_cmp(&a.rho0));
    let monotone = sorted.windows(2).all(|w| w[1].sup_rho <= w[0].sup_rho * (1.0 + 1e-12));
    let pts: Vec<(f64, f64)> = sorted
        .iter()
        .filter(|r| r.sup_rho > 0.0)
        .map(|r| (r.rho0.ln(), r.sup_rho.ln()))
        .collect();
    let exponent = if pts.len() == 2 { Some((pts[1].1 - pts[0].1) / (pts[1].0 - pts[0].0)) } else { fit_slope(&pts) };
    Ok(StabilityReport { sup_rho: sup(&records), records, ladder, exponent, monotone, coupling_ratio: coupling })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeRate {
    pub p: usize,
    /// `1 − cos(pα)` for a rotation by `α`.
    pub predicted: Option<f64>,
    pub fitted: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttractionReport {
    pub membership: Membership,
    #[serde(skip)]
    pub records: Vec<StabilityRecord>,
    /// Normalized amplitudes `|H_p(X) − H_p(X*)| / √V[X]` per tracked mode, one row per sample time.
    #[serde(skip)]
    pub mode_amplitudes: Vec<Vec<f64>>,
    pub rho_rate: Option<f64>,
    pub mode_rates: Vec<ModeRate>,
    pub final_rho: f64,
    pub final_delta: f64,
    /// `ρ` between the rotational sums of `X0` and `X0*`.
    pub rho_limit: f64,
    /// `Δ` limit from the leading closed-form coefficients (`m ≥ 3`).
    pub delta_limit: Option<f64>,
}

fn tracked_modes(cfg: &ExperimentConfig) -> Vec<usize> {
    let mut modes = if cfg.track_modes.is_empty() { cfg.perturbation.modes.clone() } else { cfg.track_modes.clone() };
    modes.retain(|&p| p > 0);
    modes.sort_unstable();
    modes.dedup();
    modes
}

/// Limit of `Δ[X(t), X*(t)]` from the `e^{2t}` coefficients of the closed form.
pub fn asymptotic_deficit(x0: &Body2D, x0_star: &Body2D, op: &LinearOp2, m: usize) -> Result<f64> {
    let lead = |a: &Body2D, b: &Body2D| -> Result<f64> {
        let (s0, cross) = cross_terms(a, b, op, m)?;
        asymptotic_s(m, s0, &cross)
    };
    let s = lead(x0, x0_star)?;
    Ok(s * s / (lead(x0, x0)? * lead(x0_star, x0_star)?) - 1.0)
}

/// Perturbation inside the attraction manifold, with its decay.
pub fn run_attraction(cfg: &ExperimentConfig) -> Result<AttractionReport> {
    cfg.validate()?;
    let op = cfg.op()?;
    let x_star = cfg.x0_star()?;
    let x0 = cfg.x0()?;
    let membership = membership_in_m(&x0, &x_star, &op, cfg.m, cfg.tol_m)?;
    if !membership.member && !cfg.allow_outside_manifold {
        return Err(Error::NotInManifold { residual: membership.residual, tolerance: cfg.tol_m });
    }
    let times = cfg.times();
    let method = cfg.method();
    let star = evolve(&x_star, &op, &times, method)?;
    let x = evolve(&x0, &op, &times, method)?;
    let records = compare(&x, &star)?;

    let modes = tracked_modes(cfg);
    let mode_amplitudes: Vec<Vec<f64>> = x
        .bodies
        .iter()
        .zip(&star.bodies)
        .zip(&records)
        .map(|((a, b), r)| {
            modes.iter().map(|&p| (a.fourier_coefficient(p) - b.fourier_coefficient(p)).norm() / r.v.sqrt()).collect()
        })
        .collect();
    let alpha = op.rotation_angle();
    let mode_rates = modes
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let pts: Vec<(f64, f64)> = times
                .iter()
                .zip(&mode_amplitudes)
                .filter(|(&t, amp)| t >= cfg.horizon / 4.0 && amp[i] > MODE_FLOOR)
                .map(|(&t, amp)| (t, amp[i]))
                .collect();
            ModeRate { p, predicted: alpha.map(|a| 1.0 - (p as f64 * a).cos()), fitted: fit_decay_rate(&pts) }
        })
        .collect();

    let (rho_limit, _) = shape_metric(&rotational_sum(&x0, &op, cfg.m)?, &rotational_sum(&x_star, &op, cfg.m)?)?;
    let delta_limit = if cfg.m >= 3 { Some(asymptotic_deficit(&x0, &x_star, &op, cfg.m)?) } else { None };
    let last = records.last().copied().ok_or_else(|| Error::InvalidConfig("no sample times".into()))?;
    Ok(AttractionReport {
        membership,
        rho_rate: rho_decay_rate(&records),
        records,
        mode_amplitudes,
        mode_rates,
        final_rho: last.rho,
        final_delta: last.delta,
        rho_limit,
        delta_limit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub t: f64,
    /// Shape distance to the disk.
    pub rho_ball: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub alpha: f64,
    /// Smallest `q ≤ 64` with `qα ≡ 0 mod 2π` to `1e-9`, if any.
    pub near_rational_order: Option<usize>,
    pub records: Vec<ProbeRecord>,
    /// Decay of `|H_p| / H_0` for every mode present initially.
    pub mode_rates: Vec<ModeRate>,
    /// `ρ` to the disk never increases.
    pub monotone: bool,
}

/// Spectral flow under a rotation by `α`, tracking the distance to the disk.
pub fn run_hypothesis_probe(alpha: f64, x0: &Body2D, times: &[f64]) -> Result<ProbeReport> {
    let op = LinearOp2::rotation(alpha);
    let traj = simulate(x0, &op, times, Method::Spectral)?;
    let disk = Body2D::disk_with(x0.resolution(), 1.0)?;
    let records = traj
        .times
        .par_iter()
        .zip(&traj.bodies)
        .map(|(&t, b)| Ok(ProbeRecord { t, rho_ball: shape_metric(b, &disk)?.0 }))
        .collect::<Result<Vec<_>>>()?;
    let monotone = records.windows(2).all(|w| w[1].rho_ball <= w[0].rho_ball * (1.0 + 1e-9) + 1e-12);
    let mode_rates = (1..=x0.resolution().degree)
        .filter(|&p| x0.fourier_coefficient(p).norm() > MODE_FLOOR * x0.mean_support().abs())
        .map(|p| {
            let pts: Vec<(f64, f64)> = traj
                .times
                .iter()
                .zip(&traj.bodies)
                .map(|(&t, b)| (t, b.fourier_coefficient(p).norm() / b.mean_support()))
                .filter(|&(_, y)| y > MODE_FLOOR)
                .collect();
            ModeRate { p, predicted: Some(1.0 - (p as f64 * alpha).cos()), fitted: fit_decay_rate(&pts) }
        })
        .collect();
    let near_rational_order = (1..=64).find(|&q| {
        let r = (q as f64 * alpha).rem_euclid(std::f64::consts::TAU);
        r.min(std::f64::consts::TAU - r) < 1e-9
    });
    Ok(ProbeReport { alpha, near_rational_order, records, mode_rates, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body2d::scale_translate;
    use crate::lab::config::{BodySpec, OperatorSpec};
    use crate::lab::random_body;
    use nalgebra::Vector2;

    fn config(m: usize, pert: PerturbationSpec, horizon: f64) -> ExperimentConfig {
        ExperimentConfig::new(
            m,
            OperatorSpec::RotationOrder { m },
            BodySpec::Random { seed: 3, modes: 5, roughness: 0.02 },
            pert,
            horizon,
        )
    }

    #[test]
    fn unperturbed_has_zero_rho() {
        let mut cfg = config(4, PerturbationSpec::none(), 2.0);
        cfg.ladder.clear();
        let rep = run_stability(&cfg).unwrap();
        assert!(rep.records.iter().all(|r| r.rho < 1e-9 && r.delta.abs() < 1e-12));
        let rep = run_attraction(&cfg).unwrap();
        assert!(rep.records.iter().all(|r| r.rho < 1e-9));
    }

    #[test]
    fn homothet_stays_on_orbit() {
        let op = LinearOp2::rotation_order(3);
        let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.2).collect();
        let x = random_body(8, 8, 0.1).unwrap();
        let y = scale_translate(&x, 2.5, Vector2::new(0.3, -1.0)).unwrap();
        let recs =
            compare(&evolve(&y, &op, &times, Method::Spectral).unwrap(), &evolve(&x, &op, &times, Method::Spectral).unwrap())
                .unwrap();
        assert!(recs.iter().all(|r| r.rho < 1e-9), "{recs:?}");
    }

    #[test]
    fn calibration_hits_target() {
        let x = random_body(1, 5, 0.02).unwrap();
        let pert = PerturbationSpec { modes: vec![2, 3], amplitudes: vec![1.0, 0.1], seed: 5 };
        for rho0 in [1e-1, 1e-3] {
            let (_, got) = calibrate_perturbation(&x, &pert, rho0).unwrap();
            assert!((got - rho0).abs() < 1e-6 * rho0, "{got} vs {rho0}");
        }
    }

    #[test]
    fn in_manifold_mode_decays_at_predicted_rate() {
        let cfg = config(4, PerturbationSpec::single(3, 0.05, 2), 12.0);
        let rep = run_attraction(&cfg).unwrap();
        assert!(rep.final_rho < 1e-3);
        let rate = rep.rho_rate.unwrap();
        assert!((rate - 1.0).abs() < 0.1, "{rate}");
        let mr = rep.mode_rates[0];
        assert!((mr.fitted.unwrap() - mr.predicted.unwrap()).abs() < 0.05, "{mr:?}");
    }

    #[test]
    fn outside_manifold_is_rejected_unless_allowed() {
        let mut cfg = config(4, PerturbationSpec::single(4, 0.02, 2), 12.0);
        assert!(matches!(run_attraction(&cfg), Err(Error::NotInManifold { .. })));
        cfg.allow_outside_manifold = true;
        let rep = run_attraction(&cfg).unwrap();
        assert!(rep.rho_limit > 1e-3);
        assert!((rep.final_rho - rep.rho_limit).abs() < 0.05 * rep.rho_limit);
        let dl = rep.delta_limit.unwrap();
        assert!((rep.final_delta - dl).abs() < 0.05 * dl, "{} vs {dl}", rep.final_delta);
    }

    #[test]
    fn probe_ball_is_fixed() {
        let times: Vec<f64> = (0..=5).map(|i| i as f64).collect();
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let rep = run_hypothesis_probe(golden, &Body2D::disk(1.0).unwrap(), &times).unwrap();
        assert!(rep.records.iter().all(|r| r.rho_ball < 1e-12));
        assert!(rep.mode_rates.is_empty());
        assert_eq!(rep.near_rational_order, None);
    }

    #[test]
    fn stable_operator_is_conjugated() {
        let op = LinearOp2::from_rows([[0.0, -2.0], [0.5, 0.0]]);
        let x = random_body(2, 6, 0.05).unwrap();
        let times = [0.0, 0.5, 1.0];
        let a = evolve(&x, &op, &times, Method::Spectral).unwrap();
        let b = evolve(&x, &op, &times, Method::Rk4 { step: 1.0 / 256.0 }).unwrap();
        assert!(a.sup_distance(&b).unwrap() < 1e-6);
        assert!(crate::geomfun::hausdorff(&a.bodies[0], &x).unwrap() < 1e-3);
    }
}
