// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::json;

use setflow::body2d::{Body2D, LinearOp2, Resolution};
use setflow::compsys::{build_omega, closed_form_s, cross_terms, evolve_xi, predicted_spectrum, spectrum, XiState};
use setflow::geomfun::{deficit, shape_metric};
use setflow::lab::{
    run_attraction, run_hypothesis_probe, run_stability, write_outputs, BodySpec, ExperimentConfig, OperatorSpec,
    StabilityRecord,
};
use setflow::sde::{simulate, Method, DEFAULT_RK4_STEP};
use setflow::{Error, Result};

#[derive(Parser)]
#[command(name = "setflow", version, about = "Set-valued linear flows on planar convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write it as CSV.
    Simulate(SimulateArgs),
    /// Shape distance and deficit between two bodies.
    Metric(MetricArgs),
    /// Eigenvalues of the comparison matrix for order m.
    Spectrum {
        #[arg(long)]
        m: usize,
    },
    /// S[X(t), X*(t)] from the closed form and from the matrix exponential.
    ClosedForm(ClosedFormArgs),
    /// Run an experiment from a JSON config.
    Experiment {
        kind: ExperimentKind,
        #[arg(long)]
        config: PathBuf,
        /// CSV output path; the summary goes to `<stem>.summary.json`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Stability,
    Attraction,
    Probe,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntegratorArg {
    Spectral,
    Rk4,
    Picard,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = setflow::body2d::DEFAULT_DEGREE)]
    degree: usize,
    #[arg(long, default_value_t = setflow::body2d::DEFAULT_GRID)]
    grid: usize,
}

impl GridArgs {
    fn resolution(&self) -> Result<Resolution> {
        Resolution::new(self.degree, self.grid)
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Body spec: JSON text or a path to a JSON file.
    #[arg(long)]
    body: String,
    /// Operator spec: JSON text or a path to a JSON file.
    #[arg(long)]
    operator: String,
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[arg(long, value_enum, default_value_t = IntegratorArg::Spectral)]
    integrator: IntegratorArg,
    #[arg(long, default_value_t = DEFAULT_RK4_STEP)]
    rk4_step: f64,
    #[arg(long, default_value_t = 20)]
    picard_iterations: usize,
    #[arg(long, default_value_t = 400)]
    picard_steps: usize,
    /// Fourier modes whose magnitudes are written as extra columns.
    #[arg(long, value_delimiter = ',')]
    modes: Vec<usize>,
    /// CSV path; stdout if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct ClosedFormArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    x0: String,
    #[arg(long)]
    x0_star: String,
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    #[command(flatten)]
    grid: GridArgs,
}

fn read_spec<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { std::fs::read_to_string(arg)? };
    Ok(serde_json::from_str(&text)?)
}

fn read_body(arg: &str, res: Resolution) -> Result<Body2D> {
    read_spec::<BodySpec>(arg)?.build(res)
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn uniform_times(horizon: f64, step: f64) -> Result<Vec<f64>> {
    if !(horizon >= 0.0) || !(step > 0.0) {
        return Err(Error::InvalidConfig("horizon must be nonnegative and step positive".into()));
    }
    let n = (horizon / step - 1e-9).ceil().max(0.0) as usize;
    Ok((0..=n).map(|i| (i as f64 * step).min(horizon)).collect())
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let x0 = read_body(&a.body, a.grid.resolution()?)?;
    let op = read_spec::<OperatorSpec>(&a.operator)?.build()?;
    let method = match a.integrator {
        IntegratorArg::Spectral => Method::Spectral,
        IntegratorArg::Rk4 => Method::Rk4 { step: a.rk4_step },
        IntegratorArg::Picard => Method::Picard { iterations: a.picard_iterations, steps: a.picard_steps },
    };
    let traj = simulate(&x0, &op, &uniform_times(a.horizon, a.step)?, method)?;
    match &a.output {
        Some(path) => traj.write_csv_file(path, &a.modes),
        None => traj.write_csv(std::io::stdout().lock(), &a.modes),
    }
}

fn cmd_metric(a: &MetricArgs) -> Result<()> {
    let res = a.grid.resolution()?;
    let (x, y) = (read_body(&a.x, res)?, read_body(&a.y, res)?);
    let (rho, shift) = shape_metric(&x, &y)?;
    let d = deficit(&x, &y)?;
    print_json(&json!({ "rho": rho, "translation": [shift.x, shift.y], "delta": d.delta, "V1": d.v1, "VX": d.vx, "VY": d.vy }))
}

fn cmd_spectrum(m: usize) -> Result<()> {
    let sys = build_omega(m)?;
    print_json(&json!({ "m": m, "eigenvalues": spectrum(&sys), "predicted": predicted_spectrum(m) }))
}

fn cmd_closed_form(a: &ClosedFormArgs) -> Result<()> {
    let res = a.grid.resolution()?;
    let (x0, xs) = (read_body(&a.x0, res)?, read_body(&a.x0_star, res)?);
    let op = LinearOp2::rotation_order(a.m);
    let (s0, cross) = cross_terms(&x0, &xs, &op, a.m)?;
    let sys = build_omega(a.m)?;
    let xi0 = XiState::from_cross(s0, &cross);
    let values = a
        .t
        .iter()
        .map(|&t| {
            let closed = closed_form_s(a.m, s0, &cross, t)?;
            let exp = evolve_xi(&sys, &xi0, t)?.xi[0];
            Ok(json!({ "t": t, "closed_form": closed, "expm": exp }))
        })
        .collect::<Result<Vec<_>>>()?;
    print_json(&json!({ "m": a.m, "s0": s0, "cross": cross, "values": values }))
}

fn cmd_experiment(kind: ExperimentKind, config: &Path, output: &Option<PathBuf>) -> Result<()> {
    let mut cfg = ExperimentConfig::load(config)?;
    if output.is_some() {
        cfg.output.clone_from(output);
    }
    let emit = |records: &[StabilityRecord], summary: serde_json::Value| -> Result<()> {
        if let Some(path) = &cfg.output {
            write_outputs(path, records, &summary)?;
        }
        print_json(&summary)
    };
    match kind {
        ExperimentKind::Stability => {
            let rep = run_stability(&cfg)?;
            emit(&rep.records, serde_json::to_value(&rep)?)
        }
        ExperimentKind::Attraction => {
            let rep = run_attraction(&cfg)?;
            emit(&rep.records, serde_json::to_value(&rep)?)
        }
        ExperimentKind::Probe => {
            let alpha = cfg
                .op()?
                .rotation_angle()
                .ok_or_else(|| Error::InvalidConfig("probe needs a rotation operator".into()))?;
            let rep = run_hypothesis_probe(alpha, &cfg.x0()?, &cfg.times())?;
            if let Some(path) = &cfg.output {
                let mut w = csv::Writer::from_path(path)?;
                for r in &rep.records {
                    w.serialize(r)?;
                }
                w.flush()?;
                std::fs::write(path.with_extension("summary.json"), serde_json::to_string_pretty(&rep)?)?;
            }
            print_json(&json!({
                "alpha": rep.alpha,
                "near_rational_order": rep.near_rational_order,
                "monotone": rep.monotone,
                "mode_rates": rep.mode_rates,
                "final_rho_ball": rep.records.last().map(|r| r.rho_ball),
            }))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Metric(a) => cmd_metric(a),
        Command::Spectrum { m } => cmd_spectrum(*m),
        Command::ClosedForm(a) => cmd_closed_form(a),
        Command::Experiment { kind, config, output } => cmd_experiment(*kind, config, output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
