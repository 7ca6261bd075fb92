//! Experiment harness: configs, random bodies, manifold membership, and
//! the stability, attraction and probe runs.

mod config;
mod experiments;
mod manifold;
mod random;

pub use config::{
    BodySpec, ExperimentConfig, IntegratorChoice, OperatorSpec, PerturbationSpec, ResolutionSpec, SEED_ENV,
};
pub use experiments::{
    asymptotic_deficit, calibrate_perturbation, compare, evolve, fit_decay_rate, rho_decay_rate, run_attraction,
    run_hypothesis_probe, run_stability, write_outputs, AttractionReport, LadderRung, ModeRate, ProbeRecord,
    ProbeReport, StabilityRecord, StabilityReport, RHO_FIT_WINDOW,
};
pub use manifold::{fourier_condition_check, membership_in_m, rotational_sum, Membership, PERIOD_TOL};
pub use random::{random_body, random_body_with, random_hybrid, random_polygon, DEFAULT_RANDOM_MODES, MAX_REJECTIONS};

/// Shape-metric tolerance for membership in the attraction manifold.
pub const TOL_M: f64 = 1e-8;
