//! Time integration of θ_t + u·∇θ + κΛ^αθ = εΔθ with u = R^⊥θ.

mod config;
mod initial;
mod run;
mod stepper;
mod viscosity;

pub use config::{Blob, InitialCondition, Schedule, SolverConfig, TimeStep};
pub use initial::make_initial;
pub use run::{
    resume_from, run, run_with, ResumePoint, RunOptions, RunSink, RunStatus, Sample, Trajectory,
};
pub use stepper::{step, BlowUpReport, Stepper, RESOLUTION_LOSS_FRACTION};
pub use viscosity::{
    check_epsilons, pairwise_distances, viscosity_sequence, DistanceRow, ViscositySequence,
};
