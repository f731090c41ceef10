//! Executable checks: operator identities and inequalities with
//! fit-then-assert constants, Monte Carlo laws of the jump machinery, and
//! the desk-scale convergence experiments.

mod energy;
mod estimates;
mod isometry;
mod report;
mod sweeps;
mod thinning;

pub use energy::{energy_audit, energy_audit_skeleton};
pub use estimates::{check_estimate, degenerate_residual, FIT_MARGIN, SKEW_TOLERANCE};
pub use isometry::{check_isometry, StepIntegrand};
pub use report::{
    ConvergenceReport, EnergyAuditReport, EstimateId, EstimateReport, IsometryReport,
    StabilityReport, ThinningCell, ThinningReport,
};
pub use sweeps::{eps_sweep, refinement_study, stability_probe, RefinementLadder, RefinementProblem};
pub use thinning::check_thinning;
