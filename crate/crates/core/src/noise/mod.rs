//! Mark space, noise coefficient, controls, cost functional and Poisson
//! event sampling.

mod coefficient;
mod control;
mod marks;
mod prm;

pub use coefficient::{
    compensator_drift, control_drift, ExpIntegrabilityReport, HypothesisConstants,
    NoiseCoefficient,
};
pub use control::{running_cost, Control, ControlFile};
pub use marks::MarkSpace;
pub use prm::{sample_controlled_prm, sample_prm, MarkedEvent, PoissonSample};
