//! Spectral representation of periodic divergence-free vector fields and the
//! deterministic operators of the tamed Navier-Stokes drift.

mod field;
mod grid;
mod ops;
mod sample;
mod taming;

pub use field::{SobolevOrder, SpectralField};
pub use grid::TorusGrid;
pub use ops::{
    apply_stokes, dealias, leray_project, lowpass, mixed_gradient_norm_sq, nonlinear_term,
    tamed_drift,
};
pub use sample::FieldSampler;
pub use taming::{taming_value, TamingSpec, BLEND_COEFFICIENTS};


pub(crate) use ops::{convective_product, leray_project_inplace};
