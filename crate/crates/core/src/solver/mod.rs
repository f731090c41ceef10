//! Time integration of the Galerkin-truncated systems: the jump-driven SDE,
//! the controlled SDE, and the deterministic skeleton equation, plus the
//! Picard iteration used as an independent cross-check of the skeleton
//! solver.

mod picard;
mod scheme;
mod trajectory;
mod truncation;

pub use picard::{solve_skeleton_picard, PicardSolution};
pub use scheme::{ExtraDrift, JumpInput, NoDrift, SolverConfig, Stage};
pub use trajectory::{
    EnergySample, JumpEvent, Observer, SupDiscrepancy, Trajectory, TrajectoryRecorder,
};
pub use truncation::Truncation;

pub(crate) use scheme::Integrator;


use crate::error::{Error, Result};
use crate::noise::{
    compensator_drift, control_drift, sample_controlled_prm, sample_prm, Control, MarkSpace,
    NoiseCoefficient, PoissonSample,
};
use crate::spectral::SpectralField;

fn check_problem(
    u0: &SpectralField,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
) -> Result<()> {
    if sigma.num_marks() != marks.len() {
        return Err(Error::InvalidConfig(format!(
            "noise coefficient has {} marks, mark space has {}",
            sigma.num_marks(),
            marks.len()
        )));
    }
    u0.grid().check_same(sigma.additive(0).grid())?;
    Ok(())
}

fn check_control(control: &Control, marks: &MarkSpace, cfg: &SolverConfig) -> Result<()> {
    if control.num_marks() != marks.len() {
        return Err(Error::InvalidConfig(format!(
            "control has {} marks, mark space has {}",
            control.num_marks(),
            marks.len()
        )));
    }
    if control.horizon() < cfg.t_end - 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "control horizon {} is shorter than t_end {}",
            control.horizon(),
            cfg.t_end
        )));
    }
    Ok(())
}

pub(crate) struct ControlForcing<'a> {
    control: &'a Control,
    sigma: &'a NoiseCoefficient,
    marks: &'a MarkSpace,
    active: bool,
}

impl<'a> ControlForcing<'a> {
    pub(crate) fn new(
        control: &'a Control,
        sigma: &'a NoiseCoefficient,
        marks: &'a MarkSpace,
    ) -> Self {
        // g == 1 (or a vanishing coefficient) makes the forcing identically
        // zero; skipping the evaluation keeps the skeleton bitwise equal to
        // the unforced decay.
        let active = !control.is_identically_one() && !sigma.is_zero();
        ControlForcing {
            control,
            sigma,
            marks,
            active,
        }
    }
}

impl ExtraDrift for ControlForcing<'_> {
    fn eval(&mut self, t: f64, u: &SpectralField, _stage: Stage) -> Option<SpectralField> {
        if !self.active {
            return None;
        }
        Some(control_drift(t, u, self.control, self.sigma, self.marks))
    }
}

struct CompensatorForcing<'a> {
    sigma: &'a NoiseCoefficient,
    marks: &'a MarkSpace,
    active: bool,
}

impl<'a> CompensatorForcing<'a> {
    fn new(sigma: &'a NoiseCoefficient, marks: &'a MarkSpace) -> Self {
        CompensatorForcing {
            sigma,
            marks,
            active: !sigma.is_zero(),
        }
    }
}

impl ExtraDrift for CompensatorForcing<'_> {
    fn eval(&mut self, t: f64, u: &SpectralField, _stage: Stage) -> Option<SpectralField> {
        if !self.active {
            return None;
        }
        Some(compensator_drift(t, u, self.sigma, self.marks))
    }
}

/// Deterministic skeleton equation `du = F(u) dt + control-forcing dt`.
pub fn solve_skeleton(
    u0: &SpectralField,
    control: &Control,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    let mut recorder = TrajectoryRecorder::new(true);
    solve_skeleton_observed(u0, control, sigma, marks, cfg, &mut recorder)
        .map(|projected| recorder.finish(projected))
}

pub fn solve_skeleton_observed(
    u0: &SpectralField,
    control: &Control,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    observer: &mut dyn Observer,
) -> Result<bool> {
    check_problem(u0, sigma, marks)?;
    check_control(control, marks, cfg)?;
    let integ = Integrator::new(u0.grid().clone(), cfg)?;
    let mut drift = ControlForcing::new(control, sigma, marks);
    integ
        .integrate(u0, &mut drift, None, observer)
        .map(|(_, projected)| projected)
}

/// Jump SDE at noise scale `eps`: events from the plain Poisson measure at
/// rate `1/eps`, kicks `eps sigma(t-, u(t-), z)`, continuous compensator
/// drift `-sum_k w_k sigma(t, u, z_k)` between events.
pub fn solve_sde(
    u0: &SpectralField,
    eps: f64,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<Trajectory> {
    let mut recorder = TrajectoryRecorder::new(true);
    solve_sde_observed(u0, eps, sigma, marks, cfg, seed, &mut recorder)
        .map(|projected| recorder.finish(projected))
}

pub fn solve_sde_observed(
    u0: &SpectralField,
    eps: f64,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    seed: u64,
    observer: &mut dyn Observer,
) -> Result<bool> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    check_problem(u0, sigma, marks)?;
    cfg.steps()?;
    let sample = sample_prm(1.0 / eps, marks, cfg.t_end, seed)?;
    run_with_events(u0, eps, sigma, marks, cfg, &sample, observer)
}

/// Controlled SDE: events from the thinned measure at rate
/// `eps^{-1} phi w`, kicks `eps sigma`; the continuous drift is the same
/// compensator as in [`solve_sde`] because the control forcing and the
/// thinned-measure compensator cancel exactly.
pub fn solve_controlled(
    u0: &SpectralField,
    eps: f64,
    phi: &Control,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<Trajectory> {
    let mut recorder = TrajectoryRecorder::new(true);
    solve_controlled_observed(u0, eps, phi, sigma, marks, cfg, seed, &mut recorder)
        .map(|projected| recorder.finish(projected))
}

#[allow(clippy::too_many_arguments)]
pub fn solve_controlled_observed(
    u0: &SpectralField,
    eps: f64,
    phi: &Control,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    seed: u64,
    observer: &mut dyn Observer,
) -> Result<bool> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    check_problem(u0, sigma, marks)?;
    check_control(phi, marks, cfg)?;
    let sample = sample_controlled_prm(phi, eps, marks, seed)?;
    run_with_events(u0, eps, sigma, marks, cfg, &sample, observer)
}

fn run_with_events(
    u0: &SpectralField,
    eps: f64,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    sample: &PoissonSample,
    observer: &mut dyn Observer,
) -> Result<bool> {
    let integ = Integrator::new(u0.grid().clone(), cfg)?;
    let mut drift = CompensatorForcing::new(sigma, marks);
    let kick = |t: f64, u: &SpectralField, mark: usize| -> SpectralField {
        let mut k = sigma.apply(t, u, mark);
        k.scale(eps);
        k
    };
    let jumps = JumpInput {
        events: &sample.events,
        kick: &kick,
    };
    integ
        .integrate(u0, &mut drift, Some(&jumps), observer)
        .map(|(_, projected)| projected)
}

/// Per-replica seeds for an ensemble, derived by the counter-based rule.
pub fn replica_seeds(master: u64, stream: u64, count: usize) -> Vec<u64> {
    (0..count)
        .map(|i| crate::seed::derive_seed(master, stream, i as u64))
        .collect()
}
