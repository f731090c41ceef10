//! Discrete H^1 energy-identity audit of a recorded trajectory.
//!
//! Along the flow, `d/dt ||u||_{H^1}^2 = 2 <u, rhs(u)>_{H^1}`; per substep
//! the trapezoid quadrature of the right side must match the recorded
//! energy change up to the scheme's O(dt^3) local error, so the summed
//! residual is O(dt^2). Jumps enter through their exact recorded pre/post
//! energy corrections; substeps containing jumps are tallied separately
//! because the trapezoid rule does not see the interior discontinuity.

use crate::error::{Error, Result};
use crate::noise::{Control, MarkSpace, NoiseCoefficient};
use crate::solver::{SolverConfig, Trajectory};
use crate::spectral::{SobolevOrder, SpectralField};
use crate::verify::report::EnergyAuditReport;

/// Audit with a caller-supplied full right-hand side `rhs(t, u)`.
pub fn energy_audit(
    traj: &Trajectory,
    rhs: &mut dyn FnMut(f64, &SpectralField) -> SpectralField,
    residual_threshold: f64,
) -> Result<EnergyAuditReport> {
    if traj.snapshots.len() != traj.times.len() || traj.snapshots.len() < 2 {
        return Err(Error::InvalidConfig(
            "energy audit needs a trajectory with stored snapshots (stride 1)".into(),
        ));
    }
    let dt = traj.times[1] - traj.times[0];
    for w in traj.times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
            return Err(Error::InvalidConfig(
                "energy audit needs uniformly spaced snapshots (stride 1)".into(),
            ));
        }
    }

    let mut residual_sum = 0.0;
    let mut max_step_residual = 0.0f64;
    let mut jump_steps = 0usize;
    let mut event_cursor = 0usize;

    let mut prev_pairing = {
        let f = rhs(traj.times[0], &traj.snapshots[0]);
        traj.snapshots[0]
            .inner_product(&f, SobolevOrder::H1)
            .unwrap()
    };
    for i in 0..traj.snapshots.len() - 1 {
        let t0 = traj.times[i];
        let t1 = traj.times[i + 1];
        let f1 = rhs(t1, &traj.snapshots[i + 1]);
        let pairing1 = traj.snapshots[i + 1]
            .inner_product(&f1, SobolevOrder::H1)
            .unwrap();

        let mut jump_correction = 0.0;
        let mut jumped = false;
        while event_cursor < traj.events.len() && traj.events[event_cursor].time <= t1 {
            let ev = &traj.events[event_cursor];
            if ev.time > t0 {
                jump_correction += ev.h1_sq_post - ev.h1_sq_pre;
                jumped = true;
            }
            event_cursor += 1;
        }

        let change = traj.energy[i + 1].h1_sq - traj.energy[i].h1_sq;
        let quadrature = dt * (prev_pairing + pairing1);
        let residual = change - jump_correction - quadrature;
        if jumped {
            jump_steps += 1;
        } else {
            residual_sum += residual.abs();
            max_step_residual = max_step_residual.max(residual.abs());
        }
        prev_pairing = pairing1;
    }

    let sup_h1_sq = traj.sup_h1_sq();
    let integral_h2_sq = traj.integral_h2_sq();
    Ok(EnergyAuditReport {
        sup_h1_sq,
        integral_h2_sq,
        residual_sum,
        max_step_residual,
        jump_steps,
        passed: sup_h1_sq.is_finite()
            && integral_h2_sq.is_finite()
            && residual_sum <= residual_threshold,
    })
}

/// Audit a skeleton trajectory with the right-hand side rebuilt from the
/// problem data (`F(u)` plus the control forcing).
pub fn energy_audit_skeleton(
    traj: &Trajectory,
    control: &Control,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    residual_threshold: f64,
) -> Result<EnergyAuditReport> {
    let grid = traj.final_field.grid().clone();
    let integ = crate::solver::Integrator::new(grid, cfg)?;
    let mut forcing = crate::solver::ControlForcing::new(control, sigma, marks);
    let mut rhs =
        |t: f64, u: &SpectralField| -> SpectralField { integ.full_rhs(t, u, &mut forcing) };
    energy_audit(traj, &mut rhs, residual_threshold)
}
