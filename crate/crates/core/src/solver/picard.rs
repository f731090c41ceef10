//! Picard iteration for the skeleton equation: each stage solves the full
//! tamed dynamics with the control forcing frozen at the previous iterate,
//! exactly at the stage points of the exponential-midpoint scheme. The
//! fixed point of the iteration is therefore the discrete skeleton
//! trajectory itself, which makes this an independent cross-check of
//! `solve_skeleton`.
//!
//! Only the low-pass part `S_rho Y_{m-1}` of the previous iterate enters
//! the forcing, so the frozen path is stored in a compressed per-mode form.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::noise::{Control, MarkSpace, NoiseCoefficient};
use crate::solver::scheme::{ExtraDrift, Integrator, SolverConfig, Stage};
use crate::solver::trajectory::{Trajectory, TrajectoryRecorder};
use crate::spectral::{SpectralField, TorusGrid};

/// Result of the iteration: the converged trajectory plus the residual
/// history `sup_t ||Y_m - Y_{m-1}||_{H^1}` per stage.
#[derive(Debug)]
pub struct PicardSolution {
    pub trajectory: Trajectory,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

/// Stores/restores the `|k| <= rho` modes of a field.
struct LowpassCodec {
    indices: Vec<[usize; 3]>,
}

impl LowpassCodec {
    fn new(grid: &Arc<TorusGrid>, rho: u32) -> Self {
        let n = grid.resolution();
        let limit = (rho as i64) * (rho as i64);
        let mut indices = Vec::new();
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    if grid.ksq([i0, i1, i2]) <= limit {
                        indices.push([i0, i1, i2]);
                    }
                }
            }
        }
        LowpassCodec { indices }
    }

    fn compress(&self, u: &SpectralField) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.indices.len() * 3);
        for idx in &self.indices {
            for j in 0..3 {
                out.push(u.component(j)[*idx]);
            }
        }
        out
    }

    /// `out += scale * decompress(data)`
    fn add_scaled_into(&self, out: &mut SpectralField, data: &[Complex64], scale: f64) {
        let mut it = data.iter();
        for idx in &self.indices {
            for j in 0..3 {
                out.component_mut(j)[*idx] += *it.next().unwrap() * scale;
            }
        }
    }
}

/// Per-stage forcing with the state dependence frozen at the previous
/// iterate; records the current iterate's stage states for the next sweep.
struct FrozenForcing<'a> {
    codec: &'a LowpassCodec,
    control: &'a Control,
    /// Per control interval: `sum_k w_k (g(j,k)-1) c_k`.
    alpha: &'a [f64],
    /// Per control interval: `sum_k w_k (g(j,k)-1) phi_k`.
    phi_sum: &'a [SpectralField],
    prev_start: &'a [Vec<Complex64>],
    prev_mid: &'a [Vec<Complex64>],
    next_start: Vec<Vec<Complex64>>,
    next_mid: Vec<Vec<Complex64>>,
}

impl ExtraDrift for FrozenForcing<'_> {
    fn eval(&mut self, t: f64, u: &SpectralField, stage: Stage) -> Option<SpectralField> {
        let frozen = match stage {
            Stage::Start { substep } => {
                self.next_start[substep] = self.codec.compress(u);
                &self.prev_start[substep]
            }
            Stage::Mid { substep } => {
                self.next_mid[substep] = self.codec.compress(u);
                &self.prev_mid[substep]
            }
        };
        let j = self.control.interval_index(t);
        let mut out = self.phi_sum[j].clone();
        if self.alpha[j] != 0.0 {
            self.codec.add_scaled_into(&mut out, frozen, self.alpha[j]);
        }
        Some(out)
    }
}

/// Skeleton solve by Picard iteration (`max_iter` stages, stop when the
/// residual over the snapshot grid drops below `tol`).
///
/// A control `g == 1` (or a vanishing coefficient) makes the frozen term
/// identically zero, so the first stage is already exact and the iteration
/// returns after one solve.
pub fn solve_skeleton_picard(
    u0: &SpectralField,
    control: &Control,
    sigma: &NoiseCoefficient,
    marks: &MarkSpace,
    cfg: &SolverConfig,
    max_iter: usize,
    tol: f64,
) -> Result<PicardSolution> {
    if max_iter == 0 {
        return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
    }
    super::check_problem(u0, sigma, marks)?;
    super::check_control(control, marks, cfg)?;

    if control.is_identically_one() || sigma.is_zero() {
        let trajectory = super::solve_skeleton(u0, control, sigma, marks, cfg)?;
        return Ok(PicardSolution {
            trajectory,
            iterations: 1,
            residuals: vec![0.0],
        });
    }

    let grid = u0.grid().clone();
    let integ = Integrator::new(grid.clone(), cfg)?;
    let steps = cfg.steps()?;
    let codec = LowpassCodec::new(&grid, sigma.cutoff());

    // Interval-wise forcing data.
    let intervals = control.num_intervals();
    let mut alpha = vec![0.0f64; intervals];
    let mut phi_sum = Vec::with_capacity(intervals);
    for j in 0..intervals {
        let mut phi = SpectralField::zeros(grid.clone());
        for k in 0..marks.len() {
            let gm1 = control.cell_value(j, k) - 1.0;
            alpha[j] += marks.weight(k) * gm1 * sigma.scale(k);
            phi.axpy(marks.weight(k) * gm1, sigma.additive(k));
        }
        let mut phi = integ.project_keep(&phi);
        crate::spectral::leray_project_inplace(&mut phi);
        phi_sum.push(phi);
    }

    // Y_0(t) == projected initial datum, constant in time.
    let u0_keep = integ.project_keep(u0);
    let z0 = codec.compress(&u0_keep);
    let mut prev_start = vec![z0.clone(); steps];
    let mut prev_mid = vec![z0; steps];
    let mut prev_snapshots: Option<Vec<SpectralField>> = None;

    let mut residuals = Vec::new();
    for iteration in 1..=max_iter {
        let mut forcing = FrozenForcing {
            codec: &codec,
            control,
            alpha: &alpha,
            phi_sum: &phi_sum,
            prev_start: &prev_start,
            prev_mid: &prev_mid,
            next_start: vec![Vec::new(); steps],
            next_mid: vec![Vec::new(); steps],
        };
        let mut recorder = TrajectoryRecorder::new(true);
        let (_, projected) = integ.integrate(u0, &mut forcing, None, &mut recorder)?;
        let trajectory = recorder.finish(projected);
        let FrozenForcing {
            next_start,
            next_mid,
            ..
        } = forcing;

        let residual = match &prev_snapshots {
            None => {
                // First stage: residual against the constant path Y_0.
                trajectory
                    .snapshots
                    .iter()
                    .map(|s| s.sub(&u0_keep).h1_norm_sq().sqrt())
                    .fold(0.0, f64::max)
            }
            Some(prev) => trajectory
                .snapshots
                .iter()
                .zip(prev.iter())
                .map(|(a, b)| a.sub(b).h1_norm_sq().sqrt())
                .fold(0.0, f64::max),
        };
        residuals.push(residual);

        if residual <= tol {
            return Ok(PicardSolution {
                trajectory,
                iterations: iteration,
                residuals,
            });
        }
        prev_start = next_start;
        prev_mid = next_mid;
        prev_snapshots = Some(trajectory.snapshots);
    }

    Err(Error::PicardNoConvergence {
        max_iter,
        tol,
        residuals,
    })
}
