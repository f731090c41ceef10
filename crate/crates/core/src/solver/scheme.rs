//! Event-driven exponential time integration.
//!
//! The stiff Stokes part is applied exactly per mode (`e^{-A tau}`); the
//! remaining drift (convection, taming, control/compensator forcing) is
//! advanced with an explicit midpoint rule under the same integrating
//! factor, which is second order. Jumps are applied at their sampled times
//! by splitting the enclosing substep.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::noise::MarkedEvent;
use crate::solver::trajectory::{EnergySample, JumpEvent, Observer};
use crate::solver::truncation::{apply_mask_inplace, Truncation};
use crate::spectral::{convective_product, SobolevOrder, SpectralField, TamingSpec, TorusGrid};

/// Time-integration parameters. Snapshot times are multiples of
/// `snapshot_stride * dt`; the horizon must be an integer number of
/// substeps.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub taming: TamingSpec,
    /// Galerkin truncation; `None` keeps every dealiased mode.
    pub truncation: Option<Truncation>,
    pub snapshot_stride: usize,
}

impl SolverConfig {
    /// Number of substeps, after validating the grid arithmetic.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.dt > self.t_end {
            return Err(Error::InvalidConfig(format!(
                "dt = {} exceeds t_end = {}",
                self.dt, self.t_end
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidConfig("snapshot_stride must be >= 1".into()));
        }
        let steps = (self.t_end / self.dt).round();
        if steps < 1.0 || (steps * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "t_end = {} is not an integer multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(steps as usize)
    }
}

/// Where in the substep a drift evaluation happens; the index lets the
/// Picard iteration address its frozen path.
#[derive(Clone, Copy, Debug)]
pub enum Stage {
    Start { substep: usize },
    Mid { substep: usize },
}

/// Extra (non-stiff, non-convective) drift such as the control forcing or
/// the jump compensator. `None` means identically zero.
pub trait ExtraDrift {
    fn eval(&mut self, t: f64, u: &SpectralField, stage: Stage) -> Option<SpectralField>;
}

/// The zero drift.
pub struct NoDrift;

impl ExtraDrift for NoDrift {
    fn eval(&mut self, _t: f64, _u: &SpectralField, _stage: Stage) -> Option<SpectralField> {
        None
    }
}

/// Jump kicks applied at sampled event times.
pub struct JumpInput<'a> {
    pub events: &'a [MarkedEvent],
    /// `kick(t-, u(t-), mark)`, already scaled by the noise amplitude.
    pub kick: &'a dyn Fn(f64, &SpectralField, usize) -> SpectralField,
}

pub(crate) struct Integrator {
    grid: Arc<TorusGrid>,
    taming: TamingSpec,
    keep: Array3<bool>,
    dt: f64,
    steps: usize,
    stride: usize,
    eig: Array3<f64>,
    exp_full: Array3<f64>,
    exp_half: Array3<f64>,
}

impl Integrator {
    pub(crate) fn new(grid: Arc<TorusGrid>, cfg: &SolverConfig) -> Result<Self> {
        let steps = cfg.steps()?;
        let n = grid.resolution();
        let mut keep = Array3::from_elem((n, n, n), false);
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    keep[[i0, i1, i2]] =
                        grid.is_dealiased([i0, i1, i2]) && grid.ksq([i0, i1, i2]) != 0;
                }
            }
        }
        if let Some(trunc) = &cfg.truncation {
            let tmask = trunc.build_mask(&grid);
            ndarray::Zip::from(&mut keep).and(&tmask).for_each(|a, b| *a &= *b);
        }
        let mut eig = Array3::zeros((n, n, n));
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    eig[[i0, i1, i2]] = 4.0 * PI * PI * grid.ksq([i0, i1, i2]) as f64;
                }
            }
        }
        let exp_full = eig.mapv(|a| (-a * cfg.dt).exp());
        let exp_half = eig.mapv(|a| (-a * 0.5 * cfg.dt).exp());
        Ok(Integrator {
            grid,
            taming: cfg.taming,
            keep,
            dt: cfg.dt,
            steps,
            stride: cfg.snapshot_stride,
            eig,
            exp_full,
            exp_half,
        })
    }

    pub(crate) fn project_keep(&self, u: &SpectralField) -> SpectralField {
        let mut out = u.clone();
        apply_mask_inplace(&mut out, &self.keep);
        out
    }

    fn apply_exp(&self, u: &mut SpectralField, tau: f64) {
        let table = if tau == self.dt {
            Some(&self.exp_full)
        } else if tau == 0.5 * self.dt {
            Some(&self.exp_half)
        } else {
            None
        };
        for j in 0..3 {
            match table {
                Some(t) => {
                    ndarray::Zip::from(u.component_mut(j))
                        .and(t)
                        .for_each(|c, e| *c *= *e);
                }
                None => {
                    ndarray::Zip::from(u.component_mut(j))
                        .and(&self.eig)
                        .for_each(|c, a| *c *= (-a * tau).exp());
                }
            }
        }
    }

    /// `-(B(u,u) + P g_N(|u|^2) u) + extra`, projected onto the retained set.
    fn nonstiff(
        &self,
        t: f64,
        u: &SpectralField,
        stage: Stage,
        drift: &mut dyn ExtraDrift,
    ) -> SpectralField {
        let mut rhs = convective_product(u, u, Some(&self.taming));
        rhs.scale(-1.0);
        if let Some(extra) = drift.eval(t, u, stage) {
            rhs.axpy(1.0, &extra);
        }
        apply_mask_inplace(&mut rhs, &self.keep);
        rhs
    }

    /// One exponential-midpoint substep of length `tau` starting at `t`.
    fn substep(
        &self,
        t: f64,
        u: &SpectralField,
        tau: f64,
        substep: usize,
        drift: &mut dyn ExtraDrift,
    ) -> SpectralField {
        let k1 = self.nonstiff(t, u, Stage::Start { substep }, drift);
        let mut mid = u.clone();
        mid.axpy(0.5 * tau, &k1);
        self.apply_exp(&mut mid, 0.5 * tau);
        let mut k2 = self.nonstiff(t + 0.5 * tau, &mid, Stage::Mid { substep }, drift);
        let mut out = u.clone();
        self.apply_exp(&mut out, tau);
        self.apply_exp(&mut k2, 0.5 * tau);
        out.axpy(tau, &k2);
        out
    }

    /// The full rhs `F(u) + extra` at a given time, for diagnostics such as
    /// the energy audit.
    pub(crate) fn full_rhs(
        &self,
        t: f64,
        u: &SpectralField,
        drift: &mut dyn ExtraDrift,
    ) -> SpectralField {
        let mut rhs = self.nonstiff(t, u, Stage::Start { substep: 0 }, drift);
        let mut au = crate::spectral::apply_stokes(u);
        apply_mask_inplace(&mut au, &self.keep);
        rhs.axpy(-1.0, &au);
        rhs
    }

    /// Drive the scheme over the whole horizon. Returns the final state and
    /// whether the initial datum needed projecting.
    pub(crate) fn integrate(
        &self,
        u0: &SpectralField,
        drift: &mut dyn ExtraDrift,
        jumps: Option<&JumpInput<'_>>,
        observer: &mut dyn Observer,
    ) -> Result<(SpectralField, bool)> {
        self.grid.check_same(u0.grid())?;
        let mut u = self.project_keep(u0);
        let initial_projected = u.sub(u0).sobolev_norm_sq(SobolevOrder::H0) > 0.0;
        if initial_projected {
            log::warn!("initial datum has content outside the retained mode set; projected");
        }

        let mut h1 = u.h1_norm_sq();
        let mut h2 = u.sobolev_norm_sq(SobolevOrder::H2);
        let mut cum_h2 = 0.0;
        observer.on_snapshot(
            EnergySample {
                t: 0.0,
                h1_sq: h1,
                h2_sq: h2,
                cum_h2_sq: cum_h2,
                jumped: false,
            },
            &u,
        );

        let events: &[MarkedEvent] = jumps.map(|j| j.events).unwrap_or(&[]);
        let mut next_event = 0usize;
        let mut jumped_since_snapshot = false;
        let mut last_good = 0.0f64;

        for step in 0..self.steps {
            let t0 = step as f64 * self.dt;
            let t1 = (step + 1) as f64 * self.dt;
            let last_step = step + 1 == self.steps;
            let mut cur = t0;

            while next_event < events.len() {
                let ev = events[next_event];
                // The final substep also absorbs any events that fall into
                // the rounding sliver beyond steps*dt.
                if ev.time > t1 && !last_step {
                    break;
                }
                if ev.time > cur {
                    let tau = ev.time - cur;
                    u = self.substep(cur, &u, tau, step, drift);
                    // h2 is refreshed after the kick below.
                    cum_h2 += 0.5 * tau * (h2 + u.sobolev_norm_sq(SobolevOrder::H2));
                    cur = ev.time;
                }
                let kick = (jumps.unwrap().kick)(ev.time, &u, ev.mark);
                let pre = u.h1_norm_sq();
                u.axpy(1.0, &kick);
                apply_mask_inplace(&mut u, &self.keep);
                let post = u.h1_norm_sq();
                observer.on_event(JumpEvent {
                    time: ev.time,
                    mark: ev.mark,
                    h1_sq_pre: pre,
                    h1_sq_post: post,
                });
                h2 = u.sobolev_norm_sq(SobolevOrder::H2);
                jumped_since_snapshot = true;
                next_event += 1;
            }

            if cur < t1 {
                // Full substeps (the common case) use the precomputed
                // exponential tables exactly.
                let tau = if cur == t0 { self.dt } else { t1 - cur };
                u = self.substep(cur, &u, tau, step, drift);
                let h2_new = u.sobolev_norm_sq(SobolevOrder::H2);
                cum_h2 += 0.5 * tau * (h2 + h2_new);
                h2 = h2_new;
            }

            h1 = u.h1_norm_sq();
            if !h1.is_finite() || !h2.is_finite() {
                return Err(Error::Blowup { t: t1, last_good });
            }
            last_good = t1;

            if (step + 1) % self.stride == 0 || last_step {
                observer.on_snapshot(
                    EnergySample {
                        t: t1,
                        h1_sq: h1,
                        h2_sq: h2,
                        cum_h2_sq: cum_h2,
                        jumped: jumped_since_snapshot,
                    },
                    &u,
                );
                jumped_since_snapshot = false;
            }
        }
        Ok((u, initial_projected))
    }
}
