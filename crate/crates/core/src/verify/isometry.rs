//! Monte Carlo check of the compensated-measure isometry: for a
//! deterministic step integrand `X(t, z)`, the second moment of
//! `sum_{events} X - int int X dtheta ds` equals `int int ||X||^2 dtheta ds`.

use crate::error::{Error, Result};
use crate::noise::{sample_prm, MarkSpace};
use crate::seed::derive_seed;
use crate::spectral::{SobolevOrder, SpectralField};
use crate::verify::report::IsometryReport;

/// Deterministic step-function integrand: one field per (interval, mark)
/// cell on a shared time grid.
pub struct StepIntegrand {
    time_grid: Vec<f64>,
    /// Row-major `intervals x marks`.
    fields: Vec<SpectralField>,
    num_marks: usize,
}

impl StepIntegrand {
    pub fn new(time_grid: Vec<f64>, fields: Vec<SpectralField>, num_marks: usize) -> Result<Self> {
        if time_grid.len() < 2 || time_grid[0] != 0.0 {
            return Err(Error::InvalidControlGrid(
                "integrand time grid must start at 0 and have >= 2 points".into(),
            ));
        }
        for w in time_grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidControlGrid(
                    "integrand time grid must increase strictly".into(),
                ));
            }
        }
        if fields.len() != (time_grid.len() - 1) * num_marks || num_marks == 0 {
            return Err(Error::InvalidControlGrid(
                "integrand cell count does not match grid".into(),
            ));
        }
        Ok(StepIntegrand {
            time_grid,
            fields,
            num_marks,
        })
    }

    /// Constant-in-time integrand, one field per mark.
    pub fn constant(horizon: f64, per_mark: Vec<SpectralField>) -> Result<Self> {
        let num_marks = per_mark.len();
        StepIntegrand::new(vec![0.0, horizon], per_mark, num_marks)
    }

    pub fn horizon(&self) -> f64 {
        *self.time_grid.last().unwrap()
    }

    fn cell(&self, interval: usize, mark: usize) -> &SpectralField {
        &self.fields[interval * self.num_marks + mark]
    }

    fn interval_index(&self, t: f64) -> usize {
        match self.time_grid.partition_point(|s| *s <= t) {
            0 => 0,
            p => (p - 1).min(self.time_grid.len() - 2),
        }
    }

    pub fn value(&self, t: f64, mark: usize) -> &SpectralField {
        self.cell(self.interval_index(t), mark)
    }

    /// Exact `int_0^T int_Z ||X||_{H^0}^2 dtheta dt`.
    pub fn exact_second_moment(&self, marks: &MarkSpace) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.time_grid.len() - 1 {
            let dt = self.time_grid[j + 1] - self.time_grid[j];
            for k in 0..self.num_marks {
                acc += dt
                    * marks.weight(k)
                    * self.cell(j, k).sobolev_norm_sq(SobolevOrder::H0);
            }
        }
        acc
    }

    /// Exact compensator `int_0^T int_Z X dtheta dt`, a single field.
    fn compensator(&self, marks: &MarkSpace) -> SpectralField {
        let mut acc = SpectralField::zeros(self.fields[0].grid().clone());
        for j in 0..self.time_grid.len() - 1 {
            let dt = self.time_grid[j + 1] - self.time_grid[j];
            for k in 0..self.num_marks {
                acc.axpy(dt * marks.weight(k), self.cell(j, k));
            }
        }
        acc
    }
}

/// Estimate `E || sum_events X - compensator ||_{H^0}^2` over `replicas`
/// independent samples of the unit-rate Poisson measure; pass when the
/// estimate is within four standard errors of the exact value.
pub fn check_isometry(
    integrand: &StepIntegrand,
    marks: &MarkSpace,
    replicas: usize,
    seed: u64,
) -> Result<IsometryReport> {
    if integrand.num_marks != marks.len() {
        return Err(Error::InvalidControlGrid(format!(
            "integrand has {} marks, mark space has {}",
            integrand.num_marks,
            marks.len()
        )));
    }
    let compensator = integrand.compensator(marks);
    let horizon = integrand.horizon();
    let mut values = Vec::with_capacity(replicas);
    for r in 0..replicas {
        let sample = sample_prm(1.0, marks, horizon, derive_seed(seed, 0x150, r as u64))?;
        let mut acc = compensator.scaled(-1.0);
        for ev in &sample.events {
            acc.axpy(1.0, integrand.value(ev.time, ev.mark));
        }
        values.push(acc.sobolev_norm_sq(SobolevOrder::H0));
    }
    let n = replicas as f64;
    let estimate = values.iter().sum::<f64>() / n;
    let var = values
        .iter()
        .map(|v| (v - estimate).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    let std_error = (var / n).sqrt();
    let exact = integrand.exact_second_moment(marks);
    Ok(IsometryReport {
        replicas,
        exact,
        estimate,
        std_error,
        seed,
        passed: (estimate - exact).abs() <= 4.0 * std_error,
    })
}
