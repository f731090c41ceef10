//! Piecewise-constant controls on `[0, T] x Z` and their entropy cost
//! `L_T(g) = sum_j sum_k dt_j w_k l(g(j,k))` with `l(r) = r log r - r + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::marks::MarkSpace;

/// `l(r) = r log r - r + 1`, continuously extended with `l(0) = 1`.
pub fn running_cost(r: f64) -> f64 {
    if r == 0.0 {
        1.0
    } else {
        r * r.ln() - r + 1.0
    }
}

/// Nonnegative piecewise-constant control `g(t, z_k)` on a time grid
/// `0 = t_0 < ... < t_J = T`. Values are stored row-major `J x K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Control {
    times: Vec<f64>,
    values: Vec<f64>,
    num_marks: usize,
}

/// Serialized form: `{"time_grid": [...], "marks": K, "values": [[...]; J]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ControlFile {
    pub time_grid: Vec<f64>,
    pub marks: usize,
    pub values: Vec<Vec<f64>>,
}

impl Control {
    pub fn new(times: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidControlGrid(
                "time grid needs at least two points".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidControlGrid(format!(
                "time grid must start at 0, got {}",
                times[0]
            )));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::InvalidControlGrid(format!(
                    "time grid must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if rows.len() != times.len() - 1 {
            return Err(Error::InvalidControlGrid(format!(
                "{} intervals but {} value rows",
                times.len() - 1,
                rows.len()
            )));
        }
        let num_marks = rows.first().map(|r| r.len()).unwrap_or(0);
        if num_marks == 0 {
            return Err(Error::InvalidControlGrid("empty value rows".into()));
        }
        let mut values = Vec::with_capacity(rows.len() * num_marks);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != num_marks {
                return Err(Error::InvalidControlGrid(format!(
                    "row {j} has {} values, expected {num_marks}",
                    row.len()
                )));
            }
            for (k, v) in row.iter().enumerate() {
                if !v.is_finite() || *v < 0.0 {
                    return Err(Error::InvalidControlValue {
                        interval: j,
                        mark: k,
                        value: *v,
                    });
                }
                values.push(*v);
            }
        }
        Ok(Control {
            times,
            values,
            num_marks,
        })
    }

    /// Constant control `g == value` on a single interval `[0, t_end]`.
    pub fn constant(value: f64, t_end: f64, num_marks: usize) -> Result<Self> {
        Control::new(vec![0.0, t_end], vec![vec![value; num_marks]])
    }

    pub fn from_file_format(f: &ControlFile) -> Result<Self> {
        let c = Control::new(f.time_grid.clone(), f.values.clone())?;
        if c.num_marks != f.marks {
            return Err(Error::InvalidControlGrid(format!(
                "declared {} marks but rows have {}",
                f.marks, c.num_marks
            )));
        }
        Ok(c)
    }

    pub fn to_file_format(&self) -> ControlFile {
        ControlFile {
            time_grid: self.times.clone(),
            marks: self.num_marks,
            values: (0..self.num_intervals())
                .map(|j| self.values[j * self.num_marks..(j + 1) * self.num_marks].to_vec())
                .collect(),
        }
    }

    pub fn num_intervals(&self) -> usize {
        self.times.len() - 1
    }

    pub fn num_marks(&self) -> usize {
        self.num_marks
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.times
    }

    /// Index of the control cell containing `t`; `t == T` falls into the
    /// last interval (right-continuous lookup with a closed right end).
    pub fn interval_index(&self, t: f64) -> usize {
        match self.times.partition_point(|s| *s <= t) {
            0 => 0,
            p => (p - 1).min(self.num_intervals() - 1),
        }
    }

    /// `g(t, z_mark)` with piecewise-constant lookup.
    pub fn value(&self, t: f64, mark: usize) -> f64 {
        self.values[self.interval_index(t) * self.num_marks + mark]
    }

    pub fn cell_value(&self, interval: usize, mark: usize) -> f64 {
        self.values[interval * self.num_marks + mark]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_identically_one(&self) -> bool {
        self.values.iter().all(|v| *v == 1.0)
    }

    /// `L_T(g)`; exact because the control is a step function.
    pub fn cost(&self, marks: &MarkSpace) -> Result<f64> {
        if marks.len() != self.num_marks {
            return Err(Error::InvalidControlGrid(format!(
                "control has {} marks, mark space has {}",
                self.num_marks,
                marks.len()
            )));
        }
        let mut acc = 0.0;
        for j in 0..self.num_intervals() {
            let dt = self.times[j + 1] - self.times[j];
            for k in 0..self.num_marks {
                acc += dt * marks.weight(k) * running_cost(self.cell_value(j, k));
            }
        }
        Ok(acc)
    }

    /// Cell-wise convex combination used by the convexity spot checks.
    pub fn blend(&self, other: &Control, lambda: f64) -> Result<Control> {
        if self.times != other.times || self.num_marks != other.num_marks {
            return Err(Error::InvalidControlGrid(
                "blend requires identical control grids".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
            .collect();
        Ok(Control {
            times: self.times.clone(),
            values,
            num_marks: self.num_marks,
        })
    }
}
