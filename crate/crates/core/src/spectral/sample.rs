//! Random divergence-free test fields with prescribed spectral decay.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::spectral::field::{SobolevOrder, SpectralField};
use crate::spectral::grid::TorusGrid;
use crate::spectral::ops::leray_project_inplace;

/// Draws fields with coefficients `~ (1 + |2 pi k|^2)^{-decay}` on the
/// dealiased mode set, Leray-projected and rescaled to a target H^1 norm.
/// `decay = 2` puts the samples comfortably in H^2.
#[derive(Clone, Debug)]
pub struct FieldSampler {
    grid: Arc<TorusGrid>,
    decay: f64,
    h1_range: (f64, f64),
}

impl FieldSampler {
    pub fn new(grid: Arc<TorusGrid>, decay: f64, h1_range: (f64, f64)) -> Self {
        assert!(h1_range.0 > 0.0 && h1_range.1 >= h1_range.0);
        FieldSampler {
            grid,
            decay,
            h1_range,
        }
    }

    /// Fixed-magnitude variant.
    pub fn with_norm(grid: Arc<TorusGrid>, decay: f64, h1_norm: f64) -> Self {
        Self::new(grid, decay, (h1_norm, h1_norm))
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn sample(&self, rng: &mut impl Rng) -> SpectralField {
        let n = self.grid.resolution();
        let mut f = SpectralField::zeros(self.grid.clone());
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let idx = [i0, i1, i2];
                    if !self.grid.is_dealiased(idx) {
                        continue;
                    }
                    let k = self.grid.wavevector(idx);
                    if k == [0, 0, 0] || !is_representative(k) {
                        continue;
                    }
                    let ksq = self.grid.ksq(idx);
                    let amp = (1.0 + 4.0 * std::f64::consts::PI.powi(2) * ksq as f64)
                        .powf(-self.decay);
                    let neg = self.grid.negated_index(idx);
                    for j in 0..3 {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        let c = Complex64::new(re, im) * amp;
                        f.component_mut(j)[idx] = c;
                        f.component_mut(j)[neg] = c.conj();
                    }
                }
            }
        }
        leray_project_inplace(&mut f);
        let target = if self.h1_range.0 == self.h1_range.1 {
            self.h1_range.0
        } else {
            rng.random_range(self.h1_range.0..self.h1_range.1)
        };
        let norm = f.sobolev_norm_sq(SobolevOrder::H1).sqrt();
        debug_assert!(norm > 0.0, "degenerate random field");
        f.scale(target / norm);
        f
    }
}

/// Canonical pick of one representative per `{k, -k}` pair: the first
/// nonzero component is positive. Dealiased modes are never self-paired.
fn is_representative(k: [i64; 3]) -> bool {
    for kj in k {
        if kj > 0 {
            return true;
        }
        if kj < 0 {
            return false;
        }
    }
    false
}
