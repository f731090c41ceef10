//! Galerkin truncation onto the span of the lowest Stokes eigenmodes.
//!
//! Wavevectors are ordered by `(|2 pi k|^2, lexicographic k)`; a truncation
//! of size `n` keeps the first `n` nonzero wavevectors in that order and
//! then closes the set under negation, so real fields stay real. `n` counts
//! wavevectors before closure.

use ndarray::Array3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{SpectralField, TorusGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    count: usize,
}

impl Truncation {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidTruncation);
        }
        Ok(Truncation { count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// All nonzero wavevectors of the grid in eigenvalue order with the
    /// lexicographic tie-break.
    pub fn sorted_wavevectors(grid: &TorusGrid) -> Vec<[i64; 3]> {
        let n = grid.resolution();
        let mut ks = Vec::with_capacity(n * n * n - 1);
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let k = grid.wavevector([i0, i1, i2]);
                    if k != [0, 0, 0] {
                        ks.push(k);
                    }
                }
            }
        }
        ks.sort_by_key(|k| (k[0] * k[0] + k[1] * k[1] + k[2] * k[2], *k));
        ks
    }

    /// Boolean keep-mask over grid indices for the retained set.
    pub fn build_mask(&self, grid: &TorusGrid) -> Array3<bool> {
        let n = grid.resolution();
        let mut mask = Array3::from_elem((n, n, n), false);
        for k in Self::sorted_wavevectors(grid).iter().take(self.count) {
            let idx = grid.index_of_wavevector(*k).unwrap();
            mask[idx] = true;
            mask[grid.negated_index(idx)] = true;
        }
        mask
    }

    /// Zero every coefficient outside the retained set. Idempotent and
    /// norm non-increasing in every Sobolev order.
    pub fn project(&self, u: &SpectralField) -> SpectralField {
        let mask = self.build_mask(u.grid());
        apply_mask(u, &mask)
    }
}

pub(crate) fn apply_mask(u: &SpectralField, mask: &Array3<bool>) -> SpectralField {
    let mut out = u.clone();
    apply_mask_inplace(&mut out, mask);
    out
}

pub(crate) fn apply_mask_inplace(u: &mut SpectralField, mask: &Array3<bool>) {
    for j in 0..3 {
        ndarray::Zip::from(u.component_mut(j))
            .and(mask)
            .for_each(|c, keep| {
                if !keep {
                    *c = Complex64::new(0.0, 0.0);
                }
            });
    }
}
