use std::fmt;
use std::sync::Arc;

use ndarray::Array3;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform grid on the unit periodic torus, `n` points per axis.
///
/// Wavevector components live in `(-n/2, n/2]` (standard FFT layout); the
/// set is closed under negation modulo `n`, which is what Hermitian pairing
/// of real fields requires. The dealias mask keeps a mode only when every
/// component satisfies `|k_j| <= floor(n/3)` (two-thirds rule).
pub struct TorusGrid {
    n: usize,
    wavenumbers: Vec<i64>,
    dealias_limit: i64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid").field("n", &self.n).finish()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl TorusGrid {
    pub fn new(n: usize) -> Result<Arc<Self>> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidResolution(n));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let wavenumbers = (0..n)
            .map(|i| {
                if i <= n / 2 {
                    i as i64
                } else {
                    i as i64 - n as i64
                }
            })
            .collect();
        Ok(Arc::new(TorusGrid {
            n,
            wavenumbers,
            dealias_limit: (n / 3) as i64,
            fwd,
            inv,
        }))
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    /// Signed wavenumber of a grid index along one axis.
    pub fn wavenumber(&self, idx: usize) -> i64 {
        self.wavenumbers[idx]
    }

    /// Wavevector of the grid index triple.
    pub fn wavevector(&self, idx: [usize; 3]) -> [i64; 3] {
        [
            self.wavenumbers[idx[0]],
            self.wavenumbers[idx[1]],
            self.wavenumbers[idx[2]],
        ]
    }

    /// `|k|^2` of the grid index triple (integer wavevector).
    pub fn ksq(&self, idx: [usize; 3]) -> i64 {
        let k = self.wavevector(idx);
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// Two-thirds-rule cutoff: modes with some `|k_j|` above this are dropped
    /// from pseudospectral products.
    pub fn dealias_limit(&self) -> i64 {
        self.dealias_limit
    }

    pub fn is_dealiased(&self, idx: [usize; 3]) -> bool {
        let k = self.wavevector(idx);
        k.iter().all(|kj| kj.abs() <= self.dealias_limit)
    }

    /// Grid index of `-k` (component-wise negation modulo `n`).
    pub fn negated_index(&self, idx: [usize; 3]) -> [usize; 3] {
        [
            (self.n - idx[0]) % self.n,
            (self.n - idx[1]) % self.n,
            (self.n - idx[2]) % self.n,
        ]
    }

    pub fn index_of_wavevector(&self, k: [i64; 3]) -> Option<[usize; 3]> {
        let n = self.n as i64;
        let mut idx = [0usize; 3];
        for j in 0..3 {
            if k[j] > n / 2 || k[j] <= -n / 2 {
                return None;
            }
            idx[j] = k[j].rem_euclid(n) as usize;
        }
        Some(idx)
    }

    /// In-place 3D DFT over all three axes. `forward` computes
    /// `sum_x f(x) e^{-2 pi i k.x}` per axis without normalization; the
    /// inverse computes the conjugate-exponent sum, also unnormalized.
    pub(crate) fn fft3(&self, data: &mut Array3<Complex64>, forward: bool) {
        let plan = if forward { &self.fwd } else { &self.inv };
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];

        // Axis 2 is contiguous in standard layout; one batched call.
        plan.process_with_scratch(
            data.as_slice_mut().expect("standard layout"),
            &mut scratch,
        );

        // Axis 1: bring it last, transform, put back.
        let n = self.n;
        let mut buf = Array3::zeros((n, n, n));
        buf.assign(&data.view().permuted_axes([0, 2, 1]));
        plan.process_with_scratch(buf.as_slice_mut().unwrap(), &mut scratch);
        data.assign(&buf.view().permuted_axes([0, 2, 1]));

        // Axis 0.
        buf.assign(&data.view().permuted_axes([1, 2, 0]));
        plan.process_with_scratch(buf.as_slice_mut().unwrap(), &mut scratch);
        data.assign(&buf.view().permuted_axes([2, 0, 1]));
    }

    pub(crate) fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GridMismatch(self.n, other.n));
        }
        Ok(())
    }
}
