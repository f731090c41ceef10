use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::grid::TorusGrid;

/// Sobolev order of a norm or inner product; only the orders used by the
/// estimates in scope are representable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SobolevOrder {
    H0,
    H1,
    H2,
}

impl SobolevOrder {
    pub fn try_from_int(m: i64) -> Result<Self> {
        match m {
            0 => Ok(SobolevOrder::H0),
            1 => Ok(SobolevOrder::H1),
            2 => Ok(SobolevOrder::H2),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }

    fn exponent(self) -> i32 {
        match self {
            SobolevOrder::H0 => 0,
            SobolevOrder::H1 => 1,
            SobolevOrder::H2 => 2,
        }
    }
}

/// `(1 + |2 pi k|^2)^m` for integer `|k|^2`.
#[inline]
pub(crate) fn sobolev_weight(ksq: i64, order: SobolevOrder) -> f64 {
    let base = 1.0 + 4.0 * PI * PI * ksq as f64;
    match order.exponent() {
        0 => 1.0,
        1 => base,
        _ => base * base,
    }
}

/// Divergence-free, mean-zero velocity field stored as Fourier coefficients
/// `u_hat(k)` with the convention `u(x) = sum_k u_hat(k) e^{2 pi i k.x}`.
///
/// One complex array per velocity component, indexed in FFT layout.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<TorusGrid>,
    coeffs: [Array3<Complex64>; 3],
}

impl SpectralField {
    pub fn zeros(grid: Arc<TorusGrid>) -> Self {
        let n = grid.resolution();
        let z = Array3::zeros((n, n, n));
        SpectralField {
            grid,
            coeffs: [z.clone(), z.clone(), z],
        }
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn component(&self, j: usize) -> &Array3<Complex64> {
        &self.coeffs[j]
    }

    pub(crate) fn component_mut(&mut self, j: usize) -> &mut Array3<Complex64> {
        &mut self.coeffs[j]
    }

    /// Coefficient at wavevector `k`, all three components.
    pub fn coeff_at(&self, k: [i64; 3]) -> Option<[Complex64; 3]> {
        let idx = self.grid.index_of_wavevector(k)?;
        Some([
            self.coeffs[0][idx],
            self.coeffs[1][idx],
            self.coeffs[2][idx],
        ])
    }

    /// Set the coefficient at `k` and its Hermitian partner at `-k` so the
    /// physical field stays real. Nyquist (self-paired) modes keep only the
    /// real part.
    pub fn set_mode_pair(&mut self, k: [i64; 3], values: [Complex64; 3]) -> Result<()> {
        let idx = self
            .grid
            .index_of_wavevector(k)
            .ok_or_else(|| Error::InvalidField(format!("wavevector {k:?} not on grid")))?;
        let neg = self.grid.negated_index(idx);
        for j in 0..3 {
            if neg == idx {
                self.coeffs[j][idx] = Complex64::new(values[j].re, 0.0);
            } else {
                self.coeffs[j][idx] = values[j];
                self.coeffs[j][neg] = values[j].conj();
            }
        }
        Ok(())
    }

    pub fn check_same_grid(&self, other: &SpectralField) -> Result<()> {
        self.grid.check_same(other.grid())
    }

    // ---- linear-space helpers -------------------------------------------

    pub fn scale(&mut self, a: f64) {
        for c in &mut self.coeffs {
            c.mapv_inplace(|v| v * a);
        }
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        debug_assert_eq!(self.grid.resolution(), other.grid.resolution());
        for j in 0..3 {
            ndarray::Zip::from(&mut self.coeffs[j])
                .and(&other.coeffs[j])
                .for_each(|s, o| *s += o * a);
        }
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// Multiply every mode of every component by `f(idx)`.
    pub(crate) fn mode_multiply(&mut self, f: impl Fn([usize; 3]) -> f64) {
        let n = self.grid.resolution();
        for j in 0..3 {
            for i0 in 0..n {
                for i1 in 0..n {
                    for i2 in 0..n {
                        let w = f([i0, i1, i2]);
                        if w != 1.0 {
                            self.coeffs[j][[i0, i1, i2]] *= w;
                        }
                    }
                }
            }
        }
    }

    // ---- norms and inner products ---------------------------------------

    /// Squared Sobolev norm `sum_k (1+|2 pi k|^2)^m sum_j |u_hat_j(k)|^2`.
    pub fn sobolev_norm_sq(&self, order: SobolevOrder) -> f64 {
        let n = self.grid.resolution();
        let mut acc = 0.0;
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let w = sobolev_weight(self.grid.ksq([i0, i1, i2]), order);
                    let mut s = 0.0;
                    for j in 0..3 {
                        s += self.coeffs[j][[i0, i1, i2]].norm_sqr();
                    }
                    acc += w * s;
                }
            }
        }
        acc
    }

    pub fn h1_norm_sq(&self) -> f64 {
        self.sobolev_norm_sq(SobolevOrder::H1)
    }

    /// Generalized inner product `<u, (I - Delta)^m v>` in Parseval form.
    pub fn inner_product(&self, other: &SpectralField, order: SobolevOrder) -> Result<f64> {
        self.check_same_grid(other)?;
        let n = self.grid.resolution();
        let mut acc = 0.0;
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let w = sobolev_weight(self.grid.ksq([i0, i1, i2]), order);
                    let mut s = 0.0;
                    for j in 0..3 {
                        let a = self.coeffs[j][[i0, i1, i2]];
                        let b = other.coeffs[j][[i0, i1, i2]];
                        s += a.re * b.re + a.im * b.im;
                    }
                    acc += w * s;
                }
            }
        }
        Ok(acc)
    }

    /// `sum_k |2 pi k|^2 |u_hat(k)|^2 = || grad u ||^2` for mean-zero fields.
    pub fn gradient_norm_sq(&self) -> f64 {
        self.sobolev_norm_sq(SobolevOrder::H1) - self.sobolev_norm_sq(SobolevOrder::H0)
    }

    // ---- structural diagnostics ------------------------------------------

    /// Worst Hermitian-symmetry violation, relative to the largest
    /// coefficient magnitude. Zero for exactly real-valued fields.
    pub fn hermitian_error(&self) -> f64 {
        let n = self.grid.resolution();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for j in 0..3 {
            for i0 in 0..n {
                for i1 in 0..n {
                    for i2 in 0..n {
                        let idx = [i0, i1, i2];
                        let a = self.coeffs[j][idx];
                        let b = self.coeffs[j][self.grid.negated_index(idx)];
                        worst = worst.max((a - b.conj()).norm());
                        scale = scale.max(a.norm());
                    }
                }
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Relative divergence residual
    /// `sqrt(sum_k |k . u_hat(k)|^2 / sum_k |k|^2 |u_hat(k)|^2)`.
    pub fn divergence_error(&self) -> f64 {
        let n = self.grid.resolution();
        let mut num = 0.0;
        let mut den = 0.0;
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let idx = [i0, i1, i2];
                    let k = self.grid.wavevector(idx);
                    let mut dot = Complex64::new(0.0, 0.0);
                    let mut mag = 0.0;
                    for j in 0..3 {
                        dot += self.coeffs[j][idx] * k[j] as f64;
                        mag += self.coeffs[j][idx].norm_sqr();
                    }
                    num += dot.norm_sqr();
                    den += (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64 * mag;
                }
            }
        }
        if den == 0.0 {
            0.0
        } else {
            (num / den).sqrt()
        }
    }

    pub fn mean_mode(&self) -> [Complex64; 3] {
        [
            self.coeffs[0][[0, 0, 0]],
            self.coeffs[1][[0, 0, 0]],
            self.coeffs[2][[0, 0, 0]],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Exact equality of all coefficients (bitwise on the float pairs).
    pub fn bitwise_eq(&self, other: &SpectralField) -> bool {
        self.grid.resolution() == other.grid.resolution()
            && self.coeffs.iter().zip(other.coeffs.iter()).all(|(a, b)| {
                a.iter().zip(b.iter()).all(|(x, y)| {
                    x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()
                })
            })
    }

    // ---- physical-space transforms ---------------------------------------

    /// Point values of each velocity component on the grid.
    pub fn to_physical(&self) -> [Array3<f64>; 3] {
        std::array::from_fn(|j| {
            let mut buf = self.coeffs[j].clone();
            self.grid.fft3(&mut buf, false);
            buf.mapv(|v| v.re)
        })
    }

    /// Build a field from real point values (no projection applied).
    pub fn from_physical(grid: Arc<TorusGrid>, values: [Array3<f64>; 3]) -> Self {
        let n = grid.resolution();
        let scale = 1.0 / (n * n * n) as f64;
        let coeffs = std::array::from_fn(|j| {
            let mut buf = values[j].mapv(|v| Complex64::new(v, 0.0));
            grid.fft3(&mut buf, true);
            buf.mapv_inplace(|v| v * scale);
            buf
        });
        SpectralField { grid, coeffs }
    }

    /// Point values of `d u_j / d x_i` for all nine pairs, `[i][j]` order.
    pub(crate) fn gradient_physical(&self) -> [[Array3<f64>; 3]; 3] {
        let n = self.grid.resolution();
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut buf = self.coeffs[j].clone();
                for i0 in 0..n {
                    for i1 in 0..n {
                        for i2 in 0..n {
                            let k = self.grid.wavevector([i0, i1, i2]);
                            // multiply by 2 pi i k_i
                            let f = 2.0 * PI * k[i] as f64;
                            let v = buf[[i0, i1, i2]];
                            buf[[i0, i1, i2]] = Complex64::new(-f * v.im, f * v.re);
                        }
                    }
                }
                self.grid.fft3(&mut buf, false);
                buf.mapv(|v| v.re)
            })
        })
    }

    // ---- presets ----------------------------------------------------------

    /// Shear flow `a (sin(2 pi x_2), 0, 0)`: the mode pair at
    /// `k = (0, +/-1, 0)` with amplitude `a/(2i)`.
    pub fn shear(grid: Arc<TorusGrid>, amplitude: f64) -> Result<SpectralField> {
        let mut f = SpectralField::zeros(grid);
        // sin(2 pi x2) = (e^{2 pi i x2} - e^{-2 pi i x2}) / (2i)
        f.set_mode_pair(
            [0, 1, 0],
            [
                Complex64::new(0.0, -0.5 * amplitude),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(n: usize) -> Arc<TorusGrid> {
        TorusGrid::new(n).unwrap()
    }

    #[test]
    fn unsupported_order_is_rejected() {
        assert!(SobolevOrder::try_from_int(3).is_err());
        assert!(SobolevOrder::try_from_int(-1).is_err());
        assert_eq!(SobolevOrder::try_from_int(1).unwrap(), SobolevOrder::H1);
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let f = SpectralField::zeros(grid(8));
        for m in [SobolevOrder::H0, SobolevOrder::H1, SobolevOrder::H2] {
            assert_eq!(f.sobolev_norm_sq(m), 0.0);
        }
    }

    #[test]
    fn shear_norms_match_parseval() {
        // u = sin(2 pi x2) e_1: integral of sin^2 is 1/2.
        let u = SpectralField::shear(grid(8), 1.0).unwrap();
        assert_relative_eq!(u.sobolev_norm_sq(SobolevOrder::H0), 0.5, epsilon = 1e-14);
        let w = 1.0 + 4.0 * PI * PI;
        assert_relative_eq!(
            u.sobolev_norm_sq(SobolevOrder::H1),
            0.5 * w,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            u.sobolev_norm_sq(SobolevOrder::H2),
            0.5 * w * w,
            epsilon = 1e-10
        );
    }

    #[test]
    fn shear_physical_values_match_sine() {
        let n = 8;
        let u = SpectralField::shear(grid(n), 2.5).unwrap();
        let phys = u.to_physical();
        for i1 in 0..n {
            let x2 = i1 as f64 / n as f64;
            let expected = 2.5 * (2.0 * PI * x2).sin();
            assert_relative_eq!(phys[0][[0, i1, 0]], expected, epsilon = 1e-12);
            assert_relative_eq!(phys[1][[0, i1, 0]], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn physical_round_trip() {
        let n = 8;
        let g = grid(n);
        let u = SpectralField::shear(g.clone(), 1.3).unwrap();
        let back = SpectralField::from_physical(g, u.to_physical());
        assert!(back.sub(&u).sobolev_norm_sq(SobolevOrder::H0) < 1e-24);
    }

    #[test]
    fn inner_product_examples() {
        let g = grid(8);
        let u = SpectralField::shear(g.clone(), 1.0).unwrap();
        let v = SpectralField::shear(g.clone(), 2.0).unwrap();
        // <u, v>_{H0} = 2 * 1/2 = 1
        assert_relative_eq!(
            u.inner_product(&v, SobolevOrder::H0).unwrap(),
            1.0,
            epsilon = 1e-13
        );
        // consistency with the norm
        assert_relative_eq!(
            u.inner_product(&u, SobolevOrder::H1).unwrap(),
            u.sobolev_norm_sq(SobolevOrder::H1),
            epsilon = 1e-12
        );
        // orthogonal single modes
        let mut w = SpectralField::zeros(g);
        w.set_mode_pair(
            [1, 0, 0],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.3, 0.1),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(u.inner_product(&w, SobolevOrder::H0).unwrap(), 0.0);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let u = SpectralField::zeros(grid(8));
        let v = SpectralField::zeros(grid(4));
        assert!(u.inner_product(&v, SobolevOrder::H0).is_err());
    }

    #[test]
    fn hermitian_and_divergence_diagnostics() {
        let u = SpectralField::shear(grid(8), 1.0).unwrap();
        assert_eq!(u.hermitian_error(), 0.0);
        assert_eq!(u.divergence_error(), 0.0);
        assert_eq!(u.mean_mode()[0], Complex64::new(0.0, 0.0));

        // A pure-gradient single mode has maximal divergence residual.
        let mut bad = SpectralField::zeros(grid(8));
        bad.set_mode_pair(
            [1, 0, 0],
            [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert!(bad.divergence_error() > 0.9);
    }
}
