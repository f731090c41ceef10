//! The deterministic operators: Leray projector, Stokes operator, dealiased
//! convection term and the tamed drift.

use std::f64::consts::PI;

use ndarray::Array3;
use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::field::SpectralField;
use crate::spectral::taming::TamingSpec;

/// Orthogonal projection onto divergence-free, mean-zero fields.
///
/// Per mode `k != 0`: `c <- c - k (k.c) / |k|^2`; the zero mode is dropped.
/// Idempotent, and the identity on its range.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    leray_project_inplace(&mut out);
    out
}

pub(crate) fn leray_project_inplace(f: &mut SpectralField) {
    let grid = f.grid().clone();
    let n = grid.resolution();
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                let idx = [i0, i1, i2];
                let k = grid.wavevector(idx);
                let ksq = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
                if ksq == 0.0 {
                    for j in 0..3 {
                        f.component_mut(j)[idx] = Complex64::new(0.0, 0.0);
                    }
                    continue;
                }
                let mut dot = Complex64::new(0.0, 0.0);
                for j in 0..3 {
                    dot += f.component(j)[idx] * k[j] as f64;
                }
                let factor = dot / ksq;
                for j in 0..3 {
                    let v = f.component(j)[idx] - factor * k[j] as f64;
                    f.component_mut(j)[idx] = v;
                }
            }
        }
    }
}

/// Stokes operator `A = -P Delta`: mode-wise multiplication by `|2 pi k|^2`.
pub fn apply_stokes(u: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    let grid = out.grid().clone();
    out.mode_multiply(|idx| 4.0 * PI * PI * grid.ksq(idx) as f64);
    out
}

/// Zero every mode outside the two-thirds dealias mask.
pub fn dealias(u: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    dealias_inplace(&mut out);
    out
}

pub(crate) fn dealias_inplace(u: &mut SpectralField) {
    let grid = u.grid().clone();
    u.mode_multiply(|idx| if grid.is_dealiased(idx) { 1.0 } else { 0.0 });
}

/// Low-pass smoother: keep modes with `|k|^2 <= rho^2`.
pub fn lowpass(u: &SpectralField, rho: u32) -> SpectralField {
    let mut out = u.clone();
    let grid = out.grid().clone();
    let limit = (rho as i64) * (rho as i64);
    out.mode_multiply(|idx| if grid.ksq(idx) <= limit { 1.0 } else { 0.0 });
    out
}

/// Convection term `B(u, v) = P((u . grad) v)`, computed pseudospectrally
/// with two-thirds dealiasing on both the inputs and the product.
pub fn nonlinear_term(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.check_same_grid(v)?;
    Ok(convective_product(u, v, None))
}

/// Tamed drift `F(u) = -A u - B(u, u) - P(g_N(|u|^2) u)` with `|u|^2`
/// evaluated pointwise in physical space.
pub fn tamed_drift(u: &SpectralField, spec: &TamingSpec) -> SpectralField {
    let mut out = apply_stokes(u);
    out.scale(-1.0);
    out.axpy(-1.0, &convective_product(u, u, Some(spec)));
    out
}

/// Fused pseudospectral evaluation of `P mask[(u . grad) v + g_N(|u|^2) u]`.
///
/// Inputs are dealiased before the physical products so that, for fields
/// already supported on the mask, the quadratic term is alias-free and the
/// skew symmetry `<B(u,v), v> = 0` holds to rounding.
pub(crate) fn convective_product(
    u: &SpectralField,
    v: &SpectralField,
    taming: Option<&TamingSpec>,
) -> SpectralField {
    let grid = u.grid().clone();
    let ud = dealias(u);
    let u_phys = ud.to_physical();
    let grad_v = if std::ptr::eq(u, v) {
        ud.gradient_physical()
    } else {
        dealias(v).gradient_physical()
    };

    let n = grid.resolution();
    let mut products: [Array3<f64>; 3] = std::array::from_fn(|_| Array3::zeros((n, n, n)));
    for j in 0..3 {
        for i in 0..3 {
            ndarray::Zip::from(&mut products[j])
                .and(&u_phys[i])
                .and(&grad_v[i][j])
                .for_each(|p, a, d| *p += a * d);
        }
    }
    if let Some(spec) = taming {
        let mut speed_sq = Array3::zeros((n, n, n));
        for up in &u_phys {
            ndarray::Zip::from(&mut speed_sq)
                .and(up)
                .for_each(|s, a| *s += a * a);
        }
        for j in 0..3 {
            ndarray::Zip::from(&mut products[j])
                .and(&speed_sq)
                .and(&u_phys[j])
                .for_each(|p, s, a| *p += spec.eval(*s) * a);
        }
    }

    let mut w = SpectralField::from_physical(grid, products);
    dealias_inplace(&mut w);
    leray_project_inplace(&mut w);
    w
}

/// Grid quadrature of `|u(x)|^2 |grad u(x)|^2` (the mixed term in the
/// H^1 coercivity estimate), with the inputs dealiased first.
pub fn mixed_gradient_norm_sq(u: &SpectralField) -> f64 {
    let ud = dealias(u);
    let u_phys = ud.to_physical();
    let grad = ud.gradient_physical();
    let n = u.grid().resolution();
    let mut acc = 0.0;
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                let idx = [i0, i1, i2];
                let speed_sq: f64 = (0..3).map(|j| u_phys[j][idx] * u_phys[j][idx]).sum();
                let mut grad_sq = 0.0;
                for gi in &grad {
                    for gij in gi {
                        grad_sq += gij[idx] * gij[idx];
                    }
                }
                acc += speed_sq * grad_sq;
            }
        }
    }
    acc / (n * n * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::SobolevOrder;
    use crate::spectral::grid::TorusGrid;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn grid(n: usize) -> Arc<TorusGrid> {
        TorusGrid::new(n).unwrap()
    }

    #[test]
    fn leray_annihilates_gradients() {
        // cos(2 pi x1) e_1 is the gradient of sin(2 pi x1) / (2 pi).
        let mut f = SpectralField::zeros(grid(8));
        f.set_mode_pair(
            [1, 0, 0],
            [
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let p = leray_project(&f);
        assert!(p.sobolev_norm_sq(SobolevOrder::H0) < 1e-28);
    }

    #[test]
    fn leray_fixes_divergence_free_fields() {
        let u = SpectralField::shear(grid(8), 1.7).unwrap();
        let p = leray_project(&u);
        assert!(p.sub(&u).sobolev_norm_sq(SobolevOrder::H0) < 1e-28);
    }

    #[test]
    fn leray_single_mode_formula() {
        // k = (1,0,0), coeff (a,b,c) -> (0,b,c)
        let mut f = SpectralField::zeros(grid(8));
        let a = Complex64::new(0.4, -0.2);
        let b = Complex64::new(-0.3, 0.9);
        let c = Complex64::new(0.1, 0.5);
        f.set_mode_pair([1, 0, 0], [a, b, c]).unwrap();
        let p = leray_project(&f);
        let got = p.coeff_at([1, 0, 0]).unwrap();
        assert!((got[0]).norm() < 1e-15);
        assert!((got[1] - b).norm() < 1e-15);
        assert!((got[2] - c).norm() < 1e-15);
        // zero mode is dropped
        let mut g = SpectralField::zeros(grid(8));
        g.set_mode_pair([0, 0, 0], [Complex64::new(2.0, 0.0); 3]).unwrap();
        assert_eq!(
            leray_project(&g).mean_mode()[0],
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn stokes_eigenvalues() {
        let u = SpectralField::shear(grid(8), 1.0).unwrap();
        let au = apply_stokes(&u);
        // single mode |k|^2 = 1: eigenvalue 4 pi^2
        let expected = u.scaled(4.0 * PI * PI);
        assert!(au.sub(&expected).sobolev_norm_sq(SobolevOrder::H0) < 1e-20);

        // k = (1,1,0) with divergence-free amplitude: eigenvalue 8 pi^2.
        let mut v = SpectralField::zeros(grid(8));
        v.set_mode_pair(
            [1, 1, 0],
            [
                Complex64::new(0.3, 0.1),
                Complex64::new(-0.3, -0.1),
                Complex64::new(0.2, -0.4),
            ],
        )
        .unwrap();
        assert!(v.divergence_error() < 1e-14);
        let av = apply_stokes(&v);
        let expected = v.scaled(8.0 * PI * PI);
        assert!(av.sub(&expected).sobolev_norm_sq(SobolevOrder::H0) < 1e-20);

        assert_eq!(
            apply_stokes(&SpectralField::zeros(grid(8))).sobolev_norm_sq(SobolevOrder::H0),
            0.0
        );
    }

    #[test]
    fn stokes_pairing_is_nonnegative_and_exact() {
        let mut u = SpectralField::shear(grid(8), 0.7).unwrap();
        u.set_mode_pair(
            [1, 2, 0],
            [
                Complex64::new(0.2, 0.1),
                Complex64::new(-0.1, -0.05),
                Complex64::new(0.05, 0.3),
            ],
        )
        .unwrap();
        let u = leray_project(&u);
        let au = apply_stokes(&u);
        let pairing = au.inner_product(&u, SobolevOrder::H0).unwrap();
        assert_relative_eq!(pairing, u.gradient_norm_sq(), epsilon = 1e-12);
        assert!(pairing >= 0.0);
    }

    #[test]
    fn convection_vanishes_for_parallel_shear() {
        // u = (sin 2 pi x2, 0, 0): u^1 d_1 u = 0.
        let u = SpectralField::shear(grid(8), 1.0).unwrap();
        let b = nonlinear_term(&u, &u).unwrap();
        assert!(b.sobolev_norm_sq(SobolevOrder::H0) < 1e-24);
    }

    #[test]
    fn convection_cross_example_matches_symbolic_oracle() {
        // u = (sin 2 pi x2, 0, 0), v = (0, 0, sin 2 pi x1):
        // (u . grad) v = (0, 0, 2 pi sin(2 pi x2) cos(2 pi x1)), then P.
        let g = grid(8);
        let u = SpectralField::shear(g.clone(), 1.0).unwrap();
        let mut v = SpectralField::zeros(g.clone());
        v.set_mode_pair(
            [1, 0, 0],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -0.5),
            ],
        )
        .unwrap();

        // Symbolic expansion: sin(2 pi x2) cos(2 pi x1)
        //   = sum over (e1, e2) in {+-1}^2 of (e2 / 4i) e^{2 pi i (e1 x1 + e2 x2)}.
        let mut raw = SpectralField::zeros(g);
        let two_pi = 2.0 * PI;
        for e1 in [-1i64, 1] {
            for e2 in [-1i64, 1] {
                let coeff = Complex64::new(0.0, -(e2 as f64) / 4.0) * two_pi;
                let idx = raw.grid().index_of_wavevector([e1, e2, 0]).unwrap();
                raw.component_mut(2)[idx] += coeff;
            }
        }
        let expected = leray_project(&raw);
        let got = nonlinear_term(&u, &v).unwrap();
        let diff = got.sub(&expected).sobolev_norm_sq(SobolevOrder::H0);
        assert!(diff < 1e-24, "convection mismatch: {diff}");
    }

    #[test]
    fn convection_outputs_are_divergence_free_and_mean_zero() {
        let g = grid(8);
        let mut u = SpectralField::shear(g.clone(), 1.0).unwrap();
        u.set_mode_pair(
            [0, 1, 1],
            [
                Complex64::new(0.3, -0.2),
                Complex64::new(0.1, 0.1),
                Complex64::new(-0.1, -0.1),
            ],
        )
        .unwrap();
        let u = leray_project(&u);
        let b = nonlinear_term(&u, &u).unwrap();
        assert!(b.divergence_error() < 1e-12);
        assert_eq!(b.mean_mode()[1], Complex64::new(0.0, 0.0));
        assert!(b.hermitian_error() < 1e-12);
    }

    #[test]
    fn tamed_drift_on_small_shear_is_pure_stokes_decay() {
        // a^2 <= N kills the taming term pointwise and B(u,u) = 0.
        let spec = TamingSpec::new(1.0).unwrap();
        let u = SpectralField::shear(grid(8), 0.9).unwrap();
        let f = tamed_drift(&u, &spec);
        let expected = u.scaled(-4.0 * PI * PI);
        assert!(f.sub(&expected).sobolev_norm_sq(SobolevOrder::H0) < 1e-20);

        let z = SpectralField::zeros(grid(8));
        assert_eq!(tamed_drift(&z, &spec).sobolev_norm_sq(SobolevOrder::H0), 0.0);
    }

    #[test]
    fn tamed_drift_h0_pairing_decomposition() {
        // <F(u), u>_{H0} = -||grad u||^2 - quad(g_N(|u|^2) |u|^2)
        // for dealiased divergence-free u (the B term pairs to zero).
        let spec = TamingSpec::new(0.5).unwrap();
        let g = grid(8);
        let mut u = SpectralField::shear(g.clone(), 1.4).unwrap();
        u.set_mode_pair(
            [1, 0, 1],
            [
                Complex64::new(0.4, 0.0),
                Complex64::new(0.1, 0.2),
                Complex64::new(-0.4, 0.0),
            ],
        )
        .unwrap();
        let u = leray_project(&u);
        let f = tamed_drift(&u, &spec);
        let lhs = f.inner_product(&u, SobolevOrder::H0).unwrap();

        let phys = dealias(&u).to_physical();
        let n = u.grid().resolution();
        let mut tame_quad = 0.0;
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let s: f64 = (0..3).map(|j| phys[j][[i0, i1, i2]].powi(2)).sum();
                    tame_quad += spec.eval(s) * s;
                }
            }
        }
        tame_quad /= (n * n * n) as f64;
        let rhs = -u.gradient_norm_sq() - tame_quad;
        assert_relative_eq!(lhs, rhs, epsilon = 1e-9, max_relative = 1e-9);
    }

    #[test]
    fn lowpass_keeps_low_modes_only() {
        let g = grid(8);
        let mut u = SpectralField::shear(g.clone(), 1.0).unwrap();
        u.set_mode_pair(
            [2, 1, 0],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let f = lowpass(&u, 1);
        assert!(f.coeff_at([2, 1, 0]).unwrap()[2].norm() == 0.0);
        assert!((f.coeff_at([0, 1, 0]).unwrap()[0]).norm() > 0.0);
    }
}
