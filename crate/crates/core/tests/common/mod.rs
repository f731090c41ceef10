//! Shared builders for the integration and acceptance suites.
#![allow(dead_code)]

use std::sync::Arc;

use tns_core::noise::{Control, MarkSpace, NoiseCoefficient};
use tns_core::seed::rng_from_seed;
use tns_core::solver::SolverConfig;
use tns_core::spectral::{FieldSampler, SpectralField, TamingSpec, TorusGrid};

pub fn grid(n: usize) -> Arc<TorusGrid> {
    TorusGrid::new(n).unwrap()
}

pub fn taming() -> TamingSpec {
    TamingSpec::new(1.0).unwrap()
}

pub fn config(dt: f64, t_end: f64, stride: usize) -> SolverConfig {
    SolverConfig {
        dt,
        t_end,
        taming: taming(),
        truncation: None,
        snapshot_stride: stride,
    }
}

pub fn two_marks() -> MarkSpace {
    MarkSpace::new(vec![1.0, 0.5]).unwrap()
}

/// State-independent coefficient: kicks are fixed fields (c = 0).
pub fn sigma_additive(g: &Arc<TorusGrid>, marks: &MarkSpace, scale: f64) -> NoiseCoefficient {
    let sampler = FieldSampler::with_norm(g.clone(), 2.5, scale);
    let mut rng = rng_from_seed(0xA0);
    let additive: Vec<SpectralField> = (0..marks.len()).map(|_| sampler.sample(&mut rng)).collect();
    NoiseCoefficient::new(marks, vec![0.0; marks.len()], additive, 2).unwrap()
}

/// Generic coefficient with state dependence (c != 0) and additive parts.
pub fn sigma_generic(g: &Arc<TorusGrid>, marks: &MarkSpace, scale: f64) -> NoiseCoefficient {
    let sampler = FieldSampler::with_norm(g.clone(), 2.5, scale);
    let mut rng = rng_from_seed(0xA1);
    let additive: Vec<SpectralField> = (0..marks.len()).map(|_| sampler.sample(&mut rng)).collect();
    let scales: Vec<f64> = (0..marks.len())
        .map(|k| scale * if k % 2 == 0 { 1.0 } else { -0.6 })
        .collect();
    NoiseCoefficient::new(marks, scales, additive, 2).unwrap()
}

pub fn sigma_zero(g: &Arc<TorusGrid>, marks: &MarkSpace) -> NoiseCoefficient {
    NoiseCoefficient::zero(marks, g.clone())
}

/// A two-mark, two-interval control with entropy cost below 2.
pub fn control_in_s2(t_end: f64) -> Control {
    let g = Control::new(
        vec![0.0, 0.5 * t_end, t_end],
        vec![vec![2.0, 0.5], vec![0.7, 1.8]],
    )
    .unwrap();
    let marks = two_marks();
    assert!(g.cost(&marks).unwrap() <= 2.0, "control not in S^2");
    g
}

pub fn random_u0(g: &Arc<TorusGrid>, h1_norm: f64, seed: u64) -> SpectralField {
    FieldSampler::with_norm(g.clone(), 2.0, h1_norm).sample(&mut rng_from_seed(seed))
}
