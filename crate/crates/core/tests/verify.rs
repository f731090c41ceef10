//! Integration tests of the verification experiments at reduced desk scale.

mod common;

use std::f64::consts::PI;

use common::*;
use tns_core::noise::Control;
use tns_core::solver::solve_skeleton;
use tns_core::spectral::SpectralField;
use tns_core::verify::{
    energy_audit_skeleton, eps_sweep, refinement_study, stability_probe, RefinementLadder,
    RefinementProblem,
};

#[test]
fn eps_sweep_is_zero_for_vanishing_coefficient() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_zero(&g, &marks);
    let u0 = SpectralField::shear(g.clone(), 0.4).unwrap();
    let cfg = config(2e-3, 0.1, 10);
    let phi = control_in_s2(0.1);
    let report = eps_sweep(&u0, &phi, &sigma, &marks, &cfg, &[0.2, 0.1], 3, 11).unwrap();
    assert!(report.errors.iter().all(|e| *e == 0.0));
    assert!(report.passed);
}

#[test]
fn eps_sweep_reproduces_deterministically_with_one_replica() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_additive(&g, &marks, 0.2);
    let u0 = SpectralField::shear(g.clone(), 0.4).unwrap();
    let cfg = config(2e-3, 0.1, 10);
    let phi = control_in_s2(0.1);
    let a = eps_sweep(&u0, &phi, &sigma, &marks, &cfg, &[0.2, 0.1], 1, 77).unwrap();
    let b = eps_sweep(&u0, &phi, &sigma, &marks, &cfg, &[0.2, 0.1], 1, 77).unwrap();
    assert_eq!(a.errors, b.errors);
}

#[test]
fn eps_sweep_decreases_down_the_ladder() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_additive(&g, &marks, 0.25);
    let u0 = SpectralField::shear(g.clone(), 0.4).unwrap();
    let cfg = config(2e-3, 0.1, 10);
    let phi = control_in_s2(0.1);
    let report =
        eps_sweep(&u0, &phi, &sigma, &marks, &cfg, &[0.2, 0.1, 0.05], 60, 2024).unwrap();
    assert!(
        report.monotone,
        "errors not decreasing: {:?} (se {:?})",
        report.errors, report.std_errors
    );
}

#[test]
fn ladder_validation() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_additive(&g, &marks, 0.2);
    let u0 = SpectralField::shear(g.clone(), 0.4).unwrap();
    let cfg = config(2e-3, 0.1, 10);
    let phi = control_in_s2(0.1);
    assert!(eps_sweep(&u0, &phi, &sigma, &marks, &cfg, &[0.1, 0.2], 2, 1).is_err());
    assert!(eps_sweep(&u0, &phi, &sigma, &marks, &cfg, &[0.2, 0.1], 0, 1).is_err());
    let problem = RefinementProblem {
        u0: &u0,
        control: &phi,
        sigma: &sigma,
        marks: &marks,
        cfg: &cfg,
    };
    assert!(refinement_study(&problem, &RefinementLadder::Dt(vec![1e-3, 2e-3, 4e-3])).is_err());
    assert!(refinement_study(&problem, &RefinementLadder::Dt(vec![2e-3, 1e-3])).is_err());
}

#[test]
fn dt_refinement_recovers_second_order_on_nonlinear_problem() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_generic(&g, &marks, 0.3);
    let u0 = random_u0(&g, 0.9, 21);
    let cfg = config(1e-3, 0.1, 100);
    let phi = control_in_s2(0.1);
    let problem = RefinementProblem {
        u0: &u0,
        control: &phi,
        sigma: &sigma,
        marks: &marks,
        cfg: &cfg,
    };
    // Start the ladder inside the asymptotic regime: the fastest retained
    // mode decays at lambda ~ 474, so dt lambda must be well below one.
    let report = refinement_study(
        &problem,
        &RefinementLadder::Dt(vec![1e-3, 5e-4, 2.5e-4, 1.25e-4]),
    )
    .unwrap();
    assert!(report.monotone, "errors {:?}", report.errors);
    let order = report.estimated_order.unwrap();
    assert!(order >= 1.7, "estimated order {order}, errors {:?}", report.errors);
}

#[test]
fn dt_refinement_on_zero_data_is_exactly_zero() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_zero(&g, &marks);
    let u0 = SpectralField::zeros(g.clone());
    let cfg = config(1e-3, 0.1, 100);
    let ones = Control::constant(1.0, 0.1, 2).unwrap();
    let problem = RefinementProblem {
        u0: &u0,
        control: &ones,
        sigma: &sigma,
        marks: &marks,
        cfg: &cfg,
    };
    let report =
        refinement_study(&problem, &RefinementLadder::Dt(vec![4e-3, 2e-3, 1e-3])).unwrap();
    assert!(report.errors.iter().all(|e| *e == 0.0));
    assert!(report.passed);
}

#[test]
fn galerkin_ladder_errors_shrink_with_mode_count() {
    let g = grid(16);
    let marks = two_marks();
    let sigma = sigma_generic(&g, &marks, 0.25);
    // smooth initial data: steep spectral decay
    let u0 = tns_core::spectral::FieldSampler::with_norm(g.clone(), 3.0, 1.2)
        .sample(&mut tns_core::seed::rng_from_seed(31));
    let cfg = config(2e-3, 0.1, 50);
    let phi = control_in_s2(0.1);
    let problem = RefinementProblem {
        u0: &u0,
        control: &phi,
        sigma: &sigma,
        marks: &marks,
        cfg: &cfg,
    };
    let report = refinement_study(
        &problem,
        &RefinementLadder::Modes(vec![16, 32, 64, 128]),
    )
    .unwrap();
    assert!(
        report.monotone,
        "Galerkin errors not decreasing: {:?}",
        report.errors
    );
}

#[test]
fn stability_probe_amplification_is_stable_across_deltas() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_generic(&g, &marks, 0.3);
    let u0 = random_u0(&g, 0.7, 40);
    let cfg = config(1e-3, 0.1, 10);
    let phi = control_in_s2(0.1);
    let report = stability_probe(
        &u0,
        &phi,
        &sigma,
        &marks,
        &cfg,
        &[1e-3, 1e-4, 1e-5],
        5,
    )
    .unwrap();
    assert!(
        report.passed,
        "amplification {:?} spread {}",
        report.amplification, report.spread
    );
    assert!(report.gronwall_weight.is_finite() && report.gronwall_weight > 0.0);
}

#[test]
fn energy_audit_single_mode_decay() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_zero(&g, &marks);
    let ones = Control::constant(1.0, 0.1, 2).unwrap();
    let u0 = SpectralField::shear(g.clone(), 0.6).unwrap();
    let cfg = config(1e-3, 0.1, 1);
    let traj = solve_skeleton(&u0, &ones, &sigma, &marks, &cfg).unwrap();
    // Trapezoid-quadrature residual for a pure decay mode integrates to
    // about dt^2 lambda^2 h1(0) / 3; allow a factor-two margin.
    let lambda = 4.0 * PI * PI;
    let bound = 2.0 * 1e-6 * lambda * lambda * u0.h1_norm_sq() / 3.0;
    let report = energy_audit_skeleton(&traj, &ones, &sigma, &marks, &cfg, bound).unwrap();
    assert!(
        report.passed,
        "residual sum {} exceeds {bound}",
        report.residual_sum
    );
    // closed form of the decayed energy
    let h1_0 = u0.h1_norm_sq();
    let expected = h1_0 * (-8.0 * PI * PI * 0.1f64).exp();
    let last = traj.energy.last().unwrap().h1_sq;
    assert!((last - expected).abs() <= 1e-6 * h1_0);
}

#[test]
fn energy_audit_zero_trajectory() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_zero(&g, &marks);
    let ones = Control::constant(1.0, 0.1, 2).unwrap();
    let cfg = config(1e-3, 0.1, 1);
    let traj = solve_skeleton(&SpectralField::zeros(g), &ones, &sigma, &marks, &cfg).unwrap();
    let report = energy_audit_skeleton(&traj, &ones, &sigma, &marks, &cfg, 1e-12).unwrap();
    assert_eq!(report.sup_h1_sq, 0.0);
    assert_eq!(report.integral_h2_sq, 0.0);
    assert_eq!(report.residual_sum, 0.0);
}

#[test]
fn energy_audit_generic_skeleton_residual_is_second_order() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_generic(&g, &marks, 0.3);
    let u0 = random_u0(&g, 0.8, 50);
    let phi = control_in_s2(0.2);

    let mut sums = Vec::new();
    for dt in [2e-3, 1e-3] {
        let cfg = config(dt, 0.2, 1);
        let traj = solve_skeleton(&u0, &phi, &sigma, &marks, &cfg).unwrap();
        let report = energy_audit_skeleton(&traj, &phi, &sigma, &marks, &cfg, f64::MAX).unwrap();
        sums.push(report.residual_sum);
    }
    // halving dt should cut the summed residual by about 4
    let ratio = sums[0] / sums[1];
    assert!(
        ratio > 2.5,
        "residual sums {sums:?} do not contract at second order"
    );
    assert!(sums[1] <= 5e-3, "residual sum {} too large", sums[1]);
}

#[test]
fn energy_audit_small_skeleton_in_s2_meets_absolute_threshold() {
    // The trapezoid residual integrates to ~ (2/3) dt^2 sum_k lambda_k^2
    // h1_k(0); at small data the absolute 1e-4 budget at dt = 1e-3 holds.
    let g = grid(8);
    let marks = two_marks();
    let sampler = tns_core::spectral::FieldSampler::with_norm(g.clone(), 2.5, 0.02);
    let mut rng = tns_core::seed::rng_from_seed(0xE1);
    let additive: Vec<SpectralField> = (0..2).map(|_| sampler.sample(&mut rng)).collect();
    let sigma =
        tns_core::noise::NoiseCoefficient::new(&marks, vec![0.01, -0.005], additive, 2).unwrap();
    let u0 = random_u0(&g, 0.05, 77);
    let phi = control_in_s2(0.5);
    let cfg = config(1e-3, 0.5, 1);
    let traj = solve_skeleton(&u0, &phi, &sigma, &marks, &cfg).unwrap();
    let report = energy_audit_skeleton(&traj, &phi, &sigma, &marks, &cfg, 1e-4).unwrap();
    assert!(
        report.passed,
        "residual sum {} over 1e-4",
        report.residual_sum
    );
    assert!(report.sup_h1_sq.is_finite() && report.integral_h2_sq.is_finite());
}

#[test]
fn energy_bound_is_stable_under_dt_halving() {
    let g = grid(8);
    let marks = two_marks();
    let sigma = sigma_generic(&g, &marks, 0.3);
    let u0 = random_u0(&g, 0.8, 51);
    let phi = control_in_s2(0.2);
    let mut totals = Vec::new();
    for dt in [2e-3, 1e-3] {
        let cfg = config(dt, 0.2, 1);
        let traj = solve_skeleton(&u0, &phi, &sigma, &marks, &cfg).unwrap();
        totals.push(traj.sup_h1_sq() + traj.integral_h2_sq());
    }
    let rel = (totals[0] - totals[1]).abs() / totals[1];
    assert!(rel <= 0.05, "energy totals {totals:?} changed by {rel}");
}
