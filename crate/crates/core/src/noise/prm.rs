//! Poisson random measure sampling on `[0, T] x Z`: the homogeneous case by
//! exponential inter-arrival times, the controlled case by thinning a
//! dominating homogeneous sample.

use rand::Rng;
use rand_distr::Exp;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::control::Control;
use crate::noise::marks::MarkSpace;
use crate::seed::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MarkedEvent {
    pub time: f64,
    pub mark: usize,
}

/// A realized point measure: strictly increasing event times in `(0, T]`
/// with mark indices, reproducible from the stored seed.
#[derive(Clone, Debug, Serialize)]
pub struct PoissonSample {
    pub events: Vec<MarkedEvent>,
    pub horizon: f64,
    pub seed: u64,
}

impl PoissonSample {
    pub fn count(&self) -> usize {
        self.events.len()
    }

    /// Events with `lo < t <= hi`, in order.
    pub fn events_in(&self, lo: f64, hi: f64) -> &[MarkedEvent] {
        let start = self.events.partition_point(|e| e.time <= lo);
        let end = self.events.partition_point(|e| e.time <= hi);
        &self.events[start..end]
    }
}

fn draw_mark(rng: &mut impl Rng, marks: &MarkSpace) -> usize {
    let u: f64 = rng.random::<f64>() * marks.total_mass();
    let mut acc = 0.0;
    for k in 0..marks.len() {
        acc += marks.weight(k);
        if u < acc {
            return k;
        }
    }
    marks.len() - 1
}

fn draw_homogeneous(
    rng: &mut impl Rng,
    total_rate: f64,
    marks: &MarkSpace,
    horizon: f64,
) -> Vec<MarkedEvent> {
    let mut events = Vec::new();
    if horizon <= 0.0 || total_rate <= 0.0 {
        return events;
    }
    let exp = Exp::new(total_rate).expect("positive rate");
    let mut t = 0.0f64;
    loop {
        // Resample on ties: a gap that rounds to zero would break the
        // strict ordering invariant.
        let mut next = t + rng.sample::<f64, _>(exp);
        while next <= t {
            next = t + rng.sample::<f64, _>(exp);
        }
        if next > horizon {
            break;
        }
        let mark = draw_mark(rng, marks);
        events.push(MarkedEvent { time: next, mark });
        t = next;
    }
    events
}

/// Homogeneous Poisson random measure with intensity
/// `rate_scale * weight_k` per mark; total rate `rate_scale * total_mass`.
pub fn sample_prm(
    rate_scale: f64,
    marks: &MarkSpace,
    horizon: f64,
    seed: u64,
) -> Result<PoissonSample> {
    if !(rate_scale > 0.0) || !rate_scale.is_finite() {
        return Err(Error::InvalidRate(rate_scale));
    }
    let mut rng = rng_from_seed(seed);
    let events = draw_homogeneous(&mut rng, rate_scale * marks.total_mass(), marks, horizon);
    Ok(PoissonSample {
        events,
        horizon,
        seed,
    })
}

/// Controlled Poisson random measure with cell intensity
/// `eps^{-1} phi(j, k) w_k`, realized by sampling the dominating measure at
/// rate `eps^{-1} max(phi)` and thinning with acceptance `phi / max(phi)`.
///
/// The times are drawn first and the acceptance uniforms afterwards, so a
/// constant control `phi == c` reproduces `sample_prm(c / eps)` event for
/// event under the same seed.
pub fn sample_controlled_prm(
    control: &Control,
    eps: f64,
    marks: &MarkSpace,
    seed: u64,
) -> Result<PoissonSample> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    let horizon = control.horizon();
    let phi_max = control.max_value();
    let mut rng = rng_from_seed(seed);
    let events = if phi_max == 0.0 {
        Vec::new()
    } else {
        let base = draw_homogeneous(&mut rng, phi_max / eps * marks.total_mass(), marks, horizon);
        base.into_iter()
            .filter(|ev| {
                let p = control.value(ev.time, ev.mark) / phi_max;
                rng.random::<f64>() < p
            })
            .collect()
    };
    Ok(PoissonSample {
        events,
        horizon,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn invalid_rates_are_rejected() {
        let marks = MarkSpace::new(vec![1.0]).unwrap();
        assert!(sample_prm(0.0, &marks, 1.0, 1).is_err());
        assert!(sample_prm(-1.0, &marks, 1.0, 1).is_err());
        let g = Control::constant(1.0, 1.0, 1).unwrap();
        assert!(sample_controlled_prm(&g, 0.0, &marks, 1).is_err());
    }

    #[test]
    fn zero_horizon_gives_empty_sample() {
        let marks = MarkSpace::new(vec![2.0]).unwrap();
        let s = sample_prm(3.0, &marks, 0.0, 42).unwrap();
        assert!(s.events.is_empty());
    }

    #[test]
    fn events_are_strictly_increasing_and_in_range() {
        let marks = MarkSpace::new(vec![1.0, 0.5]).unwrap();
        let s = sample_prm(50.0, &marks, 2.0, 9).unwrap();
        assert!(!s.events.is_empty());
        let mut prev = 0.0;
        for ev in &s.events {
            assert!(ev.time > prev);
            assert!(ev.time <= 2.0);
            assert!(ev.mark < 2);
            prev = ev.time;
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let marks = MarkSpace::new(vec![1.0, 2.0]).unwrap();
        let a = sample_prm(10.0, &marks, 1.0, 77).unwrap();
        let b = sample_prm(10.0, &marks, 1.0, 77).unwrap();
        assert_eq!(a.events, b.events);
    }

    #[test]
    fn mean_count_matches_poisson_rate() {
        // mean over 10^4 replicas within 3 standard errors of theta*mass*T
        let marks = MarkSpace::new(vec![0.6, 0.9]).unwrap();
        let theta = 2.0;
        let horizon = 1.0;
        let counts: Vec<f64> = (0..10_000)
            .map(|r| {
                sample_prm(theta, &marks, horizon, 1000 + r)
                    .unwrap()
                    .count() as f64
            })
            .collect();
        let (mean, se) = mean_and_se(&counts);
        let expected = theta * marks.total_mass() * horizon;
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "mean {mean} vs expected {expected} (se {se})"
        );
    }

    #[test]
    fn disjoint_windows_have_uncorrelated_counts() {
        let marks = MarkSpace::new(vec![1.0]).unwrap();
        let replicas = 10_000;
        let mut first = Vec::with_capacity(replicas);
        let mut second = Vec::with_capacity(replicas);
        for r in 0..replicas {
            let s = sample_prm(4.0, &marks, 1.0, 555_000 + r as u64).unwrap();
            first.push(s.events_in(0.0, 0.5).len() as f64);
            second.push(s.events_in(0.5, 1.0).len() as f64);
        }
        let (m1, _) = mean_and_se(&first);
        let (m2, _) = mean_and_se(&second);
        let mut cov = 0.0;
        let mut v1 = 0.0;
        let mut v2 = 0.0;
        for i in 0..replicas {
            cov += (first[i] - m1) * (second[i] - m2);
            v1 += (first[i] - m1).powi(2);
            v2 += (second[i] - m2).powi(2);
        }
        let corr = cov / (v1.sqrt() * v2.sqrt());
        // correlation of independent Poisson counts: se ~ 1/sqrt(R)
        assert!(
            corr.abs() <= 3.0 / (replicas as f64).sqrt(),
            "correlation {corr}"
        );
    }

    #[test]
    fn unit_control_reproduces_plain_sampling_bitwise() {
        let marks = MarkSpace::new(vec![1.0, 0.4]).unwrap();
        let eps = 0.2;
        let g = Control::constant(1.0, 1.0, 2).unwrap();
        let controlled = sample_controlled_prm(&g, eps, &marks, 31).unwrap();
        let plain = sample_prm(1.0 / eps, &marks, 1.0, 31).unwrap();
        assert_eq!(controlled.events, plain.events);
    }

    #[test]
    fn zero_control_gives_no_events() {
        let marks = MarkSpace::new(vec![1.0]).unwrap();
        let g = Control::constant(0.0, 1.0, 1).unwrap();
        let s = sample_controlled_prm(&g, 0.1, &marks, 5).unwrap();
        assert!(s.events.is_empty());
    }

    #[test]
    fn controlled_mean_count_matches_cell_rates() {
        // phi == 2, single mark w = 1, T = 1, eps = 0.1: mean count 20.
        let marks = MarkSpace::new(vec![1.0]).unwrap();
        let g = Control::constant(2.0, 1.0, 1).unwrap();
        let counts: Vec<f64> = (0..10_000)
            .map(|r| {
                sample_controlled_prm(&g, 0.1, &marks, 40_000 + r)
                    .unwrap()
                    .count() as f64
            })
            .collect();
        let (mean, se) = mean_and_se(&counts);
        assert!(
            (mean - 20.0).abs() <= 3.0 * se,
            "mean {mean} vs 20 (se {se})"
        );
    }

    #[test]
    fn time_varying_control_thins_per_cell() {
        // two cells with rates 8 and 2 per unit time on [0, 0.5], [0.5, 1].
        let marks = MarkSpace::new(vec![1.0]).unwrap();
        let g = Control::new(vec![0.0, 0.5, 1.0], vec![vec![4.0], vec![1.0]]).unwrap();
        let eps = 0.5;
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        for r in 0..10_000u64 {
            let s = sample_controlled_prm(&g, eps, &marks, 90_000 + r).unwrap();
            c1.push(s.events_in(0.0, 0.5).len() as f64);
            c2.push(s.events_in(0.5, 1.0).len() as f64);
        }
        let (m1, se1) = mean_and_se(&c1);
        let (m2, se2) = mean_and_se(&c2);
        assert!((m1 - 4.0).abs() <= 3.0 * se1, "cell 1 mean {m1}");
        assert!((m2 - 1.0).abs() <= 3.0 * se2, "cell 2 mean {m2}");
    }
}
