use serde::Serialize;

use crate::spectral::SpectralField;

/// One applied jump: time, mark, and the squared H^1 norm just before and
/// just after the kick.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct JumpEvent {
    pub time: f64,
    pub mark: usize,
    pub h1_sq_pre: f64,
    pub h1_sq_post: f64,
}

/// Energy-series row recorded at every snapshot time.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnergySample {
    pub t: f64,
    pub h1_sq: f64,
    pub h2_sq: f64,
    /// Running `int_0^t ||u||_{H^2}^2 ds` (per-substep trapezoid).
    pub cum_h2_sq: f64,
    /// Whether any jump landed since the previous snapshot.
    pub jumped: bool,
}

/// Cadlag record of one solve: snapshots at multiples of
/// `snapshot_stride * dt` (a snapshot at a jump time holds the post-jump
/// state), plus the jump log and the energy series.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Empty when field storage was disabled; the final field is always kept.
    pub snapshots: Vec<SpectralField>,
    pub events: Vec<JumpEvent>,
    pub energy: Vec<EnergySample>,
    pub final_field: SpectralField,
    /// True when the initial datum had content outside the retained space.
    pub initial_projected: bool,
}

impl Trajectory {
    pub fn sup_h1_sq(&self) -> f64 {
        self.energy.iter().map(|e| e.h1_sq).fold(0.0, f64::max)
    }

    pub fn integral_h2_sq(&self) -> f64 {
        self.energy.last().map(|e| e.cum_h2_sq).unwrap_or(0.0)
    }

    pub fn jump_count(&self) -> usize {
        self.events.len()
    }
}

/// Streaming hook driven by the integrator. Snapshot callbacks arrive in
/// time order with the running energy quantities already computed.
pub trait Observer {
    fn on_snapshot(&mut self, sample: EnergySample, state: &SpectralField);
    fn on_event(&mut self, event: JumpEvent) {
        let _ = event;
    }
}

/// Records a full [`Trajectory`]; field storage is optional so that large
/// ensembles can keep energy series only.
pub struct TrajectoryRecorder {
    store_fields: bool,
    times: Vec<f64>,
    snapshots: Vec<SpectralField>,
    events: Vec<JumpEvent>,
    energy: Vec<EnergySample>,
    last: Option<SpectralField>,
}

impl TrajectoryRecorder {
    pub fn new(store_fields: bool) -> Self {
        TrajectoryRecorder {
            store_fields,
            times: Vec::new(),
            snapshots: Vec::new(),
            events: Vec::new(),
            energy: Vec::new(),
            last: None,
        }
    }

    pub fn finish(self, initial_projected: bool) -> Trajectory {
        let final_field = self.last.expect("recorder saw no snapshots");
        Trajectory {
            times: self.times,
            snapshots: self.snapshots,
            events: self.events,
            energy: self.energy,
            final_field,
            initial_projected,
        }
    }
}

impl Observer for TrajectoryRecorder {
    fn on_snapshot(&mut self, sample: EnergySample, state: &SpectralField) {
        self.times.push(sample.t);
        self.energy.push(sample);
        if self.store_fields {
            self.snapshots.push(state.clone());
        }
        self.last = Some(state.clone());
    }

    fn on_event(&mut self, event: JumpEvent) {
        self.events.push(event);
    }
}

/// Tracks `sup_t ||u(t) - reference(t)||^2` in a chosen Sobolev norm over
/// the snapshot grid without storing any fields.
pub struct SupDiscrepancy<'a> {
    reference: &'a [SpectralField],
    order: crate::spectral::SobolevOrder,
    index: usize,
    pub sup_sq_diff: f64,
}

impl<'a> SupDiscrepancy<'a> {
    pub fn new(reference: &'a [SpectralField], order: crate::spectral::SobolevOrder) -> Self {
        SupDiscrepancy {
            reference,
            order,
            index: 0,
            sup_sq_diff: 0.0,
        }
    }
}

impl Observer for SupDiscrepancy<'_> {
    fn on_snapshot(&mut self, _sample: EnergySample, state: &SpectralField) {
        let r = &self.reference[self.index];
        self.index += 1;
        let d = state.sub(r).sobolev_norm_sq(self.order);
        if d > self.sup_sq_diff {
            self.sup_sq_diff = d;
        }
    }
}
