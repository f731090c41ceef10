use serde::Serialize;

/// Identifier of an executable inequality/identity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateId {
    /// `|<B(u,v), v>_{H^0}|` vanishes for dealiased divergence-free fields.
    ConvectionSkew,
    /// `<F(u), u>_{H^0} <= C_N ||u||_{H^0}^2`.
    DriftH0Bound,
    /// `<F(u), u>_{H^1} <= -1/2 ||u||_{H^2}^2 - 1/2 |||u||grad u|||^2
    ///  + C_N ||grad u||^2 + ||u||^2`.
    DriftH1Coercivity,
    /// Local monotonicity in H^0 with the `-1/2 ||u1-u2||_{H^1}^2` gain.
    MonotonicityH0,
    /// Local monotonicity in H^1 with the `-1/4 ||u1-u2||_{H^2}^2` gain.
    MonotonicityH1,
}

impl EstimateId {
    pub fn name(&self) -> &'static str {
        match self {
            EstimateId::ConvectionSkew => "convection-skew",
            EstimateId::DriftH0Bound => "drift-h0-bound",
            EstimateId::DriftH1Coercivity => "drift-h1-coercivity",
            EstimateId::MonotonicityH0 => "monotonicity-h0",
            EstimateId::MonotonicityH1 => "monotonicity-h1",
        }
    }

    pub const ALL: [EstimateId; 5] = [
        EstimateId::ConvectionSkew,
        EstimateId::DriftH0Bound,
        EstimateId::DriftH1Coercivity,
        EstimateId::MonotonicityH0,
        EstimateId::MonotonicityH1,
    ];
}

/// Outcome of a fit-then-assert estimate check. The constant is fitted on a
/// calibration batch (max observed ratio times the safety factor) and then
/// asserted on a fresh batch; `worst_residual <= 0` means no violation.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub id: EstimateId,
    pub calibration_samples: usize,
    pub assertion_samples: usize,
    pub fitted_constant: Option<f64>,
    pub worst_residual: f64,
    pub seed: u64,
    pub passed: bool,
}

/// Monte Carlo second-moment check of the compensated jump integral.
#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub replicas: usize,
    pub exact: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
    pub passed: bool,
}

/// Chi-square goodness-of-fit of per-cell event counts against the Poisson
/// law of the thinned sampler.
#[derive(Clone, Debug, Serialize)]
pub struct ThinningCell {
    pub interval: usize,
    pub mark: usize,
    pub expected_mean: f64,
    pub statistic: f64,
    pub critical_value: f64,
    pub dof: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinningReport {
    pub replicas: usize,
    pub significance: f64,
    pub cells: Vec<ThinningCell>,
    pub seed: u64,
    pub passed: bool,
}

/// Error ladder of a refinement or small-noise experiment.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub ladder: Vec<f64>,
    pub errors: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub estimated_order: Option<f64>,
    pub monotone: bool,
    pub passed: bool,
}

/// Energy bound and discrete energy-identity residual of one trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyAuditReport {
    pub sup_h1_sq: f64,
    pub integral_h2_sq: f64,
    /// Sum of |residual| over jump-free substeps.
    pub residual_sum: f64,
    pub max_step_residual: f64,
    pub jump_steps: usize,
    pub passed: bool,
}

/// Initial-perturbation amplification of the skeleton flow.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub deltas: Vec<f64>,
    /// `sup_t ||u - v||_{H^0} / delta` per perturbation size.
    pub amplification: Vec<f64>,
    /// Spread `max/min` of the amplification factors.
    pub spread: f64,
    /// `int_0^T (||u||_{H^1} ||u||_{H^2} + 1) dt` along the base path — the
    /// Gronwall weight governing the continuity constant.
    pub gronwall_weight: f64,
    pub passed: bool,
}
