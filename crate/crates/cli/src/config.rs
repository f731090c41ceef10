//! Run configuration: JSON schema, validation, and construction of the
//! core problem objects. Validation is total — nothing is written to disk
//! until the whole configuration has been resolved.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use tns_core::io::read_sfld;
use tns_core::noise::{Control, ControlFile, MarkSpace, NoiseCoefficient};
use tns_core::seed::rng_from_seed;
use tns_core::solver::{SolverConfig, Truncation};
use tns_core::spectral::{leray_project, FieldSampler, SpectralField, TamingSpec, TorusGrid};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemBlock,
    pub noise: NoiseBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<ControlBlock>,
    pub solver: SolverBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub grid_n: usize,
    pub taming_threshold: f64,
    pub initial: FieldSpec,
}

/// Initial-datum and additive-field presets. `snapshot` reads a `.sfld`
/// file as an escape hatch for arbitrary fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Zero,
    Shear { amplitude: f64 },
    Random { decay: f64, scale: f64, seed: u64 },
    Snapshot { path: PathBuf },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    pub smoothing_cutoff: u32,
    pub marks: Vec<MarkSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkSpec {
    pub weight: f64,
    pub scale: f64,
    pub additive: FieldSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum ControlBlock {
    #[serde(rename = "path")]
    Path(PathBuf),
    #[serde(rename = "inline")]
    Inline(ControlFile),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub snapshot_stride: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    #[serde(default)]
    pub eps_ladder: Vec<f64>,
    #[serde(default)]
    pub replicas: usize,
    #[serde(default)]
    pub dt_ladder: Vec<f64>,
    #[serde(default)]
    pub n_ladder: Vec<usize>,
}

/// Fully resolved problem: every object validated and built.
pub struct Problem {
    pub grid: Arc<TorusGrid>,
    pub u0: SpectralField,
    pub marks: MarkSpace,
    pub sigma: NoiseCoefficient,
    pub control: Option<Control>,
    pub solver: SolverConfig,
    pub eps: Option<f64>,
    /// Raw bytes of an external control file, for the manifest hash.
    pub control_bytes: Option<Vec<u8>>,
}

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Validation(format!("bad config {}: {e}", path.display())))
}

pub fn build_field(
    spec: &FieldSpec,
    grid: &Arc<TorusGrid>,
    base_dir: &Path,
) -> CliResult<SpectralField> {
    let field = match spec {
        FieldSpec::Zero => SpectralField::zeros(grid.clone()),
        FieldSpec::Shear { amplitude } => {
            if !amplitude.is_finite() {
                return Err(CliError::Validation("shear amplitude must be finite".into()));
            }
            SpectralField::shear(grid.clone(), *amplitude)?
        }
        FieldSpec::Random { decay, scale, seed } => {
            if !(*scale > 0.0) {
                return Err(CliError::Validation(format!(
                    "random field scale must be positive, got {scale}"
                )));
            }
            let sampler = FieldSampler::with_norm(grid.clone(), *decay, *scale);
            sampler.sample(&mut rng_from_seed(*seed))
        }
        FieldSpec::Snapshot { path } => {
            let resolved = base_dir.join(path);
            let (f, header) = read_sfld(&resolved)?;
            if header.n != grid.resolution() {
                return Err(CliError::Validation(format!(
                    "snapshot {} is {}^3 but the problem grid is {}^3",
                    resolved.display(),
                    header.n,
                    grid.resolution()
                )));
            }
            let projected = leray_project(&f);
            if projected.sub(&f).sobolev_norm_sq(tns_core::spectral::SobolevOrder::H0)
                > 1e-20
            {
                return Err(CliError::Validation(format!(
                    "snapshot {} is not divergence-free/mean-zero",
                    resolved.display()
                )));
            }
            f
        }
    };
    Ok(field)
}

impl RunConfig {
    /// Resolve and validate everything; paths are relative to `base_dir`.
    pub fn build(&self, base_dir: &Path) -> CliResult<Problem> {
        let grid = TorusGrid::new(self.problem.grid_n)?;
        let taming = TamingSpec::new(self.problem.taming_threshold)?;
        let u0 = build_field(&self.problem.initial, &grid, base_dir)?;

        if self.noise.marks.is_empty() {
            return Err(CliError::Validation("noise block needs at least one mark".into()));
        }
        let marks = MarkSpace::new(self.noise.marks.iter().map(|m| m.weight).collect())?;
        let scales: Vec<f64> = self.noise.marks.iter().map(|m| m.scale).collect();
        let additive = self
            .noise
            .marks
            .iter()
            .map(|m| build_field(&m.additive, &grid, base_dir))
            .collect::<CliResult<Vec<_>>>()?;
        let sigma = NoiseCoefficient::new(&marks, scales, additive, self.noise.smoothing_cutoff)?;

        let (control, control_bytes) = match &self.control {
            None => (None, None),
            Some(ControlBlock::Inline(file)) => (Some(Control::from_file_format(file)?), None),
            Some(ControlBlock::Path(p)) => {
                let resolved = base_dir.join(p);
                let bytes = std::fs::read(&resolved).map_err(|e| {
                    CliError::Validation(format!("cannot read {}: {e}", resolved.display()))
                })?;
                (Some(tns_core::io::read_control_file(&resolved)?), Some(bytes))
            }
        };
        if let Some(c) = &control {
            if c.num_marks() != marks.len() {
                return Err(CliError::Validation(format!(
                    "control has {} marks but the noise block has {}",
                    c.num_marks(),
                    marks.len()
                )));
            }
        }

        let truncation = self
            .solver
            .truncation
            .map(Truncation::new)
            .transpose()?;
        let solver = SolverConfig {
            dt: self.solver.dt,
            t_end: self.solver.t_end,
            taming,
            truncation,
            snapshot_stride: self.solver.snapshot_stride,
        };
        solver.steps()?;

        if let Some(eps) = self.solver.eps {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(CliError::Validation(format!(
                    "solver.eps must be positive, got {eps}"
                )));
            }
        }

        Ok(Problem {
            grid,
            u0,
            marks,
            sigma,
            control,
            solver,
            eps: self.solver.eps,
            control_bytes,
        })
    }

    /// The configuration as echoed into manifests: the output directory and
    /// any experiment block stay, but the echo is what reruns consume.
    pub fn echo_without_output(&self) -> RunConfig {
        let mut c = self.clone();
        c.output = None;
        c
    }
}
