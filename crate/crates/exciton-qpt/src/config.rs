//! JSON run configuration.

use std::path::{Path, PathBuf};

use exciton_qpt_core::signal::Averaging;
use exciton_qpt_core::{
    BathParams, DimerParams, DipoleGeometry, EnsembleSpec, ExperimentConfig, PulseToolbox, SolverOptions, Vec3,
};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

pub const CONFIG_SCHEMA: &str = "exciton-qpt/config/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    #[serde(default)]
    pub dimer: DimerSection,
    #[serde(default)]
    pub bath: BathSection,
    #[serde(default)]
    pub toolbox: ToolboxSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: CONFIG_SCHEMA.to_string(),
            dimer: DimerSection::default(),
            bath: BathSection::default(),
            toolbox: ToolboxSection::default(),
            experiment: ExperimentSection::default(),
            ensemble: EnsembleSection::default(),
            solver: SolverSection::default(),
            sweep: None,
            output_dir: default_output_dir(),
        }
    }
}

/// Site energies and coupling in cm⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DimerSection {
    pub omega_a: f64,
    pub omega_b: f64,
    pub coupling: f64,
    pub dipoles: Dipoles,
}

impl Default for DimerSection {
    fn default() -> Self {
        DimerSection { omega_a: 12881.0, omega_b: 12719.0, coupling: 120.0, dipoles: Dipoles::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Dipoles {
    /// |μ_A|, d_B/d_A and the angle between the dipoles (rad).
    Geometry { d_a: f64, ratio: f64, angle: f64 },
    Vectors { mu_a: [f64; 3], mu_b: [f64; 3] },
}

impl Default for Dipoles {
    fn default() -> Self {
        let g = DipoleGeometry::default();
        Dipoles::Geometry { d_a: g.d_a, ratio: g.ratio, angle: g.angle }
    }
}

/// Rates in fs⁻¹, temperature in K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathSection {
    pub k_down: f64,
    pub temperature: f64,
    pub gamma_pd: f64,
    pub k_leak: f64,
    pub gamma_opt: f64,
}

impl Default for BathSection {
    fn default() -> Self {
        let b = BathParams::default();
        BathSection {
            k_down: b.k_down,
            temperature: b.temperature,
            gamma_pd: b.gamma_pd,
            k_leak: b.k_leak,
            gamma_opt: b.gamma_opt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToolboxSection {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub sigma: f64,
    /// (C′, C″) in units of λσ√(2π); null evaluates the Gaussian spectra.
    pub mdc_override: Option<[f64; 2]>,
}

impl Default for ToolboxSection {
    fn default() -> Self {
        let t = PulseToolbox::reference();
        ToolboxSection {
            omega_plus: t.omega_plus,
            omega_minus: t.omega_minus,
            sigma: t.sigma,
            mdc_override: t.mdc_override.map(|(a, b)| [a, b]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WaitingTimes {
    /// start defaults to 3σ; stop is inclusive.
    Range {
        #[serde(default)]
        start: Option<f64>,
        stop: f64,
        step: f64,
    },
    List(Vec<f64>),
}

impl Default for WaitingTimes {
    fn default() -> Self {
        WaitingTimes::Range { start: None, stop: 1000.0, step: 10.0 }
    }
}

impl WaitingTimes {
    fn resolve(&self, sigma: f64) -> Result<Vec<f64>> {
        match self {
            WaitingTimes::List(values) => {
                if values.is_empty() {
                    return Err(AppError::Config("experiment.waiting_times: list is empty".into()));
                }
                Ok(values.clone())
            }
            WaitingTimes::Range { start, stop, step } => {
                let start = start.unwrap_or(3.0 * sigma);
                if !(*step > 0.0 && step.is_finite()) {
                    return Err(AppError::Config(format!("experiment.waiting_times.range.step: must be positive, got {step}")));
                }
                if !(*stop >= start) {
                    return Err(AppError::Config(format!(
                        "experiment.waiting_times.range: stop ({stop}) is before start ({start})"
                    )));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|k| start + step * k as f64).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AveragingMode {
    #[default]
    Isotropic,
    Oriented,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub tau: f64,
    pub t_echo: f64,
    pub waiting_times: WaitingTimes,
    pub polarizations: [[f64; 3]; 4],
    pub averaging: AveragingMode,
    pub apply_overlap_factor: bool,
    /// Fixed divisor for all signals; null uses the largest ideal signal at 3σ.
    pub normalization: Option<f64>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            tau: 0.0,
            t_echo: 0.0,
            waiting_times: WaitingTimes::default(),
            polarizations: [[0.0, 0.0, 1.0]; 4],
            averaging: AveragingMode::Isotropic,
            apply_overlap_factor: true,
            normalization: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    pub n: usize,
    pub sigma_inh: f64,
    pub sigma_laser: f64,
    pub seed: u64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        EnsembleSection { n: 10_000, sigma_inh: 40.0, sigma_laser: 0.05, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        let s = SolverOptions::default();
        SolverSection { tol: s.tol, max_iterations: s.max_iterations }
    }
}

/// Grid for the conditioning diagnostics. Empty axes keep the nominal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub theta: Vec<f64>,
    pub dipole_ratio: Vec<f64>,
    pub angle: Vec<f64>,
    /// Condition numbers above this are flagged.
    pub threshold: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { theta: Vec::new(), dipole_ratio: Vec::new(), angle: Vec::new(), threshold: 100.0 }
    }
}

/// A configuration turned into core types and validated.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub dimer: DimerParams,
    /// Present when the dipoles were given as a geometry (needed for sweeps).
    pub geometry: Option<DipoleGeometry>,
    pub bath: BathParams,
    pub experiment: ExperimentConfig,
    pub ensemble: EnsembleSpec,
    pub solver: SolverOptions,
    pub sweep: SweepSection,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            let inner = err.into_inner();
            if inner.is_syntax() || inner.is_eof() || path == "." {
                AppError::Config(format!("config: {inner}"))
            } else {
                AppError::Config(format!("config: {path}: {inner}"))
            }
        })?;
        if config.schema != CONFIG_SCHEMA {
            return Err(AppError::Config(format!(
                "config: schema: expected \"{CONFIG_SCHEMA}\", found \"{}\"",
                config.schema
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            AppError::Config(msg) => AppError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let d = &self.dimer;
        let (mu_a, mu_b, geometry) = match d.dipoles {
            Dipoles::Geometry { d_a, ratio, angle } => {
                let g = DipoleGeometry { d_a, ratio, angle };
                let (a, b) = g.vectors();
                (a, b, Some(g))
            }
            Dipoles::Vectors { mu_a, mu_b } => (Vec3::from(mu_a), Vec3::from(mu_b), None),
        };
        let dimer = DimerParams::new(d.omega_a, d.omega_b, d.coupling, mu_a, mu_b)
            .map_err(|e| AppError::from_core("dimer", e))?;

        let b = &self.bath;
        let bath = BathParams {
            k_down: b.k_down,
            temperature: b.temperature,
            gamma_pd: b.gamma_pd,
            k_leak: b.k_leak,
            gamma_opt: b.gamma_opt,
        };
        bath.validate().map_err(|e| AppError::from_core("bath", e))?;

        let t = &self.toolbox;
        let toolbox = PulseToolbox::new(t.omega_plus, t.omega_minus, t.sigma, t.mdc_override.map(|[a, b]| (a, b)))
            .map_err(|e| AppError::from_core("toolbox", e))?;

        let e = &self.experiment;
        let experiment = ExperimentConfig {
            toolbox,
            tau: e.tau,
            t_echo: e.t_echo,
            waiting_times: e.waiting_times.resolve(toolbox.sigma)?,
            polarizations: e.polarizations.map(Vec3::from),
            averaging: match e.averaging {
                AveragingMode::Isotropic => Averaging::Isotropic,
                AveragingMode::Oriented => Averaging::Oriented,
            },
            apply_overlap_factor: e.apply_overlap_factor,
            normalization: e.normalization,
        };
        experiment.validate().map_err(|err| AppError::from_core("experiment", err))?;

        let n = &self.ensemble;
        let ensemble = EnsembleSpec { n: n.n, sigma_inh: n.sigma_inh, sigma_laser: n.sigma_laser, seed: n.seed };
        ensemble.validate().map_err(|err| AppError::from_core("ensemble", err))?;

        let s = &self.solver;
        if !(s.tol > 0.0) || s.max_iterations == 0 {
            return Err(AppError::Config(format!(
                "solver: tol must be positive and max_iterations nonzero (got {}, {})",
                s.tol, s.max_iterations
            )));
        }
        let solver = SolverOptions { tol: s.tol, max_iterations: s.max_iterations, ..SolverOptions::default() };

        let sweep = self.sweep.clone().unwrap_or_default();
        if (!sweep.dipole_ratio.is_empty() || !sweep.angle.is_empty()) && geometry.is_none() {
            return Err(AppError::Config(
                "sweep: dipole_ratio and angle sweeps need dimer.dipoles given as a geometry".into(),
            ));
        }
        if sweep.dipole_ratio.iter().any(|r| !(*r > 0.0)) {
            return Err(AppError::Config("sweep.dipole_ratio: ratios must be positive".into()));
        }

        Ok(Resolved {
            dimer,
            geometry,
            bath,
            experiment,
            ensemble,
            solver,
            sweep,
            output_dir: self.output_dir.clone(),
        })
    }
}
