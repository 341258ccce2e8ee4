//! The simulate → reconstruct → diagnose pipelines behind the CLI.

use std::path::{Path, PathBuf};

use exciton_qpt_core::reconstruct::assemble_design_matrix_unchecked;
use exciton_qpt_core::signal::ensemble_noisy_signals_with;
use exciton_qpt_core::{
    assemble_design_matrix, exciton_transform, reconstruct_chi, relative_error, true_process_matrix, ProcessMatrix,
    ReconstructionResult, SignalSet,
};
use rayon::prelude::*;

use crate::config::Resolved;
use crate::error::{AppError, Result};
use crate::formats::{self, ChiRecord, DiagnosticRow};
use crate::parallel::Rayon;

pub const SIGNALS_FILE: &str = "signals.csv";
pub const CHI_TRUE_JSON: &str = "chi_true.json";
pub const CHI_TRUE_CSV: &str = "chi_true.csv";
pub const CHI_HAT_JSON: &str = "chi_hat.json";
pub const CHI_HAT_CSV: &str = "chi_hat.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";

#[derive(Debug, Clone)]
pub struct Simulation {
    pub signals: Vec<SignalSet>,
    pub truth: Vec<ProcessMatrix>,
    pub normalization: f64,
}

pub fn simulate(run: &Resolved) -> Result<Simulation> {
    let noisy = ensemble_noisy_signals_with(&Rayon, &run.experiment, &run.dimer, &run.bath, &run.ensemble)
        .map_err(|e| AppError::from_core("simulate", e))?;
    let basis = exciton_transform(&run.dimer);
    let truth = run
        .experiment
        .waiting_times
        .iter()
        .map(|&t| true_process_matrix(&basis, &run.bath, t))
        .collect::<exciton_qpt_core::Result<Vec<_>>>()
        .map_err(|e| AppError::from_core("simulate", e))?;
    Ok(Simulation { signals: noisy.signals, truth, normalization: noisy.normalization })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))
}

/// Writes signals.csv, its sidecar, and the nominal χ(T) as JSON and CSV.
pub fn write_simulation(dir: &Path, sim: &Simulation) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let signals = dir.join(SIGNALS_FILE);
    formats::write_signals(&signals, &sim.signals)?;
    let records: Vec<ChiRecord> = sim.truth.iter().map(ChiRecord::from_chi).collect();
    let (json, csv) = (dir.join(CHI_TRUE_JSON), dir.join(CHI_TRUE_CSV));
    formats::write_chi_json(&json, &records)?;
    formats::write_chi_csv(&csv, &records)?;
    Ok(vec![formats::sidecar_path(&signals), signals, json, csv])
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub results: Vec<ReconstructionResult>,
    pub condition_number: f64,
    pub initial_state_condition_number: f64,
}

impl Reconstruction {
    pub fn records(&self) -> Vec<ChiRecord> {
        self.results
            .iter()
            .map(|r| ChiRecord {
                residual: Some(r.residual),
                min_eigenvalue: r.min_eigenvalue,
                condition_number: Some(r.condition_number),
                ..ChiRecord::from_chi(&r.chi_hat)
            })
            .collect()
    }
}

/// Reconstructs χ̂(T) at every waiting time in `signals`, using the design of
/// the nominal dimer and the normalization recorded with the signals.
pub fn reconstruct(run: &Resolved, signals: &[SignalSet]) -> Result<Reconstruction> {
    let Some(first) = signals.first() else {
        return Err(AppError::Config("no signals to reconstruct".into()));
    };
    let basis = exciton_transform(&run.dimer);
    let design = assemble_design_matrix(&basis, &run.experiment, &run.bath, first.meta.normalization)
        .map_err(|e| AppError::from_core("reconstruct", e))?;
    let minimum = run.experiment.minimum_waiting_time();
    if let Some(early) = signals.iter().find(|s| s.waiting_time < minimum - 1e-9) {
        return Err(AppError::Config(format!(
            "signals: T = {} fs is shorter than the preparation time {minimum} fs",
            early.waiting_time
        )));
    }
    let results = signals
        .par_iter()
        .map(|s| reconstruct_chi(s, &design, &run.solver))
        .collect::<exciton_qpt_core::Result<Vec<_>>>()
        .map_err(|e| AppError::from_core("reconstruct", e))?;
    Ok(Reconstruction {
        results,
        condition_number: design.condition_number(),
        initial_state_condition_number: design.initial_state_condition_number(),
    })
}

pub fn write_reconstruction(dir: &Path, rec: &Reconstruction) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let records = rec.records();
    let (json, csv) = (dir.join(CHI_HAT_JSON), dir.join(CHI_HAT_CSV));
    formats::write_chi_json(&json, &records)?;
    formats::write_chi_csv(&csv, &records)?;
    Ok(vec![json, csv])
}

/// Mean relative error of χ̂ against the truth, matched by waiting time.
pub fn average_relative_error(results: &[ReconstructionResult], truth: &[ProcessMatrix]) -> Result<f64> {
    let mut total = 0.0;
    for r in results {
        let t = r.chi_hat.waiting_time();
        let reference = truth
            .iter()
            .find(|c| (c.waiting_time() - t).abs() < 1e-9)
            .ok_or_else(|| AppError::Config(format!("truth: no entry for T = {t} fs")))?;
        total += relative_error(&r.chi_hat, reference).map_err(|e| AppError::Numerical(e.to_string()))?;
    }
    Ok(total / results.len() as f64)
}

/// Condition numbers over the sweep grid. The normalization used is the one
/// of the nominal dimer, so rows are comparable across the grid.
pub fn diagnose(run: &Resolved) -> Result<Vec<DiagnosticRow>> {
    let nominal = exciton_transform(&run.dimer);
    let geometry = run.geometry;
    let axis = |values: &[f64], nominal: f64| if values.is_empty() { vec![nominal] } else { values.to_vec() };
    let thetas = axis(&run.sweep.theta, nominal.theta);
    let ratios = axis(&run.sweep.dipole_ratio, run.dimer.dipole_ratio());
    let angles = axis(&run.sweep.angle, geometry.map_or(run.dimer.mu_a.angle(&run.dimer.mu_b), |g| g.angle));

    let mut grid = Vec::with_capacity(thetas.len() * ratios.len() * angles.len());
    for &theta in &thetas {
        for &ratio in &ratios {
            for &angle in &angles {
                grid.push((theta, ratio, angle));
            }
        }
    }
    let normalization = match run.experiment.normalization {
        Some(n) => n,
        None => exciton_qpt_core::signal::reference_normalization(&run.experiment, &nominal, &run.bath)
            .map_err(|e| AppError::from_core("diagnose", e))?,
    };
    let rows = grid
        .par_iter()
        .map(|&(theta, ratio, angle)| {
            let mut dimer = run.dimer;
            if let Some(g) = geometry {
                let (mu_a, mu_b) = exciton_qpt_core::DipoleGeometry { ratio, angle, ..g }.vectors();
                dimer.mu_a = mu_a;
                dimer.mu_b = mu_b;
            }
            let basis = exciton_transform(&dimer.with_mixing_angle(theta));
            let design = assemble_design_matrix_unchecked(&basis, &run.experiment, &run.bath, normalization);
            let kappa = design.condition_number();
            DiagnosticRow {
                theta,
                dipole_ratio: ratio,
                angle,
                condition_number: kappa,
                initial_state_condition_number: design.initial_state_condition_number(),
                rank: design.rank(),
                flagged: !(kappa <= run.sweep.threshold),
            }
        })
        .collect();
    Ok(rows)
}

pub fn write_diagnostics(dir: &Path, rows: &[DiagnosticRow]) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(DIAGNOSTICS_FILE);
    formats::write_diagnostics(&path, rows)?;
    Ok(path)
}
