//! On-disk formats: signal CSV with a JSON sidecar, χ(T) trajectories as JSON
//! and CSV, and the conditioning diagnostics table.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use exciton_qpt_core::signal::Provenance;
use exciton_qpt_core::{Pair, ProcessMatrix, SignalSet, Word, C64};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

pub const SIGNALS_META_SCHEMA: &str = "exciton-qpt/signals-meta/v1";
pub const SIGNALS_HEADER: [&str; 4] = ["T_fs", "word", "re", "im"];
pub const CHI_HEADER: [&str; 5] = ["T_fs", "row", "col", "re", "im"];
pub const DIAGNOSTICS_HEADER: [&str; 7] =
    ["theta", "dipole_ratio", "angle", "condition_number", "initial_state_condition_number", "rank", "flagged"];

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| AppError::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(BufWriter::new(file)))
}

fn csv_error(path: &Path, err: csv::Error) -> AppError {
    match err.into_kind() {
        csv::ErrorKind::Io(e) => AppError::io(path, e),
        other => AppError::Config(format!("{}: {:?}", path.display(), other)),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| AppError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| AppError::io(path, e.into()))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| AppError::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let location = err.path().to_string();
        let inner = err.into_inner();
        if inner.is_syntax() || inner.is_eof() || location == "." {
            AppError::Config(format!("{}: {inner}", path.display()))
        } else {
            AppError::Config(format!("{}: {location}: {inner}", path.display()))
        }
    })
}

/// `signals.csv` → `signals.meta.json`.
pub fn sidecar_path(signals: &Path) -> PathBuf {
    signals.with_extension("meta.json")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalsMeta {
    pub schema: String,
    pub seed: u64,
    pub n: usize,
    pub sigma_inh: f64,
    pub sigma_laser: f64,
    pub normalization: f64,
}

impl From<Provenance> for SignalsMeta {
    fn from(p: Provenance) -> Self {
        SignalsMeta {
            schema: SIGNALS_META_SCHEMA.to_string(),
            seed: p.seed,
            n: p.n,
            sigma_inh: p.sigma_inh,
            sigma_laser: p.sigma_laser,
            normalization: p.normalization,
        }
    }
}

impl SignalsMeta {
    pub fn provenance(&self) -> Provenance {
        Provenance {
            seed: self.seed,
            n: self.n,
            sigma_inh: self.sigma_inh,
            sigma_laser: self.sigma_laser,
            normalization: self.normalization,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SignalRow {
    #[serde(rename = "T_fs")]
    t_fs: f64,
    word: String,
    re: f64,
    im: f64,
}

/// Writes the signal table and its metadata sidecar. All sets must share
/// the same provenance.
pub fn write_signals(path: &Path, signals: &[SignalSet]) -> Result<()> {
    let Some(first) = signals.first() else {
        return Err(AppError::Numerical("no signals to write".into()));
    };
    let mut w = csv_writer(path)?;
    for set in signals {
        for word in Word::all() {
            let v = set.get(word);
            w.serialize(SignalRow { t_fs: set.waiting_time, word: word.label(), re: v.re, im: v.im })
                .map_err(|e| csv_error(path, e))?;
        }
    }
    w.flush().map_err(|e| AppError::io(path, e))?;
    write_json(&sidecar_path(path), &SignalsMeta::from(first.meta))
}

pub fn read_signals_meta(path: &Path) -> Result<SignalsMeta> {
    let meta: SignalsMeta = read_json(path)?;
    if meta.schema != SIGNALS_META_SCHEMA {
        return Err(AppError::Config(format!(
            "{}: schema: expected \"{SIGNALS_META_SCHEMA}\", found \"{}\"",
            path.display(),
            meta.schema
        )));
    }
    if !(meta.normalization > 0.0 && meta.normalization.is_finite()) {
        return Err(AppError::Config(format!("{}: normalization must be positive", path.display())));
    }
    Ok(meta)
}

/// Reads a signal table written by [`write_signals`]. Every waiting time must
/// carry each of the sixteen words exactly once; row order within a waiting
/// time is free.
pub fn read_signals(path: &Path) -> Result<Vec<SignalSet>> {
    let meta = read_signals_meta(&sidecar_path(path))?.provenance();
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(std::io::BufReader::new(file));
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != SIGNALS_HEADER {
        return Err(AppError::Config(format!(
            "{}: expected header {}, found {}",
            path.display(),
            SIGNALS_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut sets: Vec<(SignalSet, [bool; 16])> = Vec::new();
    for (i, record) in reader.deserialize::<SignalRow>().enumerate() {
        let line = i + 2;
        let row = record.map_err(|e| AppError::Config(format!("{}: line {line}: {e}", path.display())))?;
        let word = Word::parse(&row.word).ok_or_else(|| {
            AppError::Config(format!("{}: line {line}: unknown word \"{}\"", path.display(), row.word))
        })?;
        if !(row.t_fs.is_finite() && row.re.is_finite() && row.im.is_finite()) {
            return Err(AppError::Config(format!("{}: line {line}: non-finite value", path.display())));
        }
        let slot = match sets.iter().position(|(s, _)| s.waiting_time == row.t_fs) {
            Some(k) => k,
            None => {
                sets.push((SignalSet { waiting_time: row.t_fs, values: [C64::new(0.0, 0.0); 16], meta }, [false; 16]));
                sets.len() - 1
            }
        };
        let (set, seen) = &mut sets[slot];
        if seen[word.index()] {
            return Err(AppError::Config(format!(
                "{}: line {line}: duplicate word {} at T = {}",
                path.display(),
                row.word,
                row.t_fs
            )));
        }
        seen[word.index()] = true;
        set.values[word.index()] = C64::new(row.re, row.im);
    }
    if sets.is_empty() {
        return Err(AppError::Config(format!("{}: no signal rows", path.display())));
    }
    for (set, seen) in &sets {
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(AppError::Config(format!(
                "{}: T = {} is missing word {}",
                path.display(),
                set.waiting_time,
                Word::from_index(missing).label()
            )));
        }
    }
    Ok(sets.into_iter().map(|(s, _)| s).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiEntry {
    pub row: String,
    pub col: String,
    pub re: f64,
    pub im: f64,
}

/// One waiting time of a χ(T) trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiRecord {
    #[serde(rename = "T_fs")]
    pub t_fs: f64,
    pub entries: Vec<ChiEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub min_eigenvalue: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
}

impl ChiRecord {
    pub fn from_chi(chi: &ProcessMatrix) -> Self {
        let entries = chi
            .tracked_entries()
            .into_iter()
            .map(|(row, col, v)| ChiEntry { row: row.label().into(), col: col.label().into(), re: v.re, im: v.im })
            .collect();
        ChiRecord {
            t_fs: chi.waiting_time(),
            entries,
            residual: None,
            min_eigenvalue: chi.min_choi_eigenvalue(),
            condition_number: None,
        }
    }

    /// Rebuilds χ from the listed entries. The gg column is fixed and any
    /// value given for it is ignored; omitted entries are zero.
    pub fn to_chi(&self) -> Result<ProcessMatrix> {
        let mut chi = ProcessMatrix::zero(self.t_fs);
        for e in &self.entries {
            let parse = |label: &str| {
                Pair::from_label(label)
                    .filter(|p| p.row_index().is_some())
                    .ok_or_else(|| AppError::Config(format!("chi entry: unknown level pair \"{label}\"")))
            };
            let (row, col) = (parse(&e.row)?, parse(&e.col)?);
            if col.column_index().is_some() {
                chi.set(row, col, C64::new(e.re, e.im));
            }
        }
        Ok(chi)
    }
}

pub fn write_chi_json(path: &Path, records: &[ChiRecord]) -> Result<()> {
    write_json(path, &records)
}

pub fn read_chi_json(path: &Path) -> Result<Vec<ChiRecord>> {
    read_json(path)
}

pub fn write_chi_csv(path: &Path, records: &[ChiRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(CHI_HEADER).map_err(|e| csv_error(path, e))?;
    for r in records {
        for e in &r.entries {
            w.write_record([r.t_fs.to_string(), e.row.clone(), e.col.clone(), e.re.to_string(), e.im.to_string()])
                .map_err(|e| csv_error(path, e))?;
        }
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub theta: f64,
    pub dipole_ratio: f64,
    pub angle: f64,
    pub condition_number: f64,
    pub initial_state_condition_number: f64,
    pub rank: usize,
    pub flagged: bool,
}

pub fn write_diagnostics(path: &Path, rows: &[DiagnosticRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    if rows.is_empty() {
        w.write_record(DIAGNOSTICS_HEADER).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

/// What [`sniff`] recognised a file as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Config,
    Signals,
    SignalsMeta,
    ChiTrajectory,
}

impl FileKind {
    pub fn name(self) -> &'static str {
        match self {
            FileKind::Config => "run config",
            FileKind::Signals => "signal table",
            FileKind::SignalsMeta => "signal metadata",
            FileKind::ChiTrajectory => "chi trajectory",
        }
    }
}

/// Guesses the kind of a file from its extension and contents, then parses
/// it fully.
pub fn validate_file(path: &Path) -> Result<FileKind> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    if name.ends_with(".meta.json") {
        read_signals_meta(path)?;
        return Ok(FileKind::SignalsMeta);
    }
    if name.ends_with(".csv") {
        read_signals(path)?;
        return Ok(FileKind::Signals);
    }
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
    if value.is_array() {
        for record in read_chi_json(path)? {
            record.to_chi().map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
        }
        return Ok(FileKind::ChiTrajectory);
    }
    crate::config::RunConfig::from_json(&text)
        .map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?
        .resolve()
        .map_err(|e| match e {
            AppError::Config(msg) => AppError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
    Ok(FileKind::Config)
}
