//! Configuration, experiment orchestration and artefact emission.
//!
//! [`run`] executes one [`ExperimentConfig`] and writes its CSV/JSON files.
//! Output depends only on the configuration, so repeated runs are
//! byte-identical.

pub mod config;
pub mod output;
pub mod presets;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dynamics::{sweep, SweepResult};
use crate::extraction::{
    analyse_sweep, assign_kappas, detect_peaks, extract_from_peaks, ExtractionReport, RoundTripOptions,
};
use crate::spectrum::scan_spectrum;
use crate::units::{excitation_timescale, interaction_strength, resolvability_report, AngularFrequency, SCALING_NOTE};

pub use config::{ExperimentConfig, Mode};
use output::{
    read_sweep_csv, write_json, write_spectrum_csv, write_sweep_csv, ExtractionDocument, FeasibilityDocument,
    FeasibilityRow, Metadata, SweepDocument, FREQUENCY_CONVENTION,
};

/// Version of the CSV column layout and JSON key set.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    /// 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

/// Files written by one run, plus the extraction report when there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub report: Option<ExtractionReport>,
}

/// `sha256:<hex>` of the configuration with its `[output]` section reset.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let mut canonical = config.clone();
    canonical.output = Default::default();
    let digest = Sha256::digest(canonical.to_toml().as_bytes());
    format!("sha256:{}", hex::encode(digest))
}

struct Emitter {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Emitter {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>, RunError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(path);
        Ok(BufWriter::new(file))
    }
}

/// Runs one experiment, writing into `out_dir` or the configured directory.
pub fn run(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunSummary, RunError> {
    config.validate()?;
    let dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output.dir.clone());
    fs::create_dir_all(&dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
    let mut emit = Emitter { dir, files: Vec::new() };
    let hash = config_hash(config);
    let report = match config.mode {
        Mode::Spectrum => {
            run_spectrum(config, &hash, &mut emit)?;
            None
        }
        Mode::Sweep => {
            run_sweep(config, &hash, &mut emit)?;
            None
        }
        Mode::Extract => Some(run_extract(config, &hash, &mut emit)?),
        Mode::Roundtrip => Some(run_roundtrip(config, &hash, &mut emit)?),
        Mode::Feasibility => {
            run_feasibility(config, &hash, &mut emit)?;
            None
        }
    };
    Ok(RunSummary {
        files: emit.files,
        report,
    })
}

/// `V / 2pi` in Hz per unit of the model interaction, when physical units are configured.
fn physical_v_hz(config: &ExperimentConfig) -> Result<Option<f64>, RunError> {
    Ok(config
        .physical_config()?
        .map(|p| interaction_strength(&p).to_frequency().hz()))
}

fn numerical(stage: &str) -> impl Fn(crate::error::NumericalError) -> RunError + '_ {
    move |e| RunError::Numerical(format!("{stage}: {e}"))
}

fn run_spectrum(config: &ExperimentConfig, hash: &str, emit: &mut Emitter) -> Result<(), RunError> {
    let params = config.lattice_params()?;
    let scan = scan_spectrum(&params, &config.ratio_grid()?).map_err(numerical("spectrum"))?;
    let v_hz = physical_v_hz(config)?;
    let mut meta = Metadata::new("spectrum", hash)
        .with("n_sites", params.n_sites)
        .with("rabi_over_v", params.rabi / params.interaction)
        .with("eigenvalue_units", "V")
        .with("g_state_line", "unperturbed energy of |gg...g> in units of V");
    if v_hz.is_some() {
        meta = meta.with("frequency_convention", FREQUENCY_CONVENTION);
    }
    if config.output.csv {
        write_spectrum_csv(emit.create("spectrum.csv")?, &scan, &meta, v_hz)?;
    }
    if config.output.json {
        #[derive(serde::Serialize)]
        struct Doc<'a> {
            schema_version: u32,
            kind: &'static str,
            config_hash: &'a str,
            #[serde(flatten)]
            scan: &'a crate::spectrum::SpectrumScan,
        }
        write_json(
            emit.create("spectrum.json")?,
            &Doc {
                schema_version: SCHEMA_VERSION,
                kind: "spectrum",
                config_hash: hash,
                scan: &scan,
            },
        )?;
    }
    Ok(())
}

/// Sweeps the reported durations and the averaging set with one
/// diagonalisation per detuning.
fn simulate(config: &ExperimentConfig) -> Result<(SweepResult, SweepResult), RunError> {
    let params = config.lattice_params()?;
    let grid = config.detuning_grid()?;
    let reported_times = config.reported_times()?;
    let averaging_times = config.averaging_times()?;
    if averaging_times == reported_times {
        let result = sweep(&params, &grid, &reported_times).map_err(numerical("sweep"))?;
        return Ok((result.clone(), result));
    }
    let all: Vec<f64> = reported_times.iter().chain(&averaging_times).copied().collect();
    let result = sweep(&params, &grid, &all).map_err(numerical("sweep"))?;
    let split = reported_times.len();
    let reported = result.select_times(&(0..split).collect::<Vec<_>>());
    let averaged = result.select_times(&(split..all.len()).collect::<Vec<_>>());
    Ok((reported, averaged))
}

fn sweep_metadata(
    config: &ExperimentConfig,
    hash: &str,
    averaged: &SweepResult,
    v_hz: Option<f64>,
) -> Result<Metadata, RunError> {
    let params = config.lattice_params()?;
    let times = &averaged.cycle_times;
    let mut meta = Metadata::new("sweep", hash)
        .with("n_sites", params.n_sites)
        .with("rabi_over_v", params.rabi / params.interaction)
        .with("time_units", "1/Omega")
        .with(
            "averaging",
            format!(
                "*_avg columns are means over {} durations from {} to {}",
                times.len(),
                times.iter().copied().fold(f64::INFINITY, f64::min),
                times.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            ),
        );
    if v_hz.is_some() {
        meta = meta.with("frequency_convention", FREQUENCY_CONVENTION);
    }
    Ok(meta)
}

fn write_sweep(
    config: &ExperimentConfig,
    hash: &str,
    emit: &mut Emitter,
    reported: &SweepResult,
    averaged: &SweepResult,
) -> Result<(), RunError> {
    let v_hz = physical_v_hz(config)?;
    if config.output.csv {
        let meta = sweep_metadata(config, hash, averaged, v_hz)?;
        write_sweep_csv(emit.create("sweep.csv")?, reported, averaged, &meta, v_hz)?;
    }
    Ok(())
}

fn run_sweep(config: &ExperimentConfig, hash: &str, emit: &mut Emitter) -> Result<(), RunError> {
    let (reported, averaged) = simulate(config)?;
    write_sweep(config, hash, emit, &reported, &averaged)?;
    if config.output.json {
        write_json(
            emit.create("sweep.json")?,
            &SweepDocument::new(&reported, &averaged, hash),
        )?;
    }
    Ok(())
}

/// Physical detuning per unit of grid position and the label for the result.
fn detuning_unit(config: &ExperimentConfig) -> Result<(f64, &'static str), RunError> {
    let interaction = config.lattice.as_ref().map(|l| l.interaction).unwrap_or(1.0);
    Ok(match physical_v_hz(config)? {
        Some(v_hz) => (v_hz, "C6/2pi in Hz um^6"),
        None => (interaction, "reduced: V a^6 with V, a in model units"),
    })
}

fn run_extract(config: &ExperimentConfig, hash: &str, emit: &mut Emitter) -> Result<ExtractionReport, RunError> {
    let observable = config.extraction.observable;
    let (grid, signal) = match &config.extraction.input {
        Some(path) => {
            let file = File::open(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
            let cols = read_sweep_csv(BufReader::new(file))?;
            let signal = cols.observable(observable).to_vec();
            (cols.delta_over_v, signal)
        }
        None => {
            let (reported, averaged) = simulate(config)?;
            write_sweep(config, hash, emit, &reported, &averaged)?;
            let signal = observable.averaged(&averaged).to_vec();
            (averaged.detuning_grid, signal)
        }
    };
    let mut set = detect_peaks(&grid, &signal, observable, &config.peaks)
        .map_err(|e| RunError::Numerical(format!("peak detection: {e}")))?;
    assign_kappas(&mut set, 1.0);
    let (unit, c6_units) = detuning_unit(config)?;
    let spacing = config.lattice_spacing();
    let report = extract_from_peaks(&set, unit, spacing).map_err(|e| RunError::Numerical(e.to_string()))?;
    if config.output.json {
        let doc = ExtractionDocument {
            schema_version: SCHEMA_VERSION,
            kind: "extract",
            config_hash: hash,
            c6_units,
            lattice_spacing: spacing,
            report: &report,
        };
        write_json(emit.create("extraction.json")?, &doc)?;
    }
    Ok(report)
}

fn run_roundtrip(config: &ExperimentConfig, hash: &str, emit: &mut Emitter) -> Result<ExtractionReport, RunError> {
    let params = config.lattice_params()?;
    let (unit, c6_units) = detuning_unit(config)?;
    let options = RoundTripOptions {
        detuning_grid: config.detuning_grid()?,
        cycle_times: config.averaging_times()?,
        peaks: config.peaks,
        observable: config.extraction.observable,
        lattice_spacing: config.lattice_spacing(),
        detuning_unit: unit / params.interaction,
    };
    let (reported, averaged) = simulate(config)?;
    let report = analyse_sweep(&params, &averaged, &options).map_err(|e| RunError::Numerical(e.to_string()))?;
    write_sweep(config, hash, emit, &reported, &averaged)?;
    if config.output.json {
        let doc = ExtractionDocument {
            schema_version: SCHEMA_VERSION,
            kind: "roundtrip",
            config_hash: hash,
            c6_units,
            lattice_spacing: options.lattice_spacing,
            report: &report,
        };
        write_json(emit.create("roundtrip.json")?, &doc)?;
    }
    Ok(report)
}

fn run_feasibility(config: &ExperimentConfig, hash: &str, emit: &mut Emitter) -> Result<(), RunError> {
    let physical = config
        .physical_config()?
        .ok_or_else(|| RunError::Config("mode `feasibility` requires a [physical] section".into()))?;
    let f = &config.feasibility;
    let report = resolvability_report(&physical, f.kappa_min..=f.kappa_max, f.threshold)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let rabi = if physical.single_atom_rabi.rad_per_s() > 0.0 {
        physical.collective_rabi()
    } else {
        report.interaction * f.rabi_over_v
    };
    let timescale = excitation_timescale(rabi, f.t_max).map_err(|e| RunError::Config(e.to_string()))?;
    let hz = |w: AngularFrequency| w.to_frequency().hz();
    let doc = FeasibilityDocument {
        schema_version: SCHEMA_VERSION,
        kind: "feasibility",
        config_hash: hash,
        frequency_convention: FREQUENCY_CONVENTION,
        principal_n: physical.principal_n,
        quantum_defect: physical.quantum_defect,
        lattice_spacing_um: physical.lattice_spacing.um(),
        c6_over_2pi_hz_um6: physical.c6.over_two_pi(),
        interaction_hz: hz(report.interaction),
        linewidth_hz: hz(report.linewidth),
        threshold: report.threshold,
        rows: report
            .rows
            .iter()
            .map(|r| FeasibilityRow {
                kappa: r.kappa,
                separation_hz: hz(r.separation),
                linewidth_hz: hz(r.linewidth),
                ratio: r.ratio,
                resolvable: r.resolvable,
            })
            .collect(),
        rabi_hz: hz(rabi),
        t_max_over_rabi: f.t_max,
        excitation_timescale_s: timescale.0,
        scaling_note: SCALING_NOTE,
    };
    if config.output.json {
        write_json(emit.create("feasibility.json")?, &doc)?;
    }
    Ok(())
}
