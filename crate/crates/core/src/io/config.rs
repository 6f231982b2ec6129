//! Experiment configuration files (TOML).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{default_cycle_times, default_detuning_grid, thin_line_cycle_times};
use crate::extraction::{Observable, PeakOptions};
use crate::lattice::{LatticeParams, VAN_DER_WAALS_EXPONENT};
use crate::spectrum::{default_ratio_grid, linspace};
use crate::units::{
    AngularFrequency, Frequency, InteractionCoefficient, Micrometers, PhysicalConfig, DEFAULT_C6_N70_HZ_UM6,
    DEFAULT_QUANTUM_DEFECT, DEFAULT_RESOLVABILITY_THRESHOLD,
};

use super::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Spectrum,
    Sweep,
    Extract,
    Feasibility,
    Roundtrip,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Spectrum => "spectrum",
            Mode::Sweep => "sweep",
            Mode::Extract => "extract",
            Mode::Feasibility => "feasibility",
            Mode::Roundtrip => "roundtrip",
        }
    }
}

/// Lattice parameters in reduced units (`V = 1` unless overridden).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub n_sites: usize,
    pub rabi: f64,
    #[serde(default)]
    pub detuning: f64,
    #[serde(default = "one")]
    pub interaction: f64,
    #[serde(default = "vdw")]
    pub exponent: u32,
}

fn one() -> f64 {
    1.0
}

fn vdw() -> u32 {
    VAN_DER_WAALS_EXPONENT
}

impl LatticeSection {
    pub fn params(&self) -> Result<LatticeParams, RunError> {
        let p = LatticeParams {
            n_sites: self.n_sites,
            rabi: self.rabi,
            detuning: self.detuning,
            interaction: self.interaction,
            exponent: self.exponent,
        };
        p.validate().map_err(|e| RunError::Config(format!("lattice: {e}")))?;
        Ok(p)
    }
}

/// Either an explicit list or `count` evenly spaced points from `min` to `max`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn range(min: f64, max: f64, count: usize) -> Self {
        GridSpec {
            min: Some(min),
            max: Some(max),
            count: Some(count),
            values: None,
        }
    }

    pub fn list(values: Vec<f64>) -> Self {
        GridSpec {
            values: Some(values),
            ..Default::default()
        }
    }

    /// `min_count` is enforced on ranges; explicit lists only need one value.
    pub fn resolve(&self, section: &str, min_count: usize) -> Result<Vec<f64>, RunError> {
        let err = |msg: &str| RunError::Config(format!("{section}: {msg}"));
        match (&self.values, self.min, self.max, self.count) {
            (Some(values), None, None, None) => {
                if values.is_empty() {
                    return Err(err("`values` is empty"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(err("`values` must be finite"));
                }
                Ok(values.clone())
            }
            (None, Some(min), Some(max), Some(count)) => {
                if count < min_count {
                    return Err(err(&format!("`count` must be at least {min_count}")));
                }
                if !(min.is_finite() && max.is_finite() && max > min) {
                    return Err(err("need finite `min` < `max`"));
                }
                Ok(linspace(min, max, count))
            }
            (Some(_), ..) => Err(err("give either `values` or `min`/`max`/`count`, not both")),
            (None, ..) => Err(err("missing field `min`, `max` or `count`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtractionSection {
    pub observable: Observable,
    /// Lattice spacing in the units of the reported coefficient (um when a
    /// `[physical]` section is present).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_spacing: Option<f64>,
    /// Existing sweep CSV to analyse instead of simulating.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

impl Default for ExtractionSection {
    fn default() -> Self {
        ExtractionSection {
            observable: Observable::Ne,
            lattice_spacing: None,
            input: None,
        }
    }
}

/// Laboratory parameters; frequencies are given as `f = omega / 2 pi` in Hz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSection {
    #[serde(default = "default_c6")]
    pub c6_over_2pi_hz_um6: f64,
    pub lattice_spacing_um: f64,
    #[serde(default = "default_n")]
    pub principal_n: u32,
    #[serde(default = "default_defect")]
    pub quantum_defect: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single_atom_rabi_over_2pi_hz: Option<f64>,
    #[serde(default = "default_filling")]
    pub filling: u32,
    #[serde(default = "vdw")]
    pub exponent: u32,
}

fn default_c6() -> f64 {
    DEFAULT_C6_N70_HZ_UM6
}

fn default_n() -> u32 {
    70
}

fn default_defect() -> f64 {
    DEFAULT_QUANTUM_DEFECT
}

fn default_filling() -> u32 {
    1
}

impl PhysicalSection {
    pub fn config(&self) -> Result<PhysicalConfig, RunError> {
        let cfg = PhysicalConfig {
            c6: InteractionCoefficient::from_over_two_pi(self.c6_over_2pi_hz_um6, self.exponent),
            lattice_spacing: Micrometers(self.lattice_spacing_um),
            principal_n: self.principal_n,
            quantum_defect: self.quantum_defect,
            single_atom_rabi: AngularFrequency::two_pi_times(Frequency(
                self.single_atom_rabi_over_2pi_hz.unwrap_or(0.0),
            )),
            filling: self.filling,
        };
        cfg.validate().map_err(|e| RunError::Config(format!("physical: {e}")))?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeasibilitySection {
    pub kappa_min: u32,
    pub kappa_max: u32,
    pub threshold: f64,
    /// Longest excitation in units of `1/Omega`.
    pub t_max: f64,
    /// `Omega / V` used for the time scale when no single-atom Rabi frequency is configured.
    pub rabi_over_v: f64,
}

impl Default for FeasibilitySection {
    fn default() -> Self {
        FeasibilitySection {
            kappa_min: 2,
            kappa_max: 5,
            threshold: DEFAULT_RESOLVABILITY_THRESHOLD,
            t_max: 30.0,
            rabi_over_v: 0.15,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub csv: bool,
    pub json: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("out"),
            csv: true,
            json: true,
        }
    }
}

/// One experiment: which figure-class output to produce and with what.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSection>,
    /// `Delta/V` grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Durations reported individually, in units of `1/Omega`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_times: Option<GridSpec>,
    /// Durations entering the averaged columns, in units of `1/Omega`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averaging: Option<GridSpec>,
    #[serde(default)]
    pub peaks: PeakOptions,
    #[serde(default)]
    pub extraction: ExtractionSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalSection>,
    #[serde(default)]
    pub feasibility: FeasibilitySection,
    #[serde(default)]
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text).map_err(|e| match e {
            RunError::Config(msg) => RunError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        // Relative input paths are relative to the config file.
        if let (Some(input), Some(parent)) = (config.extraction.input.as_mut(), path.parent()) {
            if input.is_relative() {
                *input = parent.join(&*input);
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Checks the sections each mode requires.
    pub fn validate(&self) -> Result<(), RunError> {
        let needs_lattice = match self.mode {
            Mode::Spectrum | Mode::Sweep | Mode::Roundtrip => true,
            Mode::Extract => self.extraction.input.is_none(),
            Mode::Feasibility => false,
        };
        if needs_lattice {
            self.lattice_params()?;
        }
        if let Some(lattice) = &self.lattice {
            lattice.params()?;
        }
        if self.mode == Mode::Feasibility && self.physical.is_none() {
            return Err(RunError::Config(
                "mode `feasibility` requires a [physical] section".into(),
            ));
        }
        if let Some(physical) = &self.physical {
            physical.config()?;
        }
        match self.mode {
            Mode::Spectrum => {
                self.ratio_grid()?;
            }
            Mode::Sweep | Mode::Roundtrip | Mode::Extract => {
                if self.mode != Mode::Extract || self.extraction.input.is_none() {
                    self.detuning_grid()?;
                    self.reported_times()?;
                    self.averaging_times()?;
                    if !(self.lattice_params()?.rabi > 0.0) {
                        return Err(RunError::Config(
                            "lattice.rabi must be positive for time propagation".into(),
                        ));
                    }
                }
            }
            Mode::Feasibility => {
                let f = &self.feasibility;
                if f.kappa_min < 2 || f.kappa_max < f.kappa_min {
                    return Err(RunError::Config("feasibility: need 2 <= kappa_min <= kappa_max".into()));
                }
                if !(f.threshold > 0.0 && f.t_max >= 0.0 && f.rabi_over_v > 0.0) {
                    return Err(RunError::Config(
                        "feasibility: threshold and rabi_over_v must be positive".into(),
                    ));
                }
            }
        }
        if let Some(a) = self.extraction.lattice_spacing {
            if !(a > 0.0) {
                return Err(RunError::Config("extraction.lattice_spacing must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn lattice_params(&self) -> Result<LatticeParams, RunError> {
        self.lattice
            .as_ref()
            .ok_or_else(|| RunError::Config(format!("mode `{}` requires a [lattice] section", self.mode.as_str())))?
            .params()
    }

    pub fn physical_config(&self) -> Result<Option<PhysicalConfig>, RunError> {
        self.physical.as_ref().map(PhysicalSection::config).transpose()
    }

    pub fn ratio_grid(&self) -> Result<Vec<f64>, RunError> {
        match &self.grid {
            Some(g) => g.resolve("grid", 2),
            None => Ok(default_ratio_grid()),
        }
    }

    pub fn detuning_grid(&self) -> Result<Vec<f64>, RunError> {
        let grid = match &self.grid {
            Some(g) => g.resolve("grid", 2)?,
            None => default_detuning_grid(),
        };
        if !crate::dynamics::check_monotone(&grid) {
            return Err(RunError::Config("grid: values must be strictly monotone".into()));
        }
        Ok(grid)
    }

    pub fn reported_times(&self) -> Result<Vec<f64>, RunError> {
        let times = match &self.cycle_times {
            Some(g) => g.resolve("cycle_times", 2)?,
            None => thin_line_cycle_times(),
        };
        check_times("cycle_times", &times)?;
        Ok(times)
    }

    /// Falls back to the reported durations when `[averaging]` is absent.
    pub fn averaging_times(&self) -> Result<Vec<f64>, RunError> {
        let times = match (&self.averaging, &self.cycle_times) {
            (Some(g), _) => g.resolve("averaging", 2)?,
            (None, Some(_)) => self.reported_times()?,
            (None, None) => default_cycle_times(),
        };
        check_times("averaging", &times)?;
        Ok(times)
    }

    /// Lattice spacing used by the inversion, defaulting to the physical
    /// spacing or 1 in reduced units.
    pub fn lattice_spacing(&self) -> f64 {
        self.extraction
            .lattice_spacing
            .or_else(|| self.physical.as_ref().map(|p| p.lattice_spacing_um))
            .unwrap_or(1.0)
    }
}

fn check_times(section: &str, times: &[f64]) -> Result<(), RunError> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(RunError::Config(format!(
            "{section}: durations must be finite and non-negative"
        )));
    }
    Ok(())
}
