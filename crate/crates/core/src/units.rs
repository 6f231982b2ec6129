//! Physical units, collective parameters, linewidths and resolvability of
//! neighbouring resonances.
//!
//! Angular frequencies (rad/s) are the working convention. Ordinary
//! frequencies (Hz) are a separate type and only appear through explicit
//! conversion, so a `2*pi` factor is never applied implicitly.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::error::ModelError;
use crate::extraction::extract_c6_relative;
use crate::lattice::{collective_rabi, LatticeParams, VAN_DER_WAALS_EXPONENT};

/// Linewidth prefactor for nS1/2 states of 87Rb: 0.699 GHz (ordinary).
pub const LINEWIDTH_PREFACTOR_HZ: f64 = 0.699e9;

/// Linewidth scaling exponent in the effective principal quantum number.
pub const LINEWIDTH_EXPONENT: f64 = -2.94;

/// Quantum defect of the nS1/2 series used by default.
pub const DEFAULT_QUANTUM_DEFECT: f64 = 3.13;

/// C6/2pi for n = 70 in Hz um^6, backed out of the 146 kHz kappa = 2, 3
/// separation at a = 10 um.
pub const DEFAULT_C6_N70_HZ_UM6: f64 = 876e9;

/// Separation must exceed this many linewidths to count as resolvable.
pub const DEFAULT_RESOLVABILITY_THRESHOLD: f64 = 5.0;

/// Ordinary frequency in Hz.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Frequency(pub f64);

/// Angular frequency in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct AngularFrequency(pub f64);

/// Length in micrometres.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Micrometers(pub f64);

/// Time in seconds.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Seconds(pub f64);

impl Frequency {
    pub fn hz(self) -> f64 {
        self.0
    }

    pub fn khz(self) -> f64 {
        self.0 * 1e-3
    }

    pub fn mhz(self) -> f64 {
        self.0 * 1e-6
    }

    /// `omega = 2 pi f`.
    pub fn to_angular(self) -> AngularFrequency {
        AngularFrequency(TAU * self.0)
    }
}

impl AngularFrequency {
    /// `2 pi x f`, the way experimental frequencies are usually quoted.
    pub fn two_pi_times(f: Frequency) -> Self {
        f.to_angular()
    }

    pub fn rad_per_s(self) -> f64 {
        self.0
    }

    /// `f = omega / 2 pi`.
    pub fn to_frequency(self) -> Frequency {
        Frequency(self.0 / TAU)
    }
}

impl fmt::Display for AngularFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2pi x {} Hz", self.to_frequency().0)
    }
}

impl Add for AngularFrequency {
    type Output = AngularFrequency;
    fn add(self, rhs: Self) -> Self {
        AngularFrequency(self.0 + rhs.0)
    }
}

impl Sub for AngularFrequency {
    type Output = AngularFrequency;
    fn sub(self, rhs: Self) -> Self {
        AngularFrequency(self.0 - rhs.0)
    }
}

impl Mul<f64> for AngularFrequency {
    type Output = AngularFrequency;
    fn mul(self, rhs: f64) -> Self {
        AngularFrequency(self.0 * rhs)
    }
}

impl Div<f64> for AngularFrequency {
    type Output = AngularFrequency;
    fn div(self, rhs: f64) -> Self {
        AngularFrequency(self.0 / rhs)
    }
}

impl Div for AngularFrequency {
    type Output = f64;
    fn div(self, rhs: Self) -> f64 {
        self.0 / rhs.0
    }
}

impl Micrometers {
    pub fn um(self) -> f64 {
        self.0
    }
}

impl Seconds {
    pub fn micros(self) -> f64 {
        self.0 * 1e6
    }
}

/// `C_m` in rad/s * um^m.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionCoefficient {
    angular: f64,
    exponent: u32,
}

impl InteractionCoefficient {
    /// From `C_m / 2 pi` in Hz um^m.
    pub fn from_over_two_pi(hz_um_m: f64, exponent: u32) -> Self {
        InteractionCoefficient {
            angular: TAU * hz_um_m,
            exponent,
        }
    }

    pub fn from_angular(rad_per_s_um_m: f64, exponent: u32) -> Self {
        InteractionCoefficient {
            angular: rad_per_s_um_m,
            exponent,
        }
    }

    /// Van der Waals coefficient from `C6 / 2 pi` in Hz um^6.
    pub fn c6_over_two_pi(hz_um6: f64) -> Self {
        Self::from_over_two_pi(hz_um6, VAN_DER_WAALS_EXPONENT)
    }

    pub fn angular(self) -> f64 {
        self.angular
    }

    pub fn over_two_pi(self) -> f64 {
        self.angular / TAU
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }
}

/// Experimental parameters for one lattice and Rydberg level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConfig {
    pub c6: InteractionCoefficient,
    pub lattice_spacing: Micrometers,
    pub principal_n: u32,
    pub quantum_defect: f64,
    pub single_atom_rabi: AngularFrequency,
    pub filling: u32,
}

impl PhysicalConfig {
    /// 87Rb 70S1/2 in a 10 um lattice.
    pub fn rb87_n70(lattice_spacing: Micrometers) -> Self {
        PhysicalConfig {
            c6: InteractionCoefficient::c6_over_two_pi(DEFAULT_C6_N70_HZ_UM6),
            lattice_spacing,
            principal_n: 70,
            quantum_defect: DEFAULT_QUANTUM_DEFECT,
            single_atom_rabi: AngularFrequency::two_pi_times(Frequency(100e3)),
            filling: 1,
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if !(self.c6.angular > 0.0 && self.c6.angular.is_finite()) {
            return Err(DomainError::NotPositive {
                name: "c6",
                value: self.c6.angular,
            });
        }
        if !(self.lattice_spacing.0 > 0.0 && self.lattice_spacing.0.is_finite()) {
            return Err(DomainError::NotPositive {
                name: "lattice_spacing",
                value: self.lattice_spacing.0,
            });
        }
        if !(self.quantum_defect >= 0.0) || !((self.principal_n as f64) > self.quantum_defect) {
            return Err(DomainError::DefectTooLarge {
                n: self.principal_n,
                defect: self.quantum_defect,
            });
        }
        if self.filling == 0 {
            return Err(DomainError::NotPositive {
                name: "filling",
                value: 0.0,
            });
        }
        Ok(())
    }

    /// `Omega = sqrt(N0) Omega0`.
    pub fn collective_rabi(&self) -> AngularFrequency {
        AngularFrequency(collective_rabi(self.single_atom_rabi.0, self.filling))
    }

    /// Reduced-unit lattice parameters with `V = 1`.
    pub fn reduced_params(&self, n_sites: usize, detuning: AngularFrequency) -> Result<LatticeParams, ModelError> {
        let v = interaction_strength(self);
        LatticeParams::new(n_sites, self.collective_rabi() / v, detuning / v, 1.0)?.with_exponent(self.c6.exponent)
    }
}

/// Nearest-neighbour interaction `V = C_m / a^m`.
pub fn interaction_strength(config: &PhysicalConfig) -> AngularFrequency {
    AngularFrequency(config.c6.angular / config.lattice_spacing.0.powi(config.c6.exponent as i32))
}

/// Inverse of [`interaction_strength`]: `C_m = V a^m`.
pub fn coefficient_from_interaction(
    v: AngularFrequency,
    spacing: Micrometers,
    exponent: u32,
) -> InteractionCoefficient {
    InteractionCoefficient::from_angular(v.0 * spacing.0.powi(exponent as i32), exponent)
}

/// Natural linewidth `Gamma_n = 2 pi x 0.699 GHz x (n - delta)^-2.94` of an nS1/2 level.
pub fn rydberg_linewidth(principal_n: u32, quantum_defect: f64) -> Result<AngularFrequency, DomainError> {
    let n_eff = principal_n as f64 - quantum_defect;
    if !(n_eff > 0.0) {
        return Err(DomainError::DefectTooLarge {
            n: principal_n,
            defect: quantum_defect,
        });
    }
    Ok(Frequency(LINEWIDTH_PREFACTOR_HZ * n_eff.powf(LINEWIDTH_EXPONENT)).to_angular())
}

/// `Delta_kappa - Delta_{kappa+1} = C6 / (kappa (kappa+1) a^6)`.
pub fn predicted_peak_separation(config: &PhysicalConfig, kappa: u32) -> Result<AngularFrequency, DomainError> {
    if kappa < 2 {
        return Err(DomainError::KappaBelowTwo(kappa));
    }
    let k = kappa as f64;
    Ok(interaction_strength(config) / (k * (k + 1.0)))
}

/// Relative-method inversion on typed quantities; returns `C6` in rad/s um^6.
pub fn c6_from_separation(
    separation: AngularFrequency,
    kappa: u32,
    spacing: Micrometers,
) -> Result<InteractionCoefficient, DomainError> {
    let angular = extract_c6_relative(separation.0, kappa, spacing.0)?;
    Ok(InteractionCoefficient::from_angular(angular, VAN_DER_WAALS_EXPONENT))
}

/// Time `t_max / Omega` for a duration given in units of `1/Omega`.
pub fn excitation_timescale(rabi: AngularFrequency, t_max_in_inverse_rabi: f64) -> Result<Seconds, DomainError> {
    if !(rabi.0 > 0.0) {
        return Err(DomainError::NotPositive {
            name: "rabi",
            value: rabi.0,
        });
    }
    Ok(Seconds(t_max_in_inverse_rabi / rabi.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvabilityRow {
    pub kappa: u32,
    pub separation: AngularFrequency,
    pub linewidth: AngularFrequency,
    /// `separation / linewidth`.
    pub ratio: f64,
    pub resolvable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolvabilityReport {
    pub interaction: AngularFrequency,
    pub linewidth: AngularFrequency,
    pub threshold: f64,
    pub rows: Vec<ResolvabilityRow>,
}

/// Linewidth falls as n^-3 while separations grow as n^11, so resolution
/// fails first at low n.
pub const SCALING_NOTE: &str =
    "linewidth scales as n^-3 while neighbouring-peak separations scale as n^11; resolution is lost at low n";

/// Compares each neighbouring-peak separation with the Rydberg linewidth.
pub fn resolvability_report(
    config: &PhysicalConfig,
    kappas: impl IntoIterator<Item = u32>,
    threshold: f64,
) -> Result<ResolvabilityReport, DomainError> {
    config.validate()?;
    let linewidth = rydberg_linewidth(config.principal_n, config.quantum_defect)?;
    let rows = kappas
        .into_iter()
        .map(|kappa| {
            let separation = predicted_peak_separation(config, kappa)?;
            let ratio = separation / linewidth;
            Ok(ResolvabilityRow {
                kappa,
                separation,
                linewidth,
                ratio,
                resolvable: ratio > threshold,
            })
        })
        .collect::<Result<Vec<_>, DomainError>>()?;
    Ok(ResolvabilityReport {
        interaction: interaction_strength(config),
        linewidth,
        threshold,
        rows,
    })
}
