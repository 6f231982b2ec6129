//! Resonance peak detection, kappa assignment, and inversion of peak
//! positions to the van der Waals coefficient.

use serde::{Deserialize, Serialize};

use crate::dynamics::{default_cycle_times, default_detuning_grid, sweep, SweepResult};
use crate::error::{DomainError, ExtractionError, PipelineError};
use crate::lattice::LatticeParams;
use crate::spectrum::resonance_detuning;

/// Largest kappa considered when assigning labels.
pub const MAX_KAPPA: u32 = 200;

/// Largest `|ratio - (1 - kappa^-2)|` accepted when anchoring a kappa pair.
pub const KAPPA_RESIDUAL_TOLERANCE: f64 = 0.02;

/// Observable a peak set was read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Total Rydberg number, measurable by field ionisation.
    #[default]
    Ne,
    /// Adjacent excitation pairs; needs spatially resolved detection.
    Nee,
}

impl Observable {
    pub fn averaged<'a>(&self, sweep: &'a SweepResult) -> &'a [f64] {
        match self {
            Observable::Ne => &sweep.ne_avg,
            Observable::Nee => &sweep.nee_avg,
        }
    }

    pub fn column_prefix(&self) -> &'static str {
        match self {
            Observable::Ne => "ne",
            Observable::Nee => "nee",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PeakOptions {
    /// In units of the observable.
    pub min_prominence: f64,
    /// Peaks with `|position| <` this are dropped (the broad on-resonance peak).
    pub exclusion_half_width: f64,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions {
            min_prominence: 0.1,
            exclusion_half_width: 0.15,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
    pub kappa: Option<u32>,
    /// Ratio-law residual of the pair that fixed this label.
    pub residual: Option<f64>,
    /// Label came from the single-peak nearest-position fallback.
    pub low_confidence: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakSet {
    pub observable: Observable,
    /// `(min, max)` of the analysed grid.
    pub grid_range: (f64, f64),
    /// Ascending by position.
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn with_kappa(&self, kappa: u32) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.kappa == Some(kappa))
    }

    /// Labelled peaks ordered by increasing kappa.
    pub fn labelled(&self) -> Vec<&Peak> {
        let mut out: Vec<&Peak> = self.peaks.iter().filter(|p| p.kappa.is_some()).collect();
        out.sort_by_key(|p| p.kappa);
        out
    }
}

/// Vertex of the parabola through three points; `None` if they are collinear.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    let (d0, d2) = (x[1] - x[0], x[1] - x[2]);
    let num = d0 * d0 * (y[1] - y[2]) - d2 * d2 * (y[1] - y[0]);
    let den = d0 * (y[1] - y[2]) - d2 * (y[1] - y[0]);
    if den == 0.0 {
        return None;
    }
    let xv = (x[1] - 0.5 * num / den).clamp(x[0].min(x[2]), x[0].max(x[2]));
    // Lagrange form evaluated at the vertex.
    let l0 = (xv - x[1]) * (xv - x[2]) / ((x[0] - x[1]) * (x[0] - x[2]));
    let l1 = (xv - x[0]) * (xv - x[2]) / ((x[1] - x[0]) * (x[1] - x[2]));
    let l2 = (xv - x[0]) * (xv - x[1]) / ((x[2] - x[0]) * (x[2] - x[1]));
    Some((xv, y[0] * l0 + y[1] * l1 + y[2] * l2))
}

/// Interior local maxima; plateaus report their middle sample.
fn local_maxima(signal: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = signal.len();
    let mut i = 1;
    while i + 1 < n {
        if signal[i - 1] < signal[i] {
            let mut j = i;
            while j + 1 < n - 1 && signal[j + 1] == signal[i] {
                j += 1;
            }
            if signal[j + 1] < signal[i] {
                out.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Height above the higher of the two bases reached before a taller sample.
fn prominence(signal: &[f64], peak: usize) -> f64 {
    let h = signal[peak];
    let mut left_min = h;
    for &v in signal[..peak].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &signal[peak + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Finds prominent local maxima of `signal` sampled on `grid`.
///
/// Positions are refined with the parabola through the maximum and its two
/// neighbours. A decreasing grid is accepted and the result is still ordered
/// by ascending position.
pub fn detect_peaks(
    grid: &[f64],
    signal: &[f64],
    observable: Observable,
    options: &PeakOptions,
) -> Result<PeakSet, ExtractionError> {
    if grid.len() != signal.len() {
        return Err(ExtractionError::LengthMismatch {
            grid: grid.len(),
            signal: signal.len(),
        });
    }
    if signal.len() < 5 {
        return Err(ExtractionError::TooFewSamples(signal.len()));
    }
    if let Some(i) = signal.iter().position(|v| !v.is_finite()) {
        return Err(ExtractionError::NonFinite(i));
    }
    if !crate::dynamics::check_monotone(grid) {
        return Err(ExtractionError::NonMonotoneGrid);
    }
    let (grid, signal): (Vec<f64>, Vec<f64>) = if grid[1] < grid[0] {
        (
            grid.iter().rev().copied().collect(),
            signal.iter().rev().copied().collect(),
        )
    } else {
        (grid.to_vec(), signal.to_vec())
    };

    let mut peaks = Vec::new();
    for i in local_maxima(&signal) {
        let prom = prominence(&signal, i);
        if prom < options.min_prominence {
            continue;
        }
        let (position, height) = parabola_vertex(
            [grid[i - 1], grid[i], grid[i + 1]],
            [signal[i - 1], signal[i], signal[i + 1]],
        )
        .unwrap_or((grid[i], signal[i]));
        if position.abs() < options.exclusion_half_width {
            continue;
        }
        peaks.push(Peak {
            position,
            height,
            prominence: prom,
            kappa: None,
            residual: None,
            low_confidence: false,
        });
    }
    peaks.sort_by(|a, b| a.position.total_cmp(&b.position));
    peaks.dedup_by(|a, b| a.position == b.position);
    Ok(PeakSet {
        observable,
        grid_range: (grid[0], grid[grid.len() - 1]),
        peaks,
    })
}

/// Peaks of the time-averaged observable of a sweep.
pub fn detect_sweep_peaks(
    result: &SweepResult,
    observable: Observable,
    options: &PeakOptions,
) -> Result<PeakSet, ExtractionError> {
    detect_peaks(&result.detuning_grid, observable.averaged(result), observable, options)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaMatch {
    pub kappa: u32,
    /// `|pos_k / pos_k_plus_1 - (1 - kappa^-2)|`.
    pub residual: f64,
}

fn ratio_law(kappa: u32) -> f64 {
    let k = kappa as f64;
    1.0 - 1.0 / (k * k)
}

/// Identifies kappa from two neighbouring resonance positions, the first
/// being the one closer to zero detuning.
pub fn identify_kappa(pos_k: f64, pos_k_plus_1: f64) -> Result<KappaMatch, DomainError> {
    if !(pos_k < 0.0) {
        return Err(DomainError::NotNegative {
            name: "pos_k",
            value: pos_k,
        });
    }
    if !(pos_k_plus_1 < 0.0) {
        return Err(DomainError::NotNegative {
            name: "pos_k_plus_1",
            value: pos_k_plus_1,
        });
    }
    let ratio = pos_k / pos_k_plus_1;
    if !(ratio > 0.70 && ratio < 1.0) {
        return Err(DomainError::RatioOutOfRange(ratio));
    }
    // Invert 1 - k^-2 and check the neighbouring integers.
    let estimate = 1.0 / (1.0 - ratio).sqrt();
    let lo = (estimate.floor() as u32).clamp(2, MAX_KAPPA);
    let hi = (estimate.ceil() as u32).clamp(2, MAX_KAPPA);
    let best = [lo, hi]
        .into_iter()
        .map(|kappa| KappaMatch {
            kappa,
            residual: (ratio - ratio_law(kappa)).abs(),
        })
        .min_by(|a, b| a.residual.total_cmp(&b.residual))
        .expect("two candidates");
    Ok(best)
}

/// Labels the negative-detuning peaks with kappa.
///
/// Starting from the peak closest to zero, the first neighbouring pair whose
/// ratio matches the resonance law within [`KAPPA_RESIDUAL_TOLERANCE`] fixes
/// the anchor; labels then continue outward while each further pair agrees
/// with the next kappa. If only one negative peak exists it gets the nearest
/// resonance label for `interaction` (grid units) and is flagged low
/// confidence. Returns the anchor kappa if any peak was labelled.
pub fn assign_kappas(set: &mut PeakSet, interaction: f64) -> Option<u32> {
    for p in &mut set.peaks {
        p.kappa = None;
        p.residual = None;
        p.low_confidence = false;
    }
    // Indices of negative peaks, closest to zero first.
    let order: Vec<usize> = (0..set.peaks.len())
        .rev()
        .filter(|&i| set.peaks[i].position < 0.0)
        .collect();

    for start in 0..order.len().saturating_sub(1) {
        let (a, b) = (order[start], order[start + 1]);
        let Ok(m) = identify_kappa(set.peaks[a].position, set.peaks[b].position) else {
            continue;
        };
        if m.residual > KAPPA_RESIDUAL_TOLERANCE {
            continue;
        }
        set.peaks[a].kappa = Some(m.kappa);
        set.peaks[a].residual = Some(m.residual);
        set.peaks[b].kappa = Some(m.kappa + 1);
        set.peaks[b].residual = Some(m.residual);
        let mut kappa = m.kappa + 1;
        for w in order[start + 1..].windows(2) {
            match identify_kappa(set.peaks[w[0]].position, set.peaks[w[1]].position) {
                Ok(next) if next.kappa == kappa && next.residual <= KAPPA_RESIDUAL_TOLERANCE => {
                    kappa += 1;
                    set.peaks[w[1]].kappa = Some(kappa);
                    set.peaks[w[1]].residual = Some(next.residual);
                }
                _ => break,
            }
        }
        return Some(m.kappa);
    }

    if let [only] = order[..] {
        let position = set.peaks[only].position;
        let nearest = (2..=MAX_KAPPA)
            .filter_map(|k| {
                resonance_detuning(k, interaction)
                    .ok()
                    .map(|d| (k, (d - position).abs()))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((kappa, _)) = nearest {
            let peak = &mut set.peaks[only];
            peak.kappa = Some(kappa);
            peak.low_confidence = true;
            return Some(kappa);
        }
    }
    None
}

/// `C6 = -kappa/(kappa-1) * Delta_kappa * a^6`.
pub fn extract_c6_absolute(delta_kappa: f64, kappa: u32, spacing: f64) -> Result<f64, DomainError> {
    if kappa < 2 {
        return Err(DomainError::KappaBelowTwo(kappa));
    }
    if !(delta_kappa < 0.0) {
        return Err(DomainError::NotNegative {
            name: "delta_kappa",
            value: delta_kappa,
        });
    }
    if !(spacing > 0.0) {
        return Err(DomainError::NotPositive {
            name: "spacing",
            value: spacing,
        });
    }
    let k = kappa as f64;
    Ok(-k / (k - 1.0) * delta_kappa * spacing.powi(6))
}

/// `C6 = kappa (kappa+1) (Delta_kappa - Delta_{kappa+1}) a^6`.
pub fn extract_c6_relative(peak_separation: f64, kappa: u32, lattice_spacing: f64) -> Result<f64, DomainError> {
    if kappa < 2 {
        return Err(DomainError::KappaBelowTwo(kappa));
    }
    if !(peak_separation > 0.0) {
        return Err(DomainError::NotPositive {
            name: "peak_separation",
            value: peak_separation,
        });
    }
    if !(lattice_spacing > 0.0) {
        return Err(DomainError::NotPositive {
            name: "lattice_spacing",
            value: lattice_spacing,
        });
    }
    let k = kappa as f64;
    Ok(k * (k + 1.0) * peak_separation * lattice_spacing.powi(6))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub position: f64,
    pub height: f64,
    pub kappa: Option<u32>,
    pub residual: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativeErrors {
    pub absolute: f64,
    pub relative: f64,
}

/// Coefficients recovered from a labelled peak set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub observable: Observable,
    pub peaks: Vec<PeakRecord>,
    /// Lowest-kappa labelled peak used for the absolute method.
    pub kappa_absolute: u32,
    /// Lower label of the neighbouring pair used for the relative method.
    pub kappa_relative: Option<u32>,
    pub c6_absolute: f64,
    pub c6_relative: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c6_true: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_error_vs_truth: Option<RelativeErrors>,
}

/// Inverts a labelled peak set.
///
/// `detuning_unit` converts peak positions to detunings (`V` when the grid is
/// `Delta/V`).
pub fn extract_from_peaks(
    set: &PeakSet,
    detuning_unit: f64,
    lattice_spacing: f64,
) -> Result<ExtractionReport, PipelineError> {
    let labelled = set.labelled();
    let first = labelled
        .first()
        .ok_or(PipelineError::Kappa("no peak could be assigned a kappa label"))?;
    let kappa_absolute = first.kappa.expect("labelled");
    let c6_absolute = extract_c6_absolute(first.position * detuning_unit, kappa_absolute, lattice_spacing)
        .map_err(PipelineError::Inversion)?;

    let pair = labelled.windows(2).find(|w| w[1].kappa == w[0].kappa.map(|k| k + 1));
    let (kappa_relative, c6_relative) = match pair {
        Some(w) => {
            let kappa = w[0].kappa.expect("labelled");
            let separation = (w[0].position - w[1].position) * detuning_unit;
            let c6 = extract_c6_relative(separation, kappa, lattice_spacing).map_err(PipelineError::Inversion)?;
            (Some(kappa), Some(c6))
        }
        None => (None, None),
    };
    Ok(ExtractionReport {
        observable: set.observable,
        peaks: set
            .peaks
            .iter()
            .map(|p| PeakRecord {
                position: p.position,
                height: p.height,
                kappa: p.kappa,
                residual: p.residual,
            })
            .collect(),
        kappa_absolute,
        kappa_relative,
        c6_absolute,
        c6_relative,
        c6_true: None,
        relative_error_vs_truth: None,
    })
}

/// Sweep grids and analysis settings for [`round_trip`].
#[derive(Clone, Debug, PartialEq)]
pub struct RoundTripOptions {
    pub detuning_grid: Vec<f64>,
    pub cycle_times: Vec<f64>,
    pub peaks: PeakOptions,
    pub observable: Observable,
    pub lattice_spacing: f64,
    /// Physical detuning per unit of the model interaction; 1 keeps reduced units.
    pub detuning_unit: f64,
}

impl Default for RoundTripOptions {
    fn default() -> Self {
        RoundTripOptions {
            detuning_grid: default_detuning_grid(),
            cycle_times: default_cycle_times(),
            peaks: PeakOptions::default(),
            observable: Observable::Ne,
            lattice_spacing: 1.0,
            detuning_unit: 1.0,
        }
    }
}

/// Simulates a sweep, reads the resonances back and compares the recovered
/// coefficient with `C6 = V a^6`.
pub fn round_trip(
    params: &LatticeParams,
    options: &RoundTripOptions,
) -> Result<(SweepResult, ExtractionReport), PipelineError> {
    let result = sweep(params, &options.detuning_grid, &options.cycle_times).map_err(PipelineError::Sweep)?;
    let report = analyse_sweep(params, &result, options)?;
    Ok((result, report))
}

/// The detection and inversion half of [`round_trip`] for an existing sweep
/// of `params`.
pub fn analyse_sweep(
    params: &LatticeParams,
    result: &SweepResult,
    options: &RoundTripOptions,
) -> Result<ExtractionReport, PipelineError> {
    let mut set = detect_sweep_peaks(result, options.observable, &options.peaks).map_err(PipelineError::Peaks)?;
    // Positions are Delta/V, so resonances sit at -1 + 1/kappa.
    assign_kappas(&mut set, 1.0);
    let v = params.interaction * options.detuning_unit;
    let mut report = extract_from_peaks(&set, v, options.lattice_spacing)?;
    let Some(c6_relative) = report.c6_relative else {
        return Err(PipelineError::Kappa(
            "no neighbouring labelled pair for the relative method",
        ));
    };
    let truth = v * options.lattice_spacing.powi(6);
    report.c6_true = Some(truth);
    report.relative_error_vs_truth = Some(RelativeErrors {
        absolute: (report.c6_absolute - truth).abs() / truth,
        relative: (c6_relative - truth).abs() / truth,
    });
    Ok(report)
}
