//! CSV and JSON artefacts.
//!
//! CSV files start with `#`-prefixed metadata lines followed by a single
//! header row. Numbers use Rust's shortest round-trip decimal form.

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::dynamics::SweepResult;
use crate::extraction::{ExtractionReport, Observable};
use crate::spectrum::SpectrumScan;

use super::{RunError, SCHEMA_VERSION};

/// Printed wherever physical frequencies appear.
pub const FREQUENCY_CONVENTION: &str = "physical frequencies are ordinary frequencies f = omega / 2pi in Hz";

/// Header metadata shared by every artefact of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub kind: &'static str,
    pub config_hash: String,
    pub lines: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(kind: &'static str, config_hash: impl Into<String>) -> Self {
        Metadata {
            kind,
            config_hash: config_hash.into(),
            lines: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    fn write<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# schema_version: {SCHEMA_VERSION}")?;
        writeln!(w, "# kind: {}", self.kind)?;
        writeln!(w, "# config_hash: {}", self.config_hash)?;
        for (k, v) in &self.lines {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

fn fmt(x: f64) -> String {
    format!("{x}")
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_err(e: csv::Error) -> RunError {
    RunError::Io(e.to_string())
}

/// Columns: `ratio`, optional `delta_hz`, `eig_0 .. eig_{2^N-1}`, `g_state_line`.
pub fn write_spectrum_csv<W: Write>(
    mut w: W,
    scan: &SpectrumScan,
    meta: &Metadata,
    v_hz: Option<f64>,
) -> Result<(), RunError> {
    meta.write(&mut w).map_err(RunError::from)?;
    let dim = 1usize << scan.n_sites;
    let mut out = csv_writer(w);
    let mut header = vec!["ratio".to_string()];
    if v_hz.is_some() {
        header.push("delta_hz".into());
    }
    header.extend((0..dim).map(|i| format!("eig_{i}")));
    header.push("g_state_line".into());
    out.write_record(&header).map_err(csv_err)?;
    for ((ratio, eig), line) in scan.ratio_grid.iter().zip(&scan.eigenvalues).zip(&scan.ground_line) {
        let mut row = vec![fmt(*ratio)];
        if let Some(v) = v_hz {
            row.push(fmt(ratio * v));
        }
        row.extend(eig.iter().map(|e| fmt(*e)));
        row.push(fmt(*line));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush().map_err(RunError::from)
}

/// Column label for one duration, e.g. `ne_T15`.
pub fn time_column(prefix: &str, t: f64) -> String {
    format!("{prefix}_T{t}")
}

/// Per-duration columns come from `reported`; `*_avg` columns from `averaged`.
/// Both must share the detuning grid.
pub fn write_sweep_csv<W: Write>(
    mut w: W,
    reported: &SweepResult,
    averaged: &SweepResult,
    meta: &Metadata,
    v_hz: Option<f64>,
) -> Result<(), RunError> {
    if reported.detuning_grid != averaged.detuning_grid {
        return Err(RunError::Numerical(
            "sweep grids differ between reported and averaged runs".into(),
        ));
    }
    meta.write(&mut w).map_err(RunError::from)?;
    let mut out = csv_writer(w);
    let mut header = vec!["delta_over_v".to_string()];
    if v_hz.is_some() {
        header.push("delta_hz".into());
    }
    for prefix in ["ne", "nee"] {
        header.extend(reported.cycle_times.iter().map(|&t| time_column(prefix, t)));
        header.push(format!("{prefix}_avg"));
    }
    out.write_record(&header).map_err(csv_err)?;
    for (i, ratio) in reported.detuning_grid.iter().enumerate() {
        let mut row = vec![fmt(*ratio)];
        if let Some(v) = v_hz {
            row.push(fmt(ratio * v));
        }
        row.extend(reported.ne_per_t[i].iter().map(|x| fmt(*x)));
        row.push(fmt(averaged.ne_avg[i]));
        row.extend(reported.nee_per_t[i].iter().map(|x| fmt(*x)));
        row.push(fmt(averaged.nee_avg[i]));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush().map_err(RunError::from)
}

/// Averaged observables read back from a sweep CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepColumns {
    pub delta_over_v: Vec<f64>,
    pub ne_avg: Vec<f64>,
    pub nee_avg: Vec<f64>,
}

impl SweepColumns {
    pub fn observable(&self, observable: Observable) -> &[f64] {
        match observable {
            Observable::Ne => &self.ne_avg,
            Observable::Nee => &self.nee_avg,
        }
    }
}

/// Reads `delta_over_v`, `ne_avg` and `nee_avg` from a sweep CSV, skipping
/// `#` metadata lines.
pub fn read_sweep_csv<R: BufRead>(r: R) -> Result<SweepColumns, RunError> {
    let body: String = r
        .lines()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| RunError::Config(format!("sweep csv: {e}")))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| RunError::Config(format!("sweep csv: missing column `{name}`")))
    };
    let (ic, ie, iee) = (column("delta_over_v")?, column("ne_avg")?, column("nee_avg")?);
    let mut cols = SweepColumns {
        delta_over_v: Vec::new(),
        ne_avg: Vec::new(),
        nee_avg: Vec::new(),
    };
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| RunError::Config(format!("sweep csv: {e}")))?;
        let get = |i: usize| -> Result<f64, RunError> {
            record
                .get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| RunError::Config(format!("sweep csv: bad number in data row {}", line + 1)))
        };
        cols.delta_over_v.push(get(ic)?);
        cols.ne_avg.push(get(ie)?);
        cols.nee_avg.push(get(iee)?);
    }
    Ok(cols)
}

#[derive(Serialize)]
pub struct SweepDocument<'a> {
    pub schema_version: u32,
    pub kind: &'static str,
    pub config_hash: &'a str,
    pub n_sites: usize,
    pub delta_over_v: &'a [f64],
    pub cycle_times: &'a [f64],
    pub ne_per_t: &'a [Vec<f64>],
    pub nee_per_t: &'a [Vec<f64>],
    pub average_cycle_times: &'a [f64],
    pub ne_avg: &'a [f64],
    pub nee_avg: &'a [f64],
}

impl<'a> SweepDocument<'a> {
    pub fn new(reported: &'a SweepResult, averaged: &'a SweepResult, config_hash: &'a str) -> Self {
        SweepDocument {
            schema_version: SCHEMA_VERSION,
            kind: "sweep",
            config_hash,
            n_sites: reported.n_sites,
            delta_over_v: &reported.detuning_grid,
            cycle_times: &reported.cycle_times,
            ne_per_t: &reported.ne_per_t,
            nee_per_t: &reported.nee_per_t,
            average_cycle_times: &averaged.cycle_times,
            ne_avg: &averaged.ne_avg,
            nee_avg: &averaged.nee_avg,
        }
    }
}

#[derive(Serialize)]
pub struct ExtractionDocument<'a> {
    pub schema_version: u32,
    pub kind: &'static str,
    pub config_hash: &'a str,
    /// What the coefficient values are expressed in.
    pub c6_units: &'static str,
    pub lattice_spacing: f64,
    #[serde(flatten)]
    pub report: &'a ExtractionReport,
}

#[derive(Serialize)]
pub struct FeasibilityRow {
    pub kappa: u32,
    pub separation_hz: f64,
    pub linewidth_hz: f64,
    pub ratio: f64,
    pub resolvable: bool,
}

#[derive(Serialize)]
pub struct FeasibilityDocument<'a> {
    pub schema_version: u32,
    pub kind: &'static str,
    pub config_hash: &'a str,
    pub frequency_convention: &'static str,
    pub principal_n: u32,
    pub quantum_defect: f64,
    pub lattice_spacing_um: f64,
    pub c6_over_2pi_hz_um6: f64,
    pub interaction_hz: f64,
    pub linewidth_hz: f64,
    pub threshold: f64,
    pub rows: Vec<FeasibilityRow>,
    pub rabi_hz: f64,
    pub t_max_over_rabi: f64,
    pub excitation_timescale_s: f64,
    pub scaling_note: &'static str,
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<(), RunError> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| RunError::Io(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_sweep() -> SweepResult {
        SweepResult {
            n_sites: 2,
            detuning_grid: vec![-0.5, 0.0],
            cycle_times: vec![15.0, 16.5],
            ne_per_t: vec![vec![0.1, 0.2], vec![0.3, 0.4]],
            nee_per_t: vec![vec![0.0, 0.01], vec![0.02, 0.03]],
            ne_avg: vec![0.15, 0.35],
            nee_avg: vec![0.005, 0.025],
        }
    }

    #[test]
    fn sweep_csv_layout_and_read_back() {
        let s = tiny_sweep();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &s, &s, &Metadata::new("sweep", "abc"), None).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(header, "delta_over_v,ne_T15,ne_T16.5,ne_avg,nee_T15,nee_T16.5,nee_avg");
        assert!(text.contains("\n-0.5,0.1,0.2,0.15,0,0.01,0.005\n"));
        let back = read_sweep_csv(buf.as_slice()).unwrap();
        assert_eq!(back.delta_over_v, s.detuning_grid);
        assert_eq!(back.ne_avg, s.ne_avg);
        assert_eq!(back.nee_avg, s.nee_avg);
    }

    #[test]
    fn read_reports_missing_column() {
        let err = read_sweep_csv("# x\ndelta_over_v,ne_avg\n0,1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("nee_avg"));
    }

    #[test]
    fn physical_column() {
        let s = tiny_sweep();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &s, &s, &Metadata::new("sweep", "abc"), Some(1000.0)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("delta_over_v,delta_hz,ne_T15"));
        assert!(text.contains("\n-0.5,-500,"));
    }
}
