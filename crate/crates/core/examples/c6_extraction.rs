//! Simulates an excitation spectrum, locates the resonances and recovers
//! the interaction coefficient with both inversion formulas.

use rydberg_lattice::extraction::{round_trip, RoundTripOptions};
use rydberg_lattice::lattice::LatticeParams;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = LatticeParams::new(6, 0.15, 0.0, 1.0)?;
    let (_, report) = round_trip(&params, &RoundTripOptions::default())?;
    for p in report.peaks.iter().filter(|p| p.kappa.is_some()) {
        println!(
            "peak at Delta/V = {:.5}  kappa = {}  <N_e> = {:.3}",
            p.position,
            p.kappa.unwrap(),
            p.height
        );
    }
    let errors = report.relative_error_vs_truth.expect("round trip knows the truth");
    println!(
        "C6 from kappa = {}: {:.5} (error {:.2}%)",
        report.kappa_absolute,
        report.c6_absolute,
        100.0 * errors.absolute
    );
    if let (Some(k), Some(c6)) = (report.kappa_relative, report.c6_relative) {
        println!(
            "C6 from the kappa = {k},{} spacing: {c6:.5} (error {:.2}%)",
            k + 1,
            100.0 * errors.relative
        );
    }
    Ok(())
}
