//! Laboratory numbers for 87Rb 70S: peak separations against the Rydberg
//! linewidth at two lattice spacings.

use rydberg_lattice::units::{excitation_timescale, resolvability_report, Micrometers, PhysicalConfig};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    for a in [10.0, 5.0] {
        let cfg = PhysicalConfig::rb87_n70(Micrometers(a));
        let report = resolvability_report(&cfg, 2..=5, 5.0)?;
        println!(
            "a = {a} um: V = 2pi x {:.4} MHz, linewidth = 2pi x {:.3} kHz",
            report.interaction.to_frequency().mhz(),
            report.linewidth.to_frequency().khz()
        );
        for row in &report.rows {
            println!(
                "  kappa {}-{}: separation 2pi x {:>10.3} kHz, {:>8.1} linewidths{}",
                row.kappa,
                row.kappa + 1,
                row.separation.to_frequency().khz(),
                row.ratio,
                if row.resolvable { "" } else { "  (unresolved)" }
            );
        }
        let t = excitation_timescale(report.interaction * 0.15, 30.0)?;
        println!("  30/Omega at Omega = 0.15 V: {:.3} us", t.micros());
    }
    Ok(())
}
