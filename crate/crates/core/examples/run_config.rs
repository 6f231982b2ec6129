//! Drives the file-based runner from code: loads a shipped preset, edits
//! it, and writes the artefacts to a temporary directory.

use rydberg_lattice::io::config::GridSpec;
use rydberg_lattice::io::{presets, run};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = presets::load("roundtrip-default")?;
    if let Some(lattice) = config.lattice.as_mut() {
        lattice.n_sites = 4;
    }
    config.grid = Some(GridSpec::range(-1.1, 0.35, 291));
    let dir = std::env::temp_dir().join("rydberg-lattice-example");
    let summary = run(&config, Some(&dir))?;
    for file in &summary.files {
        println!("wrote {}", file.display());
    }
    let report = summary.report.expect("roundtrip mode reports");
    println!(
        "C6 absolute = {:.5}, relative = {:?}",
        report.c6_absolute, report.c6_relative
    );
    Ok(())
}
