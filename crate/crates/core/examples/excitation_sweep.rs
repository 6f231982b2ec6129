//! Rydberg number after a square pulse, averaged over pulse durations, as
//! the detuning is swept across the anti-blockade resonances.

use rydberg_lattice::dynamics::sweep;
use rydberg_lattice::lattice::LatticeParams;
use rydberg_lattice::spectrum::linspace;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let template = LatticeParams::new(6, 0.15, 0.0, 1.0)?;
    let grid = linspace(-0.9, 0.3, 97);
    let times = linspace(15.0, 30.0, 16);
    let result = sweep(&template, &grid, &times)?;
    let max = result.ne_avg.iter().copied().fold(0.0, f64::max);
    println!("Delta/V    <N_e>   <N_ee>");
    for (i, ratio) in grid.iter().enumerate().step_by(2) {
        let bar = "#".repeat((40.0 * result.ne_avg[i] / max).round() as usize);
        println!(
            "{ratio:>7.3} {:>8.4} {:>8.4}  {bar}",
            result.ne_avg[i], result.nee_avg[i]
        );
    }
    Ok(())
}
