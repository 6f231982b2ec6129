//! Eigenvalues of the driven chain across the resonance region and the
//! level closest to the unperturbed ground-state line.

use rydberg_lattice::lattice::LatticeParams;
use rydberg_lattice::spectrum::{linspace, scan_spectrum};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let template = LatticeParams::new(6, 0.15, 0.0, 1.0)?;
    let grid = linspace(-0.8, -0.3, 11);
    let scan = scan_spectrum(&template, &grid)?;
    println!("{:>8} {:>10} {:>10} {:>10}", "Delta/V", "|G> line", "nearest", "gap");
    for ((ratio, eig), line) in grid.iter().zip(&scan.eigenvalues).zip(&scan.ground_line) {
        let k = (0..eig.len())
            .min_by(|&a, &b| (eig[a] - line).abs().total_cmp(&(eig[b] - line).abs()))
            .unwrap();
        let gap = [
            k.checked_sub(1).map(|j| eig[k] - eig[j]),
            eig.get(k + 1).map(|e| e - eig[k]),
        ]
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
        println!("{ratio:>8.3} {line:>10.5} {:>10.5} {gap:>10.5}", eig[k]);
    }
    Ok(())
}
