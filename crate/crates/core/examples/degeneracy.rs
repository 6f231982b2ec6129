//! Product states that share the unperturbed energy of the ground state at
//! the first anti-blockade resonance.

use rydberg_lattice::spectrum::{degeneracy_classes, ground_group, resonance_detuning};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 8;
    for kappa in [2, 3] {
        let delta = resonance_detuning(kappa, 1.0)?;
        let groups = degeneracy_classes(n, delta, 1.0)?;
        let g = ground_group(&groups).expect("ground state is always grouped");
        println!(
            "kappa = {kappa}, Delta/V = {delta:.6}: {} states degenerate with |G>",
            g.size()
        );
        for class in &g.classes {
            let labels: Vec<String> = class.members.iter().take(4).map(|s| s.label(n)).collect();
            let more = if class.members.len() > 4 { ", ..." } else { "" };
            println!(
                "  (N_e, N_ee) = ({}, {}): {:>3} states  {}{more}",
                class.n_e,
                class.n_ee,
                class.members.len(),
                labels.join(", ")
            );
        }
    }
    let blockaded = degeneracy_classes(n, 0.0, 1.0)?;
    println!(
        "Delta = 0: {} blockade-allowed states",
        ground_group(&blockaded).unwrap().size()
    );
    Ok(())
}
