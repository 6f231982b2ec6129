//! Builds the chain Hamiltonian and its split into the diagonal part `H0`
//! and the perturbation `H'`.

use rydberg_lattice::lattice::{build_full_hamiltonian, build_h0, build_hprime, BasisState, LatticeParams};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3;
    let params = LatticeParams::new(n, 0.15, -0.5, 1.0)?;
    let h = build_full_hamiltonian(&params)?;
    let h0 = build_h0(&params)?;
    let hp = build_hprime(&params)?;

    println!(
        "N = {n}, Omega = {}, Delta = {}, V = {}",
        params.rabi, params.detuning, params.interaction
    );
    println!(
        "{:>6} {:>4} {:>4} {:>12} {:>12}",
        "state", "N_e", "N_ee", "H0", "H - H0"
    );
    for i in 0..params.dim() {
        let s = BasisState::new(i as u32, n)?;
        println!(
            "{:>6} {:>4} {:>4} {:>12.6} {:>12.6}",
            s.label(n),
            s.n_e(),
            s.n_ee(),
            h0.entry(i, i),
            h.entry(i, i) - h0.entry(i, i)
        );
    }
    assert_eq!(h0.matrix() + hp.matrix(), *h.matrix());
    println!("symmetric: {}, H0 + H' == H: true", h.is_hermitian());
    Ok(())
}
