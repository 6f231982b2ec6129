mod common;

use common::{ground_vector, kron_hamiltonian, max_abs_diff, rabi_formula, rk4_evolve};
use num_complex::Complex64;
use proptest::prelude::*;
use rydberg_lattice::dynamics::{energy_expectation, observables, propagate, sweep, Propagator, WaveFunction};
use rydberg_lattice::lattice::{build_full_hamiltonian, BasisState, LatticeParams};
use rydberg_lattice::spectrum::linspace;
use rydberg_lattice::NumericalError;

fn hamiltonian(n: usize, rabi: f64, delta: f64) -> rydberg_lattice::Hamiltonian {
    build_full_hamiltonian(&LatticeParams::new(n, rabi, delta, 1.0).unwrap()).unwrap()
}

#[test]
fn two_sites_on_resonance_match_rk4() {
    let rabi = 0.15;
    let t = 15.0 / rabi;
    let psi = propagate(&hamiltonian(2, rabi, 0.0), &WaveFunction::ground(2).unwrap(), t).unwrap();
    let reference = rk4_evolve(&kron_hamiltonian(2, rabi, 0.0, 1.0, 6), &ground_vector(2), t, 20_000);
    assert!(max_abs_diff(psi.amplitudes(), &reference) < 1e-8);
    let ne_ref: f64 = reference
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm_sqr() * (i as u32).count_ones() as f64)
        .sum();
    assert!((observables(&psi).n_e - ne_ref).abs() < 1e-8);
}

#[test]
fn rk4_oracle_agrees_up_to_four_sites() {
    for n in 1..=4 {
        for &(rabi, delta) in &[(0.15, -0.5), (0.5, 0.2), (1.0, -0.75)] {
            let t = 25.0 / rabi;
            let psi = propagate(&hamiltonian(n, rabi, delta), &WaveFunction::ground(n).unwrap(), t).unwrap();
            let reference = rk4_evolve(&kron_hamiltonian(n, rabi, delta, 1.0, 6), &ground_vector(n), t, 40_000);
            let err = max_abs_diff(psi.amplitudes(), &reference);
            assert!(err < 1e-8, "N={n} rabi={rabi} delta={delta}: {err:e}");
        }
    }
}

#[test]
fn undriven_ground_state_is_stationary() {
    let psi = propagate(&hamiltonian(5, 0.0, -0.4), &WaveFunction::ground(5).unwrap(), 123.4).unwrap();
    assert!((psi.amplitude(BasisState::GROUND).norm() - 1.0).abs() < 1e-12);
    assert_eq!(observables(&psi).n_e, 0.0);
}

#[test]
fn single_site_follows_rabi_formula() {
    for &(rabi, delta) in &[(1.0, 0.0), (0.3, 0.5), (0.15, -1.0)] {
        let u = Propagator::new(&hamiltonian(1, rabi, delta)).unwrap();
        for k in 0..40 {
            let t = 0.5 * k as f64 / rabi;
            let pe = observables(&u.evolve(&WaveFunction::ground(1).unwrap(), t).unwrap()).n_e;
            assert!((pe - rabi_formula(rabi, delta, t)).abs() < 1e-10);
        }
    }
}

#[test]
fn single_point_sweep_reduces_to_rabi() {
    let rabi = 0.15;
    let template = LatticeParams::new(1, rabi, 0.0, 1.0).unwrap();
    let r = sweep(&template, &[0.0], &[15.0]).unwrap();
    assert!((r.ne_avg[0] - rabi_formula(rabi, 0.0, 15.0 / rabi)).abs() < 1e-10);
    assert_eq!(r.nee_avg[0], 0.0);
}

#[test]
fn observables_of_simple_states() {
    let s = BasisState::from_label("geegeeg").unwrap();
    let o = observables(&WaveFunction::basis(7, s).unwrap());
    assert_eq!((o.n_e, o.n_ee), (4.0, 2.0));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0] = Complex64::new(h, 0.0);
    amps[7] = Complex64::new(h, 0.0);
    let o = observables(&WaveFunction::from_amplitudes(3, amps).unwrap());
    assert!((o.n_e - 1.5).abs() < 1e-15 && (o.n_ee - 1.0).abs() < 1e-15);
}

#[test]
fn sweep_ranges_and_means() {
    let n = 6;
    let template = LatticeParams::new(n, 0.15, 0.0, 1.0).unwrap();
    let grid = linspace(-1.1, 0.35, 30);
    let times = [15.0, 18.0, 21.0, 24.0, 27.0];
    let r = sweep(&template, &grid, &times).unwrap();
    for i in 0..grid.len() {
        for j in 0..times.len() {
            let (ne, nee) = (r.ne_per_t[i][j], r.nee_per_t[i][j]);
            assert!((-1e-12..=n as f64 + 1e-12).contains(&ne));
            assert!((-1e-12..=(n - 1) as f64 + 1e-12).contains(&nee));
        }
        let mean: f64 = r.ne_per_t[i].iter().sum::<f64>() / times.len() as f64;
        assert!((mean - r.ne_avg[i]).abs() < 1e-12);
    }
}

#[test]
fn neighbouring_pairs_are_suppressed_on_resonance() {
    let template = LatticeParams::new(8, 0.15, 0.0, 1.0).unwrap();
    let times = linspace(15.0, 30.0, 64);
    let r = sweep(&template, &[-0.0025, 0.0, 0.0025], &times).unwrap();
    assert!(r.nee_avg[1] < 0.02, "<N_ee> = {}", r.nee_avg[1]);
    // while single excitations are plentiful
    assert!(r.ne_avg[1] > 1.0);
}

#[test]
fn sweep_is_reflection_symmetric() {
    // <N_e> from |G> equals <N_e> from the reversed chain, state by state.
    let h = hamiltonian(7, 0.15, -0.5);
    let u = Propagator::new(&h).unwrap();
    let psi = u.evolve(&WaveFunction::ground(7).unwrap(), 21.0 / 0.15).unwrap();
    assert!(psi.distance(&psi.reflected()) < 1e-10);
}

#[test]
fn sweep_rejects_bad_grids() {
    let template = LatticeParams::new(2, 0.15, 0.0, 1.0).unwrap();
    assert!(matches!(
        sweep(&template, &[], &[1.0]),
        Err(NumericalError::InvalidGrid(_))
    ));
    assert!(matches!(
        sweep(&template, &[0.0, 0.0], &[1.0]),
        Err(NumericalError::InvalidGrid(_))
    ));
    assert!(matches!(
        sweep(&template, &[0.0], &[]),
        Err(NumericalError::InvalidGrid(_))
    ));
}

#[test]
fn non_normalised_input_is_rejected() {
    let amps = vec![Complex64::new(1.0, 0.0); 4];
    assert!(WaveFunction::from_amplitudes(2, amps).is_err());
}

fn random_state(n: usize, seed: &[f64]) -> WaveFunction {
    let dim = 1 << n;
    let amps = (0..dim)
        .map(|i| Complex64::new(seed[(2 * i) % seed.len()] + 0.01, seed[(2 * i + 1) % seed.len()]))
        .collect();
    WaveFunction::normalized(n, amps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unitary_evolution_invariants(
        n in 1usize..=6,
        rabi in 0.05f64..1.5,
        delta in -1.5f64..0.5,
        t1 in 0.0f64..200.0,
        t2 in 0.0f64..200.0,
        seed in prop::collection::vec(-1.0f64..1.0, 8..32),
    ) {
        let h = hamiltonian(n, rabi, delta);
        let u = Propagator::new(&h).unwrap();
        let psi0 = random_state(n, &seed);
        let a = u.evolve(&psi0, t1).unwrap();
        let ab = u.evolve(&a, t2).unwrap();
        let direct = u.evolve(&psi0, t1 + t2).unwrap();
        prop_assert!((direct.norm() - 1.0).abs() <= 1e-9);
        prop_assert!(ab.distance(&direct) <= 1e-9);
        let e0 = energy_expectation(&h, &psi0).unwrap();
        prop_assert!((energy_expectation(&h, &direct).unwrap() - e0).abs() <= 1e-8);
        let reflected = u.evolve(&psi0.reflected(), t1).unwrap();
        prop_assert!(reflected.distance(&a.reflected()) <= 1e-10);
    }
}
