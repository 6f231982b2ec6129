//! Laser-driven excitation dynamics of a one-dimensional lattice of Rydberg
//! superatoms and recovery of the van der Waals coefficient from the
//! positions of the anti-blockade resonances.
//!
//! The physics works in reduced units with the nearest-neighbour
//! interaction `V = 1`; [`units`] converts to laboratory quantities.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod extraction;
pub mod io;
pub mod lattice;
pub mod spectrum;
pub mod units;

pub use dynamics::{observables, propagate, sweep, Observables, Propagator, SweepResult, WaveFunction};
pub use error::{DomainError, ExtractionError, ModelError, NumericalError, PipelineError};
pub use extraction::{
    assign_kappas, detect_peaks, extract_c6_absolute, extract_c6_relative, identify_kappa, round_trip, Observable,
    Peak, PeakOptions, PeakSet,
};
pub use lattice::{
    build_full_hamiltonian, build_h0, build_hprime, collective_rabi, enumerate_basis, unperturbed_energy, BasisState,
    Hamiltonian, LatticeParams,
};
pub use spectrum::{degeneracy_classes, resonance_detuning, scan_spectrum, DegeneracyClass, EnergyGroup, SpectrumScan};
