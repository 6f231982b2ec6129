//! Unitary propagation from the canonical ground state and detuning sweeps
//! averaged over excitation durations.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::NumericalError;
use crate::lattice::{build_full_hamiltonian, BasisState, Hamiltonian, LatticeParams, MAX_DENSE_SITES};
use crate::spectrum::linspace;

/// Allowed deviation of `||psi||` from one.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Complex amplitudes over the `2^N` canonical basis.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    n_sites: usize,
    amplitudes: DVector<Complex64>,
}

impl WaveFunction {
    /// `|gg...g>`.
    pub fn ground(n_sites: usize) -> Result<Self, NumericalError> {
        Self::basis(n_sites, BasisState::GROUND)
    }

    pub fn basis(n_sites: usize, state: BasisState) -> Result<Self, NumericalError> {
        let state = BasisState::new(state.bits(), n_sites)?;
        if n_sites > MAX_DENSE_SITES {
            return Err(crate::error::ModelError::SitesOutOfRange {
                n_sites,
                max: MAX_DENSE_SITES,
            }
            .into());
        }
        let mut amplitudes = DVector::zeros(1 << n_sites);
        amplitudes[state.index()] = Complex64::new(1.0, 0.0);
        Ok(WaveFunction { n_sites, amplitudes })
    }

    /// Takes ownership of `amplitudes`, which must already be normalised.
    pub fn from_amplitudes(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self, NumericalError> {
        let expected = 1usize << n_sites;
        if amplitudes.len() != expected {
            return Err(NumericalError::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        let wf = WaveFunction {
            n_sites,
            amplitudes: DVector::from_vec(amplitudes),
        };
        let norm = wf.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(NumericalError::NotNormalized(norm));
        }
        Ok(wf)
    }

    /// Normalises `amplitudes` before wrapping them.
    pub fn normalized(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self, NumericalError> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(NumericalError::NotNormalized(norm));
        }
        Self::from_amplitudes(n_sites, amplitudes.into_iter().map(|a| a / norm).collect())
    }

    #[inline]
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, state: BasisState) -> Complex64 {
        self.amplitudes[state.index()]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|a| a.norm_sqr())
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &WaveFunction) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The same state with the chain mirrored.
    pub fn reflected(&self) -> WaveFunction {
        let mut out = DVector::zeros(self.amplitudes.len());
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[BasisState::new(i as u32, self.n_sites)
                .unwrap()
                .reversed(self.n_sites)
                .index()] = *a;
        }
        WaveFunction {
            n_sites: self.n_sites,
            amplitudes: out,
        }
    }

    /// `||self - other||`, ignoring nothing (global phase included).
    pub fn distance(&self, other: &WaveFunction) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }
}

/// Expectation values of the excitation and pair counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub n_e: f64,
    pub n_ee: f64,
}

pub fn observables(state: &WaveFunction) -> Observables {
    let mut n_e = 0.0;
    let mut n_ee = 0.0;
    for (i, p) in state.probabilities().enumerate() {
        let s = BasisState::new(i as u32, state.n_sites).unwrap();
        n_e += p * s.n_e() as f64;
        n_ee += p * s.n_ee() as f64;
    }
    Observables { n_e, n_ee }
}

/// `<psi|H|psi>`.
pub fn energy_expectation(hamiltonian: &Hamiltonian, state: &WaveFunction) -> Result<f64, NumericalError> {
    check_dims(hamiltonian, state)?;
    let h = hamiltonian.matrix();
    let re = DVector::from_iterator(state.amplitudes.len(), state.amplitudes.iter().map(|a| a.re));
    let im = DVector::from_iterator(state.amplitudes.len(), state.amplitudes.iter().map(|a| a.im));
    // H is real symmetric, so cross terms cancel.
    Ok(re.dot(&(h * &re)) + im.dot(&(h * &im)))
}

fn check_dims(hamiltonian: &Hamiltonian, state: &WaveFunction) -> Result<(), NumericalError> {
    if hamiltonian.dim() != state.amplitudes.len() {
        return Err(NumericalError::DimensionMismatch {
            expected: hamiltonian.dim(),
            found: state.amplitudes.len(),
        });
    }
    Ok(())
}

/// `exp(-i H t)` through one symmetric eigendecomposition, reusable for any `t`.
#[derive(Clone, Debug)]
pub struct Propagator {
    n_sites: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl Propagator {
    pub fn new(hamiltonian: &Hamiltonian) -> Result<Self, NumericalError> {
        let asym = hamiltonian.asymmetry();
        if asym != 0.0 {
            return Err(NumericalError::NotHermitian(asym));
        }
        let eig = SymmetricEigen::new(hamiltonian.matrix().clone());
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) || eig.eigenvectors.iter().any(|v| !v.is_finite()) {
            return Err(NumericalError::Eigensolver);
        }
        Ok(Propagator {
            n_sites: hamiltonian.n_sites(),
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `psi(t) = U exp(-i Lambda t) U^T psi(0)`.
    pub fn evolve(&self, initial: &WaveFunction, time: f64) -> Result<WaveFunction, NumericalError> {
        let dim = self.eigenvalues.len();
        if initial.amplitudes.len() != dim {
            return Err(NumericalError::DimensionMismatch {
                expected: dim,
                found: initial.amplitudes.len(),
            });
        }
        let norm0 = initial.norm();
        if (norm0 - 1.0).abs() > NORM_TOLERANCE {
            return Err(NumericalError::NotNormalized(norm0));
        }
        let u = &self.eigenvectors;
        let re = DVector::from_iterator(dim, initial.amplitudes.iter().map(|a| a.re));
        let im = DVector::from_iterator(dim, initial.amplitudes.iter().map(|a| a.im));
        let c_re = u.tr_mul(&re);
        let c_im = u.tr_mul(&im);
        let mut r_re = DVector::zeros(dim);
        let mut r_im = DVector::zeros(dim);
        for j in 0..dim {
            let (s, c) = (self.eigenvalues[j] * time).sin_cos();
            // (a + ib)(cos - i sin)
            r_re[j] = c_re[j] * c + c_im[j] * s;
            r_im[j] = c_im[j] * c - c_re[j] * s;
        }
        let out_re = u * r_re;
        let out_im = u * r_im;
        let amplitudes = DVector::from_iterator(
            dim,
            out_re.iter().zip(out_im.iter()).map(|(&a, &b)| Complex64::new(a, b)),
        );
        let out = WaveFunction {
            n_sites: self.n_sites,
            amplitudes,
        };
        let drift = (out.norm() - norm0).abs();
        if drift > NORM_TOLERANCE {
            return Err(NumericalError::NormDrift(drift));
        }
        Ok(out)
    }
}

/// Evolves `initial` for `duration` under a time-independent Hamiltonian.
pub fn propagate(
    hamiltonian: &Hamiltonian,
    initial: &WaveFunction,
    duration: f64,
) -> Result<WaveFunction, NumericalError> {
    check_dims(hamiltonian, initial)?;
    Propagator::new(hamiltonian)?.evolve(initial, duration)
}

/// Excitation durations, in units of `1/Omega`.
pub fn default_cycle_times() -> Vec<f64> {
    linspace(15.0, 30.0, 64)
}

/// The five durations drawn as individual traces in the sweep figure.
pub fn thin_line_cycle_times() -> Vec<f64> {
    vec![15.0, 18.0, 21.0, 24.0, 27.0]
}

/// `Delta/V` grid for sweep reproduction: `[-1.1, 0.35]`, 581 points.
pub fn default_detuning_grid() -> Vec<f64> {
    linspace(-1.1, 0.35, 581)
}

/// Final-time observables over a detuning grid and a set of durations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub n_sites: usize,
    /// `Delta/V` values.
    pub detuning_grid: Vec<f64>,
    /// Durations in units of `1/Omega`.
    pub cycle_times: Vec<f64>,
    /// `[grid][time]`.
    pub ne_per_t: Vec<Vec<f64>>,
    pub nee_per_t: Vec<Vec<f64>>,
    pub ne_avg: Vec<f64>,
    pub nee_avg: Vec<f64>,
}

impl SweepResult {
    /// Keeps the listed duration columns and recomputes the averages over them.
    pub fn select_times(&self, indices: &[usize]) -> SweepResult {
        let pick = |rows: &[Vec<f64>]| -> Vec<Vec<f64>> {
            rows.iter().map(|r| indices.iter().map(|&i| r[i]).collect()).collect()
        };
        let ne_per_t = pick(&self.ne_per_t);
        let nee_per_t = pick(&self.nee_per_t);
        SweepResult {
            n_sites: self.n_sites,
            detuning_grid: self.detuning_grid.clone(),
            cycle_times: indices.iter().map(|&i| self.cycle_times[i]).collect(),
            ne_avg: ne_per_t.iter().map(|r| mean(r)).collect(),
            nee_avg: nee_per_t.iter().map(|r| mean(r)).collect(),
            ne_per_t,
            nee_per_t,
        }
    }
}

pub(crate) fn check_monotone(grid: &[f64]) -> bool {
    if grid.iter().any(|x| !x.is_finite()) {
        return false;
    }
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    increasing || decreasing
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Propagates `|G>` for every `(Delta, T)` pair and records the observables.
///
/// `detuning_grid` holds `Delta/V`; `cycle_times` are in units of `1/Omega`.
/// Grid points are evaluated in parallel and assembled in grid order.
pub fn sweep(
    template: &LatticeParams,
    detuning_grid: &[f64],
    cycle_times: &[f64],
) -> Result<SweepResult, NumericalError> {
    template.validate()?;
    if detuning_grid.is_empty() {
        return Err(NumericalError::InvalidGrid("empty detuning grid"));
    }
    if cycle_times.is_empty() {
        return Err(NumericalError::InvalidGrid("no cycle times"));
    }
    if !check_monotone(detuning_grid) {
        return Err(NumericalError::InvalidGrid("detuning grid must be strictly monotone"));
    }
    if cycle_times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(NumericalError::InvalidGrid(
            "cycle times must be finite and non-negative",
        ));
    }
    if !(template.rabi > 0.0) {
        return Err(NumericalError::InvalidGrid(
            "cycle times are in units of 1/Omega, so Omega must be positive",
        ));
    }
    let v = template.interaction;
    let ground = WaveFunction::ground(template.n_sites)?;

    let rows = detuning_grid
        .par_iter()
        .map(|&ratio| {
            let at = |e: NumericalError| NumericalError::AtDetuning {
                ratio,
                source: Box::new(e),
            };
            let h = build_full_hamiltonian(&template.with_detuning(ratio * v)).map_err(|e| at(e.into()))?;
            let propagator = Propagator::new(&h).map_err(at)?;
            cycle_times
                .iter()
                .map(|&t| {
                    propagator
                        .evolve(&ground, t / template.rabi)
                        .map(|psi| observables(&psi))
                        .map_err(|e| NumericalError::AtSweepPoint {
                            ratio,
                            time: t,
                            source: Box::new(e),
                        })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let ne_per_t: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|o| o.n_e).collect()).collect();
    let nee_per_t: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|o| o.n_ee).collect()).collect();
    let ne_avg = ne_per_t.iter().map(|r| mean(r)).collect();
    let nee_avg = nee_per_t.iter().map(|r| mean(r)).collect();
    Ok(SweepResult {
        n_sites: template.n_sites,
        detuning_grid: detuning_grid.to_vec(),
        cycle_times: cycle_times.to_vec(),
        ne_per_t,
        nee_per_t,
        ne_avg,
        nee_avg,
    })
}
