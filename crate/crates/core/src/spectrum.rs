//! Resonance conditions, degeneracy structure and eigenvalue scans versus
//! the detuning-to-interaction ratio.

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DomainError, ModelError, NumericalError};
use crate::lattice::{build_full_hamiltonian, unperturbed_energy, BasisState, LatticeParams, MAX_DENSE_SITES};

/// Largest chain accepted by [`degeneracy_classes`].
pub const MAX_ENUMERATION_SITES: usize = 16;

/// Relative tolerance (in units of `V`) for grouping unperturbed energies.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Detuning at which `|G>` is resonant with states of `N_ee/N_e = (kappa-1)/kappa`.
pub fn resonance_detuning(kappa: u32, interaction: f64) -> Result<f64, DomainError> {
    if kappa < 2 {
        return Err(DomainError::KappaBelowTwo(kappa));
    }
    if !(interaction > 0.0) {
        return Err(DomainError::NotPositive {
            name: "interaction",
            value: interaction,
        });
    }
    Ok(interaction * (-1.0 + 1.0 / kappa as f64))
}

/// Accumulation point of the resonance series as `kappa -> infinity`.
pub fn resonance_limit(interaction: f64) -> f64 {
    -interaction
}

/// Product states sharing one `(N_e, N_ee)` pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyClass {
    pub n_e: u32,
    pub n_ee: u32,
    pub members: Vec<BasisState>,
    pub energy: f64,
}

/// Classes whose unperturbed energies coincide.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyGroup {
    pub energy: f64,
    pub classes: Vec<DegeneracyClass>,
}

impl EnergyGroup {
    pub fn contains(&self, state: BasisState) -> bool {
        self.classes
            .iter()
            .any(|c| c.n_e == state.n_e() && c.n_ee == state.n_ee())
    }

    pub fn size(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }

    pub fn class(&self, n_e: u32, n_ee: u32) -> Option<&DegeneracyClass> {
        self.classes.iter().find(|c| c.n_e == n_e && c.n_ee == n_ee)
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        self.classes.iter().flat_map(|c| c.members.iter().copied())
    }
}

/// Groups every product state by its unperturbed energy, ascending.
pub fn degeneracy_classes(n_sites: usize, detuning: f64, interaction: f64) -> Result<Vec<EnergyGroup>, ModelError> {
    if n_sites == 0 || n_sites > MAX_ENUMERATION_SITES {
        return Err(ModelError::SitesOutOfRange {
            n_sites,
            max: MAX_ENUMERATION_SITES,
        });
    }
    // (n_e, n_ee) is at most (N, N-1), so a dense table indexes classes.
    let width = n_sites + 1;
    let mut table: Vec<Vec<BasisState>> = vec![Vec::new(); width * width];
    for bits in 0..(1u32 << n_sites) {
        let state = BasisState::new(bits, n_sites)?;
        table[state.n_e() as usize * width + state.n_ee() as usize].push(state);
    }
    let mut classes: Vec<DegeneracyClass> = table
        .into_iter()
        .enumerate()
        .filter(|(_, members)| !members.is_empty())
        .map(|(slot, members)| {
            let energy = unperturbed_energy(members[0], detuning, interaction, n_sites);
            DegeneracyClass {
                n_e: (slot / width) as u32,
                n_ee: (slot % width) as u32,
                members,
                energy,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.n_e.cmp(&b.n_e))
            .then(a.n_ee.cmp(&b.n_ee))
    });

    let tolerance = DEGENERACY_TOLERANCE * interaction.abs();
    let mut groups: Vec<EnergyGroup> = Vec::new();
    for class in classes {
        match groups.last_mut() {
            Some(group) if (class.energy - group.classes[0].energy).abs() <= tolerance => group.classes.push(class),
            _ => groups.push(EnergyGroup {
                energy: class.energy,
                classes: vec![class],
            }),
        }
    }
    Ok(groups)
}

/// The group holding the canonical ground state.
pub fn ground_group(groups: &[EnergyGroup]) -> Option<&EnergyGroup> {
    groups.iter().find(|g| g.contains(BasisState::GROUND))
}

/// Sorted eigenvalues of the full Hamiltonian over a grid of `Delta/V`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumScan {
    pub n_sites: usize,
    pub ratio_grid: Vec<f64>,
    /// Per grid point, eigenvalues in units of `V`, ascending.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Unperturbed energy of `|G>` in units of `V`.
    pub ground_line: Vec<f64>,
}

/// `count` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { max } else { min + step * i as f64 })
                .collect()
        }
    }
}

/// Grid used to reproduce the spectrum figure: `[-1.3, 0.3]`, 801 points.
pub fn default_ratio_grid() -> Vec<f64> {
    linspace(-1.3, 0.3, 801)
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn sorted_eigenvalues(params: &LatticeParams) -> Result<Vec<f64>, NumericalError> {
    let h = build_full_hamiltonian(params)?;
    let eig = SymmetricEigen::new(h.into_matrix());
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(NumericalError::Eigensolver);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Diagonalises the full Hamiltonian at each `Delta/V` in `ratio_grid`.
///
/// The detuning in `template` is ignored; `Delta = ratio * V`.
pub fn scan_spectrum(template: &LatticeParams, ratio_grid: &[f64]) -> Result<SpectrumScan, NumericalError> {
    template.validate()?;
    if template.n_sites > MAX_DENSE_SITES {
        return Err(ModelError::SitesOutOfRange {
            n_sites: template.n_sites,
            max: MAX_DENSE_SITES,
        }
        .into());
    }
    if ratio_grid.iter().any(|r| !r.is_finite()) {
        return Err(NumericalError::InvalidGrid("non-finite ratio"));
    }
    let v = template.interaction;
    let eigenvalues = ratio_grid
        .par_iter()
        .map(|&ratio| {
            let params = template.with_detuning(ratio * v);
            sorted_eigenvalues(&params)
                .map(|vals| vals.into_iter().map(|e| e / v).collect::<Vec<_>>())
                .map_err(|e| NumericalError::AtDetuning {
                    ratio,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = template.n_sites;
    let ground_line = ratio_grid
        .iter()
        .map(|&ratio| unperturbed_energy(BasisState::GROUND, ratio * v, v, n) / v)
        .collect();
    Ok(SpectrumScan {
        n_sites: n,
        ratio_grid: ratio_grid.to_vec(),
        eigenvalues,
        ground_line,
    })
}
