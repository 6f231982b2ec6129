//! Many-body basis, excitation counting and the lattice Hamiltonian.
//!
//! Sites are indexed `0..N` from the left end of an open chain. A basis state
//! is stored as an occupation bit pattern: bit `k` set means site `k` holds a
//! Rydberg excitation. The index of a state in every vector and matrix is its
//! bit pattern, so the all-ground state `|G>` is always index 0.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::ModelError;

/// Hard cap for basis enumeration.
pub const MAX_SITES: usize = 24;

/// Largest chain for which a dense `2^N x 2^N` Hamiltonian is built.
pub const MAX_DENSE_SITES: usize = 12;

/// Default interaction exponent (van der Waals).
pub const VAN_DER_WAALS_EXPONENT: u32 = 6;

/// Canonical product state of `N` two-level superatoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct BasisState(u32);

impl BasisState {
    /// The all-ground state `|gg...g>`.
    pub const GROUND: BasisState = BasisState(0);

    pub fn new(bits: u32, n_sites: usize) -> Result<Self, ModelError> {
        check_sites(n_sites, MAX_SITES)?;
        if (bits as u64) >> n_sites != 0 {
            return Err(ModelError::StateOutOfRange { bits, n_sites });
        }
        Ok(BasisState(bits))
    }

    /// Parses a `g`/`e` string such as `"geegeeg"`; the first character is site 0.
    pub fn from_label(label: &str) -> Result<Self, ModelError> {
        let n_sites = label.chars().count();
        check_sites(n_sites, MAX_SITES)?;
        let mut bits = 0u32;
        for (site, c) in label.chars().enumerate() {
            match c {
                'g' | 'G' => {}
                'e' | 'E' => bits |= 1 << site,
                other => return Err(ModelError::BadLabel(other)),
            }
        }
        Ok(BasisState(bits))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_excited(self, site: usize) -> bool {
        (self.0 >> site) & 1 == 1
    }

    /// Total number of Rydberg excitations.
    #[inline]
    pub fn n_e(self) -> u32 {
        self.0.count_ones()
    }

    /// Number of adjacent excited pairs on the open chain.
    #[inline]
    pub fn n_ee(self) -> u32 {
        (self.0 & (self.0 >> 1)).count_ones()
    }

    /// Flips the excitation at `site`.
    #[inline]
    pub fn flipped(self, site: usize) -> BasisState {
        BasisState(self.0 ^ (1 << site))
    }

    /// Mirror image of the chain: site `k` goes to `N-1-k`.
    pub fn reversed(self, n_sites: usize) -> BasisState {
        if n_sites == 0 {
            return self;
        }
        BasisState(self.0.reverse_bits() >> (32 - n_sites))
    }

    pub fn label(self, n_sites: usize) -> String {
        (0..n_sites)
            .map(|k| if self.is_excited(k) { 'e' } else { 'g' })
            .collect()
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

fn check_sites(n_sites: usize, cap: usize) -> Result<(), ModelError> {
    if n_sites == 0 || n_sites > cap {
        Err(ModelError::SitesOutOfRange { n_sites, max: cap })
    } else {
        Ok(())
    }
}

/// All `2^N` basis states in ascending bit order.
pub fn enumerate_basis(n_sites: usize) -> Result<Vec<BasisState>, ModelError> {
    check_sites(n_sites, MAX_SITES)?;
    Ok((0..(1u32 << n_sites)).map(BasisState).collect())
}

/// Rabi frequency of a superatom holding `filling` atoms.
pub fn collective_rabi(single_atom_rabi: f64, filling: u32) -> f64 {
    (filling as f64).sqrt() * single_atom_rabi
}

/// Energy of a product state under the detuning plus nearest-neighbour part.
pub fn unperturbed_energy(state: BasisState, detuning: f64, interaction: f64, n_sites: usize) -> f64 {
    detuning * (state.n_e() as f64 - n_sites as f64 / 2.0) + interaction * state.n_ee() as f64
}

/// Interaction energy of all excited pairs at distance two or more.
pub fn long_range_tail(state: BasisState, interaction: f64, exponent: u32, n_sites: usize) -> f64 {
    let mut tail = 0.0;
    for distance in 2..n_sites {
        let pairs = (state.0 & (state.0 >> distance)).count_ones();
        if pairs > 0 {
            tail += pairs as f64 * interaction / (distance as f64).powi(exponent as i32);
        }
    }
    tail
}

/// Parameters of the driven chain: `N`, `Omega`, `Delta`, `V` and `m`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LatticeParams {
    pub n_sites: usize,
    pub rabi: f64,
    pub detuning: f64,
    pub interaction: f64,
    #[serde(default = "default_exponent")]
    pub exponent: u32,
}

fn default_exponent() -> u32 {
    VAN_DER_WAALS_EXPONENT
}

impl LatticeParams {
    pub fn new(n_sites: usize, rabi: f64, detuning: f64, interaction: f64) -> Result<Self, ModelError> {
        let params = LatticeParams {
            n_sites,
            rabi,
            detuning,
            interaction,
            exponent: VAN_DER_WAALS_EXPONENT,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_exponent(mut self, exponent: u32) -> Result<Self, ModelError> {
        self.exponent = exponent;
        self.validate()?;
        Ok(self)
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        check_sites(self.n_sites, MAX_SITES)?;
        if !(self.interaction > 0.0 && self.interaction.is_finite()) {
            return Err(ModelError::InvalidParameter {
                name: "interaction",
                reason: "must be positive and finite",
            });
        }
        if !self.rabi.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "rabi",
                reason: "must be finite",
            });
        }
        if !self.detuning.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "detuning",
                reason: "must be finite",
            });
        }
        if self.exponent == 0 {
            return Err(ModelError::InvalidParameter {
                name: "exponent",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

/// Real symmetric Hamiltonian in the canonical product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    n_sites: usize,
    matrix: DMatrix<f64>,
}

impl Hamiltonian {
    /// Wraps an arbitrary square matrix. Symmetry is not checked here; the
    /// propagator rejects non-Hermitian input.
    pub fn from_matrix(n_sites: usize, matrix: DMatrix<f64>) -> Result<Self, ModelError> {
        check_sites(n_sites, MAX_DENSE_SITES)?;
        let dim = 1usize << n_sites;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(ModelError::DimensionMismatch {
                expected: dim,
                found: (matrix.nrows(), matrix.ncols()),
            });
        }
        Ok(Hamiltonian { n_sites, matrix })
    }

    #[inline]
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[(row, col)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    /// Exact symmetry check; every element of this model is real.
    pub fn is_hermitian(&self) -> bool {
        self.asymmetry() == 0.0
    }

    /// Largest `|H[a,b] - H[b,a]|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in (a + 1)..n {
                worst = worst.max((self.matrix[(a, b)] - self.matrix[(b, a)]).abs());
            }
        }
        worst
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| a == b || self.matrix[(a, b)] == 0.0))
    }
}

fn dense_dim(params: &LatticeParams) -> Result<usize, ModelError> {
    params.validate()?;
    check_sites(params.n_sites, MAX_DENSE_SITES)?;
    Ok(params.dim())
}

fn fill_laser_coupling(matrix: &mut DMatrix<f64>, params: &LatticeParams) {
    let half_rabi = params.rabi / 2.0;
    for state in 0..params.dim() {
        let state = BasisState(state as u32);
        for site in 0..params.n_sites {
            matrix[(state.index(), state.flipped(site).index())] = half_rabi;
        }
    }
}

/// Detuning plus nearest-neighbour interaction; diagonal.
pub fn build_h0(params: &LatticeParams) -> Result<Hamiltonian, ModelError> {
    let dim = dense_dim(params)?;
    let diag: Vec<f64> = (0..dim)
        .map(|s| {
            unperturbed_energy(
                BasisState(s as u32),
                params.detuning,
                params.interaction,
                params.n_sites,
            )
        })
        .collect();
    Ok(Hamiltonian {
        n_sites: params.n_sites,
        matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
    })
}

/// Laser coupling plus every interaction beyond nearest neighbours.
pub fn build_hprime(params: &LatticeParams) -> Result<Hamiltonian, ModelError> {
    let dim = dense_dim(params)?;
    let mut matrix = DMatrix::zeros(dim, dim);
    fill_laser_coupling(&mut matrix, params);
    for s in 0..dim {
        matrix[(s, s)] = long_range_tail(
            BasisState(s as u32),
            params.interaction,
            params.exponent,
            params.n_sites,
        );
    }
    Ok(Hamiltonian {
        n_sites: params.n_sites,
        matrix,
    })
}

/// Full Hamiltonian with all pair interactions `V / |l-k|^m`.
///
/// Diagonal elements are assembled as `E0 + tail` from the same two terms the
/// split builders use, so `build_h0 + build_hprime` reproduces this matrix
/// bit for bit.
pub fn build_full_hamiltonian(params: &LatticeParams) -> Result<Hamiltonian, ModelError> {
    let dim = dense_dim(params)?;
    let mut matrix = DMatrix::zeros(dim, dim);
    fill_laser_coupling(&mut matrix, params);
    for s in 0..dim {
        let state = BasisState(s as u32);
        let e0 = unperturbed_energy(state, params.detuning, params.interaction, params.n_sites);
        let tail = long_range_tail(state, params.interaction, params.exponent, params.n_sites);
        matrix[(s, s)] = e0 + tail;
    }
    Ok(Hamiltonian {
        n_sites: params.n_sites,
        matrix,
    })
}

/// Diagonal of the full Hamiltonian without building the matrix.
pub fn full_diagonal(params: &LatticeParams) -> Result<Vec<f64>, ModelError> {
    params.validate()?;
    Ok((0..params.dim())
        .map(|s| {
            let state = BasisState(s as u32);
            unperturbed_energy(state, params.detuning, params.interaction, params.n_sites)
                + long_range_tail(state, params.interaction, params.exponent, params.n_sites)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, rabi: f64, detuning: f64) -> LatticeParams {
        LatticeParams::new(n, rabi, detuning, 1.0).unwrap()
    }

    #[test]
    fn basis_enumeration() {
        assert_eq!(enumerate_basis(1).unwrap(), vec![BasisState(0), BasisState(1)]);
        let three = enumerate_basis(3).unwrap();
        assert_eq!(three.len(), 8);
        assert_eq!(three[5].bits(), 0b101);
        assert_eq!(three[5].label(3), "ege");
        assert_eq!(enumerate_basis(8).unwrap().len(), 256);
        assert!(enumerate_basis(0).is_err());
        assert!(enumerate_basis(25).is_err());
    }

    #[test]
    fn counting_examples() {
        assert_eq!(BasisState(0).n_e(), 0);
        let fig = BasisState::from_label("geegeeg").unwrap();
        assert_eq!(fig.bits(), 0b0110110);
        assert_eq!(fig.n_e(), 4);
        assert_eq!(fig.n_ee(), 2);
        assert_eq!(BasisState(0b1111).n_e(), 4);
        assert_eq!(BasisState(0b111).n_ee(), 2);
        assert_eq!(BasisState(0b101).n_ee(), 0);
    }

    #[test]
    fn state_validation() {
        assert!(BasisState::new(0b1000, 3).is_err());
        assert!(BasisState::new(0b111, 3).is_ok());
        assert!(BasisState::from_label("gxg").is_err());
    }

    #[test]
    fn reversal() {
        let s = BasisState::from_label("eegg").unwrap();
        assert_eq!(s.reversed(4).label(4), "ggee");
        assert_eq!(s.reversed(4).reversed(4), s);
    }

    #[test]
    fn unperturbed_energy_examples() {
        let delta = 0.37;
        assert_eq!(unperturbed_energy(BasisState(0), delta, 1.0, 3), -1.5 * delta);
        let eeg = BasisState::from_label("eeg").unwrap();
        let e = unperturbed_energy(eeg, -0.5, 1.0, 3);
        assert!((e - 0.75).abs() < 1e-15);
        assert!((unperturbed_energy(BasisState(0), -0.5, 1.0, 3) - 0.75).abs() < 1e-15);
        let fig = BasisState::from_label("geegeeg").unwrap();
        assert!((unperturbed_energy(fig, delta, 1.0, 7) - (delta / 2.0 + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn single_site_matrix() {
        let h = build_full_hamiltonian(&params(1, 0.3, 0.8)).unwrap();
        assert_eq!(h.entry(0, 0), -0.4);
        assert_eq!(h.entry(1, 1), 0.4);
        assert_eq!(h.entry(0, 1), 0.15);
        assert_eq!(h.entry(1, 0), 0.15);
    }

    #[test]
    fn small_chain_diagonals() {
        let d = 0.3;
        let h = build_full_hamiltonian(&params(2, 0.1, d)).unwrap();
        assert!((h.entry(3, 3) - (d + 1.0)).abs() < 1e-15);
        assert!((h.entry(0, 0) + d).abs() < 1e-15);

        let h = build_full_hamiltonian(&params(3, 0.1, d)).unwrap();
        assert!((h.entry(0b101, 0b101) - (d / 2.0 + 1.0 / 64.0)).abs() < 1e-15);

        let hp = build_hprime(&params(3, 0.1, d)).unwrap();
        assert_eq!(hp.entry(0b101, 0b101), 1.0 / 64.0);
        assert_eq!(hp.entry(0b000, 0b001), 0.05);
    }

    #[test]
    fn exponent_eight() {
        let p = params(3, 0.0, 0.0).with_exponent(8).unwrap();
        let h = build_full_hamiltonian(&p).unwrap();
        assert_eq!(h.entry(0b101, 0b101), 1.0 / 256.0);
    }

    #[test]
    fn split_is_exact() {
        let p = LatticeParams::new(8, 0.173, -0.412, 1.37).unwrap();
        let full = build_full_hamiltonian(&p).unwrap();
        let sum = build_h0(&p).unwrap().into_matrix() + build_hprime(&p).unwrap().into_matrix();
        assert_eq!(&sum, full.matrix());
        assert!(build_h0(&p).unwrap().is_diagonal());
    }

    #[test]
    fn dense_cap() {
        let p = LatticeParams::new(13, 0.1, 0.0, 1.0).unwrap();
        assert!(matches!(
            build_full_hamiltonian(&p),
            Err(ModelError::SitesOutOfRange { .. })
        ));
    }

    #[test]
    fn invalid_params() {
        assert!(LatticeParams::new(4, 0.1, 0.0, 0.0).is_err());
        assert!(LatticeParams::new(4, 0.1, 0.0, -1.0).is_err());
        assert!(LatticeParams::new(0, 0.1, 0.0, 1.0).is_err());
        assert!(params(3, 0.1, 0.0).with_exponent(0).is_err());
    }

    #[test]
    fn collective_rabi_examples() {
        assert_eq!(collective_rabi(0.7, 1), 0.7);
        assert_eq!(collective_rabi(0.7, 4), 1.4);
        assert!((collective_rabi(0.1, 2) - 0.141_421_356_237_309_5).abs() < 1e-15);
    }
}
