//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the library's Hamiltonian builders or
//! propagator: operators are assembled from Kronecker products of 2x2
//! matrices and time evolution uses a fixed-step RK4 integrator.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Single-site operators in the `(|g>, |e>)` basis.
fn sigma_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

fn sigma_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])
}

fn projector_e() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0])
}

/// Embeds single-site operators; site 0 is the rightmost (least significant) factor.
fn embed(n: usize, ops: &[(usize, DMatrix<f64>)]) -> DMatrix<f64> {
    let mut out = DMatrix::from_element(1, 1, 1.0);
    for site in (0..n).rev() {
        let factor = ops
            .iter()
            .find(|(s, _)| *s == site)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| DMatrix::identity(2, 2));
        out = out.kronecker(&factor);
    }
    out
}

/// `Omega/2 sum sigma_x + Delta/2 sum sigma_z + V sum_{l>k} n_k n_l / (l-k)^m`.
pub fn kron_hamiltonian(n: usize, rabi: f64, detuning: f64, interaction: f64, exponent: i32) -> DMatrix<f64> {
    let dim = 1 << n;
    let mut h = DMatrix::zeros(dim, dim);
    for k in 0..n {
        h += embed(n, &[(k, sigma_x())]) * (rabi / 2.0);
        h += embed(n, &[(k, sigma_z())]) * (detuning / 2.0);
        for l in k + 1..n {
            let w = interaction / ((l - k) as f64).powi(exponent);
            h += embed(n, &[(k, projector_e()), (l, projector_e())]) * w;
        }
    }
    h
}

/// `N_e` and `N_ee` by walking the sites one at a time.
pub fn count_by_sites(bits: u32, n: usize) -> (u32, u32) {
    let excited = |i: usize| (bits >> i) & 1 == 1;
    let n_e = (0..n).filter(|&i| excited(i)).count() as u32;
    let n_ee = (0..n.saturating_sub(1))
        .filter(|&i| excited(i) && excited(i + 1))
        .count() as u32;
    (n_e, n_ee)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Configurations of `n` sites with no two adjacent excitations.
pub fn blockade_allowed_count(n: u64) -> u64 {
    (0..=n.div_ceil(2)).map(|k| binomial(n + 1 - k, k)).sum()
}

fn apply(h: &DMatrix<f64>, psi: &DVector<Complex64>) -> DVector<Complex64> {
    // -i H psi
    let hc = h.map(|x| Complex64::new(x, 0.0));
    (hc * psi).map(|z| Complex64::new(z.im, -z.re))
}

/// Fixed-step classical RK4 for `i d psi/dt = H psi`.
pub fn rk4_evolve(h: &DMatrix<f64>, psi0: &DVector<Complex64>, time: f64, steps: usize) -> DVector<Complex64> {
    let dt = time / steps as f64;
    let mut psi = psi0.clone();
    for _ in 0..steps {
        let k1 = apply(h, &psi);
        let k2 = apply(h, &(&psi + &k1 * Complex64::from(dt / 2.0)));
        let k3 = apply(h, &(&psi + &k2 * Complex64::from(dt / 2.0)));
        let k4 = apply(h, &(&psi + &k3 * Complex64::from(dt)));
        psi += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(dt / 6.0);
    }
    psi
}

pub fn ground_vector(n: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(1 << n);
    v[0] = Complex64::new(1.0, 0.0);
    v
}

pub fn max_abs_diff(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Single-atom excited population for resonant-offset Rabi driving from `|g>`.
pub fn rabi_formula(rabi: f64, detuning: f64, t: f64) -> f64 {
    let w = (rabi * rabi + detuning * detuning).sqrt();
    (rabi / w).powi(2) * (w * t / 2.0).sin().powi(2)
}
