use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::model::LatticeModel;
use crate::linalg::hermitian_eigen;
use crate::{Error, Result};

/// Resolution of the zero-padded Fourier scan used for momentum labels.
const MOMENTUM_SCAN_POINTS: usize = 2048;

/// Quadratic single-particle matrix `h` with `H₀ = Σ h_{ab} ξ_a†ξ_b`: hopping
/// `h_{n+1,n} = i/2`, `h_{n,n+1} = −i/2` and staggered mass `h_{nn} = (−1)^n m`.
pub fn single_particle_matrix(sites: usize, mass: f64) -> DMatrix<Complex64> {
    let mut h = DMatrix::zeros(sites, sites);
    for n in 0..sites {
        h[(n, n)] = Complex64::new(if n % 2 == 0 { mass } else { -mass }, 0.0);
        if n + 1 < sites {
            h[(n + 1, n)] = Complex64::new(0.0, 0.5);
            h[(n, n + 1)] = Complex64::new(0.0, -0.5);
        }
    }
    h
}

/// Eigenmodes of the free (g-independent) part of the Hamiltonian.
///
/// Positive-energy modes are fermion modes; negative-energy modes, once
/// emptied, are antifermion modes. Every mode carries a non-negative momentum
/// magnitude in `[0, π/2]` read off the dominant Fourier component of its
/// dominant sublattice (even for fermions, odd for antifermions).
#[derive(Debug, Clone)]
pub struct SingleParticleModes {
    hopping: DMatrix<Complex64>,
    energies: Vec<f64>,
    vectors: DMatrix<Complex64>,
    negative: usize,
    momenta: Vec<f64>,
}

pub fn free_modes(model: &LatticeModel) -> Result<SingleParticleModes> {
    if model.mass() <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "free modes need a positive mass, got {}",
            model.mass()
        )));
    }
    SingleParticleModes::from_matrix(single_particle_matrix(model.sites(), model.mass()))
}

impl SingleParticleModes {
    pub(crate) fn from_matrix(hopping: DMatrix<Complex64>) -> Result<Self> {
        let (energies, vectors) = hermitian_eigen(&hopping);
        if let Some(e) = energies.iter().find(|e| e.abs() < 1e-10) {
            return Err(Error::ZeroMode(e.abs()));
        }
        let negative = energies.iter().filter(|&&e| e < 0.0).count();
        let momenta = (0..energies.len())
            .map(|j| {
                let parity = usize::from(energies[j] < 0.0);
                let w = oriented_vector(&vectors, j, energies[j]);
                dominant_momentum(&w, parity)
            })
            .collect();
        Ok(Self {
            hopping,
            energies,
            vectors,
            negative,
            momenta,
        })
    }

    pub fn sites(&self) -> usize {
        self.energies.len()
    }

    pub fn hopping_matrix(&self) -> &DMatrix<Complex64> {
        &self.hopping
    }

    /// Ascending single-particle energies.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Orthonormal eigenvectors as columns, ordered like [`Self::energies`].
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// Number of negative-energy modes; modes `0..negative_count()` are the
    /// filled Dirac sea.
    pub fn negative_count(&self) -> usize {
        self.negative
    }

    pub fn momentum_magnitudes(&self) -> &[f64] {
        &self.momenta
    }

    pub fn negative_modes(&self) -> std::ops::Range<usize> {
        0..self.negative
    }

    pub fn positive_modes(&self) -> std::ops::Range<usize> {
        self.negative..self.energies.len()
    }

    /// Sum of negative single-particle energies (free Dirac-sea energy).
    pub fn sea_energy(&self) -> f64 {
        self.energies[..self.negative].iter().sum()
    }

    /// Coefficient vector of mode `j` as it appears in a wave-packet operator:
    /// `v_j` for fermion modes (`ξ†` coefficients) and `conj(v_j)` for
    /// antifermion modes (`ξ` coefficients).
    pub fn operator_vector(&self, j: usize) -> DVector<Complex64> {
        oriented_vector(&self.vectors, j, self.energies[j])
    }

    /// Projector `Σ_{E_j<0} v_j v_j†` onto the Dirac sea.
    pub fn sea_projector(&self) -> DMatrix<Complex64> {
        let n = self.sites();
        let mut p = DMatrix::zeros(n, n);
        for j in self.negative_modes() {
            let v = self.vectors.column(j);
            p += v * v.adjoint();
        }
        p
    }
}

fn oriented_vector(vectors: &DMatrix<Complex64>, j: usize, energy: f64) -> DVector<Complex64> {
    let v = vectors.column(j).into_owned();
    if energy < 0.0 {
        v.map(|z| z.conj())
    } else {
        v
    }
}

/// Fourier amplitude of `w` restricted to sites of the given parity.
pub(crate) fn sublattice_amplitude(w: &DVector<Complex64>, parity: usize, k: f64) -> Complex64 {
    (parity..w.len())
        .step_by(2)
        .map(|n| w[n] * Complex64::from_polar(1.0, -k * n as f64))
        .sum()
}

fn dominant_momentum(w: &DVector<Complex64>, parity: usize) -> f64 {
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=MOMENTUM_SCAN_POINTS {
        let k = FRAC_PI_2 * i as f64 / MOMENTUM_SCAN_POINTS as f64;
        let score = sublattice_amplitude(w, parity, k)
            .norm_sqr()
            .max(sublattice_amplitude(w, parity, -k).norm_sqr());
        if score > best.1 {
            best = (k, score);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_massless_spectrum() {
        let vals = crate::linalg::hermitian_eigenvalues(&single_particle_matrix(2, 0.0));
        assert!((vals[0] + 0.5).abs() < 1e-14);
        assert!((vals[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn two_site_massive_spectrum() {
        let modes = SingleParticleModes::from_matrix(single_particle_matrix(2, 1.0)).unwrap();
        let r = 5f64.sqrt() / 2.0;
        assert!((modes.energies()[0] + r).abs() < 1e-14);
        assert!((modes.energies()[1] - r).abs() < 1e-14);
    }

    #[test]
    fn particle_hole_symmetric_spectrum() {
        let modes = free_modes(&LatticeModel::new(8, 0.5, 0.3).unwrap()).unwrap();
        assert_eq!(modes.negative_count(), 4);
        assert_eq!(modes.positive_modes().len(), 4);
        let e = modes.energies();
        for j in 0..8 {
            assert!((e[j] + e[7 - j]).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvectors_unitary() {
        let modes = free_modes(&LatticeModel::new(12, 0.3, 0.0).unwrap()).unwrap();
        let v = modes.vectors();
        let err = (v.adjoint() * v - DMatrix::<Complex64>::identity(12, 12)).norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn momenta_in_reduced_zone_and_rise_with_energy() {
        let modes = free_modes(&LatticeModel::new(12, 0.4, 0.0).unwrap()).unwrap();
        let p = modes.momentum_magnitudes();
        assert!(p.iter().all(|&k| (0.0..=FRAC_PI_2).contains(&k)));
        // |E| = sqrt(sin²k + m²) grows with |k| on both branches
        let pos: Vec<f64> = modes.positive_modes().map(|j| p[j]).collect();
        assert!(pos.windows(2).all(|w| w[0] <= w[1] + 1e-9), "{pos:?}");
    }

    #[test]
    fn zero_mode_is_rejected() {
        let h = DMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, 0.0); 4]);
        assert!(matches!(SingleParticleModes::from_matrix(h), Err(Error::ZeroMode(_))));
    }

    #[test]
    fn massless_rejected() {
        assert!(free_modes(&LatticeModel::new(6, 0.0, 0.0).unwrap()).is_err());
    }
}
