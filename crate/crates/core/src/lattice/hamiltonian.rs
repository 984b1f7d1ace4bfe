use num_complex::Complex64;

use super::fock::occupied;
use super::model::LatticeModel;
use crate::linalg::CsrMatrix;
use crate::Result;

/// Jordan–Wigner image of the staggered Thirring Hamiltonian with open
/// boundaries, stored as a CSR matrix over the full `2^N` Fock space.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    sites: usize,
    matrix: CsrMatrix,
}

/// Builds
///
/// `H = Σ_n (i/2)(ξ_{n+1}†ξ_n − ξ_n†ξ_{n+1}) + Σ_n (−1)^n m ξ_n†ξ_n + Σ_n g ξ_n†ξ_n ξ_{n+1}†ξ_{n+1}`
///
/// with two-site sums over `n = 0..N−2`.
pub fn build_hamiltonian(model: &LatticeModel) -> Result<SparseHamiltonian> {
    Ok(assemble(model.sites(), model.mass(), model.coupling()))
}

/// Unchecked assembly; also used for the two-site checks in tests.
pub(crate) fn assemble(sites: usize, mass: f64, coupling: f64) -> SparseHamiltonian {
    let dim = 1usize << sites;
    let half_i = Complex64::new(0.0, 0.5);
    let rows = (0..dim)
        .map(|r| {
            let mut row = Vec::with_capacity(sites + 1);
            let mut diag = 0.0;
            for n in 0..sites {
                if occupied(r, n) {
                    diag += if n % 2 == 0 { mass } else { -mass };
                }
            }
            for n in 0..sites.saturating_sub(1) {
                let (here, right) = (occupied(r, n), occupied(r, n + 1));
                if here && right {
                    diag += coupling;
                }
                // Nearest-neighbour hops carry no Jordan–Wigner sign.
                let col = r ^ (0b11 << n);
                if right && !here {
                    // ξ_{n+1}†ξ_n moved a particle from n to n+1
                    row.push((col, half_i));
                } else if here && !right {
                    row.push((col, -half_i));
                }
            }
            row.push((r, Complex64::new(diag, 0.0)));
            row
        })
        .collect();
    SparseHamiltonian {
        sites,
        matrix: CsrMatrix::from_rows(rows),
    }
}

impl SparseHamiltonian {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matrix.apply(x, y)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(x)
    }

    /// `⟨ψ|H|ψ⟩` (real part; the imaginary part vanishes for Hermitian `H`).
    pub fn energy(&self, psi: &[Complex64]) -> f64 {
        self.matrix.expectation(psi).re
    }

    /// Restriction to a fixed-particle-number sector.
    pub fn restrict(&self, sector: &HalfFillingSector) -> CsrMatrix {
        let rows = sector
            .basis
            .iter()
            .map(|&b| {
                self.matrix
                    .row(b)
                    .map(|(c, v)| (sector.index[c], v))
                    .collect()
            })
            .collect();
        CsrMatrix::from_rows(rows)
    }
}

/// Total number operator `N̂ = Σ_n ξ_n†ξ_n` applied to `psi`.
pub fn number_operator(psi: &[Complex64]) -> Vec<Complex64> {
    psi.iter()
        .enumerate()
        .map(|(b, a)| a * b.count_ones() as f64)
        .collect()
}

/// Basis states with exactly `N/2` occupied sites.
#[derive(Debug, Clone)]
pub struct HalfFillingSector {
    sites: usize,
    basis: Vec<usize>,
    index: Vec<usize>,
}

impl HalfFillingSector {
    pub fn new(sites: usize) -> Self {
        let filling = (sites / 2) as u32;
        let dim = 1usize << sites;
        let basis: Vec<usize> = (0..dim).filter(|b| b.count_ones() == filling).collect();
        let mut index = vec![usize::MAX; dim];
        for (i, &b) in basis.iter().enumerate() {
            index[b] = i;
        }
        Self { sites, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Lifts sector amplitudes into the full `2^N` space.
    pub fn embed(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut full = vec![Complex64::new(0.0, 0.0); 1 << self.sites];
        for (&b, &a) in self.basis.iter().zip(amps) {
            full[b] = a;
        }
        full
    }
}
