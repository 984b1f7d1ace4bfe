use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fock::occupied;
use crate::linalg::hermitian_eigenvalues;
use crate::{Error, Result, Statevector};

/// Largest block (in sites) for which an explicit reduced density matrix is
/// formed: `2^10 × 2^10` complex entries.
pub const DEFAULT_MAX_BLOCK_QUBITS: usize = 10;

/// `⟨ξ_n†ξ_n⟩` for every site.
pub fn density(state: &Statevector) -> Vec<f64> {
    let n = state.qubits();
    let mut d = vec![0.0; n];
    for (b, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (site, slot) in d.iter_mut().enumerate() {
            if occupied(b, site) {
                *slot += p;
            }
        }
    }
    d
}

/// Site-resolved density above the vacuum.
pub fn excess_density(state: &Statevector, vacuum: &Statevector) -> Result<Vec<f64>> {
    if state.dim() != vacuum.dim() {
        return Err(Error::DimensionMismatch {
            expected: vacuum.dim(),
            actual: state.dim(),
        });
    }
    Ok(density(state)
        .into_iter()
        .zip(density(vacuum))
        .map(|(a, b)| a - b)
        .collect())
}

fn check_cut(state: &Statevector, cut: usize, block: usize, cap: usize) -> Result<()> {
    let n = state.qubits();
    if cut == 0 || cut >= n {
        return Err(Error::InvalidArgument(format!("cut {cut} outside 1..={}", n - 1)));
    }
    if block > cap {
        return Err(Error::InvalidArgument(format!(
            "block of {block} sites exceeds the reduced-density-matrix cap of {cap}"
        )));
    }
    Ok(())
}

/// `Tr_{sites ≥ cut} |ψ⟩⟨ψ|` on sites `0..cut`.
///
/// Sites `0..cut` are the low bits of the basis index, so amplitude
/// `ψ[l + 2^cut r]` pairs left configuration `l` with right configuration `r`.
pub fn reduced_density_matrix(state: &Statevector, cut: usize, max_block_qubits: usize) -> Result<DMatrix<Complex64>> {
    check_cut(state, cut, cut, max_block_qubits)?;
    let left = 1usize << cut;
    let right = state.dim() >> cut;
    let psi = state.amplitudes();
    let mut rho = DMatrix::zeros(left, left);
    for r in 0..right {
        let row = &psi[r * left..(r + 1) * left];
        for i in 0..left {
            if row[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..left {
                rho[(i, j)] += row[i] * row[j].conj();
            }
        }
    }
    Ok(rho)
}

/// `Tr_{sites < cut} |ψ⟩⟨ψ|` on sites `cut..N`.
pub fn reduced_density_matrix_right(
    state: &Statevector,
    cut: usize,
    max_block_qubits: usize,
) -> Result<DMatrix<Complex64>> {
    check_cut(state, cut, state.qubits() - cut, max_block_qubits)?;
    let left = 1usize << cut;
    let right = state.dim() >> cut;
    let psi = state.amplitudes();
    let mut rho = DMatrix::zeros(right, right);
    for l in 0..left {
        for i in 0..right {
            let a = psi[l + i * left];
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..right {
                rho[(i, j)] += a * psi[l + j * left].conj();
            }
        }
    }
    Ok(rho)
}

/// `−Tr ρ ln ρ`; eigenvalues below `1e-14` contribute nothing.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> Result<f64> {
    let trace: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::BadTrace(trace));
    }
    Ok(hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&p| p > 1e-14)
        .map(|p| -p * p.ln())
        .sum())
}

/// Bipartite entropy `S_cut`, computed from whichever block is smaller.
pub fn entanglement_entropy(state: &Statevector, cut: usize) -> Result<f64> {
    let n = state.qubits();
    let rho = if cut <= n - cut {
        reduced_density_matrix(state, cut, n)?
    } else {
        reduced_density_matrix_right(state, cut, n)?
    };
    von_neumann_entropy(&rho)
}

/// `S_cut(state) − S_cut(vacuum)`.
pub fn excess_entropy(state: &Statevector, vacuum: &Statevector, cut: usize) -> Result<f64> {
    if state.dim() != vacuum.dim() {
        return Err(Error::DimensionMismatch {
            expected: vacuum.dim(),
            actual: state.dim(),
        });
    }
    Ok(entanglement_entropy(state, cut)? - entanglement_entropy(vacuum, cut)?)
}

/// `S_n` for every cut `n = 1..N−1` (index `n − 1`).
pub fn entropy_profile(state: &Statevector) -> Result<Vec<f64>> {
    (1..state.qubits())
        .map(|cut| entanglement_entropy(state, cut))
        .collect()
}
