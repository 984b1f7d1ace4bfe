//! Jordan–Wigner fermion operators on bit-encoded Fock states.
//!
//! Site `n` is bit `n` of the basis index; `ξ_n = (∏_{j<n} Z_j) σ⁻_n`, so the
//! sign picked up by `ξ_n` or `ξ_n†` is `(-1)^{#occupied sites below n}`.

use num_complex::Complex64;

use super::wavepacket::Species;
use crate::{Error, Result, Statevector};

#[inline]
pub fn occupied(state: usize, site: usize) -> bool {
    state >> site & 1 == 1
}

/// Jordan–Wigner string sign for an operator acting on `site`.
#[inline]
pub fn jw_sign(state: usize, site: usize) -> f64 {
    if (state & ((1usize << site) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `ξ_site† |ψ⟩`.
pub fn apply_creation(state: &Statevector, site: usize) -> Statevector {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); state.qubits()];
    coeffs[site] = Complex64::new(1.0, 0.0);
    apply_linear(state, &coeffs, Species::Fermion)
}

/// `ξ_site |ψ⟩`.
pub fn apply_annihilation(state: &Statevector, site: usize) -> Statevector {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); state.qubits()];
    coeffs[site] = Complex64::new(1.0, 0.0);
    apply_linear(state, &coeffs, Species::Antifermion)
}

/// Applies `Σ_n φ̃_n ξ_n†` (fermion) or `Σ_n φ̃_n ξ_n` (antifermion). The
/// result is not renormalized.
pub fn apply_wavepacket_operator(
    state: &Statevector,
    coeffs: &[Complex64],
    species: Species,
) -> Result<Statevector> {
    if coeffs.len() != state.qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.qubits(),
            actual: coeffs.len(),
        });
    }
    let out = apply_linear(state, coeffs, species);
    let norm = out.norm();
    if norm < 1e-8 {
        return Err(Error::Annihilated(norm));
    }
    Ok(out)
}

fn apply_linear(state: &Statevector, coeffs: &[Complex64], species: Species) -> Statevector {
    let amps = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (b, &a) in amps.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (n, &c) in coeffs.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let filled = occupied(b, n);
            match species {
                Species::Fermion if !filled => out[b | 1 << n] += c * jw_sign(b, n) * a,
                Species::Antifermion if filled => out[b & !(1 << n)] += c * jw_sign(b, n) * a,
                _ => {}
            }
        }
    }
    Statevector::from_amplitudes(out).expect("dimension preserved")
}
