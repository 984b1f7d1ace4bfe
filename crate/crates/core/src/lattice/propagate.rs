use num_complex::Complex64;

use super::hamiltonian::SparseHamiltonian;
use crate::linalg::{expm_first_column, tridiagonal};
use crate::state::dot;
use crate::{Error, Result, Statevector};

/// Lanczos-based approximation of `exp(−i H τ)|ψ⟩`.
///
/// A step grows the Krylov space until the a-posteriori error
/// `β_{m} |[exp(−iTτ)]_{m−1,0}|` drops below `tol`; if `max_krylov` is
/// reached first the step is split in halves, up to `max_substeps` pieces.
#[derive(Debug, Clone, Copy)]
pub struct KrylovPropagator {
    pub tol: f64,
    pub max_krylov: usize,
    pub max_substeps: usize,
}

impl Default for KrylovPropagator {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_krylov: 40,
            max_substeps: 1024,
        }
    }
}

/// `exp(−i H dt)|ψ⟩` with the given per-step tolerance.
pub fn evolve(h: &SparseHamiltonian, state: &Statevector, dt: f64, tol: f64) -> Result<Statevector> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    KrylovPropagator {
        tol,
        ..Default::default()
    }
    .step(h, state, dt)
}

impl KrylovPropagator {
    pub fn step(&self, h: &SparseHamiltonian, state: &Statevector, dt: f64) -> Result<Statevector> {
        if state.dim() != h.dimension() {
            return Err(Error::DimensionMismatch {
                expected: h.dimension(),
                actual: state.dim(),
            });
        }
        if dt == 0.0 {
            return Ok(state.clone());
        }
        let mut pieces = 1usize;
        loop {
            let tau = dt / pieces as f64;
            let mut psi = state.amplitudes().to_vec();
            let mut ok = true;
            for _ in 0..pieces {
                match self.krylov_step(h, &psi, tau) {
                    Some(next) => psi = next,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Statevector::from_amplitudes(psi);
            }
            pieces *= 2;
            if pieces > self.max_substeps {
                return Err(Error::PropagatorFailure {
                    tol: self.tol,
                    substeps: self.max_substeps,
                });
            }
        }
    }

    fn krylov_step(&self, h: &SparseHamiltonian, psi: &[Complex64], tau: f64) -> Option<Vec<Complex64>> {
        let dim = psi.len();
        let beta0 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if beta0 == 0.0 {
            return Some(psi.to_vec());
        }
        let mut basis = vec![psi.iter().map(|z| z / beta0).collect::<Vec<_>>()];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let max = self.max_krylov.min(dim);
        for j in 0..max {
            let mut w = h.mul_vec(&basis[j]);
            alpha.push(dot(&basis[j], &w).re);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
                }
            }
            let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let coeffs = expm_first_column(&tridiagonal(&alpha, &beta), tau);
            let err = beta0 * b * coeffs[j].norm();
            if err < self.tol || b < 1e-14 {
                let mut out = vec![Complex64::new(0.0, 0.0); dim];
                for (c, v) in coeffs.iter().zip(&basis) {
                    let c = c * beta0;
                    out.iter_mut().zip(v).for_each(|(o, vi)| *o += c * vi);
                }
                return Some(out);
            }
            beta.push(b);
            w.iter_mut().for_each(|z| *z /= b);
            basis.push(w);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::hamiltonian::assemble;
    use crate::lattice::{build_hamiltonian, LatticeModel};
    use crate::linalg::hermitian_eigen;
    use rand::SeedableRng;

    #[test]
    fn zero_step_is_bitwise_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let h = build_hamiltonian(&LatticeModel::new(6, 0.3, 0.4).unwrap()).unwrap();
        let psi = Statevector::random(6, &mut rng);
        let out = evolve(&h, &psi, 0.0, 1e-10).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn two_site_matches_dense_exponential() {
        let h = assemble(2, 1.0, 0.0);
        let dense = h.matrix().to_dense();
        let (vals, vecs) = hermitian_eigen(&dense);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let psi = Statevector::random(2, &mut rng);
        let dt = 0.7;
        let out = evolve(&h, &psi, dt, 1e-12).unwrap();
        for r in 0..4 {
            let mut expect = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                let overlap: Complex64 = (0..4).map(|c| vecs[(c, k)].conj() * psi.amplitudes()[c]).sum();
                expect += vecs[(r, k)] * Complex64::from_polar(1.0, -dt * vals[k]) * overlap;
            }
            assert!((out.amplitudes()[r] - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn unitary_and_energy_conserving() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let h = build_hamiltonian(&LatticeModel::new(8, 0.6, 0.8).unwrap()).unwrap();
        let mut psi = Statevector::random(8, &mut rng);
        let e0 = h.energy(psi.amplitudes());
        for _ in 0..20 {
            psi = evolve(&h, &psi, 0.5, 1e-10).unwrap();
        }
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        assert!(((h.energy(psi.amplitudes()) - e0) / e0).abs() < 1e-8);
    }

    #[test]
    fn tiny_krylov_budget_substeps_or_fails() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let h = build_hamiltonian(&LatticeModel::new(6, 0.6, 0.8).unwrap()).unwrap();
        let psi = Statevector::random(6, &mut rng);
        let tight = KrylovPropagator {
            tol: 1e-10,
            max_krylov: 2,
            max_substeps: 2,
        };
        assert!(matches!(tight.step(&h, &psi, 5.0), Err(Error::PropagatorFailure { .. })));
        let split = KrylovPropagator {
            max_krylov: 8,
            ..Default::default()
        };
        let reference = evolve(&h, &psi, 5.0, 1e-12).unwrap();
        let out = split.step(&h, &psi, 5.0).unwrap();
        assert!((out.inner(&reference).norm() - 1.0).abs() < 1e-9);
    }
}
