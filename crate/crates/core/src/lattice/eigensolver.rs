//! Restarted Lanczos with full reorthogonalization for the lowest eigenpair
//! of a Hermitian operator given only through its action.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use super::hamiltonian::{HalfFillingSector, SparseHamiltonian};
use crate::linalg::{symmetric_eigen, tridiagonal};
use crate::state::dot;
use crate::{Error, Result, Statevector};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Krylov dimension per restart cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Target for `‖H x − E x‖`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 120,
            max_restarts: 50,
            tol: 1e-9,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Lowest eigenpair of `op` on the orthogonal complement of `deflate`.
pub fn lanczos_lowest<F>(op: F, dim: usize, deflate: &[&[Complex64]], opts: &LanczosOptions) -> Result<EigenPair>
where
    F: Fn(&[Complex64], &mut [Complex64]),
{
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    orthogonalize(&mut start, deflate);
    let mut x = normalized(start).ok_or_else(|| Error::InvalidArgument("empty Krylov start".into()))?;

    let mut hx = vec![Complex64::new(0.0, 0.0); dim];
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut value;
    for _ in 0..opts.max_restarts {
        let m = opts.krylov_dim.min(dim - deflate.len()).max(1);
        let mut basis: Vec<Vec<Complex64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            iterations += 1;
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            op(&basis[j], &mut w);
            alpha.push(dot(&basis[j], &w).re);
            // two passes of classical Gram–Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
                }
                orthogonalize(&mut w, deflate);
            }
            let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if j + 1 == m || b < 1e-13 {
                break;
            }
            beta.push(b);
            w.iter_mut().for_each(|z| *z /= b);
            basis.push(w);
        }
        let k = alpha.len();
        let (_, vecs) = symmetric_eigen(&tridiagonal(&alpha, &beta[..k - 1]));
        let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
        for (i, b) in basis.iter().enumerate().take(k) {
            let c = vecs[(i, 0)];
            ritz.iter_mut().zip(b).for_each(|(r, bi)| *r += c * bi);
        }
        orthogonalize(&mut ritz, deflate);
        x = normalized(ritz).ok_or_else(|| Error::InvalidArgument("Ritz vector vanished".into()))?;
        op(&x, &mut hx);
        value = dot(&x, &hx).re;
        residual = hx
            .iter()
            .zip(&x)
            .map(|(h, v)| (h - value * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual < opts.tol {
            return Ok(EigenPair {
                value,
                vector: x,
                residual,
                iterations,
            });
        }
    }
    Err(Error::NoConvergence { iterations, residual })
}

fn orthogonalize(w: &mut [Complex64], against: &[&[Complex64]]) {
    for a in against {
        let c = dot(a, w);
        w.iter_mut().zip(a.iter()).for_each(|(wi, ai)| *wi -= c * ai);
    }
}

fn normalized(mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|z| *z /= n);
    Some(v)
}

/// Interacting vacuum in the half-filling sector.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub state: Statevector,
    pub energy: f64,
    /// Lowest sector eigenvalue orthogonal to the vacuum.
    pub first_excited: f64,
    pub residual: f64,
}

/// Lanczos ground state of `H` restricted to `N/2` particles, with a deflated
/// second solve to rule out degeneracy.
pub fn ground_state(h: &SparseHamiltonian) -> Result<GroundState> {
    ground_state_with(h, &LanczosOptions::default())
}

pub(crate) fn ground_state_with(h: &SparseHamiltonian, opts: &LanczosOptions) -> Result<GroundState> {
    let sector = HalfFillingSector::new(h.sites());
    let hs = h.restrict(&sector);
    let op = |x: &[Complex64], y: &mut [Complex64]| hs.apply(x, y);
    let ground = lanczos_lowest(op, hs.dim(), &[], opts)?;
    let excited_opts = LanczosOptions {
        tol: 1e-6,
        seed: opts.seed.wrapping_add(1),
        ..*opts
    };
    let first_excited = if hs.dim() > 1 {
        lanczos_lowest(op, hs.dim(), &[&ground.vector], &excited_opts)?.value
    } else {
        f64::INFINITY
    };
    if (first_excited - ground.value).abs() < 1e-10 {
        return Err(Error::DegenerateGroundState {
            e0: ground.value,
            e1: first_excited,
        });
    }
    let state = Statevector::from_amplitudes(sector.embed(&ground.vector))?;
    Ok(GroundState {
        state,
        energy: ground.value,
        first_excited,
        residual: ground.residual,
    })
}
