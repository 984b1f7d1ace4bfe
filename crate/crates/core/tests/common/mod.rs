//! Brute-force references shared by the integration tests. Nothing here calls
//! into the sparse, Krylov or Lanczos code paths.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qscatter_core::Complex64;

pub type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn kron_all(factors: &[CMat]) -> CMat {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// Jordan–Wigner annihilators `ξ_n = Z_0 ⋯ Z_{n−1} σ⁻_n` as dense matrices.
/// Site 0 is the least significant bit, i.e. the rightmost Kronecker factor.
pub fn annihilators(sites: usize) -> Vec<CMat> {
    let id = CMat::identity(2, 2);
    let z = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    // |0⟩⟨1|: empties an occupied site
    let lower = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
    (0..sites)
        .map(|n| {
            let factors: Vec<CMat> = (0..sites)
                .rev()
                .map(|q| match q.cmp(&n) {
                    std::cmp::Ordering::Less => z.clone(),
                    std::cmp::Ordering::Equal => lower.clone(),
                    std::cmp::Ordering::Greater => id.clone(),
                })
                .collect();
            kron_all(&factors)
        })
        .collect()
}

/// Staggered Thirring Hamiltonian assembled from operator products.
pub fn dense_hamiltonian(sites: usize, mass: f64, coupling: f64) -> CMat {
    let xi = annihilators(sites);
    let dag: Vec<CMat> = xi.iter().map(|x| x.adjoint()).collect();
    let num: Vec<CMat> = (0..sites).map(|n| &dag[n] * &xi[n]).collect();
    let dim = 1 << sites;
    let mut h = CMat::zeros(dim, dim);
    for n in 0..sites {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        h += &num[n] * c(sign * mass);
    }
    for n in 0..sites - 1 {
        let hop = &dag[n + 1] * &xi[n] - &dag[n] * &xi[n + 1];
        h += hop * Complex64::new(0.0, 0.5);
        h += &num[n] * &num[n + 1] * c(coupling);
    }
    h
}

pub fn number_operators(sites: usize) -> Vec<CMat> {
    annihilators(sites).iter().map(|x| x.adjoint() * x).collect()
}

/// Eigenpairs sorted by ascending eigenvalue.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
    (vals, vecs)
}

/// Lowest eigenpair of `h` among basis states with `particles` set bits,
/// embedded back into the full space.
pub fn sector_ground_state(h: &CMat, particles: u32) -> (f64, DVector<Complex64>) {
    let basis: Vec<usize> = (0..h.nrows()).filter(|b| b.count_ones() == particles).collect();
    let sub = CMat::from_fn(basis.len(), basis.len(), |i, j| h[(basis[i], basis[j])]);
    let (vals, vecs) = eigh(&sub);
    let mut full = DVector::zeros(h.nrows());
    for (i, &b) in basis.iter().enumerate() {
        full[b] = vecs[(i, 0)];
    }
    (vals[0], full)
}

/// `exp(−iHt)` through the full spectral decomposition.
pub struct DenseEvolution {
    vals: Vec<f64>,
    vecs: CMat,
}

impl DenseEvolution {
    pub fn new(h: &CMat) -> Self {
        let (vals, vecs) = eigh(h);
        Self { vals, vecs }
    }

    pub fn at(&self, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let mut coeffs = self.vecs.adjoint() * psi;
        for (ci, e) in coeffs.iter_mut().zip(&self.vals) {
            *ci *= Complex64::from_polar(1.0, -e * t);
        }
        &self.vecs * coeffs
    }
}

pub fn densities(psi: &DVector<Complex64>, numbers: &[CMat]) -> Vec<f64> {
    numbers.iter().map(|n| psi.dotc(&(n * psi)).re).collect()
}

/// Entropy of sites `0..cut` from the Schmidt values of `ψ` reshaped to
/// `2^cut × 2^(N−cut)`.
pub fn schmidt_entropy(psi: &DVector<Complex64>, sites: usize, cut: usize) -> f64 {
    let left = 1usize << cut;
    let right = 1usize << (sites - cut);
    let m = CMat::from_fn(left, right, |l, r| psi[l + left * r]);
    m.singular_values()
        .iter()
        .map(|s| s * s)
        .filter(|&p| p > 1e-300)
        .map(|p| -p * p.ln())
        .sum()
}

pub fn schmidt_profile(psi: &DVector<Complex64>, sites: usize) -> Vec<f64> {
    (1..sites).map(|cut| schmidt_entropy(psi, sites, cut)).collect()
}

/// Single-particle matrix of the quadratic part, built from its hopping and
/// mass terms.
pub fn free_matrix(sites: usize, mass: f64) -> CMat {
    CMat::from_fn(sites, sites, |a, b| {
        if a == b {
            c(if a % 2 == 0 { mass } else { -mass })
        } else if a == b + 1 {
            Complex64::new(0.0, 0.5)
        } else if b == a + 1 {
            Complex64::new(0.0, -0.5)
        } else {
            c(0.0)
        }
    })
}

/// Gaussian-state observables from an orbital projector `P = Σ_occ v v†`;
/// the correlation matrix is `⟨ξ_a†ξ_b⟩ = P_ba`.
pub struct SlaterState {
    pub projector: CMat,
}

impl SlaterState {
    pub fn evolve(&self, single: &DenseEvolution, t: f64) -> SlaterState {
        let n = self.projector.nrows();
        let u = CMat::from_columns(
            &(0..n)
                .map(|j| {
                    let mut e = DVector::zeros(n);
                    e[j] = c(1.0);
                    single.at(&e, t)
                })
                .collect::<Vec<_>>(),
        );
        SlaterState {
            projector: &u * &self.projector * u.adjoint(),
        }
    }

    pub fn densities(&self) -> Vec<f64> {
        (0..self.projector.nrows()).map(|a| self.projector[(a, a)].re).collect()
    }

    pub fn entropy(&self, cut: usize) -> f64 {
        let block = self.projector.view((0, 0), (cut, cut)).transpose();
        block
            .symmetric_eigenvalues()
            .iter()
            .map(|&nu| {
                let nu = nu.clamp(0.0, 1.0);
                let mut s = 0.0;
                for p in [nu, 1.0 - nu] {
                    if p > 1e-300 {
                        s -= p * p.ln();
                    }
                }
                s
            })
            .sum()
    }

    pub fn entropy_profile(&self) -> Vec<f64> {
        (1..self.projector.nrows()).map(|cut| self.entropy(cut)).collect()
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

use qscatter_core::dataset::{AngleBounds, PcaModel, ProcessedDataset, SplitData, ThresholdKind};

fn split(features: Vec<Vec<f64>>, labels: Vec<u8>) -> SplitData {
    SplitData {
        event_index: (0..labels.len()).collect(),
        delta_s_mid: labels.iter().map(|&y| f64::from(y)).collect(),
        features,
        labels,
    }
}

/// Wraps ready-made angle features in a dataset with an identity PCA.
pub fn synthetic_dataset(train: (Vec<Vec<f64>>, Vec<u8>), test: (Vec<Vec<f64>>, Vec<u8>)) -> ProcessedDataset {
    let d = train.0[0].len();
    ProcessedDataset {
        schema_version: qscatter_core::SCHEMA_VERSION,
        config_hash: "synthetic".into(),
        seed: 0,
        threshold_id: 0,
        threshold_kind: ThresholdKind::Value,
        threshold_setting: 0.5,
        threshold: 0.5,
        sites: d,
        time_steps: 1,
        pca: PcaModel {
            mean: vec![0.0; d],
            components: (0..d).map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect()).collect(),
            explained_variance: vec![1.0; d],
        },
        bounds: AngleBounds {
            min: vec![0.0; d],
            max: vec![std::f64::consts::PI; d],
        },
        train: split(train.0, train.1),
        test: split(test.0, test.1),
    }
}
