use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::{expectation_z, Axis, Circuit, Gate};
use super::encoding::{encode, Encoding};
use crate::{Error, Result, Statevector};

pub const CONV_PARAMS: usize = 15;
pub const POOL_PARAMS: usize = 9;
pub const LAYER_PARAMS: usize = CONV_PARAMS + POOL_PARAMS;

/// `R_z R_y R_z` on one qubit with parameters `first..first+3`.
fn general_rotation(c: &mut Circuit, qubit: usize, first: usize) {
    c.push(Gate::trainable(Axis::Z, qubit, first, 0.0));
    c.push(Gate::trainable(Axis::Y, qubit, first + 1, 0.0));
    c.push(Gate::trainable(Axis::Z, qubit, first + 2, 0.0));
}

/// Three-CNOT two-qubit block on `(a, b)` using parameters
/// `base..base+15`: general rotations on both qubits, the three-CNOT
/// interaction core, general rotations on both qubits.
///
/// The interaction core carries fixed `±π/2` offsets so that all-zero
/// parameters give the identity (up to a global phase, which a product of
/// three CNOTs cannot avoid: its determinant is −1).
pub fn conv_block(a: usize, b: usize, base: usize, qubits: usize) -> Circuit {
    let mut c = Circuit::new(qubits);
    general_rotation(&mut c, a, base);
    general_rotation(&mut c, b, base + 3);
    c.push(Gate::fixed(Axis::Z, b, FRAC_PI_2));
    c.push(Gate::Cnot { control: b, target: a });
    c.push(Gate::trainable(Axis::Z, a, base + 6, FRAC_PI_2));
    c.push(Gate::trainable(Axis::Y, b, base + 7, FRAC_PI_2));
    c.push(Gate::Cnot { control: a, target: b });
    c.push(Gate::trainable(Axis::Y, b, base + 8, -FRAC_PI_2));
    c.push(Gate::Cnot { control: b, target: a });
    c.push(Gate::fixed(Axis::Z, a, -FRAC_PI_2));
    general_rotation(&mut c, a, base + 9);
    general_rotation(&mut c, b, base + 12);
    c
}

/// Pooling from `source` into `target` with parameters `base..base+9`;
/// `source` is not touched afterwards.
pub fn pool_block(source: usize, target: usize, base: usize, qubits: usize) -> Circuit {
    let mut c = Circuit::new(qubits);
    general_rotation(&mut c, source, base);
    general_rotation(&mut c, target, base + 3);
    c.push(Gate::Cnot {
        control: source,
        target,
    });
    general_rotation(&mut c, target, base + 6);
    c
}

/// Quantum convolutional classifier on `qubits ∈ {4, 8, 16}`.
///
/// Layer `l` pairs the active qubits as `(a_0, a_1), (a_2, a_3), …`, applies
/// one shared convolution block to every pair and one shared pooling block
/// from each even-position qubit into its odd partner, then keeps the odd
/// positions. After `log₂ q` layers qubit `q − 1` is measured:
/// `p = (1 − ⟨Z⟩)/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "QcnnRecord", try_from = "QcnnRecord")]
pub struct QcnnModel {
    qubits: usize,
    encoding: Encoding,
    params: Vec<f64>,
    circuit: Circuit,
}

/// Checkpoint layout: per-layer parameter arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QcnnRecord {
    qubits: usize,
    encoding: Encoding,
    layers: Vec<LayerRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerRecord {
    conv: Vec<f64>,
    pool: Vec<f64>,
}

impl From<QcnnModel> for QcnnRecord {
    fn from(m: QcnnModel) -> Self {
        QcnnRecord {
            qubits: m.qubits,
            encoding: m.encoding,
            layers: m
                .params
                .chunks(LAYER_PARAMS)
                .map(|l| LayerRecord {
                    conv: l[..CONV_PARAMS].to_vec(),
                    pool: l[CONV_PARAMS..].to_vec(),
                })
                .collect(),
        }
    }
}

impl TryFrom<QcnnRecord> for QcnnModel {
    type Error = Error;

    fn try_from(r: QcnnRecord) -> Result<Self> {
        let mut model = QcnnModel::new(r.qubits, r.encoding)?;
        if r.layers.len() != model.layers() {
            return Err(Error::InvalidArgument(format!(
                "{}-qubit QCNN needs {} layers, checkpoint has {}",
                r.qubits,
                model.layers(),
                r.layers.len()
            )));
        }
        let mut flat = Vec::with_capacity(model.num_params());
        for l in &r.layers {
            if l.conv.len() != CONV_PARAMS || l.pool.len() != POOL_PARAMS {
                return Err(Error::InvalidArgument(format!(
                    "layer has {}/{} parameters, expected {CONV_PARAMS}/{POOL_PARAMS}",
                    l.conv.len(),
                    l.pool.len()
                )));
            }
            flat.extend_from_slice(&l.conv);
            flat.extend_from_slice(&l.pool);
        }
        model.params = flat;
        Ok(model)
    }
}

impl QcnnModel {
    /// All-zero parameters.
    pub fn new(qubits: usize, encoding: Encoding) -> Result<Self> {
        if qubits < 2 || !qubits.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "QCNN needs a power-of-two qubit count ≥ 2, got {qubits}"
            )));
        }
        let circuit = Self::build(qubits);
        let layers = qubits.trailing_zeros() as usize;
        Ok(Self {
            qubits,
            encoding,
            params: vec![0.0; layers * LAYER_PARAMS],
            circuit,
        })
    }

    /// Parameters drawn independently and uniformly from `(−π, π]`.
    pub fn random(qubits: usize, encoding: Encoding, rng: &mut impl Rng) -> Result<Self> {
        let mut m = Self::new(qubits, encoding)?;
        for p in &mut m.params {
            // random() is in [0, 1), so π − 2π·u lies in (−π, π]
            *p = PI - 2.0 * PI * rng.random::<f64>();
        }
        Ok(m)
    }

    fn build(qubits: usize) -> Circuit {
        let mut c = Circuit::new(qubits);
        let mut active: Vec<usize> = (0..qubits).collect();
        let mut layer = 0;
        while active.len() > 1 {
            let base = layer * LAYER_PARAMS;
            for pair in active.chunks_exact(2) {
                c.extend(&conv_block(pair[0], pair[1], base, qubits));
            }
            for pair in active.chunks_exact(2) {
                c.extend(&pool_block(pair[0], pair[1], base + CONV_PARAMS, qubits));
            }
            active = active.chunks_exact(2).map(|p| p[1]).collect();
            layer += 1;
        }
        c
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn layers(&self) -> usize {
        self.qubits.trailing_zeros() as usize
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn readout_qubit(&self) -> usize {
        self.qubits - 1
    }

    /// The trainable part of the network (no encoding).
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn encode(&self, angles: &[f64]) -> Result<Statevector> {
        encode(angles, self.qubits, self.encoding)
    }

    /// `p = (1 − ⟨Z⟩)/2` for an already-encoded state.
    pub fn forward_state(&self, state: &Statevector) -> Result<f64> {
        let mut s = state.clone();
        self.circuit.apply(&mut s, &self.params)?;
        Ok(0.5 * (1.0 - expectation_z(&s, self.readout_qubit())))
    }

    /// Class-1 probability for input angles.
    pub fn forward(&self, angles: &[f64]) -> Result<f64> {
        self.forward_state(&self.encode(angles)?)
    }

    /// `(p, ∂(p − y)²/∂θ)` by the parameter-shift rule.
    pub fn shift_gradient(&self, angles: &[f64], label: f64) -> Result<(f64, Vec<f64>)> {
        let s = self.encode(angles)?;
        let p = self.forward_state(&s)?;
        let dz = self.circuit.shift_gradient(&s, &self.params, self.readout_qubit())?;
        Ok((p, chain(p, label, dz)))
    }

    /// Same as [`Self::shift_gradient`] using the adjoint method.
    pub fn adjoint_gradient(&self, angles: &[f64], label: f64) -> Result<(f64, Vec<f64>)> {
        let s = self.encode(angles)?;
        let p = self.forward_state(&s)?;
        let dz = self.circuit.adjoint_gradient(&s, &self.params, self.readout_qubit())?;
        Ok((p, chain(p, label, dz)))
    }
}

/// `∂(p − y)²/∂θ = 2(p − y) · (−½ ∂⟨Z⟩/∂θ)`.
fn chain(p: f64, y: f64, dz: Vec<f64>) -> Vec<f64> {
    let f = -(p - y);
    dz.into_iter().map(|g| f * g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    fn random_params(n: usize, r: &mut impl Rng) -> Vec<f64> {
        (0..n).map(|_| r.random_range(-PI..PI)).collect()
    }

    #[test]
    fn parameter_counts() {
        for (q, n) in [(4, 48), (8, 72), (16, 96)] {
            let m = QcnnModel::new(q, Encoding::Hee).unwrap();
            assert_eq!(m.num_params(), n);
            assert_eq!(m.circuit().parameters(), (0..n).collect::<Vec<_>>());
        }
        assert!(QcnnModel::new(6, Encoding::Tpe).is_err());
    }

    #[test]
    fn block_tallies() {
        let conv = conv_block(0, 1, 0, 2).tally();
        assert_eq!((conv.trainable, conv.two_qubit), (15, 3));
        assert_eq!(conv_block(0, 1, 0, 2).parameters().len(), 15);
        let pool = pool_block(0, 1, 0, 2).tally();
        assert_eq!((pool.trainable, pool.two_qubit), (9, 1));
        assert_eq!(pool_block(0, 1, 0, 2).parameters().len(), 9);
    }

    #[test]
    fn conv_block_is_identity_at_zero_up_to_phase() {
        let u = conv_block(0, 1, 0, 2).unitary(&[0.0; 15]).unwrap();
        let phase = u[0][0];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        for (j, col) in u.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                let e = if i == j { phase } else { Complex64::new(0.0, 0.0) };
                assert!((z - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn conv_block_is_unitary() {
        let mut r = rng(1);
        let u = conv_block(0, 1, 0, 2).unitary(&random_params(15, &mut r)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let v: Complex64 = (0..4).map(|k| u[i][k].conj() * u[j][k]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((v - Complex64::new(e, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pool_block_at_zero_fixes_vacuum_and_preserves_trace() {
        let mut s = Statevector::zero(2);
        pool_block(0, 1, 0, 2).apply(&mut s, &[0.0; 9]).unwrap();
        assert!((s.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let mut r = rng(2);
        let mut s = Statevector::random(2, &mut r);
        pool_block(0, 1, 0, 2).apply(&mut s, &random_params(9, &mut r)).unwrap();
        let rho = crate::lattice::reduced_density_matrix_right(&s, 1, 1).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_model_on_vacuum_reads_zero() {
        for q in [4, 8] {
            let m = QcnnModel::new(q, Encoding::Hee).unwrap();
            let p = m.forward(&vec![0.0; q]).unwrap();
            assert!(p.abs() < 1e-12, "q={q}: p={p}");
        }
    }

    #[test]
    fn gradients_match_finite_differences_and_each_other() {
        let mut r = rng(3);
        for (q, enc) in [(4, Encoding::Hee), (4, Encoding::Tpe), (8, Encoding::Hee)] {
            let m = QcnnModel::random(q, enc, &mut r).unwrap();
            let x: Vec<f64> = (0..q).map(|_| r.random_range(0.0..PI)).collect();
            let (p, shift) = m.shift_gradient(&x, 1.0).unwrap();
            let (_, adjoint) = m.adjoint_gradient(&x, 1.0).unwrap();
            let loss = |mm: &QcnnModel| (mm.forward(&x).unwrap() - 1.0).powi(2);
            for i in 0..m.num_params() {
                let h = 1e-4;
                let mut a = m.clone();
                a.params_mut()[i] += h;
                let mut b = m.clone();
                b.params_mut()[i] -= h;
                let fd = (loss(&a) - loss(&b)) / (2.0 * h);
                assert!((shift[i] - fd).abs() < 1e-6, "q={q} param {i}: {} vs {fd} (p={p})", shift[i]);
                assert!((shift[i] - adjoint[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gradient_vanishes_when_prediction_matches_label() {
        let mut r = rng(4);
        let m = QcnnModel::random(4, Encoding::Hee, &mut r).unwrap();
        let x = [0.3, 1.2, 2.2, 0.9];
        let p = m.forward(&x).unwrap();
        let (_, g) = m.shift_gradient(&x, p).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn forward_is_bitwise_deterministic() {
        let mut r = rng(5);
        let m = QcnnModel::random(8, Encoding::Hee, &mut r).unwrap();
        let x: Vec<f64> = (0..8).map(|i| 0.3 * i as f64).collect();
        assert_eq!(m.forward(&x).unwrap().to_bits(), m.forward(&x).unwrap().to_bits());
    }

    #[test]
    fn first_layer_commutes_with_pair_translation() {
        // Shared weights: shifting the input by one pair and shifting the
        // output back leaves the first convolution layer unchanged.
        let mut r = rng(6);
        let params = random_params(LAYER_PARAMS, &mut r);
        let mut layer = Circuit::new(4);
        for (a, b) in [(0, 1), (2, 3)] {
            layer.extend(&conv_block(a, b, 0, 4));
        }
        let shift = |s: &Statevector| -> Statevector {
            // qubits (0,1,2,3) → (2,3,0,1)
            let amps = s.amplitudes();
            let out = (0..16).map(|i| amps[((i & 0b11) << 2) | (i >> 2)]).collect();
            Statevector::from_amplitudes(out).unwrap()
        };
        let psi = Statevector::random(4, &mut r);
        let mut a = shift(&psi);
        layer.apply(&mut a, &params).unwrap();
        let mut b = psi.clone();
        layer.apply(&mut b, &params).unwrap();
        let b = shift(&b);
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn checkpoint_round_trip_keeps_parameters() {
        let mut r = rng(7);
        let m = QcnnModel::random(8, Encoding::Tpe, &mut r).unwrap();
        let text = crate::json::to_line(&m);
        assert!(text.contains("\"layers\""));
        let back: QcnnModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let bad = text.replacen("\"qubits\":8", "\"qubits\":4", 1);
        assert!(serde_json::from_str::<QcnnModel>(&bad).is_err());
    }

    #[test]
    fn random_init_lies_in_half_open_range() {
        let mut r = rng(8);
        let m = QcnnModel::random(16, Encoding::Hee, &mut r).unwrap();
        assert!(m.params().iter().all(|&p| p > -PI && p <= PI));
    }
}
