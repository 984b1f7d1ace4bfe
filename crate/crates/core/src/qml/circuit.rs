//! Gate-list circuits on a [`Statevector`]. Qubit `k` is bit `k` of the
//! basis index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Statevector};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// `R_a(θ) = exp(−i θ σ_a / 2)`.
pub fn rotation_matrix(axis: Axis, theta: f64) -> [[C; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let z = C::new(0.0, 0.0);
    match axis {
        Axis::X => [[C::new(c, 0.0), C::new(0.0, -s)], [C::new(0.0, -s), C::new(c, 0.0)]],
        Axis::Y => [[C::new(c, 0.0), C::new(-s, 0.0)], [C::new(s, 0.0), C::new(c, 0.0)]],
        Axis::Z => [[C::new(c, -s), z], [z, C::new(c, s)]],
    }
}

/// Applies a 2×2 matrix to one qubit.
pub fn apply_single(amps: &mut [C], qubit: usize, m: &[[C; 2]; 2]) {
    let stride = 1usize << qubit;
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    }
}

pub fn apply_cnot(amps: &mut [C], control: usize, target: usize) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

/// `σ_a |ψ⟩` on one qubit, used by the adjoint gradient.
fn apply_pauli(amps: &mut [C], qubit: usize, axis: Axis) {
    let o = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let m = match axis {
        Axis::X => [[o, one], [one, o]],
        Axis::Y => [[o, -i], [i, o]],
        Axis::Z => [[one, o], [o, -one]],
    };
    apply_single(amps, qubit, &m);
}

/// One gate. A rotation's angle is `offset + params[param]` when it is
/// trainable and `offset` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rotation {
        axis: Axis,
        qubit: usize,
        param: Option<usize>,
        offset: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn fixed(axis: Axis, qubit: usize, angle: f64) -> Self {
        Gate::Rotation {
            axis,
            qubit,
            param: None,
            offset: angle,
        }
    }

    pub fn trainable(axis: Axis, qubit: usize, param: usize, offset: f64) -> Self {
        Gate::Rotation {
            axis,
            qubit,
            param: Some(param),
            offset,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    fn angle(&self, params: &[f64]) -> f64 {
        match *self {
            Gate::Rotation { param, offset, .. } => offset + param.map_or(0.0, |p| params[p]),
            Gate::Cnot { .. } => 0.0,
        }
    }

    fn apply(&self, amps: &mut [C], params: &[f64]) {
        match *self {
            Gate::Rotation { axis, qubit, .. } => apply_single(amps, qubit, &rotation_matrix(axis, self.angle(params))),
            Gate::Cnot { control, target } => apply_cnot(amps, control, target),
        }
    }

    fn apply_inverse(&self, amps: &mut [C], params: &[f64]) {
        match *self {
            Gate::Rotation { axis, qubit, .. } => {
                apply_single(amps, qubit, &rotation_matrix(axis, -self.angle(params)))
            }
            Gate::Cnot { control, target } => apply_cnot(amps, control, target),
        }
    }
}

/// Counts of a compiled gate list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateTally {
    pub single_qubit: usize,
    pub two_qubit: usize,
    /// Rotations bound to a trainable parameter (occurrences, not distinct
    /// parameters).
    pub trainable: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: &Circuit) {
        self.gates.extend_from_slice(&other.gates);
    }

    pub fn tally(&self) -> GateTally {
        let mut t = GateTally::default();
        for g in &self.gates {
            match g {
                Gate::Cnot { .. } => t.two_qubit += 1,
                Gate::Rotation { param, .. } => {
                    t.single_qubit += 1;
                    t.trainable += usize::from(param.is_some());
                }
            }
        }
        t
    }

    /// Distinct trainable parameter indices referenced, sorted.
    pub fn parameters(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Rotation { param, .. } => *param,
                _ => None,
            })
            .collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    pub fn apply(&self, state: &mut Statevector, params: &[f64]) -> Result<()> {
        if state.qubits() != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.qubits,
                actual: state.qubits(),
            });
        }
        self.check_params(params)?;
        let amps = state.amplitudes_mut();
        for g in &self.gates {
            g.apply(amps, params);
        }
        Ok(())
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if let Some(&max) = self.parameters().last() {
            if max >= params.len() {
                return Err(Error::DimensionMismatch {
                    expected: max + 1,
                    actual: params.len(),
                });
            }
        }
        Ok(())
    }

    /// Dense unitary (column `j` is the image of basis state `j`).
    pub fn unitary(&self, params: &[f64]) -> Result<Vec<Vec<C>>> {
        (0..1usize << self.qubits)
            .map(|j| {
                let mut s = Statevector::basis(self.qubits, j);
                self.apply(&mut s, params)?;
                Ok(s.into_amplitudes())
            })
            .collect()
    }

    /// `∂⟨Z_readout⟩/∂params` by the two-point shift rule, evaluated on each
    /// occurrence of a parameter separately and summed.
    pub fn shift_gradient(&self, input: &Statevector, params: &[f64], readout: usize) -> Result<Vec<f64>> {
        self.check_params(params)?;
        let mut grad = vec![0.0; params.len()];
        let mut shifted = self.clone();
        for (k, gate) in self.gates.iter().enumerate() {
            let Gate::Rotation {
                param: Some(p), offset, ..
            } = *gate
            else {
                continue;
            };
            let mut eval = |delta: f64| -> Result<f64> {
                if let Gate::Rotation { offset: o, .. } = &mut shifted.gates[k] {
                    *o = offset + delta;
                }
                let mut s = input.clone();
                shifted.apply(&mut s, params)?;
                Ok(expectation_z(&s, readout))
            };
            let plus = eval(std::f64::consts::FRAC_PI_2)?;
            let minus = eval(-std::f64::consts::FRAC_PI_2)?;
            shifted.gates[k] = *gate;
            grad[p] += 0.5 * (plus - minus);
        }
        Ok(grad)
    }

    /// `∂⟨Z_readout⟩/∂params` by one forward and one reverse sweep.
    pub fn adjoint_gradient(&self, input: &Statevector, params: &[f64], readout: usize) -> Result<Vec<f64>> {
        let mut psi = input.clone();
        self.apply(&mut psi, params)?;
        let mut lambda = psi.clone();
        apply_pauli(lambda.amplitudes_mut(), readout, Axis::Z);
        let mut grad = vec![0.0; params.len()];
        let mut scratch = psi.amplitudes().to_vec();
        for gate in self.gates.iter().rev() {
            if let Gate::Rotation {
                axis,
                qubit,
                param: Some(p),
                ..
            } = *gate
            {
                // d/dθ R(θ) = (−i σ/2) R(θ), so d⟨Z⟩ = 2 Re⟨λ|(−iσ/2)|ψ⟩ = Im⟨λ|σ|ψ⟩
                scratch.copy_from_slice(psi.amplitudes());
                apply_pauli(&mut scratch, qubit, axis);
                let overlap: C = lambda
                    .amplitudes()
                    .iter()
                    .zip(&scratch)
                    .map(|(l, s)| l.conj() * s)
                    .sum();
                grad[p] += overlap.im;
            }
            gate.apply_inverse(psi.amplitudes_mut(), params);
            gate.apply_inverse(lambda.amplitudes_mut(), params);
        }
        Ok(grad)
    }
}

/// `⟨Z⟩` on one qubit.
pub fn expectation_z(state: &Statevector, qubit: usize) -> f64 {
    let bit = 1usize << qubit;
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if i & bit == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rotations_are_unitary_and_periodic() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let m = rotation_matrix(axis, 0.83);
            for i in 0..2 {
                for j in 0..2 {
                    let v: C = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((v - C::new(e, 0.0)).norm() < 1e-15);
                }
            }
            // R(2π) = −I
            let full = rotation_matrix(axis, 2.0 * std::f64::consts::PI);
            assert!((full[0][0] + C::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn cnot_flips_target_only_when_control_set() {
        let mut s = Statevector::basis(3, 0b001);
        apply_cnot(s.amplitudes_mut(), 0, 2);
        assert_eq!(s, Statevector::basis(3, 0b101));
        let mut s = Statevector::basis(3, 0b100);
        apply_cnot(s.amplitudes_mut(), 0, 2);
        assert_eq!(s, Statevector::basis(3, 0b100));
    }

    #[test]
    fn norm_preserved_after_every_gate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut s = Statevector::random(5, &mut rng);
        let axes = [Axis::X, Axis::Y, Axis::Z];
        for _ in 0..200 {
            let g = if rng.random_bool(0.3) {
                let c = rng.random_range(0..5);
                let t = (c + rng.random_range(1..5)) % 5;
                Gate::Cnot { control: c, target: t }
            } else {
                Gate::fixed(axes[rng.random_range(0..3)], rng.random_range(0..5), rng.random_range(-4.0..4.0))
            };
            g.apply(s.amplitudes_mut(), &[]);
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_and_adjoint_agree_with_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut c = Circuit::new(3);
        for k in 0..12 {
            let axis = [Axis::X, Axis::Y, Axis::Z][k % 3];
            // parameter 0 is shared between three gates
            let p = if k % 4 == 0 { 0 } else { k };
            c.push(Gate::trainable(axis, k % 3, p, 0.1 * k as f64));
            c.push(Gate::Cnot {
                control: k % 3,
                target: (k + 1) % 3,
            });
        }
        let params: Vec<f64> = (0..12).map(|_| rng.random_range(-3.0..3.0)).collect();
        let input = Statevector::random(3, &mut rng);
        let shift = c.shift_gradient(&input, &params, 2).unwrap();
        let adjoint = c.adjoint_gradient(&input, &params, 2).unwrap();
        let f = |p: &[f64]| {
            let mut s = input.clone();
            c.apply(&mut s, p).unwrap();
            expectation_z(&s, 2)
        };
        for i in 0..12 {
            let h = 1e-5;
            let mut a = params.clone();
            let mut b = params.clone();
            a[i] += h;
            b[i] -= h;
            let fd = (f(&a) - f(&b)) / (2.0 * h);
            assert!((shift[i] - fd).abs() < 1e-8, "param {i}: {} vs {fd}", shift[i]);
            assert!((shift[i] - adjoint[i]).abs() < 1e-12);
        }
    }
}
