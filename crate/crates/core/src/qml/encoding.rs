use serde::{Deserialize, Serialize};

use super::circuit::{Axis, Circuit, Gate};
use crate::{Error, Result, Statevector};

/// Data encoding of `d` angles on `d` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    /// Hardware-efficient: `R_y(x_i)` on every qubit followed by the CNOT
    /// chain `0→1→…→d−1`, applied twice.
    Hee,
    /// Tensor product: `R_y(x_i)` on every qubit, nothing else.
    Tpe,
}

/// Number of rotation + entangler repetitions in [`Encoding::Hee`].
pub const HEE_REPETITIONS: usize = 2;

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Hee => "HEE",
            Encoding::Tpe => "TPE",
        }
    }

    /// The encoding circuit for fixed input angles.
    pub fn circuit(self, angles: &[f64]) -> Circuit {
        let q = angles.len();
        let mut c = Circuit::new(q);
        let layer = |c: &mut Circuit| {
            for (i, &x) in angles.iter().enumerate() {
                c.push(Gate::fixed(Axis::Y, i, x));
            }
        };
        match self {
            Encoding::Tpe => layer(&mut c),
            Encoding::Hee => {
                for _ in 0..HEE_REPETITIONS {
                    layer(&mut c);
                    for i in 0..q.saturating_sub(1) {
                        c.push(Gate::Cnot {
                            control: i,
                            target: i + 1,
                        });
                    }
                }
            }
        }
        c
    }
}

/// Prepares the encoded state on `|0…0⟩`; `angles.len()` must equal `qubits`.
pub fn encode(angles: &[f64], qubits: usize, encoding: Encoding) -> Result<Statevector> {
    if angles.len() != qubits {
        return Err(Error::DimensionMismatch {
            expected: qubits,
            actual: angles.len(),
        });
    }
    let mut s = Statevector::zero(qubits);
    encoding.circuit(angles).apply(&mut s, &[])?;
    Ok(s)
}
