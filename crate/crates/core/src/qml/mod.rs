//! Statevector circuits, HEE/TPE data encodings and the quantum
//! convolutional classifier with parameter-shift and adjoint gradients.

mod circuit;
mod encoding;
mod qcnn;

pub use circuit::{
    apply_cnot, apply_single, expectation_z, rotation_matrix, Axis, Circuit, Gate, GateTally,
};
pub use encoding::{encode, Encoding, HEE_REPETITIONS};
pub use qcnn::{conv_block, pool_block, QcnnModel, CONV_PARAMS, LAYER_PARAMS, POOL_PARAMS};
