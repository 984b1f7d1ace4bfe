use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classical::CnnModel;
use crate::qml::{Encoding, QcnnModel};
use crate::{Error, Result};

/// `qcnn{4,8,16}-{hee,tpe}`, `cnn51` or `cnn113`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ModelSelector {
    Qcnn { qubits: usize, encoding: Encoding },
    Cnn { params: usize },
}

impl ModelSelector {
    /// Number of PCA features the model consumes.
    pub fn input_dim(&self, cnn_features: usize) -> usize {
        match *self {
            ModelSelector::Qcnn { qubits, .. } => qubits,
            ModelSelector::Cnn { .. } => cnn_features,
        }
    }

    /// Freshly initialized model.
    pub fn init(&self, input_dim: usize, rng: &mut impl Rng) -> Result<Model> {
        match *self {
            ModelSelector::Qcnn { qubits, encoding } => {
                if input_dim != qubits {
                    return Err(Error::DimensionMismatch {
                        expected: qubits,
                        actual: input_dim,
                    });
                }
                Ok(Model::Qcnn(QcnnModel::random(qubits, encoding, rng)?))
            }
            ModelSelector::Cnn { params } => Ok(Model::Cnn(CnnModel::with_budget(input_dim, params, rng)?)),
        }
    }
}

impl fmt::Display for ModelSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSelector::Qcnn { qubits, encoding } => {
                write!(f, "qcnn{qubits}-{}", encoding.name().to_lowercase())
            }
            ModelSelector::Cnn { params } => write!(f, "cnn{params}"),
        }
    }
}

impl FromStr for ModelSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Config(format!(
                "unknown model {s:?}; expected qcnn4|qcnn8|qcnn16 with -hee|-tpe, cnn51 or cnn113"
            ))
        };
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("qcnn") {
            let (q, enc) = rest.split_once('-').ok_or_else(bad)?;
            let qubits = match q {
                "4" => 4,
                "8" => 8,
                "16" => 16,
                _ => return Err(bad()),
            };
            let encoding = match enc {
                "hee" => Encoding::Hee,
                "tpe" => Encoding::Tpe,
                _ => return Err(bad()),
            };
            Ok(ModelSelector::Qcnn { qubits, encoding })
        } else {
            match lower.as_str() {
                "cnn51" => Ok(ModelSelector::Cnn { params: 51 }),
                "cnn113" => Ok(ModelSelector::Cnn { params: 113 }),
                _ => Err(bad()),
            }
        }
    }
}

impl TryFrom<String> for ModelSelector {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ModelSelector> for String {
    fn from(m: ModelSelector) -> String {
        m.to_string()
    }
}

/// How QCNN gradients are evaluated during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientMethod {
    #[default]
    Shift,
    Adjoint,
}

/// A trainable classifier. Inputs are always the angle features in
/// `[0, π]`; the CNN sees them divided by `π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Qcnn(QcnnModel),
    Cnn(CnnModel),
}

impl Model {
    pub fn num_params(&self) -> usize {
        self.params().len()
    }

    pub fn params(&self) -> &[f64] {
        match self {
            Model::Qcnn(m) => m.params(),
            Model::Cnn(m) => m.params(),
        }
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        match self {
            Model::Qcnn(m) => m.params_mut(),
            Model::Cnn(m) => m.params_mut(),
        }
    }

    pub fn predict(&self, angles: &[f64]) -> Result<f64> {
        match self {
            Model::Qcnn(m) => m.forward(angles),
            Model::Cnn(m) => m.forward(&unit_features(angles)),
        }
    }

    /// `(p, ∂(p − y)²/∂θ)`.
    pub fn loss_gradient(&self, angles: &[f64], label: f64, method: GradientMethod) -> Result<(f64, Vec<f64>)> {
        match (self, method) {
            (Model::Qcnn(m), GradientMethod::Shift) => m.shift_gradient(angles, label),
            (Model::Qcnn(m), GradientMethod::Adjoint) => m.adjoint_gradient(angles, label),
            (Model::Cnn(m), _) => m.backward(&unit_features(angles), label),
        }
    }
}

fn unit_features(angles: &[f64]) -> Vec<f64> {
    angles.iter().map(|a| a / PI).collect()
}
