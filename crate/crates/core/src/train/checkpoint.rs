use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{Model, ModelSelector};
use super::run::{RunResult, TrainConfig};
use crate::{Error, Result, SCHEMA_VERSION};

/// A trained model with the settings and metrics that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema_version: u32,
    pub selector: ModelSelector,
    pub seed: u64,
    pub param_count: usize,
    pub config: TrainConfig,
    pub dataset_config_hash: String,
    pub final_train_accuracy: Option<f64>,
    pub final_test_accuracy: Option<f64>,
    pub model: Model,
}

impl Checkpoint {
    pub fn new(model: Model, run: &RunResult, config: &TrainConfig, dataset_config_hash: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            selector: run.model,
            seed: run.seed,
            param_count: model.num_params(),
            config: config.clone(),
            dataset_config_hash: dataset_config_hash.to_string(),
            final_train_accuracy: run.train_accuracy.last().copied(),
            final_test_accuracy: run.test_accuracy.last().copied(),
            model,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        crate::json::write_file(path, self)
    }

    /// Loads a checkpoint, checking schema version and parameter count.
    pub fn read(path: &Path) -> Result<Self> {
        #[derive(Deserialize)]
        struct Version {
            schema_version: u32,
        }
        let v: Version = crate::json::read_file(path)?;
        crate::json::check_schema(path, v.schema_version)?;
        let c: Self = crate::json::read_file(path)?;
        if c.model.num_params() != c.param_count {
            return Err(Error::InvalidArgument(format!(
                "{}: checkpoint declares {} parameters but the model holds {}",
                path.display(),
                c.param_count,
                c.model.num_params()
            )));
        }
        Ok(c)
    }
}
