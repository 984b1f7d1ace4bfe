use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{GradientMethod, Model, ModelSelector};
use super::optim::{accuracy, adam_step, mse_loss, AdamConfig, AdamState};
use crate::dataset::{dataset_file_name, ProcessedDataset};
use crate::{Error, Result};

/// Training and experiment settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    /// Directory written by the dataset builder.
    pub dataset_dir: PathBuf,
    #[serde(default)]
    pub threshold_id: usize,
    pub models: Vec<ModelSelector>,
    /// PCA size fed to the CNN baselines.
    #[serde(default = "default_cnn_features")]
    pub cnn_features: usize,
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_beta1")]
    pub beta1: f64,
    #[serde(default = "default_beta2")]
    pub beta2: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub gradient: GradientMethod,
    pub output_dir: PathBuf,
}

fn default_cnn_features() -> usize {
    4
}
fn default_lr() -> f64 {
    AdamConfig::default().learning_rate
}
fn default_beta1() -> f64 {
    AdamConfig::default().beta1
}
fn default_beta2() -> f64 {
    AdamConfig::default().beta2
}
fn default_epsilon() -> f64 {
    AdamConfig::default().epsilon
}
fn default_batch() -> usize {
    32
}
fn default_epochs() -> usize {
    30
}
fn default_runs() -> usize {
    50
}

impl TrainConfig {
    /// Defaults for everything except where the data lives and goes.
    pub fn new(dataset_dir: impl Into<PathBuf>, output_dir: impl Into<PathBuf>, models: Vec<ModelSelector>) -> Self {
        let adam = AdamConfig::default();
        Self {
            dataset_dir: dataset_dir.into(),
            threshold_id: 0,
            models,
            cnn_features: default_cnn_features(),
            learning_rate: adam.learning_rate,
            beta1: adam.beta1,
            beta2: adam.beta2,
            epsilon: adam.epsilon,
            batch_size: default_batch(),
            epochs: default_epochs(),
            runs: default_runs(),
            base_seed: 0,
            gradient: GradientMethod::default(),
            output_dir: output_dir.into(),
        }
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let cfg: Self = crate::config::load(path, overrides)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.epochs == 0 {
            return bad("epochs must be ≥ 1");
        }
        if self.runs == 0 {
            return bad("runs must be ≥ 1");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be ≥ 1");
        }
        if self.models.is_empty() {
            return bad("models must list at least one model");
        }
        if !(self.learning_rate >= 0.0) || !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("need learning_rate ≥ 0 and β₁, β₂ in [0, 1)");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        Ok(())
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        }
    }

    /// Dataset file the given model trains on.
    pub fn dataset_path(&self, model: &ModelSelector) -> PathBuf {
        self.dataset_dir
            .join(dataset_file_name(self.threshold_id, model.input_dim(self.cnn_features)))
    }
}

/// Per-epoch metrics of one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub model: ModelSelector,
    pub seed: u64,
    /// Mean training loss after each epoch.
    pub train_loss: Vec<f64>,
    pub train_accuracy: Vec<f64>,
    pub test_accuracy: Vec<f64>,
    /// Test-set class-1 probabilities after the last epoch.
    pub test_predictions: Vec<f64>,
    pub final_params: Vec<f64>,
}

fn predict_all(model: &Model, features: &[Vec<f64>]) -> Result<Vec<f64>> {
    features.iter().map(|x| model.predict(x)).collect()
}

fn as_targets(labels: &[u8]) -> Vec<f64> {
    labels.iter().map(|&y| f64::from(y)).collect()
}

/// Trains a fresh `selector` model with seed `seed`: parameters are drawn
/// first, then every epoch reshuffles the training rows from the same
/// generator.
pub fn train(selector: ModelSelector, data: &ProcessedDataset, cfg: &TrainConfig, seed: u64) -> Result<(Model, RunResult)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = selector.init(data.dim(), &mut rng)?;
    train_model(&mut model, selector, data, cfg, seed, &mut rng).map(|r| (model, r))
}

fn train_model(
    model: &mut Model,
    selector: ModelSelector,
    data: &ProcessedDataset,
    cfg: &TrainConfig,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<RunResult> {
    let n = data.train.len();
    if cfg.batch_size > n {
        return Err(Error::Config(format!(
            "batch_size {} exceeds the {n} training samples",
            cfg.batch_size
        )));
    }
    let adam = cfg.adam();
    let mut state = AdamState::new(model.num_params());
    let train_y = as_targets(&data.train.labels);
    let mut result = RunResult {
        model: selector,
        seed,
        train_loss: Vec::with_capacity(cfg.epochs),
        train_accuracy: Vec::with_capacity(cfg.epochs),
        test_accuracy: Vec::with_capacity(cfg.epochs),
        test_predictions: Vec::new(),
        final_params: Vec::new(),
    };
    let mut order: Vec<usize> = (0..n).collect();
    for epoch in 1..=cfg.epochs {
        order.shuffle(rng);
        for (b, batch) in order.chunks(cfg.batch_size).enumerate() {
            let mut grad = vec![0.0; model.num_params()];
            let mut loss = 0.0;
            for &i in batch {
                let (p, g) = model.loss_gradient(&data.train.features[i], train_y[i], cfg.gradient)?;
                loss += (p - train_y[i]).powi(2);
                grad.iter_mut().zip(&g).for_each(|(a, x)| *a += x);
            }
            let scale = 1.0 / batch.len() as f64;
            loss *= scale;
            grad.iter_mut().for_each(|g| *g *= scale);
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::Diverged {
                    epoch,
                    batch: b,
                    loss,
                    param_norm: model.params().iter().map(|p| p * p).sum::<f64>().sqrt(),
                });
            }
            adam_step(model.params_mut(), &grad, &mut state, &adam)?;
        }
        let train_pred = predict_all(model, &data.train.features)?;
        let test_pred = predict_all(model, &data.test.features)?;
        result.train_loss.push(mse_loss(&train_pred, &train_y)?);
        result.train_accuracy.push(accuracy(&train_pred, &data.train.labels));
        result.test_accuracy.push(accuracy(&test_pred, &data.test.labels));
        result.test_predictions = test_pred;
    }
    result.final_params = model.params().to_vec();
    Ok(result)
}
