use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{Model, ModelSelector};
use super::run::{train, RunResult, TrainConfig};
use crate::dataset::ProcessedDataset;
use crate::{Error, Result, SCHEMA_VERSION};

/// `(mean, SEM)` with SEM = sample standard deviation / √n; SEM is `None`
/// for a single value and both are `None` for no values.
pub fn mean_and_sem(values: &[f64]) -> (Option<f64>, Option<f64>) {
    let n = values.len();
    if n == 0 {
        return (None, None);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (Some(mean), None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (Some(mean), Some((var / n as f64).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStat {
    pub epoch: usize,
    pub mean_test_accuracy: f64,
    pub sem: Option<f64>,
    pub mean_train_accuracy: f64,
    pub mean_train_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub seed: u64,
    pub error: String,
}

/// Aggregate of all runs of one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model: ModelSelector,
    pub param_count: usize,
    pub architecture: String,
    pub dataset: PathBuf,
    pub threshold: f64,
    pub train_size: usize,
    pub test_size: usize,
    pub runs_requested: usize,
    pub runs_completed: usize,
    pub failures: Vec<RunFailure>,
    pub epochs: Vec<EpochStat>,
    pub final_mean: Option<f64>,
    pub final_sem: Option<f64>,
    pub runs: Vec<RunResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: TrainConfig,
    pub threshold_id: usize,
    pub summaries: Vec<ModelSummary>,
}

pub const REPORT_FILE: &str = "report.json";

impl ExperimentReport {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(REPORT_FILE);
        crate::json::write_file(&path, self)?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        #[derive(Deserialize)]
        struct Version {
            schema_version: u32,
        }
        let v: Version = crate::json::read_file(path)?;
        crate::json::check_schema(path, v.schema_version)?;
        crate::json::read_file(path)
    }
}

fn describe(model: &Model) -> String {
    match model {
        Model::Qcnn(m) => format!(
            "QCNN {} qubits, {} encoding, {} layers",
            m.qubits(),
            m.encoding().name(),
            m.layers()
        ),
        Model::Cnn(m) => m.architecture().describe(),
    }
}

/// Aggregates completed runs per epoch in seed order.
pub fn summarize(runs: &[RunResult], epochs: usize) -> Vec<EpochStat> {
    if runs.is_empty() {
        return Vec::new();
    }
    (0..epochs)
        .map(|e| {
            let acc: Vec<f64> = runs.iter().map(|r| r.test_accuracy[e]).collect();
            let (mean, sem) = mean_and_sem(&acc);
            let n = runs.len() as f64;
            EpochStat {
                epoch: e + 1,
                mean_test_accuracy: mean.expect("non-empty"),
                sem,
                mean_train_accuracy: runs.iter().map(|r| r.train_accuracy[e]).sum::<f64>() / n,
                mean_train_loss: runs.iter().map(|r| r.train_loss[e]).sum::<f64>() / n,
            }
        })
        .collect()
}

/// Runs `cfg.runs` trainings (seeds `base_seed + i`) of one model on one
/// dataset. Runs execute in parallel; failed runs are excluded and listed.
pub fn run_model(selector: ModelSelector, data: &ProcessedDataset, dataset: PathBuf, cfg: &TrainConfig) -> Result<ModelSummary> {
    cfg.validate()?;
    let outcomes: Vec<(u64, Result<(Model, RunResult)>)> = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.base_seed + i;
            (seed, train(selector, data, cfg, seed))
        })
        .collect();
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    let mut architecture = None;
    for (seed, outcome) in outcomes {
        match outcome {
            Ok((model, run)) => {
                architecture.get_or_insert_with(|| (describe(&model), model.num_params()));
                runs.push(run);
            }
            Err(e) => failures.push(RunFailure {
                seed,
                error: e.to_string(),
            }),
        }
    }
    let (architecture, param_count) = match architecture {
        Some(a) => a,
        None => {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(cfg.base_seed);
            let m = selector.init(data.dim(), &mut rng)?;
            (describe(&m), m.num_params())
        }
    };
    let epochs = summarize(&runs, cfg.epochs);
    let (final_mean, final_sem) = match epochs.last() {
        Some(last) => (Some(last.mean_test_accuracy), last.sem),
        None => (None, None),
    };
    Ok(ModelSummary {
        model: selector,
        param_count,
        architecture,
        dataset,
        threshold: data.threshold,
        train_size: data.train.len(),
        test_size: data.test.len(),
        runs_requested: cfg.runs,
        runs_completed: runs.len(),
        failures,
        epochs,
        final_mean,
        final_sem,
        runs,
    })
}

/// Every configured model, in configuration order.
pub fn run_experiment(cfg: &TrainConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut summaries = Vec::with_capacity(cfg.models.len());
    for model in &cfg.models {
        let path = cfg.dataset_path(model);
        let data = ProcessedDataset::read(&path)?;
        summaries.push(run_model(*model, &data, path, cfg)?);
    }
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        threshold_id: cfg.threshold_id,
        summaries,
    })
}
