use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{SweepConfig, ThresholdKind};
use super::label::assign_label;
use super::pca::{apply_pca, fit_pca, PcaModel};
use super::scale::{scale_to_angles, AngleBounds};
use super::split::balance_and_split;
use super::sweep::ScatteringEvent;
use crate::{Error, Result, SCHEMA_VERSION};

/// Angle-scaled PCA features with labels for one side of the split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitData {
    /// Sweep index of each row's event.
    pub event_index: Vec<usize>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub delta_s_mid: Vec<f64>,
}

impl SplitData {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A balanced, PCA-reduced, angle-scaled dataset at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessedDataset {
    pub schema_version: u32,
    pub config_hash: String,
    pub seed: u64,
    /// Threshold id: position in the configured threshold list.
    pub threshold_id: usize,
    pub threshold_kind: ThresholdKind,
    /// The configured entry (a value, or a quantile level).
    pub threshold_setting: f64,
    /// The `S_th` actually used for labelling.
    pub threshold: f64,
    pub sites: usize,
    pub time_steps: usize,
    pub pca: PcaModel,
    pub bounds: AngleBounds,
    pub train: SplitData,
    pub test: SplitData,
}

impl ProcessedDataset {
    pub fn dim(&self) -> usize {
        self.pca.dim()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        crate::json::write_file(path, self)
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

/// Quantile with linear interpolation between order statistics (so the
/// `0.5` quantile is the usual median).
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() || !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!(
            "quantile {q} of {} values is undefined",
            values.len()
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Ok(sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Resolves the configured threshold entries to `S_th` values.
pub fn resolve_thresholds(config: &SweepConfig, events: &[ScatteringEvent]) -> Result<Vec<f64>> {
    match config.threshold_kind {
        ThresholdKind::Value => Ok(config.thresholds.clone()),
        ThresholdKind::Quantile => {
            let detected: Vec<f64> = events.iter().filter_map(|e| e.delta_s_mid).collect();
            if detected.is_empty() {
                return Err(Error::Dataset(
                    "no event has a separation time; cannot place quantile thresholds".into(),
                ));
            }
            config.thresholds.iter().map(|&q| quantile(&detected, q)).collect()
        }
    }
}

/// Labels the events that have `ΔS_mid`, balances and splits them, fits PCA
/// with `d` components and the angle bounds on the training rows only, and
/// applies both to the test rows.
pub fn build_dataset(
    events: &[ScatteringEvent],
    threshold: f64,
    d: usize,
    test_fraction: f64,
    seed: u64,
) -> Result<(SplitData, SplitData, PcaModel, AngleBounds)> {
    let usable: Vec<&ScatteringEvent> = events
        .iter()
        .filter(|e| e.error.is_none() && e.delta_s_mid.is_some())
        .collect();
    let labels: Vec<u8> = usable
        .iter()
        .map(|e| assign_label(e.delta_s_mid.expect("filtered"), threshold))
        .collect();
    let split = balance_and_split(&labels, test_fraction, seed)?;

    let raw = |idx: &[usize]| -> Vec<Vec<f64>> { idx.iter().map(|&i| usable[i].features()).collect() };
    let train_raw = raw(&split.train);
    let test_raw = raw(&split.test);
    let pca = fit_pca(&train_raw, d)?;
    let train_scores = apply_pca(&pca, &train_raw)?;
    let test_scores = apply_pca(&pca, &test_raw)?;
    let bounds = AngleBounds::fit(&train_scores)?;

    let side = |idx: &[usize], scores: &[Vec<f64>]| -> Result<SplitData> {
        Ok(SplitData {
            event_index: idx.iter().map(|&i| usable[i].index).collect(),
            features: scores
                .iter()
                .map(|s| scale_to_angles(s, &bounds))
                .collect::<Result<_>>()?,
            labels: idx.iter().map(|&i| labels[i]).collect(),
            delta_s_mid: idx.iter().map(|&i| usable[i].delta_s_mid.expect("filtered")).collect(),
        })
    };
    let train = side(&split.train, &train_scores)?;
    let test = side(&split.test, &test_scores)?;
    Ok((train, test, pca, bounds))
}

/// Every `(threshold, components)` dataset requested by `config`, in
/// threshold-major order.
pub fn build_datasets(config: &SweepConfig, events: &[ScatteringEvent]) -> Result<Vec<ProcessedDataset>> {
    let thresholds = resolve_thresholds(config, events)?;
    let sites = config.sites;
    let time_steps = config.steps() + 1;
    let hash = config.hash();
    let mut out = Vec::new();
    for (id, (&setting, &threshold)) in config.thresholds.iter().zip(&thresholds).enumerate() {
        for &d in &config.components {
            let (train, test, pca, bounds) = build_dataset(events, threshold, d, config.test_fraction, config.seed)
                .map_err(|e| Error::Dataset(format!("threshold {threshold:.6} with {d} components: {e}")))?;
            out.push(ProcessedDataset {
                schema_version: SCHEMA_VERSION,
                config_hash: hash.clone(),
                seed: config.seed,
                threshold_id: id,
                threshold_kind: config.threshold_kind,
                threshold_setting: setting,
                threshold,
                sites,
                time_steps,
                pca,
                bounds,
                train,
                test,
            });
        }
    }
    Ok(out)
}

/// File name used for a dataset inside an output directory.
pub fn dataset_file_name(threshold_id: usize, components: usize) -> String {
    format!("dataset_t{threshold_id}_d{components}.json")
}
