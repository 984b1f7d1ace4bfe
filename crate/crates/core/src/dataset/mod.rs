//! Parameter sweeps over `(m, g, μ_k^c, μ_k^d)`, separation-time labelling,
//! class balancing, PCA and angle scaling.

mod build;
mod config;
mod label;
mod pca;
mod scale;
mod split;
mod sweep;

pub use build::{
    build_dataset, build_datasets, dataset_file_name, quantile, resolve_thresholds, ProcessedDataset, SplitData,
};
pub use config::{SweepConfig, ThresholdKind};
pub use label::{assign_label, central_excess_entropy, detect_separation_time};
pub use pca::{apply_pca, fit_pca, PcaModel};
pub use scale::{scale_to_angles, AngleBounds};
pub use split::{balance_and_split, BalancedSplit};
pub use sweep::{read_events, run_sweep, write_events, EventParameters, ScatteringEvent};
