//! MSE + Adam training, multi-run experiments with mean ± SEM aggregation,
//! checkpoints and report rendering.

mod checkpoint;
mod experiment;
mod model;
mod optim;
mod report;
mod run;

pub use checkpoint::Checkpoint;
pub use experiment::{
    mean_and_sem, run_experiment, run_model, summarize, EpochStat, ExperimentReport, ModelSummary, RunFailure,
    REPORT_FILE,
};
pub use model::{GradientMethod, Model, ModelSelector};
pub use optim::{accuracy, adam_step, mse_loss, AdamConfig, AdamState};
pub use report::{render_csv, render_table, write_report, CSV_FILE, TABLE_FILE};
pub use run::{train, RunResult, TrainConfig};
