use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use qscatter_core::dataset::{build_datasets, dataset_file_name, run_sweep, write_events, SweepConfig};
use qscatter_core::train::{run_experiment, train, write_report, Checkpoint, ModelSelector, TrainConfig};
use qscatter_core::{json, with_worker_pool, Error, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "qscatter", version, about = "Fermion scattering datasets and QCNN/CNN classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat `key = value` configuration file
    #[arg(long)]
    config: PathBuf,
    /// Override a configuration key (repeatable), e.g. `--set runs=10`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scattering sweep and build the labelled PCA datasets
    GenData {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a single model and write its checkpoint
    Train {
        #[command(flatten)]
        config: ConfigArgs,
        /// Model selector such as qcnn4-hee or cnn51 (default: first configured model)
        #[arg(long)]
        model: Option<ModelSelector>,
        /// Seed (default: the configured base seed)
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: the configured output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every configured model `runs` times and write report.json
    Experiment {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory (default: the configured output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the summary table and per-epoch CSV from an experiment directory
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Where to write table.txt and curves.csv (default: the input directory)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(serde::Serialize)]
struct Manifest {
    schema_version: u32,
    config_hash: String,
    config: SweepConfig,
    events: usize,
    failed: usize,
    separated: usize,
    datasets: Vec<DatasetEntry>,
}

#[derive(serde::Serialize)]
struct DatasetEntry {
    file: String,
    threshold_id: usize,
    threshold: f64,
    components: usize,
    train: usize,
    test: usize,
}

fn gen_data(args: &ConfigArgs, out: &Path) -> Result<()> {
    let cfg = SweepConfig::load(&args.config, &args.overrides)?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    eprintln!(
        "sweeping {} points on {} sites up to t = {}",
        cfg.cardinality(),
        cfg.sites,
        cfg.time_horizon
    );
    let events = with_worker_pool(|| run_sweep(&cfg))??;
    write_events(&out.join("events.jsonl"), &events)?;
    let failed = events.iter().filter(|e| e.error.is_some()).count();
    let separated = events.iter().filter(|e| e.delta_s_mid.is_some()).count();
    eprintln!("{} events, {failed} failed, {separated} with a separation time", events.len());

    let datasets = build_datasets(&cfg, &events)?;
    let mut entries = Vec::new();
    for d in &datasets {
        let file = dataset_file_name(d.threshold_id, d.dim());
        d.write(&out.join(&file))?;
        eprintln!(
            "{file}: S_th = {:.6}, {} train / {} test",
            d.threshold,
            d.train.len(),
            d.test.len()
        );
        entries.push(DatasetEntry {
            file,
            threshold_id: d.threshold_id,
            threshold: d.threshold,
            components: d.dim(),
            train: d.train.len(),
            test: d.test.len(),
        });
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        config_hash: cfg.hash(),
        config: cfg,
        events: events.len(),
        failed,
        separated,
        datasets: entries,
    };
    json::write_file(&out.join("manifest.json"), &manifest)?;
    Ok(())
}

fn train_one(args: &ConfigArgs, model: Option<ModelSelector>, seed: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    let cfg = TrainConfig::load(&args.config, &args.overrides)?;
    let selector = model.unwrap_or(cfg.models[0]);
    let seed = seed.unwrap_or(cfg.base_seed);
    let out = out.unwrap_or_else(|| cfg.output_dir.clone());
    let path = cfg.dataset_path(&selector);
    let data = qscatter_core::dataset::ProcessedDataset::read(&path)?;
    let (model, run) = train(selector, &data, &cfg, seed)?;
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let stem = format!("{selector}_seed{seed}");
    let ckpt = out.join(format!("checkpoint_{stem}.json"));
    Checkpoint::new(model, &run, &cfg, &data.config_hash).write(&ckpt)?;
    json::write_file(&out.join(format!("run_{stem}.json")), &run)?;
    println!(
        "{selector} seed {seed}: test accuracy {:.4} after {} epochs -> {}",
        run.test_accuracy.last().copied().unwrap_or(f64::NAN),
        run.test_accuracy.len(),
        ckpt.display()
    );
    Ok(())
}

fn experiment(args: &ConfigArgs, out: Option<PathBuf>) -> Result<()> {
    let cfg = TrainConfig::load(&args.config, &args.overrides)?;
    let out = out.unwrap_or_else(|| cfg.output_dir.clone());
    let report = with_worker_pool(|| run_experiment(&cfg))??;
    for s in &report.summaries {
        for f in &s.failures {
            eprintln!("{} seed {} excluded: {}", s.model, f.seed, f.error);
        }
    }
    let path = report.write(&out)?;
    eprintln!("wrote {}", path.display());
    print!("{}", qscatter_core::train::render_table(&report));
    Ok(())
}

fn report(input: &Path, out: Option<PathBuf>) -> Result<()> {
    if !input.is_dir() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{} is not a directory; pass the experiment output directory", input.display()),
        )
        .into());
    }
    let out = out.unwrap_or_else(|| input.to_path_buf());
    let (table, csv, text) = write_report(input, &out)?;
    print!("{text}");
    eprintln!("wrote {} and {}", table.display(), csv.display());
    Ok(())
}

/// 3 for configuration problems, 4 for unreadable inputs, 5 for schema
/// mismatches, 1 otherwise. Usage errors exit with 2 from clap.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_)) => 3,
        Some(Error::Io { .. } | Error::Json { .. }) => 4,
        Some(Error::Schema { .. }) => 5,
        _ if err.downcast_ref::<std::io::Error>().is_some() => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::GenData { config, out } => gen_data(config, out),
        Command::Train {
            config,
            model,
            seed,
            out,
        } => train_one(config, *model, *seed, out.clone()),
        Command::Experiment { config, out } => experiment(config, out.clone()),
        Command::Report { input, out } => report(input, out.clone()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
