use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use otto_tem::engine::NoiseModel;
use otto_tem::format::sig9;
use otto_tem::pipeline::stages::{self, REFERENCE_DIR};
use otto_tem::pipeline::{
    build_reference, generate_dataset, linspace, qi_sweep, sweep_csv, ExperimentConfig, Method,
    ReferenceDiagram, SweepConfig,
};
use otto_tem::write_atomic;

#[derive(Parser)]
#[command(
    name = "otto-tem",
    version,
    about = "Topological monitoring of a simulated quantum Otto engine"
)]
struct Cli {
    /// Experiment configuration (JSON); command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the noiseless reference diagram.
    Reference {
        /// Results root; writes `<out>/reference/`.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Simulate a labelled trajectory ensemble.
    Dataset(DatasetArgs),
    /// Compute diagrams or statistics and export a feature table.
    Featurize {
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Dataset directory written by `dataset`.
        #[arg(long)]
        data: PathBuf,
    },
    /// Cross-validate logistic regression on featurized data.
    Evaluate {
        #[arg(long)]
        cv: Option<usize>,
        /// Methods to evaluate; all three when omitted.
        #[arg(long, value_enum)]
        method: Vec<MethodArg>,
        #[arg(long)]
        data: PathBuf,
    },
    /// QI and work statistics over an amplitude grid.
    QiSweep(SweepArgs),
    /// Assemble the AUC table and the jitter pixel-correlation heatmap.
    Report {
        #[arg(long, default_value = "results")]
        results: PathBuf,
    },
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to `results/<model>`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Protocol {
    /// Burn-in 15, window 15.
    Visual,
    /// Burn-in and window from the experiment config.
    Ml,
}

#[derive(Args)]
struct SweepArgs {
    /// Reference directory from `reference`; rebuilt when absent.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value = "results/qi_sweep.csv")]
    out: PathBuf,
    #[arg(long, default_value = "jitter")]
    model: String,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, value_enum, default_value = "visual")]
    protocol: Protocol,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    TemImage,
    TemSilhouette,
    Ssm,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::TemImage => Method::TemImage,
            MethodArg::TemSilhouette => Method::TemSilhouette,
            MethodArg::Ssm => Method::Ssm,
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => {
            ExperimentConfig::load(p).with_context(|| format!("reading config {}", p.display()))
        }
        None => Ok(ExperimentConfig::default()),
    }
}

fn load_or_build_reference(dir: Option<&Path>, cfg: &ExperimentConfig) -> Result<ReferenceDiagram> {
    match dir {
        Some(d) => ReferenceDiagram::load(d)
            .with_context(|| format!("loading reference from {}", d.display())),
        None => Ok(build_reference(
            &cfg.params,
            &cfg.reference,
            &cfg.embed,
            &cfg.tda,
        )?),
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Reference { out } => {
            let dir = out.join(REFERENCE_DIR);
            let r = build_reference(&cfg.params, &cfg.reference, &cfg.embed, &cfg.tda)?;
            r.save(&dir)?;
            let top = r.diagram.persistences_desc();
            println!(
                "reference: {} pairs, top persistence {} -> {}",
                r.diagram.len(),
                top.first().map_or("0".into(), |&p| sig9(p)),
                dir.display()
            );
        }
        Command::Dataset(a) => {
            if let Some(m) = a.model {
                cfg.model = m.parse()?;
            }
            if let Some(n) = a.n {
                cfg.n_trajectories = n;
            }
            if let Some(s) = a.seed {
                cfg.master_seed = s;
            }
            cfg.validate()?;
            let dir = a
                .out
                .unwrap_or_else(|| PathBuf::from("results").join(cfg.model.name()));
            let data = generate_dataset(&cfg)?;
            data.save(&dir)?;
            let pos = data.manifest.labels().iter().filter(|&&l| l == 1).count();
            println!(
                "dataset: {} trajectories of model {} ({} degraded) -> {}",
                data.trajectories.len(),
                cfg.model,
                pos,
                dir.display()
            );
        }
        Command::Featurize { method, data } => {
            let path = stages::featurize(&data, method.into())?;
            println!("features: {}", path.display());
        }
        Command::Evaluate { cv, method, data } => {
            let methods: Vec<Method> = if method.is_empty() {
                Method::ALL.to_vec()
            } else {
                method.into_iter().map(Method::from).collect()
            };
            for m in methods {
                let r = stages::evaluate(&data, m, cv)?;
                let folds: Vec<String> = r.per_fold_auc.iter().map(|&a| sig9(a)).collect();
                println!(
                    "{} {}: mean AUC {} (folds {})",
                    r.model,
                    m,
                    sig9(r.mean_auc),
                    folds.join(", ")
                );
            }
        }
        Command::QiSweep(a) => {
            let model: NoiseModel = a.model.parse()?;
            let (burn_in, window) = match a.protocol {
                Protocol::Visual => (cfg.reference.burn_in, cfg.reference.window),
                Protocol::Ml => (cfg.burn_in, cfg.window),
            };
            let sc = SweepConfig {
                model,
                grid: linspace(0.0, model.default_max_amplitude(), a.points),
                runs_per_point: a.runs,
                burn_in,
                window,
                master_seed: a.seed.unwrap_or(cfg.master_seed),
            };
            let reference = load_or_build_reference(a.reference.as_deref(), &cfg)?;
            let rows = qi_sweep(&cfg.params, &sc, &reference, &cfg.embed, &cfg.tda)?;
            write_atomic(&a.out, sweep_csv(&rows).as_bytes())?;
            println!("qi-sweep: {} rows -> {}", rows.len(), a.out.display());
        }
        Command::Report { results } => {
            let report = stages::emit_report(&results)?;
            println!(
                "{:<10} {:>12} {:>12} {:>15}",
                "model", "ssm", "tem_image", "tem_silhouette"
            );
            for (m, aucs) in &report.table {
                println!(
                    "{:<10} {:>12} {:>12} {:>15}",
                    m.name(),
                    sig9(aucs[0]),
                    sig9(aucs[1]),
                    sig9(aucs[2])
                );
            }
            println!(
                "wrote {} and {}",
                results.join(stages::TABLE_FILE).display(),
                results.join(stages::HEATMAP_FILE).display()
            );
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
