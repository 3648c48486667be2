//! `growthlab`: run one experiment from a TOML config and write
//! `table.csv`, `verdict.txt` and `manifest.toml` to the output directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::Parser;
use growthlab_core::config::{parse_config_file, ExperimentConfig, ExperimentKind};
use growthlab_core::experiments::{self, ExperimentReport};
use sha2::{Digest, Sha256};

#[derive(Debug, Parser)]
#[command(version, about = "Double-coset growth and genericity experiments")]
struct Args {
    /// TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Experiment to run; overrides the config's `experiment`.
    #[arg(long)]
    experiment: Option<ExperimentKind>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Random seed; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest radius; overrides `radius.r_max`.
    #[arg(long)]
    radius: Option<usize>,
    /// Do not print the verdict summary.
    #[arg(long)]
    quiet: bool,
}

fn load(args: &Args, bytes: &[u8]) -> anyhow::Result<(ExperimentConfig, ExperimentKind)> {
    let text = std::str::from_utf8(bytes).context("config is not UTF-8")?;
    let mut file = parse_config_file(text)?;
    if let Some(kind) = args.experiment {
        file.experiment = Some(kind.name().to_string());
    }
    if let Some(seed) = args.seed {
        file.seed = seed;
    }
    if let Some(r) = args.radius {
        file.radius.r_max = r;
    }
    let cfg = ExperimentConfig::resolve(file)?;
    let kind = cfg.experiment.ok_or_else(|| anyhow!("no experiment named in the config or on the command line"))?;
    Ok((cfg, kind))
}

fn manifest(args: &Args, hash: &str, cfg: &ExperimentConfig, kind: ExperimentKind, times: [String; 2]) -> String {
    let mut m = toml::Table::new();
    m.insert("config_path".into(), args.config.display().to_string().into());
    m.insert("config_sha256".into(), hash.into());
    m.insert("experiment".into(), kind.name().into());
    m.insert("seed".into(), (cfg.file.seed as i64).into());
    m.insert("out".into(), args.out.display().to_string().into());
    let [started, finished] = times;
    m.insert("started".into(), started.into());
    m.insert("finished".into(), finished.into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    let echo: toml::Table = cfg.echo().parse().expect("echo is valid TOML");
    m.insert("config".into(), echo.into());
    toml::to_string(&m).expect("manifest serializes")
}

fn write_outputs(dir: &Path, report: &ExperimentReport, manifest: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("table.csv"), report.table.to_csv_string())?;
    fs::write(dir.join("verdict.txt"), report.verdict_text())?;
    fs::write(dir.join("manifest.toml"), manifest)?;
    Ok(())
}

fn run(args: &Args) -> anyhow::Result<ExitCode> {
    let bytes = fs::read(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let hash = hex::encode(Sha256::digest(&bytes));
    let (cfg, kind) = load(args, &bytes)?;
    let started = chrono::Utc::now().to_rfc3339();
    let report = experiments::run(&cfg, kind)?;
    let finished = chrono::Utc::now().to_rfc3339();
    write_outputs(&args.out, &report, &manifest(args, &hash, &cfg, kind, [started, finished]))?;
    if !args.quiet {
        print!("{}", report.verdict_text());
    }
    Ok(ExitCode::from(report.status().exit_code() as u8))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
