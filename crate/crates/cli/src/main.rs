mod config;
mod jobs;
mod output;

use clap::Parser;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use jobs::{JobError, RunSettings};

/// Runs a verification or table job described by a TOML/JSON file.
#[derive(Debug, Parser)]
#[command(name = "joyce-tau", version)]
struct Cli {
    /// Job file (`.toml`, or `.json`).
    #[arg(long, required_unless_present = "manifest")]
    config: Option<PathBuf>,
    /// Output directory; overrides the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed for sampled checks; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplies every residual threshold.
    #[arg(long)]
    tol_scale: Option<f64>,
    /// Worker threads for independent sample points.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Print the list of checks as JSON and exit.
    #[arg(long)]
    manifest: bool,
}

const PASS: u8 = 0;
const CHECK_FAILURE: u8 = 1;
const CONFIG_ERROR: u8 = 2;
const NUMERICAL_ABORT: u8 = 3;

fn emit_error(out: Option<&Path>, err: serde_json::Value) {
    let text = serde_json::to_string_pretty(&err).expect("error report serialises");
    println!("{text}");
    if let Some(dir) = out {
        if std::fs::create_dir_all(dir).is_ok() {
            let _ = std::fs::write(dir.join("error.json"), text + "\n");
        }
    }
}

fn config_error(out: Option<&Path>, message: String) -> ExitCode {
    emit_error(out, json!({ "kind": "ConfigError", "message": message }));
    ExitCode::from(CONFIG_ERROR)
}

fn write(dir: &Path, name: &str, text: &str) -> std::io::Result<()> {
    std::fs::write(dir.join(name), text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.manifest {
        let m = serde_json::to_string_pretty(&joyce_tau::verify::manifest()).expect("manifest serialises");
        println!("{m}");
        return ExitCode::from(PASS);
    }
    let cfg_path = cli.config.expect("clap enforces --config");
    let cfg = match config::load(&cfg_path) {
        Ok(c) => c,
        Err(e) => return config_error(cli.out.as_deref(), e.0),
    };
    let out = cli.out.clone().or(cfg.output.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let tol_scale = cli.tol_scale.unwrap_or(cfg.tolerances.scale);
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return config_error(Some(&out), "--tol-scale must be positive".into());
    }
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            return config_error(Some(&out), e.to_string());
        }
    }
    let settings = RunSettings {
        seed: cli.seed.or(cfg.seed),
        tol_scale,
    };
    let result = match jobs::run(&cfg, &settings) {
        Ok(r) => r,
        Err(JobError::Config(m)) => return config_error(Some(&out), m),
        Err(JobError::Numerical(e)) => {
            emit_error(
                Some(&out),
                json!({ "kind": "NumericalAbort", "error": e.kind(), "message": e.to_string(), "job": cfg.job.kind() }),
            );
            return ExitCode::from(NUMERICAL_ABORT);
        }
    };
    let written = (|| -> std::io::Result<()> {
        std::fs::create_dir_all(&out)?;
        for (name, table) in &result.tables {
            write(&out, name, &table.to_csv()?)?;
        }
        write(&out, "report.json", &(serde_json::to_string_pretty(&result.report)? + "\n"))?;
        if matches!(cfg.job, config::Job::Verify(_)) {
            let m = serde_json::to_string_pretty(&joyce_tau::verify::manifest())?;
            write(&out, "manifest.json", &(m + "\n"))?;
        }
        Ok(())
    })();
    if let Err(e) = written {
        emit_error(None, json!({ "kind": "IoError", "message": e.to_string() }));
        return ExitCode::from(NUMERICAL_ABORT);
    }
    if let config::Job::Verify(_) = cfg.job {
        for o in &result.report.verify {
            println!("{}", o.summary());
        }
    }
    println!(
        "{} {}: {}",
        if result.report.passed { "PASS" } else { "FAIL" },
        cfg.job.kind(),
        out.display()
    );
    if result.aborted {
        ExitCode::from(NUMERICAL_ABORT)
    } else if result.report.passed {
        ExitCode::from(PASS)
    } else {
        ExitCode::from(CHECK_FAILURE)
    }
}
