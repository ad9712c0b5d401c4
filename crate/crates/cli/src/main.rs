//! `msx`: batch driver for moment-matrix section experiments.

#![allow(clippy::needless_range_loop)]

mod config;
mod experiments;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use msx_core::export::{num, write_json};
use msx_core::measures::json::parse_measure;
use msx_core::verify::{render, run_all, Status, VerifyOptions};
use msx_core::{MomentKernel, MsxError};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
/// `verify` only: some checks did not converge, none failed outright.
const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Parser)]
#[command(name = "msx", version, about = "Finite sections of infinite moment matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a JSON configuration.
    Run {
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every reference check and print the table.
    Verify {
        /// Section order for the limit-based checks.
        #[arg(long)]
        n_max: Option<usize>,
        /// Also write the reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print one moment of a measure given as JSON.
    Moment {
        measure: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
}

fn is_numerical(e: &MsxError) -> bool {
    matches!(
        e,
        MsxError::NotPositiveDefinite { .. }
            | MsxError::Quadrature { .. }
            | MsxError::EigenNonConvergence { .. }
            | MsxError::NonRealDiagonal { .. }
    )
}

fn exit_for(e: &MsxError) -> ExitCode {
    ExitCode::from(if is_numerical(e) { EXIT_NUMERICAL } else { EXIT_CONFIG })
}

fn init_threads() {
    let Ok(v) = std::env::var("MSX_THREADS") else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size the thread pool: {e}");
            }
        }
        _ => log::warn!("ignoring MSX_THREADS = {v:?}"),
    }
}

fn write_summary(out: &Path, mut body: Value, kind: &str, label: &str, status: &str, error: Option<String>) -> ExitCode {
    if !body.is_object() {
        body = json!({});
    }
    body["schema"] = json!(1);
    body["kind"] = json!(kind);
    body["measure"] = json!(label);
    body["status"] = json!(status);
    body["error"] = json!(error);
    match write_json(&out.join("summary.json"), &body) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn cmd_run(config: &Path, out: &Path) -> ExitCode {
    if let Err(e) = fs::create_dir_all(out) {
        eprintln!("error: {}: {e}", out.display());
        return ExitCode::from(EXIT_CONFIG);
    }
    let cfg = match fs::read_to_string(config).map_err(MsxError::from).and_then(|t| config::parse(&t)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            write_summary(out, json!({}), "unknown", "unknown", "config_error", Some(e.to_string()));
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let kind = cfg.kind.name();
    let label = cfg.target.label.clone();
    log::info!("running {kind} on {label}");
    match experiments::run(&cfg, out) {
        Ok(run) => {
            let status = if run.failure.is_some() { "numerical_failure" } else { "ok" };
            let failed = run.failure.clone();
            let code = write_summary(out, run.summary, kind, &label, status, run.failure);
            if let Some(msg) = failed {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_NUMERICAL);
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            let status = if is_numerical(&e) { "numerical_failure" } else { "config_error" };
            write_summary(out, json!({ "config": cfg.raw }), kind, &label, status, Some(e.to_string()));
            exit_for(&e)
        }
    }
}

fn cmd_verify(n_max: Option<usize>, json_out: Option<&Path>) -> ExitCode {
    let reports = run_all(&VerifyOptions { n_max });
    print!("{}", render(&reports));
    let failed = reports.iter().filter(|r| r.status() == Status::Fail).count();
    let unconverged = reports.iter().filter(|r| r.status() == Status::NotConverged).count();
    println!("{} passed, {failed} failed, {unconverged} not converged", reports.len() - failed - unconverged);
    if let Some(path) = json_out {
        if let Err(e) = write_json(path, &json!({ "schema": 1, "criteria": reports })) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else if unconverged > 0 {
        ExitCode::from(EXIT_NOT_CONVERGED)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_moment(path: &Path, i: usize, j: usize) -> ExitCode {
    let value = fs::read_to_string(path)
        .map_err(MsxError::from)
        .and_then(|t| parse_measure(&t))
        .and_then(MomentKernel::from_measure)
        .and_then(|k| k.entry(i, j));
    match value {
        Ok(z) => {
            println!("{} {}", num(z.re), num(z.im));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    match cli.command {
        Command::Run { config, out } => cmd_run(&config, &out),
        Command::Verify { n_max, json } => cmd_verify(n_max, json.as_deref()),
        Command::Moment { measure, i, j } => cmd_moment(&measure, i, j),
    }
}
