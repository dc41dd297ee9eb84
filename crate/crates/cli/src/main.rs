use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use coopmetro_cli::{execute, parse_config, Cli, Plan, UsageError};

const THREADS_VAR: &str = "COOPMETRO_THREADS";

fn thread_pool() -> Result<Option<rayon::ThreadPool>, UsageError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(None);
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(UsageError(format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| UsageError(format!("cannot start {n} worker threads: {e}")))?;
    Ok(Some(pool))
}

fn run() -> anyhow::Result<bool> {
    let (command, flags) = Cli::parse().into_parts();
    let config = parse_config(command, &flags)?;
    let plan = Plan::from_config(&config)?;
    let pool = thread_pool()?;
    let report = match &pool {
        Some(pool) => pool.install(|| execute(&plan.job)),
        None => execute(&plan.job),
    }?;
    report.table.write(plan.format, plan.out.as_deref()).context("writing results")?;
    for failure in &report.failures {
        eprintln!("coopmetro: point failed: {failure}");
    }
    Ok(report.is_complete())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("coopmetro: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
