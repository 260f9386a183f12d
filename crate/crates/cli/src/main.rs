//! `sgrp`: simulate superimposed generalized renewal processes, check the
//! intensity bounds on masked data and produce rate curves.
//!
//! Exit status: 0 success, 1 internal error, 2 usage, 3 malformed config or
//! input, 4 missing file, 5 parameter out of range, 6 other I/O failure,
//! 7 a check (bounds-check) found violations. Every failure prints one line
//! `sgrp: error code=<status> kind=<kind> msg=<json string>` on stderr.

mod commands;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use sgrp_core::scenarios::Method;
use sgrp_core::{Config, Error};

use crate::commands::{execute, figure_list, parse_method};
use crate::manifest::{Invocation, Manifest};

#[derive(Parser)]
#[command(name = "sgrp", version, about = "Superimposed generalized renewal process toolkit")]
struct Cli {
    /// Worker threads for replications and figure curves (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Exact simulation: labeled and masked event logs plus a rate curve.
    SimulateSgrp(Common),
    /// Masked trajectory of the bound-combination model.
    SimulateApprox {
        #[command(flatten)]
        common: Common,
        /// algorithm1 or thinning.
        #[arg(long, default_value = "thinning")]
        method: String,
    },
    /// Per-event lower / true / upper table; exits 7 on any violation.
    BoundsCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        replications: usize,
        /// Check an existing event log instead of simulating.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// rates.csv from an event log.
    RateCurve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = sgrp_core::config::DEFAULT_BIN_WIDTH)]
        bin_width: f64,
    },
    /// Rate curves of the reference experiments: fig3, fig4, fig5, fig6 or all.
    Figures {
        #[arg(required = true)]
        figures: Vec<String>,
        #[command(flatten)]
        common: Common,
        /// Simulator for the approximation curves.
        #[arg(long, default_value = "thinning")]
        method: String,
    },
    /// Repeats the run recorded in a manifest.
    Rerun {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(common: &Common) -> anyhow::Result<(u64, sgrp_core::RawConfig)> {
    let cfg = Config::from_path(&common.config).with_context(|| format!("config {}", common.config.display()))?;
    let cfg = match common.seed {
        Some(seed) => cfg.with_seed(seed),
        None => cfg,
    };
    Ok((cfg.seed(), *cfg.raw()))
}

fn path_string(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn invocation(command: Command) -> anyhow::Result<(Invocation, PathBuf)> {
    Ok(match command {
        Command::SimulateSgrp(common) => {
            let (seed, config) = load(&common)?;
            (Invocation::SimulateSgrp { seed, config }, common.out)
        }
        Command::SimulateApprox { common, method } => {
            let method: Method = parse_method(&method)?;
            let (seed, config) = load(&common)?;
            (Invocation::SimulateApprox { seed, method, config }, common.out)
        }
        Command::BoundsCheck {
            common,
            replications,
            input,
        } => {
            let (seed, config) = load(&common)?;
            (
                Invocation::BoundsCheck {
                    seed,
                    replications,
                    input: input.as_deref().map(path_string),
                    config,
                },
                common.out,
            )
        }
        Command::RateCurve { input, out, bin_width } => (
            Invocation::RateCurve {
                input: path_string(&input),
                bin_width,
            },
            out,
        ),
        Command::Figures {
            figures,
            common,
            method,
        } => {
            let figures = figure_list(&figures)?;
            let method = parse_method(&method)?;
            let (seed, config) = load(&common)?;
            (
                Invocation::Figures {
                    seed,
                    method,
                    figures,
                    config,
                },
                common.out,
            )
        }
        Command::Rerun { manifest, out } => (Manifest::read(&manifest)?.invocation, out),
    })
}

fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Json(_) | Error::Csv(_) => (3, "schema"),
                Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound => (4, "missing-file"),
                Error::Io(_) => (6, "io"),
                Error::InvalidParameter { .. }
                | Error::Domain(_)
                | Error::Unsupported(_)
                | Error::InvalidHistory(_)
                | Error::OrderingViolated { .. }
                | Error::TooFewSamples { .. } => (5, "domain"),
                Error::NegativeResidual { .. } => (1, "internal"),
            };
        }
        if let Some(io) = cause.downcast_ref::<std::io::Error>() {
            return if io.kind() == std::io::ErrorKind::NotFound {
                (4, "missing-file")
            } else {
                (6, "io")
            };
        }
    }
    (1, "internal")
}

fn report(code: u8, kind: &str, message: &str) -> ExitCode {
    let msg = serde_json::to_string(message).unwrap_or_else(|_| "\"?\"".into());
    eprintln!("sgrp: error code={code} kind={kind} msg={msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        return report(1, "internal", &e.to_string());
    }
    let result = invocation(cli.command).and_then(|(inv, out)| execute(&inv, &out));
    match result {
        Ok(outcome) => match outcome.failed_check {
            None => ExitCode::SUCCESS,
            Some(reason) => report(7, "check-failed", &reason),
        },
        Err(e) => {
            let (code, kind) = classify(&e);
            report(code, kind, &format!("{e:#}"))
        }
    }
}
