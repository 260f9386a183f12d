use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use serde::Serialize;
use sgrp_core::io::{read_events, write_bounds, write_full_events, write_masked_events, write_rates, BoundsRow};
use sgrp_core::scenarios::{curve_jobs, run_curve, Figure, Method, Setup};
use sgrp_core::{
    mask, rate_curve, sgrp_bounds, simulate_approx, simulate_sgrp, stream, true_intensity_at_events, Config,
    Error, FullHistory, MaskedHistory, RepairModel, Stop, SystemEvent,
};

use crate::manifest::{Invocation, Manifest};

/// Bound violations smaller than this are rounding.
pub const SLACK: f64 = 1e-9;

pub struct Outcome {
    /// Set when the run completed but a check it performs did not hold.
    pub failed_check: Option<String>,
}

fn create(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path)
        .map_err(Error::from)
        .with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_curve(dir: &Path, name: &str, mh: &MaskedHistory, bin_width: f64) -> anyhow::Result<()> {
    let curve = rate_curve(mh.times(), bin_width)?.drop_partial(mh.horizon());
    write_rates(create(dir, name)?, &curve)?;
    Ok(())
}

pub fn execute(invocation: &Invocation, out: &Path) -> anyhow::Result<Outcome> {
    std::fs::create_dir_all(out)
        .map_err(Error::from)
        .with_context(|| format!("creating {}", out.display()))?;
    let mut manifest = Manifest::new(invocation.clone());
    let mut failed_check = None;
    match invocation {
        Invocation::SimulateSgrp { seed, config } => {
            let cfg = Config::from_raw(*config)?;
            let full = simulate_sgrp(cfg.n(), cfg.repair(), cfg.hazard(), cfg.require_stop()?, &mut stream(*seed, 0))?;
            let masked = mask(&full);
            write_full_events(create(out, "events.csv")?, &full)?;
            write_masked_events(create(out, "masked.csv")?, &masked)?;
            write_curve(out, "rates.csv", &masked, cfg.bin_width())?;
            manifest.outputs = vec!["events.csv".into(), "masked.csv".into(), "rates.csv".into()];
            println!("simulate-sgrp: {} events up to t = {}", masked.len(), masked.horizon());
        }
        Invocation::SimulateApprox { seed, method, config } => {
            let cfg = Config::from_raw(*config)?;
            let am = cfg.approx_model()?;
            let mh = simulate_approx(&am, cfg.require_stop()?, *method, &mut stream(*seed, 0))?;
            write_masked_events(create(out, "events.csv")?, &mh)?;
            write_curve(out, "rates.csv", &mh, cfg.bin_width())?;
            manifest.outputs = vec!["events.csv".into(), "rates.csv".into()];
            println!("simulate-approx ({method}): {} events up to t = {}", mh.len(), mh.horizon());
        }
        Invocation::BoundsCheck {
            seed,
            replications,
            input,
            config,
        } => {
            let cfg = Config::from_raw(*config)?;
            let summary = bounds_check(&cfg, *seed, *replications, input.as_deref(), out)?;
            manifest.outputs = summary.files.clone();
            manifest.outputs.push("check.json".into());
            if !summary.labeled {
                manifest
                    .notes
                    .push("input log has no component labels; bounds written without the true intensity".into());
            }
            let mut text = serde_json::to_string_pretty(&summary)?;
            text.push('\n');
            std::fs::write(out.join("check.json"), text).map_err(Error::from)?;
            println!(
                "bounds-check: {} replication(s), {} event times, {} violation(s)",
                summary.replications, summary.events, summary.violations
            );
            if summary.violations > 0 {
                failed_check = Some(format!("{} bound violation(s)", summary.violations));
            }
        }
        Invocation::RateCurve { input, bin_width } => {
            let file = File::open(input)
                .map_err(Error::from)
                .with_context(|| format!("opening {input}"))?;
            let times: Vec<f64> = read_events(file)?.into_iter().map(|e| e.time).collect();
            let last = times.last().copied().unwrap_or(0.0);
            let curve = rate_curve(&times, *bin_width)?.drop_partial(last);
            write_rates(create(out, "rates.csv")?, &curve)?;
            manifest.outputs = vec!["rates.csv".into()];
            manifest
                .notes
                .push("bins end at the last event; the bin holding it is dropped".into());
            println!("rate-curve: {} events, {} full bins", times.len(), curve.bins.len());
        }
        Invocation::Figures {
            seed,
            method,
            figures,
            config,
        } => {
            let cfg = Config::from_raw(*config)?;
            let events = match cfg.require_stop()? {
                Stop::Events(n) => n,
                Stop::Horizon(_) => {
                    return Err(Error::param("run", "figures need `events`, not `horizon`").into());
                }
            };
            let setup = Setup {
                n: cfg.n(),
                hazard: *cfg.hazard(),
                events,
                bin_width: cfg.bin_width(),
                method: *method,
            };
            let mut jobs = Vec::new();
            for &f in figures {
                jobs.extend(curve_jobs(f, &setup)?);
            }
            let curves: Vec<_> = jobs
                .par_iter()
                .map(|job| run_curve(job, &setup, *seed))
                .collect::<Result<_, _>>()?;
            for c in &curves {
                let name = format!("{}.csv", c.label);
                write_rates(create(out, &name)?, &c.curve)?;
                manifest.outputs.push(name);
            }
            manifest
                .notes
                .push("each CSV holds full bins only; the bin holding the last event is dropped".into());
            println!("figures: {} curve(s) written", curves.len());
        }
    }
    manifest.write(out)?;
    Ok(Outcome { failed_check })
}

#[derive(Debug, Serialize)]
struct CheckSummary {
    replications: usize,
    labeled: bool,
    events: usize,
    violations: usize,
    slack: f64,
    #[serde(skip)]
    files: Vec<String>,
}

struct Checked {
    rows: Vec<BoundsRow>,
    violations: usize,
}

fn check_history(
    masked: &MaskedHistory,
    full: Option<&FullHistory>,
    model: &RepairModel,
    cfg: &Config,
) -> anyhow::Result<Checked> {
    let truth = match full {
        Some(f) => Some(true_intensity_at_events(f, model, cfg.hazard())?),
        None => None,
    };
    let mut rows = Vec::with_capacity(masked.len());
    let mut violations = 0;
    for (k, &t) in masked.times().iter().enumerate() {
        let b = sgrp_bounds(masked, model, cfg.hazard(), t)?;
        let value = truth.as_ref().map(|v| v[k]);
        if let Some(v) = value {
            if !b.contains(v, SLACK) {
                violations += 1;
            }
        }
        rows.push(BoundsRow {
            t,
            lower: b.lower,
            upper: b.upper,
            truth: value,
        });
    }
    Ok(Checked { rows, violations })
}

fn bounds_check(
    cfg: &Config,
    seed: u64,
    replications: usize,
    input: Option<&str>,
    out: &Path,
) -> anyhow::Result<CheckSummary> {
    let model = cfg.repair();
    let (checked, labeled): (Vec<Checked>, bool) = match input {
        Some(path) => {
            let file = File::open(path)
                .map_err(Error::from)
                .with_context(|| format!("opening {path}"))?;
            let records = read_events(file)?;
            let labeled = !records.is_empty() && records.iter().all(|r| r.component.is_some());
            let times: Vec<f64> = records.iter().map(|r| r.time).collect();
            let masked = MaskedHistory::until_last(cfg.n(), times)?;
            let full = if labeled {
                let events = records
                    .iter()
                    .map(|r| SystemEvent {
                        time: r.time,
                        component: r.component.expect("labeled"),
                    })
                    .collect();
                Some(FullHistory::from_events(cfg.n(), events, masked.horizon())?)
            } else {
                None
            };
            (vec![check_history(&masked, full.as_ref(), model, cfg)?], labeled)
        }
        None => {
            if replications == 0 {
                return Err(Error::param("replications", "must be >= 1").into());
            }
            let stop = cfg.require_stop()?;
            let runs = (0..replications)
                .into_par_iter()
                .map(|r| {
                    let full = simulate_sgrp(cfg.n(), model, cfg.hazard(), stop, &mut stream(seed, r as u64))?;
                    check_history(&mask(&full), Some(&full), model, cfg)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            (runs, true)
        }
    };
    let mut files = Vec::new();
    for (r, c) in checked.iter().enumerate() {
        let name = if checked.len() == 1 {
            "bounds.csv".to_string()
        } else {
            format!("bounds_{:03}.csv", r + 1)
        };
        write_bounds(create(out, &name)?, &c.rows)?;
        files.push(name);
    }
    Ok(CheckSummary {
        replications: checked.len(),
        labeled,
        events: checked.iter().map(|c| c.rows.len()).sum(),
        violations: checked.iter().map(|c| c.violations).sum(),
        slack: SLACK,
        files,
    })
}

/// Expands `all` and removes duplicates, keeping the order given.
pub fn figure_list(names: &[String]) -> anyhow::Result<Vec<Figure>> {
    let mut out: Vec<Figure> = Vec::new();
    for name in names {
        let expanded: Vec<Figure> = if name == "all" {
            Figure::ALL.to_vec()
        } else {
            vec![name.parse()?]
        };
        for f in expanded {
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

pub fn parse_method(name: &str) -> anyhow::Result<Method> {
    Ok(name.parse()?)
}
