//! Rate-curve experiments on the 100-component reference system.
//!
//! | figure | curves                                                           |
//! |--------|------------------------------------------------------------------|
//! | fig3   | exact SGRP, ARA₁ with ρ ∈ {0.3, 0.6, 0.9}                         |
//! | fig4   | λ̃_s with δ ∈ {0, 0.2, 0.4, 0.6, 0.8, 1}, ρ = 0.3                  |
//! | fig5   | exact SGRP and λ̃_s with δ ∈ {0, 1}, ρ = 0.3                       |
//! | fig6   | exact SGRP and λ̃_s with δ ∈ {0, 1}, ρ = 0.6                       |
//!
//! Approximation curves use the component hazard of the exact system
//! ([`Normalization::ComponentHazard`]) so the curves of one figure share a
//! scale. Every curve draws from its own rng stream, keyed by figure and
//! position, so a curve does not depend on which others run with it.

use serde::{Deserialize, Serialize};

use crate::approx::{ApproxModel, Normalization};
use crate::error::{Error, Result};
use crate::grp::RepairModel;
use crate::hazard::Hazard;
use crate::rng::stream;
use crate::sgrp::{mask, simulate_sgrp, MaskedHistory, Stop};
use crate::simulate::{simulate_algorithm1, simulate_thinning};
use crate::stats::{rate_curve, RateCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Algorithm1,
    Thinning,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algorithm1" => Ok(Method::Algorithm1),
            "thinning" => Ok(Method::Thinning),
            other => Err(Error::param("method", format!("expected algorithm1 or thinning, got `{other}`"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Algorithm1 => "algorithm1",
            Method::Thinning => "thinning",
        })
    }
}

/// Masked trajectory of λ̃_s by the chosen simulator.
pub fn simulate_approx<R: rand::Rng + ?Sized>(
    am: &ApproxModel,
    stop: Stop,
    method: Method,
    rng: &mut R,
) -> Result<MaskedHistory> {
    match (method, stop) {
        (Method::Thinning, _) => simulate_thinning(am, stop, rng),
        (Method::Algorithm1, Stop::Events(count)) => simulate_algorithm1(am, count, rng),
        (Method::Algorithm1, Stop::Horizon(_)) => Err(Error::Unsupported(
            "algorithm1 generates a fixed number of events; use `events`".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig3, Figure::Fig4, Figure::Fig5, Figure::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }

    fn stream_base(self) -> u64 {
        match self {
            Figure::Fig3 => 3_000,
            Figure::Fig4 => 4_000,
            Figure::Fig5 => 5_000,
            Figure::Fig6 => 6_000,
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param("figure", format!("unknown figure `{s}`")))
    }
}

pub const FIG3_RHOS: [f64; 3] = [0.3, 0.6, 0.9];
pub const FIG4_DELTAS: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
pub const FIG4_RHO: f64 = 0.3;
pub const FIG5_RHO: f64 = 0.3;
pub const FIG6_RHO: f64 = 0.6;

/// Shared settings of a figure run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub n: usize,
    pub hazard: Hazard,
    pub events: usize,
    pub bin_width: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveSource {
    Exact(RepairModel),
    Approx(ApproxModel),
}

/// One curve of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveJob {
    pub figure: Figure,
    pub label: String,
    pub stream: u64,
    pub source: CurveSource,
}

pub fn curve_jobs(figure: Figure, setup: &Setup) -> Result<Vec<CurveJob>> {
    let approx = |rho: f64, delta: f64| -> Result<CurveSource> {
        Ok(CurveSource::Approx(ApproxModel::new(
            setup.n,
            delta,
            setup.hazard,
            RepairModel::ara(1, rho)?,
            Normalization::ComponentHazard,
        )?))
    };
    let mut sources = Vec::new();
    match figure {
        Figure::Fig3 => {
            for rho in FIG3_RHOS {
                sources.push((format!("sgrp_rho{rho}"), CurveSource::Exact(RepairModel::ara(1, rho)?)));
            }
        }
        Figure::Fig4 => {
            for delta in FIG4_DELTAS {
                sources.push((format!("approx_delta{delta}"), approx(FIG4_RHO, delta)?));
            }
        }
        Figure::Fig5 | Figure::Fig6 => {
            let rho = if figure == Figure::Fig5 { FIG5_RHO } else { FIG6_RHO };
            sources.push((format!("sgrp_rho{rho}"), CurveSource::Exact(RepairModel::ara(1, rho)?)));
            sources.push((format!("approx_delta0_rho{rho}"), approx(rho, 0.0)?));
            sources.push((format!("approx_delta1_rho{rho}"), approx(rho, 1.0)?));
        }
    }
    Ok(sources
        .into_iter()
        .enumerate()
        .map(|(i, (label, source))| CurveJob {
            figure,
            label: format!("{}_{label}", figure.name()),
            stream: figure.stream_base() + i as u64,
            source,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveOutput {
    pub label: String,
    pub history: MaskedHistory,
    /// Full bins only: the bin holding the last event is dropped.
    pub curve: RateCurve,
}

pub fn run_curve(job: &CurveJob, setup: &Setup, seed: u64) -> Result<CurveOutput> {
    let mut rng = stream(seed, job.stream);
    let stop = Stop::Events(setup.events);
    let history = match job.source {
        CurveSource::Exact(repair) => mask(&simulate_sgrp(setup.n, &repair, &setup.hazard, stop, &mut rng)?),
        CurveSource::Approx(am) => simulate_approx(&am, stop, setup.method, &mut rng)?,
    };
    let curve = rate_curve(history.times(), setup.bin_width)?.drop_partial(history.horizon());
    Ok(CurveOutput {
        label: job.label.clone(),
        history,
        curve,
    })
}
