//! Experiment configuration.
//!
//! One JSON document drives every run:
//!
//! ```json
//! {
//!   "hazard": {"family": "power_law", "beta": 1.3, "eta": 40.0},
//!   "repair": {"model": "ara", "m": 1, "rho": 0.3},
//!   "system": {"n": 100},
//!   "approx": {"delta": 0.5, "normalization": "system_split"},
//!   "run": {"events": 200000, "seed": 7, "bin_width": 1000}
//! }
//! ```
//!
//! `approx` is only needed by approximation runs. `run` takes either
//! `events` or `horizon`. Shape errors surface as [`Error::Json`]; values
//! out of range surface as parameter errors once the shape is accepted.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::approx::{ApproxModel, Normalization};
use crate::error::{Error, Result};
use crate::grp::RepairModel;
use crate::hazard::{Hazard, HazardSpec};
use crate::sgrp::Stop;

pub const DEFAULT_BIN_WIDTH: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxSection {
    pub delta: f64,
    #[serde(default)]
    pub normalization: Normalization,
}

fn default_bin_width() -> f64 {
    DEFAULT_BIN_WIDTH
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_bin_width")]
    pub bin_width: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            events: None,
            horizon: None,
            seed: 0,
            bin_width: DEFAULT_BIN_WIDTH,
        }
    }
}

/// The document as written, before range checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub hazard: HazardSpec,
    pub repair: RepairModel,
    pub system: SystemSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxSection>,
    #[serde(default)]
    pub run: RunSection,
}

/// A checked configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    raw: RawConfig,
    hazard: Hazard,
    stop: Option<Stop>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        Self::from_raw(raw)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self> {
        let hazard = Hazard::try_from(raw.hazard)?;
        raw.repair.validate()?;
        if raw.system.n == 0 {
            return Err(Error::param("n", "component count must be >= 1"));
        }
        if let Some(a) = raw.approx {
            ApproxModel::new(raw.system.n, a.delta, hazard, raw.repair, a.normalization)?;
        }
        let run = raw.run;
        if !(run.bin_width > 0.0) || !run.bin_width.is_finite() {
            return Err(Error::param("bin_width", format!("must be positive and finite, got {}", run.bin_width)));
        }
        let stop = match (run.events, run.horizon) {
            (Some(_), Some(_)) => return Err(Error::param("run", "give either `events` or `horizon`, not both")),
            (Some(n), None) => Some(Stop::Events(n)),
            (None, Some(t)) => Some(Stop::Horizon(t)),
            (None, None) => None,
        };
        if let Some(s) = stop {
            s.validate()?;
        }
        Ok(Self { raw, hazard, stop })
    }

    pub fn raw(&self) -> &RawConfig {
        &self.raw
    }

    pub fn hazard(&self) -> &Hazard {
        &self.hazard
    }

    pub fn repair(&self) -> &RepairModel {
        &self.raw.repair
    }

    pub fn n(&self) -> usize {
        self.raw.system.n
    }

    pub fn seed(&self) -> u64 {
        self.raw.run.seed
    }

    pub fn bin_width(&self) -> f64 {
        self.raw.run.bin_width
    }

    pub fn stop(&self) -> Option<Stop> {
        self.stop
    }

    pub fn require_stop(&self) -> Result<Stop> {
        self.stop
            .ok_or_else(|| Error::param("run", "set `events` or `horizon` for this command"))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.raw.run.seed = seed;
        self
    }

    pub fn approx_model(&self) -> Result<ApproxModel> {
        let a = self
            .raw
            .approx
            .ok_or_else(|| Error::param("approx", "section required for approximation runs"))?;
        ApproxModel::new(self.n(), a.delta, self.hazard, self.raw.repair, a.normalization)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.raw)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"{
        "hazard": {"family": "power_law", "beta": 1.3, "eta": 40.0},
        "repair": {"model": "ara", "m": 1, "rho": 0.3},
        "system": {"n": 100},
        "approx": {"delta": 0.5, "normalization": "system_split"},
        "run": {"events": 200000, "seed": 7}
    }"#;

    #[test]
    fn parses_and_defaults() {
        let c = Config::from_json(FULL).unwrap();
        assert_eq!(c.n(), 100);
        assert_eq!(c.seed(), 7);
        assert_eq!(c.bin_width(), 1000.0);
        assert_eq!(c.stop(), Some(Stop::Events(200000)));
        let am = c.approx_model().unwrap();
        assert_eq!(am.delta(), 0.5);
        assert_eq!(am.normalization(), Normalization::SystemHazardSplit);
    }

    #[test]
    fn round_trips() {
        let c = Config::from_json(FULL).unwrap();
        let again = Config::from_json(&c.to_json_pretty().unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn shape_and_range_errors_differ() {
        let unknown = FULL.replace("\"system\"", "\"sys\"");
        assert!(matches!(Config::from_json(&unknown), Err(Error::Json(_))));
        let typo = FULL.replace("\"rho\"", "\"r\"");
        assert!(matches!(Config::from_json(&typo), Err(Error::Json(_))));
        let beta = FULL.replace("1.3", "0.5");
        assert!(matches!(Config::from_json(&beta), Err(Error::InvalidParameter { name: "beta", .. })));
        let delta = FULL.replace("\"delta\": 0.5", "\"delta\": 1.5");
        assert!(matches!(Config::from_json(&delta), Err(Error::InvalidParameter { name: "delta", .. })));
        let both = FULL.replace("\"seed\": 7", "\"seed\": 7, \"horizon\": 10.0");
        assert!(matches!(Config::from_json(&both), Err(Error::InvalidParameter { name: "run", .. })));
    }

    #[test]
    fn approx_section_optional() {
        let text = r#"{"hazard":{"family":"constant","rate":0.1},"repair":{"model":"perfect"},"system":{"n":3}}"#;
        let c = Config::from_json(text).unwrap();
        assert!(c.approx_model().is_err());
        assert!(c.require_stop().is_err());
    }
}
