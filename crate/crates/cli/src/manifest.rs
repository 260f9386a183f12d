//! Run manifests. A manifest holds everything needed to repeat a run: the
//! command, the effective seed and the full configuration. It carries no
//! timestamps or host details, so reruns reproduce it byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sgrp_core::scenarios::{Figure, Method};
use sgrp_core::RawConfig;

pub const FILE_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Invocation {
    SimulateSgrp {
        seed: u64,
        config: RawConfig,
    },
    SimulateApprox {
        seed: u64,
        method: Method,
        config: RawConfig,
    },
    BoundsCheck {
        seed: u64,
        replications: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        input: Option<String>,
        config: RawConfig,
    },
    RateCurve {
        input: String,
        bin_width: f64,
    },
    Figures {
        seed: u64,
        method: Method,
        figures: Vec<Figure>,
        config: RawConfig,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub invocation: Invocation,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
}

impl Manifest {
    pub fn new(invocation: Invocation) -> Self {
        Self {
            tool: "sgrp".into(),
            version: sgrp_core::VERSION.into(),
            invocation,
            outputs: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(dir.join(FILE_NAME), text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(sgrp_core::Error::from)?;
        Ok(serde_json::from_str(&text).map_err(sgrp_core::Error::from)?)
    }
}
