//! Simulation and analysis of superimposed generalized renewal processes.
//!
//! A series system of `n` identical sockets fails whenever a component
//! fails; the failed component is repaired (imperfectly, per a
//! [`RepairModel`]) and returned to service. When failure records do not
//! say which component failed, the system intensity cannot be computed, but
//! it can be bracketed ([`sgrp_bounds`]) and approximated by a weighted mix
//! of the two bounds ([`approx_intensity`]).
//!
//! ```
//! use sgrp_core::{mask, sgrp_bounds, simulate_sgrp, stream, Hazard, RepairModel, Stop};
//!
//! let h = Hazard::power_law(1.3, 40.0).unwrap();
//! let repair = RepairModel::ara(1, 0.3).unwrap();
//! let full = simulate_sgrp(5, &repair, &h, Stop::Events(200), &mut stream(1, 0)).unwrap();
//! let masked = mask(&full);
//! let t = masked.horizon();
//! let b = sgrp_bounds(&masked, &repair, &h, t).unwrap();
//! assert!(b.lower <= b.upper);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod bounds;
pub mod config;
pub mod error;
pub mod grp;
pub mod hazard;
pub mod io;
pub mod rng;
pub mod scenarios;
pub mod sgrp;
pub mod simulate;
pub mod stats;

pub use approx::{approx_intensity, approx_intensity_ara, most_repaired, psi, ApproxModel, ApproxSpec, Normalization};
pub use bounds::{heterogeneous_upper, heterogeneous_upper_with_grid, sgrp_bounds, srp_bounds, BoundPair, ORDERING_GRID_POINTS};
pub use config::{Config, RawConfig};
pub use error::{Error, Result};
pub use grp::{
    conditional_intensity, effective_age_offset, sample_next_failure, sample_next_failure_with, ComponentHistory,
    GrpProcess, RepairModel, RepairState,
};
pub use hazard::{Hazard, HazardSpec};
pub use rng::{child, stream, SimRng};
pub use scenarios::{simulate_approx, Figure, Method};
pub use sgrp::{mask, simulate_sgrp, true_intensity_at_events, true_system_intensity, FullHistory, MaskedHistory, Stop, SystemEvent};
pub use simulate::{nhpp_from_uniforms, nhpp_sample, simulate_algorithm1, simulate_thinning, NhppStream};
pub use stats::{adaptive_simpson, ks_exp1, mean_rate, rate_curve, rescaled_residuals, KsOutcome, MeanRate, RateCurve};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
