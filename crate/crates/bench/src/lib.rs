//! Fixtures shared by the benchmarks.

use sgrp_core::{mask, simulate_sgrp, stream, ApproxModel, Hazard, MaskedHistory, Normalization, RepairModel, Stop};

pub fn reference_hazard() -> Hazard {
    Hazard::power_law(1.3, 40.0).expect("valid hazard")
}

pub fn reference_repair() -> RepairModel {
    RepairModel::ara(1, 0.3).expect("valid repair")
}

pub fn reference_approx(n: usize, delta: f64) -> ApproxModel {
    ApproxModel::new(n, delta, reference_hazard(), reference_repair(), Normalization::SystemHazardSplit)
        .expect("valid model")
}

/// Masked SGRP history with `events` events.
pub fn masked_history(n: usize, events: usize, seed: u64) -> MaskedHistory {
    let full = simulate_sgrp(n, &reference_repair(), &reference_hazard(), Stop::Events(events), &mut stream(seed, 0))
        .expect("simulation");
    mask(&full)
}
