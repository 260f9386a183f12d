//! Thinning sampler for λ̃_s.
//!
//! Between events λ̃_s is nondecreasing in t (every term is λ(t − o) with a
//! fixed o and λ nondecreasing), so its value at the right end of a window
//! majorizes it on the whole window. Candidates are drawn at the majorant
//! rate and accepted with probability λ̃_s(candidate)/majorant; a candidate
//! beyond the window moves the clock to the window end and doubles the
//! window. After each acceptance the window is reset to the median of the
//! recent inter-event spacings.

use rand::Rng;
use rand_distr::Exp1;

use crate::approx::ApproxModel;
use crate::error::Result;
use crate::sgrp::{MaskedHistory, Stop};

const SPACING_WINDOW: usize = 32;

#[derive(Debug, Clone)]
pub struct ThinningTrace {
    pub history: MaskedHistory,
    pub proposals: usize,
    pub accepted: usize,
    /// Largest observed λ̃_s(candidate)/majorant; at most 1.
    pub max_ratio: f64,
    /// Smallest observed ratio over accepted candidates; above 0.
    pub min_accepted_ratio: f64,
}

pub fn simulate_thinning<R: Rng + ?Sized>(am: &ApproxModel, stop: Stop, rng: &mut R) -> Result<MaskedHistory> {
    simulate_thinning_traced(am, stop, rng).map(|t| t.history)
}

pub fn simulate_thinning_traced<R: Rng + ?Sized>(am: &ApproxModel, stop: Stop, rng: &mut R) -> Result<ThinningTrace> {
    stop.validate()?;
    let (m, rho) = am.checked_ara()?;
    let n = am.n();

    let mut times: Vec<f64> = Vec::new();
    if let Stop::Events(count) = stop {
        times.reserve(count);
    }
    let mut spacings: Vec<f64> = Vec::with_capacity(SPACING_WINDOW);
    let mut scratch = Vec::with_capacity(SPACING_WINDOW);
    let mut window = am.hazard().inverse_at(1.0) / n as f64;
    let mut clock = 0.0;
    let mut proposals = 0;
    let mut max_ratio: f64 = 0.0;
    let mut min_accepted_ratio: f64 = 1.0;

    loop {
        let end = clock + window;
        let majorant = am.intensity_on(m, rho, &times, end);
        if !(majorant > 0.0) {
            clock = end;
            window *= 2.0;
            if let Stop::Horizon(h) = stop {
                if clock >= h {
                    break;
                }
            }
            continue;
        }
        let e: f64 = rng.sample(Exp1);
        let candidate = clock + e / majorant;
        if let Stop::Horizon(h) = stop {
            if candidate > h && end >= h {
                break;
            }
        }
        if candidate > end {
            clock = end;
            window *= 2.0;
            continue;
        }
        proposals += 1;
        let value = am.intensity_on(m, rho, &times, candidate);
        let ratio = value / majorant;
        max_ratio = max_ratio.max(ratio);
        let u: f64 = rng.random();
        clock = candidate;
        if u * majorant < value {
            min_accepted_ratio = min_accepted_ratio.min(ratio);
            let spacing = candidate - times.last().copied().unwrap_or(0.0);
            if spacings.len() == SPACING_WINDOW {
                spacings.remove(0);
            }
            spacings.push(spacing);
            times.push(candidate);
            if let Stop::Events(count) = stop {
                if times.len() >= count {
                    break;
                }
            }
            scratch.clear();
            scratch.extend_from_slice(&spacings);
            let mid = scratch.len() / 2;
            let (_, median, _) = scratch.select_nth_unstable_by(mid, f64::total_cmp);
            if *median > 0.0 {
                window = *median;
            }
        }
    }

    let accepted = times.len();
    let history = match stop {
        Stop::Events(_) => MaskedHistory::until_last(n, times)?,
        Stop::Horizon(h) => MaskedHistory::new(n, times, h)?,
    };
    Ok(ThinningTrace {
        history,
        proposals,
        accepted,
        max_ratio,
        min_accepted_ratio,
    })
}
