//! Lower and upper bounds on the system intensity from masked data.
//!
//! With labels missing, the component that failed at each system time is
//! unknown. Two attributions bracket the truth when the hazard is
//! nondecreasing and repair is improving:
//!
//! - lower: every failure hits the least recently repaired component, so the
//!   n most recent system failures belong to n distinct components
//!   (round-robin);
//! - upper: every failure hits the most recently repaired component, so one
//!   component carries all N repairs and n − 1 components are still new.

use crate::error::{Error, Result};
use crate::grp::{ara_offset, offset_of, RepairModel};
use crate::hazard::Hazard;
use crate::sgrp::MaskedHistory;

/// Default number of grid points used to validate intensity ordering.
pub const ORDERING_GRID_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub at: f64,
}

impl BoundPair {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}

fn check_eval_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be finite and >= 0, got {t}")))
    }
}

/// Bounds for perfect repair (replacement), evaluated at the left limit of `t`.
///
/// lower = Σ_{i=0}^{n−1} λ(t − T_{N−i}) with T_k = 0 for k ≤ 0,
/// upper = (n−1)·λ(t) + λ(t − T_N).
pub fn srp_bounds(mh: &MaskedHistory, h: &Hazard, t: f64) -> Result<BoundPair> {
    h.require_nondecreasing()?;
    check_eval_time(t)?;
    let times = mh.before(t);
    let n = mh.n();
    let big_n = times.len();
    let system_time = |k: usize| if k == 0 { 0.0 } else { times[k - 1] };

    let mut lower = 0.0;
    for i in 0..n {
        let k = big_n.saturating_sub(i);
        lower += h.rate_at(t - system_time(k));
    }
    let upper = (n - 1) as f64 * h.rate_at(t) + h.rate_at(t - system_time(big_n));
    Ok(BoundPair { lower, upper, at: t })
}

/// Memory depth q of the round-robin lag sums, min(⌊N/n⌋ − 1, m − 1),
/// floored at 0 so that N < n uses a single term per lag.
#[inline]
pub(crate) fn lag_depth(big_n: usize, n: usize, m: usize) -> usize {
    (big_n / n).saturating_sub(1).min(m - 1)
}

/// Intensity of the component at round-robin lag `i`: the one repaired at
/// system failures N−i, N−i−n, N−i−2n, ... Lags with no failure yet run
/// on the initial hazard.
#[inline]
pub(crate) fn lag_intensity(times: &[f64], n: usize, q: usize, rho: f64, h: &Hazard, t: f64, i: usize) -> f64 {
    let big_n = times.len();
    if big_n <= i {
        return h.rate_at(t);
    }
    let mut sum = 0.0;
    let mut weight = 1.0;
    for j in 0..=q {
        let Some(k) = big_n.checked_sub(n * j + i) else {
            break;
        };
        if k == 0 {
            break;
        }
        sum += weight * times[k - 1];
        weight *= 1.0 - rho;
    }
    h.rate_at(t - rho * sum)
}

/// Σ_{i=0}^{n−1} λ^{(N−i)}(t), the lower member.
#[inline]
pub(crate) fn lower_sum(times: &[f64], n: usize, m: usize, rho: f64, h: &Hazard, t: f64) -> f64 {
    let q = lag_depth(times.len(), n, m);
    (0..n).map(|i| lag_intensity(times, n, q, rho, h, t, i)).sum()
}

/// λ^{(N)}(t): one component carrying every repair, ARA_m over its last
/// min(N, m) failures.
#[inline]
pub(crate) fn most_repaired_intensity(times: &[f64], m: usize, rho: f64, h: &Hazard, t: f64) -> f64 {
    h.rate_at(t - ara_offset(m, rho, times))
}

#[inline]
pub(crate) fn upper_sum(times: &[f64], n: usize, m: usize, rho: f64, h: &Hazard, t: f64) -> f64 {
    (n - 1) as f64 * h.rate_at(t) + most_repaired_intensity(times, m, rho, h, t)
}

/// Bounds for a superposition of ARA_m-repaired identical components,
/// evaluated at the left limit of `t`.
///
/// Perfect, minimal and Kijima I (A ≤ 1) repair are mapped onto their ARA
/// equivalents. Harmful repair and decreasing hazards are rejected.
pub fn sgrp_bounds(mh: &MaskedHistory, model: &RepairModel, h: &Hazard, t: f64) -> Result<BoundPair> {
    h.require_nondecreasing()?;
    let (m, rho) = model.improving_ara()?;
    check_eval_time(t)?;
    let times = mh.before(t);
    let n = mh.n();
    Ok(BoundPair {
        lower: lower_sum(times, n, m, rho, h, t),
        upper: upper_sum(times, n, m, rho, h, t),
        at: t,
    })
}

/// Upper bound for components with different initial intensities
/// ξ₁ ≤ ξ₂ ≤ … ≤ ξₙ under a common repair model: Σ_{i≥2} ξᵢ(t) + ξ₁^{(N)}(t),
/// with all N masked failures attributed to component 1.
///
/// The ordering is checked on `grid_points` uniform points of [0, t].
pub fn heterogeneous_upper(
    mh: &MaskedHistory,
    initial_intensities: &[Hazard],
    model: &RepairModel,
    t: f64,
) -> Result<f64> {
    heterogeneous_upper_with_grid(mh, initial_intensities, model, t, ORDERING_GRID_POINTS)
}

pub fn heterogeneous_upper_with_grid(
    mh: &MaskedHistory,
    initial_intensities: &[Hazard],
    model: &RepairModel,
    t: f64,
    grid_points: usize,
) -> Result<f64> {
    model.improving_ara()?;
    check_eval_time(t)?;
    if initial_intensities.len() != mh.n() {
        return Err(Error::param(
            "initial_intensities",
            format!("expected {} hazards, got {}", mh.n(), initial_intensities.len()),
        ));
    }
    for xi in initial_intensities {
        xi.require_nondecreasing()?;
    }
    if grid_points < 2 {
        return Err(Error::param("grid_points", "need at least 2 points"));
    }
    for g in 0..grid_points {
        let s = t * g as f64 / (grid_points - 1) as f64;
        for pair in initial_intensities.windows(2) {
            if pair[0].rate_at(s) > pair[1].rate_at(s) {
                return Err(Error::OrderingViolated { at: s });
            }
        }
    }
    let times = mh.before(t);
    let rest: f64 = initial_intensities[1..].iter().map(|xi| xi.rate_at(t)).sum();
    Ok(rest + initial_intensities[0].rate_at(t - offset_of(model, times)))
}
