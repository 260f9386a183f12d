//! Single-component generalized renewal processes.
//!
//! After its N-th repair a component's intensity is the initial hazard
//! evaluated at a shifted age: λ(t − o), where the offset o depends on the
//! repair model and the component's own failure times. For arithmetic
//! reduction of age with memory m (ARA_m),
//!
//! ```text
//! o = ρ · Σ_{j=0}^{min(m−1, N−1)} (1−ρ)^j · T_{N−j}
//! ```
//!
//! Kijima type I keeps a virtual age V_k = V_{k−1} + A·X_k and evaluates
//! λ(V_N + t − T_N), which is the same shape with o = T_N − V_N.

use std::collections::VecDeque;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hazard::Hazard;

/// Repair-effectiveness rule.
///
/// Config form: `{"model":"ara","m":1,"rho":0.3}`, `{"model":"kijima1","a":0.5}`,
/// `{"model":"perfect"}` or `{"model":"minimal"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepairModel {
    /// Arithmetic reduction of age with memory `m` and effectiveness `rho`.
    /// `rho = 1` is as-good-as-new, `rho = 0` as-bad-as-old, `rho < 0` harmful.
    Ara { m: usize, rho: f64 },
    /// Kijima type I virtual age with degree `a`.
    Kijima1 { a: f64 },
    Perfect,
    Minimal,
}

impl RepairModel {
    pub fn ara(m: usize, rho: f64) -> Result<Self> {
        let model = RepairModel::Ara { m, rho };
        model.validate()?;
        Ok(model)
    }

    pub fn kijima1(a: f64) -> Result<Self> {
        let model = RepairModel::Kijima1 { a };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RepairModel::Ara { m, rho } => {
                if m == 0 {
                    return Err(Error::param("m", "memory order must be >= 1"));
                }
                if !rho.is_finite() || rho > 1.0 {
                    return Err(Error::param("rho", format!("must be finite and <= 1, got {rho}")));
                }
                Ok(())
            }
            RepairModel::Kijima1 { a } => {
                if a.is_finite() && a >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::param("a", format!("must be finite and >= 0, got {a}")))
                }
            }
            RepairModel::Perfect | RepairModel::Minimal => Ok(()),
        }
    }

    /// ARA with ρ < 0.
    pub fn is_harmful(&self) -> bool {
        matches!(*self, RepairModel::Ara { rho, .. } if rho < 0.0)
            || matches!(*self, RepairModel::Kijima1 { a } if a > 1.0)
    }

    /// The model as an improving ARA_m, `(m, ρ)` with ρ ∈ [0, 1].
    ///
    /// Perfect is ARA_1(1), minimal is ARA_1(0) and Kijima I with A ∈ [0, 1]
    /// is ARA_1(1 − A). Anything else has no bound theory and is refused.
    pub fn improving_ara(&self) -> Result<(usize, f64)> {
        self.validate()?;
        match *self {
            RepairModel::Ara { m, rho } if (0.0..=1.0).contains(&rho) => Ok((m, rho)),
            RepairModel::Ara { rho, .. } => Err(Error::Unsupported(format!(
                "harmful repair (rho = {rho}); bounds need rho in [0, 1]"
            ))),
            RepairModel::Perfect => Ok((1, 1.0)),
            RepairModel::Minimal => Ok((1, 0.0)),
            RepairModel::Kijima1 { a } if a <= 1.0 => Ok((1, 1.0 - a)),
            RepairModel::Kijima1 { a } => Err(Error::Unsupported(format!(
                "Kijima I with a = {a} > 1 ages the component beyond its real age"
            ))),
        }
    }

    /// Number of most recent own failure times the offset depends on.
    pub fn memory(&self) -> usize {
        match *self {
            RepairModel::Ara { m, .. } => m,
            RepairModel::Perfect => 1,
            RepairModel::Kijima1 { .. } | RepairModel::Minimal => 0,
        }
    }
}

/// Strictly increasing failure times of one component.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComponentHistory {
    times: Vec<f64>,
}

impl ComponentHistory {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        validate_times(&times)?;
        Ok(Self { times })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.times.last().copied()
    }

    pub fn push(&mut self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 || self.last().is_some_and(|last| t <= last) {
            return Err(Error::InvalidHistory(format!(
                "failure time {t} does not extend history ending at {:?}",
                self.last()
            )));
        }
        self.times.push(t);
        Ok(())
    }

    /// Failures strictly before `t`.
    pub fn before(&self, t: f64) -> &[f64] {
        &self.times[..self.times.partition_point(|&x| x < t)]
    }
}

pub(crate) fn validate_times(times: &[f64]) -> Result<()> {
    if let Some(bad) = times.iter().position(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidHistory(format!(
            "time {} at position {bad} is negative or not finite",
            times[bad]
        )));
    }
    if let Some(w) = times.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidHistory(format!(
            "times not strictly increasing at position {}",
            w + 1
        )));
    }
    Ok(())
}

/// ρ·Σ_{j=0}^{min(m−1,N−1)} (1−ρ)^j T_{N−j} over the tail of `times`.
#[inline]
pub(crate) fn ara_offset(m: usize, rho: f64, times: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut weight = 1.0;
    for &t in times.iter().rev().take(m) {
        sum += weight * t;
        weight *= 1.0 - rho;
    }
    rho * sum
}

fn kijima_virtual_age(a: f64, times: &[f64]) -> f64 {
    let mut v = 0.0;
    let mut prev = 0.0;
    for &t in times {
        v += a * (t - prev);
        prev = t;
    }
    v
}

/// Age offset o after the recorded failures: the intensity is λ(t − o).
pub(crate) fn offset_of(model: &RepairModel, times: &[f64]) -> f64 {
    match *model {
        RepairModel::Ara { m, rho } => ara_offset(m, rho, times),
        RepairModel::Perfect => times.last().copied().unwrap_or(0.0),
        RepairModel::Minimal => 0.0,
        RepairModel::Kijima1 { a } => match times.last() {
            Some(&last) => last - kijima_virtual_age(a, times),
            None => 0.0,
        },
    }
}

/// Offset o such that the intensity after the last recorded repair is λ(t − o).
/// Zero for an empty history.
pub fn effective_age_offset(model: &RepairModel, hist: &ComponentHistory) -> Result<f64> {
    model.validate()?;
    Ok(offset_of(model, hist.times()))
}

/// Intensity at `t` of a component that failed at the times in `hist`.
pub fn conditional_intensity(
    model: &RepairModel,
    h: &Hazard,
    hist: &ComponentHistory,
    t: f64,
) -> Result<f64> {
    model.validate()?;
    let last = hist.last().unwrap_or(0.0);
    if !(t >= last) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "t = {t} precedes the last failure at {last}"
        )));
    }
    let age = match *model {
        RepairModel::Kijima1 { a } => kijima_virtual_age(a, hist.times()) + (t - last),
        RepairModel::Perfect => t - last,
        RepairModel::Minimal => t,
        RepairModel::Ara { .. } => t - offset_of(model, hist.times()),
    };
    Ok(h.rate_at(age))
}

/// Time of the next failure given a unit-exponential variate `e`: the t
/// solving ∫_{last}^{t} λ(u − o) du = e, strictly after `last`.
#[inline]
pub(crate) fn next_failure_from(h: &Hazard, offset: f64, last: f64, e: f64) -> f64 {
    let base = h.cumulative_at(last - offset);
    let t = offset + h.inverse_at(base + e);
    if t > last {
        t
    } else {
        last.next_up()
    }
}

/// Next failure time with the exponential variate supplied by the caller.
pub fn sample_next_failure_with(
    model: &RepairModel,
    h: &Hazard,
    hist: &ComponentHistory,
    e: f64,
) -> Result<f64> {
    model.validate()?;
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::Domain(format!("exponential variate must be positive, got {e}")));
    }
    let last = hist.last().unwrap_or(0.0);
    Ok(next_failure_from(h, offset_of(model, hist.times()), last, e))
}

/// Draws the next failure time by inverse-transform sampling of the
/// conditional intensity.
pub fn sample_next_failure<R: Rng + ?Sized>(
    model: &RepairModel,
    h: &Hazard,
    hist: &ComponentHistory,
    rng: &mut R,
) -> Result<f64> {
    let e: f64 = rng.sample(Exp1);
    sample_next_failure_with(model, h, hist, e)
}

/// Incrementally maintained repair state of one component.
///
/// Keeps only what the offset needs (the last `m` times for ARA_m, the
/// virtual age for Kijima I), so recording a failure is O(m).
#[derive(Debug, Clone)]
pub struct RepairState {
    model: RepairModel,
    recent: VecDeque<f64>,
    last: f64,
    virtual_age: f64,
    offset: f64,
    count: usize,
}

impl RepairState {
    pub fn new(model: RepairModel) -> Result<Self> {
        model.validate()?;
        Ok(Self {
            model,
            recent: VecDeque::with_capacity(model.memory()),
            last: 0.0,
            virtual_age: 0.0,
            offset: 0.0,
            count: 0,
        })
    }

    pub fn model(&self) -> &RepairModel {
        &self.model
    }

    /// Current age offset o.
    #[inline]
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Time of the last recorded failure, 0 if none.
    #[inline]
    pub fn last_failure(&self) -> f64 {
        self.last
    }

    pub fn failures(&self) -> usize {
        self.count
    }

    /// Records a failure at `t` (caller guarantees `t` exceeds the last one).
    pub fn record(&mut self, t: f64) {
        debug_assert!(self.count == 0 || t > self.last);
        match self.model {
            RepairModel::Ara { m, rho } => {
                if self.recent.len() == m {
                    self.recent.pop_front();
                }
                self.recent.push_back(t);
                let mut sum = 0.0;
                let mut weight = 1.0;
                for &x in self.recent.iter().rev() {
                    sum += weight * x;
                    weight *= 1.0 - rho;
                }
                self.offset = rho * sum;
            }
            RepairModel::Perfect => self.offset = t,
            RepairModel::Minimal => {}
            RepairModel::Kijima1 { a } => {
                self.virtual_age += a * (t - self.last);
                self.offset = t - self.virtual_age;
            }
        }
        self.last = t;
        self.count += 1;
    }

    #[inline]
    pub fn intensity(&self, h: &Hazard, t: f64) -> f64 {
        h.rate_at(t - self.offset)
    }

    /// Next failure time for a given unit-exponential variate.
    #[inline]
    pub fn next_failure(&self, h: &Hazard, e: f64) -> f64 {
        next_failure_from(h, self.offset, self.last, e)
    }
}

/// A component evolving under a repair model, with its own random stream.
#[derive(Debug, Clone)]
pub struct GrpProcess<R> {
    hazard: Hazard,
    state: RepairState,
    rng: R,
}

impl<R: Rng> GrpProcess<R> {
    pub fn new(model: RepairModel, hazard: Hazard, rng: R) -> Result<Self> {
        Ok(Self {
            hazard,
            state: RepairState::new(model)?,
            rng,
        })
    }

    pub fn state(&self) -> &RepairState {
        &self.state
    }
}

impl<R: Rng> Iterator for GrpProcess<R> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let e: f64 = self.rng.sample(Exp1);
        let t = self.state.next_failure(&self.hazard, e);
        self.state.record(t);
        Some(t)
    }
}
