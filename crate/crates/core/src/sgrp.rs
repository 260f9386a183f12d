//! Exact simulation of a series system of n independently repaired components.
//!
//! The system fails whenever any component fails, so the system failure
//! process is the superposition of the component processes and its
//! intensity is the sum of the component intensities. Simulation is
//! event-driven: every component holds a sampled candidate failure time, the
//! earliest candidate is committed, and only the failed component draws a
//! new candidate. Candidates of other components stay valid because the
//! components are independent.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grp::{offset_of, validate_times, ComponentHistory, RepairModel, RepairState};
use crate::hazard::Hazard;

/// When a simulation stops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    /// After this many system events.
    Events(usize),
    /// At this time; events after it are discarded.
    Horizon(f64),
}

impl Stop {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Stop::Events(0) => Err(Error::param("events", "must be >= 1")),
            Stop::Horizon(t) if !(t > 0.0) || !t.is_finite() => {
                Err(Error::param("horizon", format!("must be positive and finite, got {t}")))
            }
            _ => Ok(()),
        }
    }

    /// Whether the `count`-th event, at time `t`, is kept.
    pub(crate) fn admits(&self, count: usize, t: f64) -> bool {
        match *self {
            Stop::Events(n) => count <= n,
            Stop::Horizon(h) => t <= h,
        }
    }
}

/// One system failure with the index (0-based) of the failing component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemEvent {
    pub time: f64,
    pub component: usize,
}

/// Labeled failure history of every component and the merged system events.
#[derive(Debug, Clone, PartialEq)]
pub struct FullHistory {
    components: Vec<ComponentHistory>,
    events: Vec<SystemEvent>,
    horizon: f64,
}

impl FullHistory {
    /// Builds a history from labeled system events (any order of input is
    /// rejected unless times are strictly increasing).
    pub fn from_events(n: usize, events: Vec<SystemEvent>, horizon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "component count must be >= 1"));
        }
        let times: Vec<f64> = events.iter().map(|e| e.time).collect();
        validate_times(&times)?;
        if let Some(last) = times.last() {
            if *last > horizon {
                return Err(Error::InvalidHistory(format!(
                    "last event {last} is after the horizon {horizon}"
                )));
            }
        }
        let mut components = vec![ComponentHistory::empty(); n];
        for e in &events {
            let slot = components.get_mut(e.component).ok_or_else(|| {
                Error::InvalidHistory(format!("component index {} out of range for n = {n}", e.component))
            })?;
            slot.push(e.time)?;
        }
        Ok(Self {
            components,
            events,
            horizon,
        })
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ComponentHistory] {
        &self.components
    }

    pub fn events(&self) -> &[SystemEvent] {
        &self.events
    }

    /// End of the observation window.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn system_times(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.time).collect()
    }

    /// Number of failures of each component.
    pub fn counts(&self) -> Vec<usize> {
        self.components.iter().map(ComponentHistory::len).collect()
    }
}

/// System failure times without component labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedHistory {
    n: usize,
    times: Vec<f64>,
    horizon: f64,
}

impl MaskedHistory {
    pub fn new(n: usize, times: Vec<f64>, horizon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "component count must be >= 1"));
        }
        validate_times(&times)?;
        if times.last().is_some_and(|last| *last > horizon) || horizon.is_nan() {
            return Err(Error::InvalidHistory(format!(
                "horizon {horizon} precedes the last failure"
            )));
        }
        Ok(Self { n, times, horizon })
    }

    /// A history observed until its last failure (or time 0 when empty).
    pub fn until_last(n: usize, times: Vec<f64>) -> Result<Self> {
        let horizon = times.last().copied().unwrap_or(0.0);
        Self::new(n, times, horizon)
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Failures strictly before `t`, the history ℋ_{t−}.
    pub fn before(&self, t: f64) -> &[f64] {
        &self.times[..self.times.partition_point(|&x| x < t)]
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    time: f64,
    component: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // Earlier time first; on an exact tie the lower component index wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.component.cmp(&other.component))
    }
}

/// Simulates n identical components under `model` until `stop`.
///
/// Deterministic given the rng state and the arguments. Random draws are
/// consumed in a fixed order: one initial candidate per component in index
/// order, then one per committed event for the failed component.
pub fn simulate_sgrp<R: Rng + ?Sized>(
    n: usize,
    model: &RepairModel,
    h: &Hazard,
    stop: Stop,
    rng: &mut R,
) -> Result<FullHistory> {
    if n == 0 {
        return Err(Error::param("n", "component count must be >= 1"));
    }
    stop.validate()?;
    let mut states = vec![RepairState::new(*model)?; n];
    let mut heap = BinaryHeap::with_capacity(n);
    for (component, state) in states.iter().enumerate() {
        let time = state.next_failure(h, rng.sample(Exp1));
        heap.push(Reverse(Candidate { time, component }));
    }

    let mut events = Vec::new();
    if let Stop::Events(count) = stop {
        events.reserve(count);
    }
    while let Some(Reverse(Candidate { time, component })) = heap.pop() {
        if !stop.admits(events.len() + 1, time) {
            break;
        }
        events.push(SystemEvent { time, component });
        let state = &mut states[component];
        state.record(time);
        let time = state.next_failure(h, rng.sample(Exp1));
        heap.push(Reverse(Candidate { time, component }));
    }

    let horizon = match stop {
        Stop::Events(_) => events.last().map_or(0.0, |e| e.time),
        Stop::Horizon(t) => t,
    };
    FullHistory::from_events(n, events, horizon)
}

/// True system intensity at `t`: the sum of component intensities given each
/// component's own failures strictly before `t`.
pub fn true_system_intensity(
    full: &FullHistory,
    model: &RepairModel,
    h: &Hazard,
    t: f64,
) -> Result<f64> {
    model.validate()?;
    if !(t >= 0.0) || t > full.horizon() {
        return Err(Error::Domain(format!(
            "t = {t} is outside the observed window [0, {}]",
            full.horizon()
        )));
    }
    Ok(full
        .components()
        .iter()
        .map(|c| h.rate_at(t - offset_of(model, c.before(t))))
        .sum())
}

/// True system intensity at the left limit of every system event, computed
/// by replaying the events with incremental repair states. O(n) per event.
pub fn true_intensity_at_events(full: &FullHistory, model: &RepairModel, h: &Hazard) -> Result<Vec<f64>> {
    let mut states = vec![RepairState::new(*model)?; full.n()];
    let mut out = Vec::with_capacity(full.events().len());
    for e in full.events() {
        out.push(states.iter().map(|s| s.intensity(h, e.time)).sum());
        states[e.component].record(e.time);
    }
    Ok(out)
}

/// Drops component labels.
pub fn mask(full: &FullHistory) -> MaskedHistory {
    MaskedHistory {
        n: full.n(),
        times: full.system_times(),
        horizon: full.horizon(),
    }
}
