//! Three-stream construction of λ̃_s.
//!
//! With λ the system hazard (each component carrying λ/n), λ̃_s splits into
//!
//! ```text
//! Φ₁ = (δ/n)·Σ lag intensities      n component streams, hazard (δ/n)·λ
//! Φ₂ = ((1−δ)(n−1)/n)·λ(t)          one NHPP, Λ₁ = ((1−δ)(n−1)/n)·Λ₀
//! Φ₃ = ((1−δ)/n)·λ^{(N)}(t)          one extra stream, hazard ((1−δ)/n)·λ
//! ```
//!
//! Component streams follow the base repair model on their own failure
//! times. Φ₁ streams are ordered by first failure. System time k is the
//! minimum over the candidates of step k:
//!
//! - k ≤ n: the first failure of Φ₁ stream k, the current Φ₂ point and the
//!   k-th point of Φ₃;
//! - k > n: the (k − i)-th failure of every Φ₁ stream i, the current Φ₂
//!   point and the k-th point of Φ₃.
//!
//! The Φ₂ pointer advances only after its point was emitted. Candidates not
//! later than the previous system time are skipped so the output is
//! strictly increasing; [`Algorithm1Trace::skipped`] counts the steps where
//! this changed the outcome.
//!
//! Streams are generated lazily, so memory stays O(n) for any N.

use crate::approx::{ApproxModel, Normalization};
use crate::error::{Error, Result};
use crate::grp::GrpProcess;
use crate::hazard::Hazard;
use crate::rng::{child, SimRng};
use crate::sgrp::MaskedHistory;

use super::nhpp::NhppStream;

/// Which stream produced a system event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Φ₁ component stream, by position after sorting on first failure.
    Phi1(usize),
    Phi2,
    Phi3,
}

#[derive(Debug, Clone)]
pub struct Algorithm1Trace {
    pub history: MaskedHistory,
    pub sources: Vec<Source>,
    /// Steps whose unconstrained minimum did not exceed the previous time.
    pub skipped: usize,
}

/// Pre-generated failure stream read at nondecreasing 1-based indices.
struct LazyStream<I> {
    points: I,
    index: usize,
    current: f64,
}

impl<I: Iterator<Item = f64>> LazyStream<I> {
    fn new(points: I) -> Self {
        Self {
            points,
            index: 0,
            current: f64::INFINITY,
        }
    }

    fn at(&mut self, j: usize) -> f64 {
        debug_assert!(j >= self.index, "streams are read forward only");
        while self.index < j {
            self.current = self.points.next().unwrap_or(f64::INFINITY);
            self.index += 1;
        }
        self.current
    }
}

fn scaled(h: &Hazard, factor: f64) -> Result<Option<Hazard>> {
    if factor > 0.0 {
        h.scaled(factor).map(Some)
    } else {
        Ok(None)
    }
}

pub fn simulate_algorithm1<R: rand::Rng + ?Sized>(am: &ApproxModel, count: usize, rng: &mut R) -> Result<MaskedHistory> {
    simulate_algorithm1_traced(am, count, rng).map(|t| t.history)
}

pub fn simulate_algorithm1_traced<R: rand::Rng + ?Sized>(
    am: &ApproxModel,
    count: usize,
    rng: &mut R,
) -> Result<Algorithm1Trace> {
    if count == 0 {
        return Err(Error::param("count", "must be >= 1"));
    }
    let n = am.n();
    let nf = n as f64;
    let delta = am.delta();
    if n == 1 && delta == 1.0 {
        return Err(Error::param(
            "delta",
            "delta = 1 with a single component leaves only one stream; the construction is degenerate",
        ));
    }
    let repair = *am.repair();
    repair.validate()?;
    let system_hazard = match am.normalization() {
        Normalization::SystemHazardSplit => *am.hazard(),
        Normalization::ComponentHazard => am.hazard().scaled(nf)?,
    };

    // One child stream per source, drawn in a fixed order whatever δ is.
    let mut seeds: Vec<SimRng> = (0..n + 2).map(|_| child(rng)).collect();
    let phi3_rng = seeds.pop().expect("n + 2 streams");
    let phi2_rng = seeds.pop().expect("n + 2 streams");

    let mut phi1 = Vec::new();
    if let Some(h) = scaled(&system_hazard, delta / nf)? {
        for r in seeds {
            phi1.push(LazyStream::new(GrpProcess::new(repair, h, r)?));
        }
        let mut firsts: Vec<(f64, usize)> = phi1.iter_mut().enumerate().map(|(i, s)| (s.at(1), i)).collect();
        firsts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut slots: Vec<Option<_>> = phi1.into_iter().map(Some).collect();
        phi1 = firsts.iter().map(|&(_, i)| slots[i].take().expect("each stream once")).collect();
    }

    let mut phi2 = match scaled(&system_hazard, 1.0)? {
        Some(h) if (1.0 - delta) * (nf - 1.0) > 0.0 => Some(LazyStream::new(NhppStream::new(
            h,
            (1.0 - delta) * (nf - 1.0) / nf,
            phi2_rng,
        )?)),
        _ => None,
    };
    let mut phi3 = match scaled(&system_hazard, (1.0 - delta) / nf)? {
        Some(h) => Some(LazyStream::new(GrpProcess::new(repair, h, phi3_rng)?)),
        None => None,
    };

    let mut times = Vec::with_capacity(count);
    let mut sources = Vec::with_capacity(count);
    let mut skipped = 0;
    let mut phi2_index = 1;
    let mut prev = 0.0;

    for k in 1..=count {
        if sources.last() == Some(&Source::Phi2) {
            phi2_index += 1;
        }
        let mut best = (f64::INFINITY, Source::Phi2);
        let mut unconstrained = f64::INFINITY;
        let mut offer = |time: f64, source: Source| {
            unconstrained = unconstrained.min(time);
            if time > prev && time < best.0 {
                best = (time, source);
            }
        };
        if k <= n {
            if let Some(s) = phi1.get_mut(k - 1) {
                offer(s.at(1), Source::Phi1(k - 1));
            }
        } else {
            for (i, s) in phi1.iter_mut().enumerate() {
                offer(s.at(k - (i + 1)), Source::Phi1(i));
            }
        }
        if let Some(s) = phi2.as_mut() {
            offer(s.at(phi2_index), Source::Phi2);
        }
        if let Some(s) = phi3.as_mut() {
            offer(s.at(k), Source::Phi3);
        }
        let (time, source) = best;
        if !time.is_finite() {
            return Err(Error::InvalidHistory(format!(
                "no stream offers a failure after {prev} at step {k}"
            )));
        }
        if unconstrained <= prev {
            skipped += 1;
        }
        times.push(time);
        sources.push(source);
        prev = time;
    }

    Ok(Algorithm1Trace {
        history: MaskedHistory::until_last(n, times)?,
        sources,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::RepairModel;
    use crate::rng::stream;

    fn am(n: usize, delta: f64, rho: f64) -> ApproxModel {
        ApproxModel::new(
            n,
            delta,
            Hazard::power_law(1.3, 40.0).unwrap(),
            RepairModel::ara(1, rho).unwrap(),
            Normalization::SystemHazardSplit,
        )
        .unwrap()
    }

    #[test]
    fn deterministic_and_increasing() {
        let a = simulate_algorithm1(&am(10, 0.5, 0.3), 2000, &mut stream(7, 0)).unwrap();
        let b = simulate_algorithm1(&am(10, 0.5, 0.3), 2000, &mut stream(7, 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2000);
        assert!(a.times().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn delta_zero_uses_only_phi2_and_phi3() {
        let trace = simulate_algorithm1_traced(&am(8, 0.0, 0.3), 500, &mut stream(2, 0)).unwrap();
        assert!(trace.sources.iter().all(|s| matches!(s, Source::Phi2 | Source::Phi3)));
        assert!(trace.sources.contains(&Source::Phi2));
    }

    #[test]
    fn delta_one_has_no_phi2_or_phi3() {
        let trace = simulate_algorithm1_traced(&am(8, 1.0, 0.3), 200, &mut stream(2, 0)).unwrap();
        assert!(trace.sources.iter().all(|s| matches!(s, Source::Phi1(_))));
    }

    #[test]
    fn degenerate_single_component_rejected() {
        assert!(simulate_algorithm1(&am(1, 1.0, 0.3), 10, &mut stream(0, 0)).is_err());
        assert!(simulate_algorithm1(&am(1, 0.5, 0.3), 10, &mut stream(0, 0)).is_ok());
        assert!(simulate_algorithm1(&am(3, 0.5, 0.3), 0, &mut stream(0, 0)).is_err());
    }
}
