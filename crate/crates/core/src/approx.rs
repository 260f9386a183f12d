//! Weighted combination of the lower and upper bounds.
//!
//! λ̃_s(t) = δ·lower(t) + (1 − δ)·upper(t), δ ∈ [0, 1].
//!
//! δ = 1 is the moving-average-of-intensity model (always the oldest
//! component fails), δ = 0 is the two-block model where n − 1 components
//! are minimally repaired and one carries every repair.
//!
//! # Normalization
//!
//! The bounds sum n component intensities, so with per-component hazard λ
//! they are O(n·λ). Simulation code instead treats λ as the *system* hazard
//! and gives each component λ/n. Both conventions are offered:
//!
//! - [`Normalization::ComponentHazard`]: λ is the component hazard; at N = 0
//!   the value is n·λ(t).
//! - [`Normalization::SystemHazardSplit`]: each component carries λ/n; the
//!   value is the component-normalized one divided by n, and exactly λ(t)
//!   at N = 0. Constant hazards then give λ̃_s ≡ λ₀.

use serde::{Deserialize, Serialize};

use crate::bounds::{lag_depth, lower_sum, most_repaired_intensity, upper_sum};
use crate::error::{Error, Result};
use crate::grp::{ara_offset, RepairModel};
use crate::hazard::Hazard;
use crate::sgrp::MaskedHistory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Normalization {
    #[serde(rename = "component")]
    ComponentHazard,
    #[default]
    #[serde(rename = "system_split")]
    SystemHazardSplit,
}

/// Parameters of the approximation λ̃_s.
///
/// Config form: `{"n":100,"delta":0.5,"normalization":"system_split",
/// "hazard":{...},"repair":{...}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ApproxSpec", into = "ApproxSpec")]
pub struct ApproxModel {
    n: usize,
    delta: f64,
    hazard: Hazard,
    repair: RepairModel,
    normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxSpec {
    pub n: usize,
    pub delta: f64,
    #[serde(default)]
    pub normalization: Normalization,
    pub hazard: Hazard,
    pub repair: RepairModel,
}

impl TryFrom<ApproxSpec> for ApproxModel {
    type Error = Error;

    fn try_from(s: ApproxSpec) -> Result<Self> {
        ApproxModel::new(s.n, s.delta, s.hazard, s.repair, s.normalization)
    }
}

impl From<ApproxModel> for ApproxSpec {
    fn from(a: ApproxModel) -> Self {
        ApproxSpec {
            n: a.n,
            delta: a.delta,
            normalization: a.normalization,
            hazard: a.hazard,
            repair: a.repair,
        }
    }
}

impl ApproxModel {
    pub fn new(
        n: usize,
        delta: f64,
        hazard: Hazard,
        repair: RepairModel,
        normalization: Normalization,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "component count must be >= 1"));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::param("delta", format!("must lie in [0, 1], got {delta}")));
        }
        repair.validate()?;
        Ok(Self {
            n,
            delta,
            hazard,
            repair,
            normalization,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn hazard(&self) -> &Hazard {
        &self.hazard
    }

    pub fn repair(&self) -> &RepairModel {
        &self.repair
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.n, delta, self.hazard, self.repair, self.normalization)
    }

    pub fn with_normalization(&self, normalization: Normalization) -> Self {
        Self {
            normalization,
            ..*self
        }
    }

    /// The improving ARA parameters, with the hazard checked as well.
    pub(crate) fn checked_ara(&self) -> Result<(usize, f64)> {
        self.hazard.require_nondecreasing()?;
        self.repair.improving_ara()
    }

    /// λ̃_s at `t` given the failures in `times`, all strictly before `t`.
    #[inline]
    pub(crate) fn intensity_on(&self, m: usize, rho: f64, times: &[f64], t: f64) -> f64 {
        let h = &self.hazard;
        if times.is_empty() && self.normalization == Normalization::SystemHazardSplit {
            return h.rate_at(t);
        }
        let lower = lower_sum(times, self.n, m, rho, h, t);
        let upper = upper_sum(times, self.n, m, rho, h, t);
        self.normalize(self.delta * lower + (1.0 - self.delta) * upper)
    }

    #[inline]
    fn normalize(&self, component_value: f64) -> f64 {
        match self.normalization {
            Normalization::ComponentHazard => component_value,
            Normalization::SystemHazardSplit => component_value / self.n as f64,
        }
    }

    fn check(&self, mh: &MaskedHistory, t: f64) -> Result<(usize, f64)> {
        if mh.n() != self.n {
            return Err(Error::param(
                "n",
                format!("history has n = {}, model has n = {}", mh.n(), self.n),
            ));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
        }
        self.checked_ara()
    }
}

/// λ̃_s(t) from the bound pair, at the left limit of `t`.
pub fn approx_intensity(am: &ApproxModel, mh: &MaskedHistory, t: f64) -> Result<f64> {
    let (m, rho) = am.check(mh, t)?;
    Ok(am.intensity_on(m, rho, mh.before(t), t))
}

/// λ̃_s(t) through the explicit closed forms for the three regimes of the
/// system failure count N: none, at most n, more than n.
///
/// Independent of the bound routines; it must agree with
/// [`approx_intensity`] to rounding.
pub fn approx_intensity_ara(am: &ApproxModel, mh: &MaskedHistory, t: f64) -> Result<f64> {
    let (m, rho) = am.check(mh, t)?;
    let times = mh.before(t);
    let h = am.hazard();
    let n = am.n();
    let nf = n as f64;
    let delta = am.delta();
    let big_n = times.len();
    let lam = |x: f64| h.rate_at(x);
    // T_k, 1-based.
    let tk = |k: usize| times[k - 1];

    // Offset of the component carrying every repair: its last min(N, m) failures.
    let top = {
        let mut s = 0.0;
        let mut w = 1.0;
        for j in 0..m.min(big_n) {
            s += w * tk(big_n - j);
            w *= 1.0 - rho;
        }
        rho * s
    };

    let component_value = if big_n == 0 {
        if am.normalization() == Normalization::SystemHazardSplit {
            return Ok(lam(t));
        }
        nf * lam(t)
    } else if big_n <= n {
        let fresh = (n - big_n) as f64 * delta + (nf - 1.0) * (1.0 - delta);
        let once: f64 = (1..=big_n).map(|i| lam(t - rho * tk(i))).sum();
        fresh * lam(t) + (1.0 - delta) * lam(t - top) + delta * once
    } else {
        let q = (big_n / n - 1).min(m - 1);
        let mut lags = 0.0;
        for i in 0..n {
            let mut s = 0.0;
            let mut w = 1.0;
            for j in 0..=q {
                s += w * tk(big_n - n * j - i);
                w *= 1.0 - rho;
            }
            lags += lam(t - rho * s);
        }
        (nf - 1.0) * (1.0 - delta) * lam(t) + (1.0 - delta) * lam(t - top) + delta * lags
    };
    Ok(am.normalize(component_value))
}

/// ψ(N, λ(t)) in component normalization:
///
/// (max(n − N, 0)·δ + (n − 1)(1 − δ))·λ(t) + (1 − δ)·λ^{(N)}(t)
///   + δ·Σ_{i=0}^{min(N−1, n−1)} λ^{(N−i)}(t).
///
/// At N = 0 the sum is empty and ψ = n·λ(t), the component-normalized value;
/// the system-split convention instead takes λ̃_s = λ(t) there.
pub fn psi(am: &ApproxModel, mh: &MaskedHistory, t: f64) -> Result<f64> {
    let (m, rho) = am.check(mh, t)?;
    let times = mh.before(t);
    let h = am.hazard();
    let n = am.n();
    let delta = am.delta();
    let big_n = times.len();
    let q = lag_depth(big_n, n, m);
    let idle = n.saturating_sub(big_n) as f64 * delta + (n as f64 - 1.0) * (1.0 - delta);
    let repaired: f64 = (0..big_n.min(n))
        .map(|i| crate::bounds::lag_intensity(times, n, q, rho, h, t, i))
        .sum();
    Ok(idle * h.rate_at(t) + (1.0 - delta) * most_repaired_intensity(times, m, rho, h, t) + delta * repaired)
}

/// λ^{(N)}(t) of the component carrying every masked repair.
pub fn most_repaired(am: &ApproxModel, mh: &MaskedHistory, t: f64) -> Result<f64> {
    let (m, rho) = am.check(mh, t)?;
    let times = mh.before(t);
    Ok(am.hazard().rate_at(t - ara_offset(m, rho, times)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::sgrp_bounds;

    fn weibull() -> Hazard {
        Hazard::power_law(1.3, 40.0).unwrap()
    }

    fn model(n: usize, delta: f64, m: usize, rho: f64, norm: Normalization) -> ApproxModel {
        ApproxModel::new(n, delta, weibull(), RepairModel::ara(m, rho).unwrap(), norm).unwrap()
    }

    fn history(n: usize, len: usize) -> MaskedHistory {
        let times: Vec<f64> = (1..=len).map(|k| 3.0 * k as f64 + 0.1 * (k % 7) as f64).collect();
        MaskedHistory::until_last(n, times).unwrap()
    }

    #[test]
    fn endpoints_reduce_to_bounds() {
        let mh = history(4, 13);
        let t = mh.horizon() + 1.5;
        let b = sgrp_bounds(&mh, &RepairModel::ara(2, 0.3).unwrap(), &weibull(), t).unwrap();
        let one = model(4, 1.0, 2, 0.3, Normalization::ComponentHazard);
        assert_eq!(approx_intensity(&one, &mh, t).unwrap(), b.lower);
        let zero = model(4, 0.0, 2, 0.3, Normalization::ComponentHazard);
        assert_eq!(approx_intensity(&zero, &mh, t).unwrap(), b.upper);
    }

    #[test]
    fn single_component_is_its_grp() {
        let mh = history(1, 6);
        let t = mh.horizon() + 2.0;
        for delta in [0.0, 0.3, 1.0] {
            let am = model(1, delta, 3, 0.6, Normalization::SystemHazardSplit);
            let v = approx_intensity(&am, &mh, t).unwrap();
            let top = most_repaired(&am, &mh, t).unwrap();
            assert!((v - top).abs() <= 1e-15 * top);
        }
    }

    #[test]
    fn no_failures_by_normalization() {
        let mh = MaskedHistory::until_last(7, vec![]).unwrap();
        let split = model(7, 0.4, 1, 0.5, Normalization::SystemHazardSplit);
        assert_eq!(approx_intensity(&split, &mh, 12.0).unwrap(), weibull().eval(12.0).unwrap());
        let comp = split.with_normalization(Normalization::ComponentHazard);
        let v = approx_intensity(&comp, &mh, 12.0).unwrap();
        assert!((v - 7.0 * weibull().eval(12.0).unwrap()).abs() < 1e-15);
        assert_eq!(psi(&comp, &mh, 12.0).unwrap(), v);
    }

    #[test]
    fn constant_hazard_identity() {
        let h = Hazard::constant(0.05).unwrap();
        let am = ApproxModel::new(9, 0.35, h, RepairModel::ara(2, 0.7).unwrap(), Normalization::SystemHazardSplit)
            .unwrap();
        for len in [0, 3, 9, 40] {
            let mh = history(9, len);
            let v = approx_intensity(&am, &mh, mh.horizon() + 1.0).unwrap();
            assert!((v - 0.05).abs() <= 1e-15);
        }
    }

    #[test]
    fn regime_boundary_is_regime_two() {
        // N = n exactly, then one more failure.
        let n = 3;
        let am = model(n, 0.5, 2, 0.4, Normalization::ComponentHazard);
        let at_n = MaskedHistory::until_last(n, vec![2.0, 5.0, 9.0]).unwrap();
        let t = 11.0;
        let lam = |x: f64| weibull().eval(x).unwrap();
        let top = lam(t - 0.4 * (9.0 + 0.6 * 5.0));
        let want = (n as f64 - 1.0) * 0.5 * lam(t)
            + 0.5 * top
            + 0.5 * (lam(t - 0.4 * 2.0) + lam(t - 0.4 * 5.0) + lam(t - 0.4 * 9.0));
        let got = approx_intensity_ara(&am, &at_n, t).unwrap();
        assert!((got - want).abs() <= 1e-14 * want);
        assert!((approx_intensity(&am, &at_n, t).unwrap() - want).abs() <= 1e-14 * want);

        // Crossing into N = n + 1 at t = 11: the left limit is still regime 2,
        // just after it the lag-0 term restarts from the new failure.
        let crossed = MaskedHistory::until_last(n, vec![2.0, 5.0, 9.0, 11.0]).unwrap();
        let left = approx_intensity_ara(&am, &crossed, 11.0).unwrap();
        assert_eq!(left, got);
        let right = approx_intensity_ara(&am, &crossed, 11.0 + 1e-9).unwrap();
        assert!(right < left);
        // Between events the value varies continuously.
        let a = approx_intensity_ara(&am, &crossed, 12.0).unwrap();
        let b = approx_intensity_ara(&am, &crossed, 12.0 + 1e-7).unwrap();
        assert!((b - a).abs() < 1e-7);
    }

    #[test]
    fn model_two_is_midpoint() {
        let mh = history(5, 23);
        let t = mh.horizon() + 0.5;
        let am = model(5, 0.5, 1, 1.0, Normalization::ComponentHazard);
        let b = sgrp_bounds(&mh, &RepairModel::Perfect, &weibull(), t).unwrap();
        let v = approx_intensity_ara(&am, &mh, t).unwrap();
        assert!((v - 0.5 * (b.lower + b.upper)).abs() <= 1e-14 * v);
    }

    #[test]
    fn construction_errors() {
        let r = RepairModel::Perfect;
        assert!(ApproxModel::new(0, 0.5, weibull(), r, Normalization::ComponentHazard).is_err());
        assert!(ApproxModel::new(3, 1.01, weibull(), r, Normalization::ComponentHazard).is_err());
        assert!(ApproxModel::new(3, -0.0001, weibull(), r, Normalization::ComponentHazard).is_err());
        assert!(ApproxModel::new(3, 1.0, weibull(), r, Normalization::ComponentHazard).is_ok());
        let harmful = ApproxModel::new(3, 0.5, weibull(), RepairModel::ara(1, -0.1).unwrap(), Normalization::ComponentHazard)
            .unwrap();
        let mh = history(3, 2);
        assert!(matches!(approx_intensity(&harmful, &mh, 10.0), Err(Error::Unsupported(_))));
        let wrong_n = model(4, 0.5, 1, 0.5, Normalization::ComponentHazard);
        assert!(approx_intensity(&wrong_n, &mh, 10.0).is_err());
    }

    #[test]
    fn config_form() {
        let json = r#"{"n":100,"delta":0.5,"normalization":"system_split",
            "hazard":{"family":"power_law","beta":1.3,"eta":40.0},
            "repair":{"model":"ara","m":1,"rho":0.3}}"#;
        let am: ApproxModel = serde_json::from_str(json).unwrap();
        assert_eq!(am.n(), 100);
        assert_eq!(am.normalization(), Normalization::SystemHazardSplit);
        let bad = json.replace("0.5", "1.5");
        assert!(serde_json::from_str::<ApproxModel>(&bad).is_err());
        let back: ApproxModel = serde_json::from_str(&serde_json::to_string(&am).unwrap()).unwrap();
        assert_eq!(back, am);
    }
}
