//! Initial failure intensities of a new component.
//!
//! A [`Hazard`] is the intensity λ(t) a component exhibits before its first
//! failure. Repair models shift its argument, samplers invert its cumulative
//! form Λ(t) = ∫₀ᵗ λ(u) du, and the bound formulas evaluate it directly.
//!
//! Two families are provided:
//!
//! - power law (Weibull intensity) λ(t) = (β/η)(t/η)^(β−1), Λ(t) = (t/η)^β
//! - constant λ(t) = λ₀, Λ(t) = λ₀·t
//!
//! Both have closed-form inverses of Λ, which keeps every sampler exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Initial failure intensity of a component. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HazardSpec", into = "HazardSpec")]
pub struct Hazard {
    kind: Kind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    PowerLaw {
        beta: f64,
        eta: f64,
        allow_decreasing: bool,
    },
    Constant {
        rate: f64,
    },
}

/// Unvalidated configuration form of a [`Hazard`].
///
/// `{"family":"power_law","beta":1.3,"eta":40.0}` or
/// `{"family":"constant","rate":0.1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum HazardSpec {
    PowerLaw {
        beta: f64,
        eta: f64,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        allow_decreasing: bool,
    },
    Constant {
        rate: f64,
    },
}

impl TryFrom<HazardSpec> for Hazard {
    type Error = Error;

    fn try_from(spec: HazardSpec) -> Result<Self> {
        match spec {
            HazardSpec::PowerLaw {
                beta,
                eta,
                allow_decreasing: false,
            } => Hazard::power_law(beta, eta),
            HazardSpec::PowerLaw {
                beta,
                eta,
                allow_decreasing: true,
            } => Hazard::power_law_allow_decreasing(beta, eta),
            HazardSpec::Constant { rate } => Hazard::constant(rate),
        }
    }
}

impl From<Hazard> for HazardSpec {
    fn from(h: Hazard) -> Self {
        match h.kind {
            Kind::PowerLaw {
                beta,
                eta,
                allow_decreasing,
            } => HazardSpec::PowerLaw {
                beta,
                eta,
                allow_decreasing,
            },
            Kind::Constant { rate } => HazardSpec::Constant { rate },
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}

impl Hazard {
    /// Power-law intensity with shape `beta >= 1` (nondecreasing) and scale `eta`.
    pub fn power_law(beta: f64, eta: f64) -> Result<Self> {
        positive("beta", beta)?;
        positive("eta", eta)?;
        if beta < 1.0 {
            return Err(Error::param(
                "beta",
                format!("{beta} < 1 gives a decreasing intensity; use power_law_allow_decreasing"),
            ));
        }
        Ok(Self {
            kind: Kind::PowerLaw {
                beta,
                eta,
                allow_decreasing: false,
            },
        })
    }

    /// Power-law intensity accepting any `beta > 0`. Bound and approximation
    /// operations refuse the result when `beta < 1`.
    pub fn power_law_allow_decreasing(beta: f64, eta: f64) -> Result<Self> {
        positive("beta", beta)?;
        positive("eta", eta)?;
        Ok(Self {
            kind: Kind::PowerLaw {
                beta,
                eta,
                allow_decreasing: true,
            },
        })
    }

    pub fn constant(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(Self {
            kind: Kind::Constant { rate },
        })
    }

    pub fn spec(&self) -> HazardSpec {
        (*self).into()
    }

    /// True when λ is nondecreasing in t, the standing assumption of every
    /// bound in this crate.
    pub fn is_nondecreasing(&self) -> bool {
        match self.kind {
            Kind::PowerLaw { beta, .. } => beta >= 1.0,
            Kind::Constant { .. } => true,
        }
    }

    pub(crate) fn require_nondecreasing(&self) -> Result<()> {
        if self.is_nondecreasing() {
            Ok(())
        } else {
            Err(Error::Unsupported(
                "hazard is decreasing; bounds need a nondecreasing initial intensity".into(),
            ))
        }
    }

    /// λ(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.rate_at(t))
    }

    /// Λ(t) = ∫₀ᵗ λ(u) du.
    pub fn cumulative(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.cumulative_at(t))
    }

    /// Smallest t with Λ(t) ≥ u.
    pub fn inverse_cumulative(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) || u.is_infinite() {
            return Err(Error::Domain(format!(
                "accumulated hazard must be finite and >= 0, got {u}"
            )));
        }
        Ok(self.inverse_at(u))
    }

    /// The same family with every intensity multiplied by `factor > 0`.
    ///
    /// For the power law the factor is folded into the scale,
    /// η' = η·factor^(−1/β), which is exact up to rounding.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        positive("factor", factor)?;
        let kind = match self.kind {
            Kind::PowerLaw {
                beta,
                eta,
                allow_decreasing,
            } => Kind::PowerLaw {
                beta,
                eta: eta * factor.powf(-1.0 / beta),
                allow_decreasing,
            },
            Kind::Constant { rate } => Kind::Constant {
                rate: rate * factor,
            },
        };
        Ok(Self { kind })
    }

    // Unchecked evaluators for hot loops. Negative arguments, which can only
    // come from rounding in age offsets, are clamped to zero.

    #[inline]
    pub(crate) fn rate_at(&self, t: f64) -> f64 {
        match self.kind {
            Kind::PowerLaw { beta, eta, .. } => (beta / eta) * (t.max(0.0) / eta).powf(beta - 1.0),
            Kind::Constant { rate } => rate,
        }
    }

    #[inline]
    pub(crate) fn cumulative_at(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self.kind {
            Kind::PowerLaw { beta, eta, .. } => (t / eta).powf(beta),
            Kind::Constant { rate } => rate * t,
        }
    }

    #[inline]
    pub(crate) fn inverse_at(&self, u: f64) -> f64 {
        match self.kind {
            Kind::PowerLaw { beta, eta, .. } => eta * u.powf(1.0 / beta),
            Kind::Constant { rate } => u / rate,
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be finite and >= 0, got {t}")))
    }
}
