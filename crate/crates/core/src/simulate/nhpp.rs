use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hazard::Hazard;

/// Event times of a Poisson process with cumulative intensity
/// Λ₁(v) = factor·Λ(v), by inversion of accumulated unit exponentials:
///
/// τ*_{k+1} = τ*_k − ln s_{k+1},  t_{k+1} = inf{v : Λ₁(v) ≥ τ*_{k+1}}.
#[derive(Debug, Clone)]
pub struct NhppStream<R> {
    hazard: Hazard,
    factor: f64,
    accumulated: f64,
    last: f64,
    rng: R,
}

impl<R: Rng> NhppStream<R> {
    /// Fails when `factor` is not positive: Λ₁ ≡ 0 cannot be inverted.
    pub fn new(hazard: Hazard, factor: f64, rng: R) -> Result<Self> {
        check_factor(factor)?;
        Ok(Self {
            hazard,
            factor,
            accumulated: 0.0,
            last: 0.0,
            rng,
        })
    }
}

fn check_factor(factor: f64) -> Result<()> {
    if factor > 0.0 && factor.is_finite() {
        Ok(())
    } else {
        Err(Error::param(
            "factor",
            format!("cumulative intensity must be strictly increasing; scale factor is {factor}"),
        ))
    }
}

#[inline]
fn invert(hazard: &Hazard, factor: f64, accumulated: f64, last: f64) -> f64 {
    let t = hazard.inverse_at(accumulated / factor);
    // Rounding may tie with the previous point when the increment is tiny.
    if t > last {
        t
    } else {
        last.next_up()
    }
}

impl<R: Rng> Iterator for NhppStream<R> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let s: f64 = self.rng.sample(Open01);
        self.accumulated -= s.ln();
        self.last = invert(&self.hazard, self.factor, self.accumulated, self.last);
        Some(self.last)
    }
}

/// `count` strictly increasing event times of the process with cumulative
/// intensity `factor`·Λ(v).
pub fn nhpp_sample<R: Rng + ?Sized>(hazard: &Hazard, factor: f64, count: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_factor(factor)?;
    if count == 0 {
        return Err(Error::param("count", "must be >= 1"));
    }
    let uniforms: Vec<f64> = (0..count).map(|_| rng.sample(Open01)).collect();
    nhpp_from_uniforms(hazard, factor, &uniforms)
}

/// As [`nhpp_sample`] with the driving uniforms s_k ∈ (0, 1) supplied.
pub fn nhpp_from_uniforms(hazard: &Hazard, factor: f64, uniforms: &[f64]) -> Result<Vec<f64>> {
    check_factor(factor)?;
    let mut accumulated = 0.0;
    let mut last = 0.0;
    uniforms
        .iter()
        .map(|&s| {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::Domain(format!("uniform draw must lie in (0, 1), got {s}")));
            }
            accumulated -= s.ln();
            last = invert(hazard, factor, accumulated, last);
            Ok(last)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn unit_rate_with_unit_increments() {
        let h = Hazard::constant(1.0).unwrap();
        let s = (-1.0f64).exp();
        let times = nhpp_from_uniforms(&h, 1.0, &[s; 5]).unwrap();
        for (k, t) in times.iter().enumerate() {
            assert!((t - (k + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_factor_rejected() {
        let h = Hazard::power_law(1.3, 40.0).unwrap();
        // Λ₁ = ((1 − δ)(n − 1)/n)·Λ₀ with δ = 1.
        let factor = (1.0 - 1.0) * (100.0 - 1.0) / 100.0;
        assert!(nhpp_sample(&h, factor, 3, &mut stream(1, 0)).is_err());
        assert!(NhppStream::new(h, factor, stream(1, 0)).is_err());
    }

    #[test]
    fn stream_and_batch_agree() {
        let h = Hazard::power_law(1.3, 40.0).unwrap();
        let batch = nhpp_sample(&h, 0.7, 200, &mut stream(4, 0)).unwrap();
        let lazy: Vec<f64> = NhppStream::new(h, 0.7, stream(4, 0)).unwrap().take(200).collect();
        assert_eq!(batch, lazy);
        assert!(batch.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bad_uniforms_rejected() {
        let h = Hazard::constant(1.0).unwrap();
        assert!(nhpp_from_uniforms(&h, 1.0, &[0.5, 1.0]).is_err());
        assert!(nhpp_from_uniforms(&h, 1.0, &[0.0]).is_err());
    }
}
