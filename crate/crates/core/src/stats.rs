//! Empirical rates and point-process goodness of fit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBin {
    pub start: f64,
    pub count: usize,
    pub rate: f64,
}

/// Event counts in fixed-width bins anchored at 0, divided by the width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub bin_width: f64,
    pub bins: Vec<RateBin>,
}

impl RateCurve {
    pub fn total_count(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }

    /// Keeps only bins lying entirely inside `[0, horizon]`. The last bin of
    /// a curve usually covers time after the final event and would read low.
    pub fn drop_partial(mut self, horizon: f64) -> Self {
        let w = self.bin_width;
        self.bins.retain(|b| b.start + w <= horizon);
        self
    }
}

/// Bins `[kw, (k+1)w)` from 0 up to the bin holding the last event.
pub fn rate_curve(times: &[f64], bin_width: f64) -> Result<RateCurve> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::param("bin_width", format!("must be positive and finite, got {bin_width}")));
    }
    if times.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidHistory("event times must be sorted".into()));
    }
    if let Some(&first) = times.first() {
        if !(first >= 0.0) {
            return Err(Error::InvalidHistory(format!("negative event time {first}")));
        }
    }
    let Some(&last) = times.last() else {
        return Ok(RateCurve {
            bin_width,
            bins: Vec::new(),
        });
    };
    let nbins = (last / bin_width).floor() as usize + 1;
    let mut counts = vec![0usize; nbins];
    for &t in times {
        let k = ((t / bin_width).floor() as usize).min(nbins - 1);
        counts[k] += 1;
    }
    let bins = counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| RateBin {
            start: k as f64 * bin_width,
            count,
            rate: count as f64 / bin_width,
        })
        .collect();
    Ok(RateCurve { bin_width, bins })
}

/// Bin-wise gap between two rate curves over their common bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveGap {
    pub bins: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
}

pub fn curve_gap(a: &RateCurve, b: &RateCurve) -> Result<CurveGap> {
    if a.bin_width != b.bin_width {
        return Err(Error::param("bin_width", "curves must share a bin width"));
    }
    let bins = a.bins.len().min(b.bins.len());
    let gaps = a.bins.iter().zip(&b.bins).map(|(x, y)| (x.rate - y.rate).abs());
    let (max_abs, sum) = gaps.fold((0.0f64, 0.0), |(m, s), g| (m.max(g), s + g));
    Ok(CurveGap {
        bins,
        max_abs,
        mean_abs: if bins == 0 { 0.0 } else { sum / bins as f64 },
    })
}

/// Integrated intensity over each inter-event interval, starting from 0.
///
/// `integrated(a, b)` must return ∫ₐᵇ of the model intensity given the
/// history before `b`.
pub fn rescaled_residuals(times: &[f64], mut integrated: impl FnMut(f64, f64) -> f64) -> Result<Vec<f64>> {
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for (index, &t) in times.iter().enumerate() {
        let value = integrated(prev, t);
        if !(value >= 0.0) {
            return Err(Error::NegativeResidual { index, value });
        }
        out.push(value);
        prev = t;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub n: usize,
    pub reject_01: bool,
    pub reject_05: bool,
}

pub const KS_MIN_SAMPLES: usize = 20;
const KS_C01: f64 = 1.628;
const KS_C05: f64 = 1.358;

/// One-sample Kolmogorov–Smirnov test against Exp(1) with asymptotic
/// critical values.
pub fn ks_exp1(residuals: &[f64]) -> Result<KsOutcome> {
    let n = residuals.len();
    if n < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: KS_MIN_SAMPLES,
            got: n,
        });
    }
    let mut xs = residuals.to_vec();
    xs.sort_by(f64::total_cmp);
    let nf = n as f64;
    let statistic = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = -(-x.max(0.0)).exp_m1();
            (f - i as f64 / nf).max((i + 1) as f64 / nf - f)
        })
        .fold(0.0f64, f64::max);
    let root = nf.sqrt();
    Ok(KsOutcome {
        statistic,
        n,
        reject_01: statistic > KS_C01 / root,
        reject_05: statistic > KS_C05 / root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanRate {
    pub rate: f64,
    pub std_error: f64,
    pub count: usize,
}

/// Events per unit time in `[t1, t2)`, with the Poisson standard error.
pub fn mean_rate(times: &[f64], t1: f64, t2: f64) -> Result<MeanRate> {
    if !(t1 >= 0.0) || !(t2 > t1) || !t2.is_finite() {
        return Err(Error::param("window", format!("need 0 <= t1 < t2, got ({t1}, {t2})")));
    }
    let lo = times.partition_point(|&t| t < t1);
    let hi = times.partition_point(|&t| t < t2);
    let count = hi.saturating_sub(lo);
    let span = t2 - t1;
    Ok(MeanRate {
        rate: count as f64 / span,
        std_error: (count as f64).sqrt() / span,
        count,
    })
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, rel_tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let both = left + right;
    let err = both - whole;
    if depth == 0 || err.abs() <= 15.0 * tol * both.abs() || m <= a || m >= b {
        return both + err / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol, depth - 1) + simpson_step(f, m, b, fm, frm, fb, right, tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_curve_hand_count() {
        let c = rate_curve(&[100.0, 900.0, 1500.0], 1000.0).unwrap();
        assert_eq!(c.bins.len(), 2);
        assert_eq!((c.bins[0].start, c.bins[0].count, c.bins[0].rate), (0.0, 2, 0.002));
        assert_eq!((c.bins[1].start, c.bins[1].count, c.bins[1].rate), (1000.0, 1, 0.001));
        assert_eq!(c.total_count(), 3);
        assert!(rate_curve(&[], 1000.0).unwrap().bins.is_empty());
        assert!(rate_curve(&[1.0], 0.0).is_err());
        assert!(rate_curve(&[2.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn drop_partial_keeps_full_bins() {
        let c = rate_curve(&[100.0, 900.0, 1500.0], 1000.0).unwrap().drop_partial(1500.0);
        assert_eq!(c.bins.len(), 1);
        let c = rate_curve(&[100.0, 900.0, 1500.0], 1000.0).unwrap().drop_partial(2000.0);
        assert_eq!(c.bins.len(), 2);
    }

    #[test]
    fn unit_rate_residuals() {
        let r = rescaled_residuals(&[1.0, 2.0, 3.0], |a, b| b - a).unwrap();
        assert_eq!(r, vec![1.0, 1.0, 1.0]);
        let err = rescaled_residuals(&[1.0, 2.0], |a, b| if a > 0.0 { -1.0 } else { b - a });
        assert!(matches!(err, Err(Error::NegativeResidual { index: 1, .. })));
    }

    #[test]
    fn ks_degenerate_and_small() {
        let ks = ks_exp1(&[1.0; 100]).unwrap();
        assert!(ks.reject_01 && ks.reject_05);
        assert!(matches!(ks_exp1(&[1.0; 19]), Err(Error::TooFewSamples { needed: 20, got: 19 })));
    }

    #[test]
    fn ks_quantiles_accept() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| -(1.0 - (i as f64 + 0.5) / n as f64).ln()).collect();
        let ks = ks_exp1(&xs).unwrap();
        assert!(ks.statistic <= 0.5 / n as f64 + 1e-12);
        assert!(!ks.reject_05);
    }

    #[test]
    fn mean_rate_examples() {
        let times: Vec<f64> = (0..10).map(|i| i as f64 * 10.0 + 5.0).collect();
        let r = mean_rate(&times, 0.0, 100.0).unwrap();
        assert_eq!(r.rate, 0.1);
        assert_eq!(r.count, 10);
        assert!((r.std_error - 10f64.sqrt() / 100.0).abs() < 1e-15);
        assert_eq!(mean_rate(&times, 200.0, 300.0).unwrap().rate, 0.0);
        assert!(mean_rate(&times, 5.0, 5.0).is_err());
    }

    #[test]
    fn simpson_polynomial_and_power() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(|x: f64| 1.3 * x.powf(0.3), 0.0, 1.0, 1e-10);
        assert!((v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn curve_gap_over_common_bins() {
        let a = rate_curve(&[1.0, 2.0, 12.0], 10.0).unwrap();
        let b = rate_curve(&[1.0, 12.0, 13.0, 25.0], 10.0).unwrap();
        let g = curve_gap(&a, &b).unwrap();
        assert_eq!(g.bins, 2);
        assert!((g.max_abs - 0.1).abs() < 1e-15);
        assert!((g.mean_abs - 0.1).abs() < 1e-15);
    }
}
