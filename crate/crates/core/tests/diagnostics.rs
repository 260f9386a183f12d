//! Distributional checks of the samplers and of the statistics themselves.

use rand::Rng;
use rand_distr::{Distribution, Exp, Exp1};
use sgrp_core::{
    adaptive_simpson, approx_intensity, ks_exp1, mean_rate, nhpp_from_uniforms, nhpp_sample, rate_curve,
    rescaled_residuals, simulate_sgrp, simulate_thinning, stream, true_system_intensity, ApproxModel, Hazard,
    Normalization, RepairModel, Stop,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn weibull() -> Hazard {
    Hazard::power_law(1.3, 40.0).unwrap()
}

fn spacings(times: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    times
        .iter()
        .map(|&t| {
            let d = t - prev;
            prev = t;
            d
        })
        .collect()
}

#[test]
fn ks_calibration_under_exp1() {
    let runs = 200;
    let (mut r01, mut r05) = (0, 0);
    for seed in 0..runs {
        let mut rng = stream(seed, 0);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.sample(Exp1)).collect();
        let ks = ks_exp1(&xs).unwrap();
        r01 += ks.reject_01 as usize;
        r05 += ks.reject_05 as usize;
    }
    // Binomial(200, α) stays well inside these ranges.
    assert!(r01 <= 8, "rejections at 0.01: {r01}");
    assert!((2..=22).contains(&r05), "rejections at 0.05: {r05}");
}

#[test]
fn ks_rejects_wrong_rate() {
    let mut rng = stream(3, 0);
    let exp2 = Exp::new(2.0).unwrap();
    let xs: Vec<f64> = (0..10_000).map(|_| exp2.sample(&mut rng)).collect();
    assert!(ks_exp1(&xs).unwrap().reject_01);
}

#[test]
fn nhpp_residuals_recover_uniforms() {
    let mut rng = stream(5, 0);
    let us: Vec<f64> = (0..200).map(|_| rng.random_range(1e-9..1.0)).collect();
    let h = weibull();
    let factor = 0.7;
    let times = nhpp_from_uniforms(&h, factor, &us).unwrap();
    let res = rescaled_residuals(&times, |a, b| factor * (h.cumulative(b).unwrap() - h.cumulative(a).unwrap())).unwrap();
    for (r, u) in res.iter().zip(&us) {
        let want = -u.ln();
        assert!((r - want).abs() <= 1e-9 * want.max(1.0), "{r} vs {want}");
    }
}

#[test]
fn nhpp_long_run_passes_ks() {
    let h = weibull();
    let times = nhpp_sample(&h, 0.5, 10_000, &mut stream(9, 0)).unwrap();
    let res = rescaled_residuals(&times, |a, b| 0.5 * (h.cumulative(b).unwrap() - h.cumulative(a).unwrap())).unwrap();
    assert!(!ks_exp1(&res).unwrap().reject_01);
}

#[test]
fn single_perfect_socket_is_renewal() {
    let h = weibull();
    let full = simulate_sgrp(1, &RepairModel::Perfect, &h, Stop::Events(5000), &mut stream(2, 0)).unwrap();
    // Lifetimes X satisfy Λ(X) ~ Exp(1).
    let res: Vec<f64> = spacings(&full.system_times()).iter().map(|&x| h.cumulative(x).unwrap()).collect();
    assert!(!ks_exp1(&res).unwrap().reject_01);
}

#[test]
fn sgrp_rescaled_by_true_intensity() {
    let h = weibull();
    let model = RepairModel::ara(2, 0.4).unwrap();
    let full = simulate_sgrp(6, &model, &h, Stop::Events(3000), &mut stream(4, 0)).unwrap();
    let times = full.system_times();
    let res = rescaled_residuals(&times, |a, b| {
        let inside = |s: f64| if s <= a { a + (b - a) * 1e-12 } else { s };
        adaptive_simpson(|s| true_system_intensity(&full, &model, &h, inside(s)).unwrap(), a, b, 1e-10)
    })
    .unwrap();
    assert!(!ks_exp1(&res).unwrap().reject_01);
}

#[test]
fn components_are_exchangeable() {
    let n = 8;
    let h = weibull();
    let model = RepairModel::ara(1, 0.3).unwrap();
    let critical = ChiSquared::new((n - 1) as f64).unwrap().inverse_cdf(0.99);
    let mut accepted = 0;
    for seed in 0..50 {
        let full = simulate_sgrp(n, &model, &h, Stop::Events(4000), &mut stream(seed, 1)).unwrap();
        let counts = full.counts();
        let expected = counts.iter().sum::<usize>() as f64 / n as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        accepted += (chi2 <= critical) as usize;
    }
    assert!(accepted >= 48, "accepted {accepted} of 50");
}

/// ∫ λ̃_s over each inter-event interval by quadrature, history fixed on
/// the interval.
fn approx_residuals(am: &ApproxModel, times: &[f64]) -> Vec<f64> {
    let mh = sgrp_core::MaskedHistory::until_last(am.n(), times.to_vec()).unwrap();
    rescaled_residuals(times, |a, b| {
        // λ̃_s at s uses events strictly before s; on (a, b] that is the
        // history up to and including a.
        adaptive_simpson(
            |s| {
                let s = if s <= a { a + (b - a) * 1e-12 } else { s };
                approx_intensity(am, &mh, s).unwrap()
            },
            a,
            b,
            1e-8,
        )
    })
    .unwrap()
}

#[test]
fn thinning_is_exact_for_approximation() {
    let am = ApproxModel::new(
        5,
        0.4,
        weibull(),
        RepairModel::ara(1, 0.3).unwrap(),
        Normalization::SystemHazardSplit,
    )
    .unwrap();
    let mut passes = 0;
    for seed in 0..100 {
        let mh = simulate_thinning(&am, Stop::Events(400), &mut stream(seed, 7)).unwrap();
        let res = approx_residuals(&am, mh.times());
        passes += !ks_exp1(&res).unwrap().reject_01 as usize;
    }
    assert!(passes >= 95, "passes {passes} of 100");
}

#[test]
fn thinning_single_component_matches_grp() {
    let h = weibull();
    let model = RepairModel::ara(1, 0.3).unwrap();
    let am = ApproxModel::new(1, 0.5, h, model, Normalization::ComponentHazard).unwrap();
    let mh = simulate_thinning(&am, Stop::Events(10_000), &mut stream(12, 0)).unwrap();
    let times = mh.times();
    // Residuals under the single-component GRP intensity λ(t − ρ·T_prev).
    let mut prev = 0.0;
    let res: Vec<f64> = times
        .iter()
        .map(|&t| {
            let o = 0.3 * prev;
            let r = h.cumulative(t - o).unwrap() - h.cumulative(prev - o).unwrap();
            prev = t;
            r
        })
        .collect();
    assert!(!ks_exp1(&res).unwrap().reject_01);
}

#[test]
fn thinning_constant_hazard_is_poisson() {
    let am = ApproxModel::new(
        20,
        0.7,
        Hazard::constant(0.05).unwrap(),
        RepairModel::ara(2, 0.5).unwrap(),
        Normalization::SystemHazardSplit,
    )
    .unwrap();
    let mh = simulate_thinning(&am, Stop::Events(10_000), &mut stream(1, 3)).unwrap();
    let res: Vec<f64> = spacings(mh.times()).iter().map(|d| 0.05 * d).collect();
    assert!(!ks_exp1(&res).unwrap().reject_01);
}

#[test]
fn poisson_rates() {
    let rate = 0.05;
    let mut rng = stream(8, 0);
    let exp = Exp::new(rate).unwrap();
    let mut clock = 0.0;
    let mut times = Vec::new();
    while clock < 1e5 {
        clock += exp.sample(&mut rng);
        if clock < 1e5 {
            times.push(clock);
        }
    }
    let r = mean_rate(&times, 0.0, 1e5).unwrap();
    assert!((r.rate - rate).abs() <= 3.0 * r.std_error, "{r:?}");

    let mut clock = 0.0;
    let times: Vec<f64> = (0..100_000)
        .map(|_| {
            clock += exp.sample(&mut rng);
            clock
        })
        .collect();
    let curve = rate_curve(&times, 1000.0).unwrap().drop_partial(clock);
    let bins = curve.bins.len() as f64;
    let mean = curve.bins.iter().map(|b| b.rate).sum::<f64>() / bins;
    let se = (rate / 1000.0 / bins).sqrt();
    assert!((mean - rate).abs() <= 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn rate_curve_conserves_counts() {
    let mut rng = stream(10, 0);
    for _ in 0..50 {
        let mut clock = 0.0;
        let times: Vec<f64> = (0..rng.random_range(1..500))
            .map(|_| {
                clock += rng.random_range(0.0..30.0);
                clock
            })
            .collect();
        let width = rng.random_range(1.0..200.0);
        let curve = rate_curve(&times, width).unwrap();
        assert_eq!(curve.total_count(), times.len());
        assert!(curve.bins.iter().all(|b| b.rate >= 0.0));
    }
}
