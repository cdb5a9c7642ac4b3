//! Estimator oracles: the production L-moment path against the definitional
//! subset average, unbiasedness of l2, and fit-recovery sweeps.

mod common;

use common::brute_force_lmoment;
use floodfreq::{
    fit_gev_lmom, fit_gpd_known_threshold, sample_lmoments, GevParams, GpdParams, LmomentSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[test]
fn weighted_form_equals_subset_average_on_random_samples() {
    let mut rng = ChaCha12Rng::seed_from_u64(271828);
    for case in 0..1000 {
        let n = rng.gen_range(4..=12);
        let mut data: Vec<f64> = match case % 3 {
            0 => (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect(),
            1 => {
                let gpd = GpdParams::new(0.6, 20.0, 10.0).unwrap();
                gpd.sample(n, &mut rng)
            }
            _ => (0..n).map(|_| rng.gen_range(0..6) as f64).collect(),
        };
        if case % 7 == 0 {
            data[0] = data[n - 1]; // force ties
        }
        let scale = data.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let lm = sample_lmoments(&data, 4).unwrap();
        for (r, got) in [(1, lm.l1), (2, lm.l2), (3, lm.l3), (4, lm.l4)] {
            let want = brute_force_lmoment(&data, r);
            assert!(
                (got - want).abs() <= 1e-12 * scale.max(want.abs()),
                "case {case}, r={r}: weighted {got} vs subset {want} (n={n})"
            );
        }
    }
}

#[test]
fn l2_is_unbiased_for_the_population_value() {
    let gpd = GpdParams::new(0.2, 5.0, 10.0).unwrap();
    let (_, lambda2) = gpd.population_lmoments().unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(60601);
    let replicates = 100_000;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..replicates {
        let xs = gpd.sample(20, &mut rng);
        let l2 = sample_lmoments(&xs, 2).unwrap().l2;
        sum += l2;
        sum_sq += l2 * l2;
    }
    let n = replicates as f64;
    let mean = sum / n;
    let std_err = ((sum_sq / n - mean * mean) / n).sqrt();
    assert!(
        (mean - lambda2).abs() < 3.0 * std_err,
        "mean l2 {mean} vs lambda2 {lambda2} (3 SE = {})",
        3.0 * std_err
    );
}

#[test]
fn gpd_fit_is_exact_on_population_lmoments() {
    for &(shape, scale, threshold) in &[
        (0.2, 5.0, 10.0),
        (0.6, 20.0, 10.0),
        (-0.3, 2.0, 0.0),
        (0.0, 7.5, -4.0),
    ] {
        let truth = GpdParams::new(shape, scale, threshold).unwrap();
        let (l1, l2) = truth.population_lmoments().unwrap();
        let lm = LmomentSet {
            l1,
            l2,
            l3: 0.0,
            l4: 0.0,
        };
        let fit = fit_gpd_known_threshold(&lm, threshold).unwrap();
        assert!(
            (fit.shape - shape).abs() < 1e-12 && (fit.scale - scale).abs() < 1e-12 * scale,
            "({shape}, {scale}): got ({}, {})",
            fit.shape,
            fit.scale
        );
    }
}

#[test]
fn gev_fit_recovers_shape_across_the_range() {
    let mut shape = -0.4;
    while shape <= 0.7 + 1e-9 {
        let truth = GevParams::new(shape, 5.0, 10.0).unwrap();
        let (l1, l2, t3) = truth.population_lmoments().unwrap();
        let lm = LmomentSet {
            l1,
            l2,
            l3: t3 * l2,
            l4: 0.0,
        };
        let fit = fit_gev_lmom(&lm).unwrap();
        assert!(
            (fit.shape - shape).abs() <= 1e-3,
            "shape {shape}: recovered {}",
            fit.shape
        );
        shape += 0.05;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lmoments_are_shift_and_scale_equivariant(
        data in prop::collection::vec(-1e3f64..1e3, 4..40),
        a in 0.1f64..10.0,
        b in -100.0f64..100.0,
    ) {
        let lm = sample_lmoments(&data, 4).unwrap();
        let transformed: Vec<f64> = data.iter().map(|&x| a * x + b).collect();
        let lt = sample_lmoments(&transformed, 4).unwrap();
        let scale = data.iter().fold(1.0f64, |m, x| m.max(x.abs())) * a + b.abs();
        prop_assert!((lt.l1 - (a * lm.l1 + b)).abs() <= 1e-11 * scale);
        prop_assert!((lt.l2 - a * lm.l2).abs() <= 1e-11 * scale);
        prop_assert!((lt.l3 - a * lm.l3).abs() <= 1e-11 * scale);
        prop_assert!((lt.l4 - a * lm.l4).abs() <= 1e-11 * scale);
    }

    #[test]
    fn gpd_quantile_cdf_roundtrip(
        shape in -0.4f64..0.9,
        scale in 0.1f64..50.0,
        threshold in -20.0f64..60.0,
        prob in 0.001f64..0.999,
    ) {
        let p = GpdParams::new(shape, scale, threshold).unwrap();
        let x = p.quantile(prob).unwrap();
        prop_assert!((p.cdf(x) - prob).abs() <= 1e-8);
    }

    #[test]
    fn gev_quantile_cdf_roundtrip(
        shape in -0.4f64..0.9,
        scale in 0.1f64..50.0,
        location in -20.0f64..60.0,
        prob in 0.001f64..0.999,
    ) {
        let p = GevParams::new(shape, scale, location).unwrap();
        let x = p.quantile(prob).unwrap();
        prop_assert!((p.cdf(x) - prob).abs() <= 1e-8);
    }
}
