use delaykern::asymptotic::{delay_free_gain, expensive_cost_gap, expensive_gain, small_delay_correction};
use delaykern::circulant::{circulant_apply, design_gains, modes_of, row_from_modes, CirculantSystem, Method};
use delaykern::numerics::erf;
use delaykern::oracle::{freq_domain_cost, fundamental_energy, fundamental_solution, monte_carlo_variance};
use delaykern::scalar::{optimal_gain, stabilizing_upper_bound, variance_integral, ScalarPlant, StabilityInterval};
use delaykern::spatial::{rd_delay_free_kernel, rd_expensive_kernel, rd_thresholds, ReactionDiffusionParams};
use delaykern::Error;
use proptest::prelude::*;

fn plant(a: f64, t: f64, r: f64) -> ScalarPlant {
    ScalarPlant::new(a, t, r).unwrap()
}

fn ku(a: f64, t: f64) -> f64 {
    stabilizing_upper_bound(&plant(a, t, 1.0)).unwrap().finite().unwrap()
}

/// `(a, T)` with `a T < 1` and a margin.
fn stabilizable() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..2.0, 0.0f64..0.95).prop_flat_map(|(t, s)| (-4.0f64..(s / t).min(3.0), Just(t)))
}

fn symmetric_row() -> impl Strategy<Value = Vec<f64>> {
    (2usize..12)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-2.0f64..2.0, n / 2 + 1)))
        .prop_map(|(n, half)| (0..n).map(|i| half[i.min(n - i)]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn continuous_across_equal_branch(a in -5.0f64..-0.05, t in 0.01f64..2.0) {
        let p = plant(a, t, 1.0);
        let at = variance_integral(&p, -a).unwrap().f_value;
        let lo = variance_integral(&p, -a - 1e-7).unwrap().f_value;
        let hi = variance_integral(&p, -a + 1e-7).unwrap().f_value;
        prop_assert!((0.5 * (lo + hi) - at).abs() <= 1e-9 * at);
        prop_assert!((lo - at).abs() <= 1e-6 * at && (hi - at).abs() <= 1e-6 * at);
    }

    #[test]
    fn upper_bound_decreasing_and_convex_in_a(t in 0.1f64..3.0, x in 0.0f64..1.0, gap in 0.01f64..0.5) {
        let a_hi = 1.0 / t - 1e-3;
        let a0 = -5.0 + (a_hi - 2.0 * gap + 5.0) * x;
        let (k0, k1, k2) = (ku(a0, t), ku(a0 + gap, t), ku(a0 + 2.0 * gap, t));
        prop_assert!(k1 < k0 && k2 < k1);
        prop_assert!(k1 <= 0.5 * (k0 + k2) + 1e-12 * k0);
    }

    #[test]
    fn upper_bound_decreasing_and_convex_in_t(a in -5.0f64..0.9, x in 0.0f64..1.0, gap in 0.01f64..0.3) {
        let t_hi = if a > 0.0 { 1.0 / a - 1e-3 } else { 5.0 };
        let t0 = 0.05 + (t_hi - 2.0 * gap - 0.05).max(0.0) * x;
        let (k0, k1, k2) = (ku(a, t0), ku(a, t0 + gap), ku(a, t0 + 2.0 * gap));
        prop_assert!(k1 < k0 && k2 < k1);
        prop_assert!(k1 <= 0.5 * (k0 + k2) + 1e-12 * k0);
    }

    #[test]
    fn optimal_gain_interior_and_below_delay_free((a, t) in stabilizable(), log_r in -2.0f64..3.0) {
        let r = 10f64.powf(log_r);
        let p = plant(a, t, r);
        let g = optimal_gain(&p).unwrap();
        let iv = StabilityInterval::of(&p).unwrap();
        prop_assert!(iv.contains(g.k));
        prop_assert!(g.k <= delay_free_gain(a, r) * (1.0 + 1e-12));
        let step = 1e-4 * (1.0 + g.k.abs());
        for k in [g.k - step, g.k + step] {
            if iv.contains(k) {
                prop_assert!(variance_integral(&p, k).unwrap().j_value >= g.j * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn small_delay_correction_positive(exp in -6.0f64..6.0, neg in any::<bool>(), log_r in -3.0f64..3.0) {
        let a = if neg { -(10f64.powf(exp)) } else { 10f64.powf(exp) };
        prop_assert!(small_delay_correction(a, 10f64.powf(log_r)) > 0.0);
    }

    #[test]
    fn expensive_penalty_monotone_in_delay(a in -10.0f64..-0.01, t in 0.0f64..5.0, dt in 0.001f64..1.0, log_r in 0.0f64..4.0) {
        let r = 10f64.powf(log_r);
        prop_assert!(expensive_gain(a, t + dt, r).unwrap().k < expensive_gain(a, t, r).unwrap().k);
        let (g0, g1) = (expensive_cost_gap(a, t, r).unwrap(), expensive_cost_gap(a, t + dt, r).unwrap());
        prop_assert!(g1.gap >= g0.gap && g1.gap <= g1.limit_t_inf);
        // strict until 1 - e^{2aT} saturates in double precision
        if (2.0 * a * t).exp() > 1e-12 {
            prop_assert!(g1.gap > g0.gap);
        }
    }

    #[test]
    fn expensive_kernel_gap_at_origin(c in 0.1f64..5.0, d in 0.1f64..20.0, t in 0.01f64..3.0, r in 0.1f64..100.0) {
        let p = ReactionDiffusionParams::new(c, d, t, r).unwrap();
        let k0 = rd_delay_free_kernel(&p, 0.0);
        let kt = rd_expensive_kernel(&p, 0.0);
        prop_assert!(kt < k0);
        prop_assert!(((k0 - kt) / k0 - erf((c * t).sqrt())).abs() <= 1e-12);
        for x in [0.3, 1.0, 4.0] {
            prop_assert!(rd_expensive_kernel(&p, x) > 0.0);
            prop_assert_eq!(rd_expensive_kernel(&p, x), rd_expensive_kernel(&p, -x));
        }
    }

    #[test]
    fn kernel_flattens_with_delay(c in 0.1f64..5.0, d in 0.1f64..20.0, t1 in 0.05f64..2.0, dt in 0.05f64..2.0) {
        let p = ReactionDiffusionParams::new(c, d, t1, 1.0).unwrap();
        let d2 = |t: f64| rd_thresholds(&p.with_delay(t), 0.5, 1.0, 2.0, 1.0).unwrap().d2;
        prop_assert!(d2(t1 + dt) > d2(t1));
    }

    #[test]
    fn circulant_dft_round_trip(row in symmetric_row()) {
        let sys = CirculantSystem::new(row.clone()).unwrap();
        let back = row_from_modes(&modes_of(&sys).unwrap());
        for (x, y) in row.iter().zip(&back) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn circulant_product_is_circular_convolution(row in symmetric_row(), seed in prop::collection::vec(-3.0f64..3.0, 12)) {
        let n = row.len();
        let x = &seed[..n];
        let y = circulant_apply(&row, x);
        for (i, yi) in y.iter().enumerate() {
            let conv: f64 = (0..n).map(|j| row[j] * x[(i + n - j) % n]).sum();
            prop_assert!((yi - conv).abs() <= 1e-12);
        }
    }

    #[test]
    fn circulant_mode_gains_shrink(row in symmetric_row(), t in 0.01f64..0.5) {
        let sys = CirculantSystem::new(row).unwrap();
        let modes = modes_of(&sys).unwrap();
        prop_assume!(modes.iter().all(|&m| m * t < 0.95));
        let free = design_gains(&sys, 0.0, 1.0, Method::NumericalOpt).unwrap();
        let delayed = design_gains(&sys, t, 1.0, Method::NumericalOpt).unwrap();
        for (k, k0) in delayed.k_modes.iter().zip(&free.k_modes) {
            prop_assert!(*k <= k0 * (1.0 + 1e-12) + 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_matches_oracles((a, t) in stabilizable(), frac in 0.05f64..0.95) {
        let k = a + (ku(a, t) - a) * frac;
        let p = plant(a, t, 1.0);
        let f = variance_integral(&p, k).unwrap().f_value;
        let time = fundamental_energy(&p, k).unwrap().energy;
        let freq = freq_domain_cost(&p, k).unwrap();
        prop_assert!(((time - f) / f).abs() < 1e-3, "time {time} vs {f}");
        prop_assert!(((freq - f) / f).abs() < 1e-4, "freq {freq} vs {f}");
    }

    #[test]
    fn oracle_flags_the_stability_boundary(a in -2.0f64..0.5, t in 0.3f64..1.5) {
        let upper = ku(a, t);
        let h = 0.01 * t.min(1.0);
        let inside = fundamental_solution(&plant(a, t, 1.0), upper - 5e-4, h, 4000.0);
        let outside = fundamental_solution(&plant(a, t, 1.0), upper + 5e-4, h, 4000.0);
        prop_assert!(inside.is_ok(), "{inside:?}");
        prop_assert!(matches!(outside, Err(Error::Divergence(_))));
    }

    #[test]
    fn monte_carlo_bit_identical(seed in any::<u64>(), (a, t) in stabilizable()) {
        let k = a + (ku(a, t) - a) * 0.5;
        let p = plant(a, t, 1.0);
        let x = monte_carlo_variance(&p, k, 0.02, 4.0, 100, seed).unwrap();
        let y = monte_carlo_variance(&p, k, 0.02, 4.0, 100, seed).unwrap();
        prop_assert_eq!(x.mean.to_bits(), y.mean.to_bits());
        prop_assert_eq!(x.stderr.to_bits(), y.stderr.to_bits());
    }
}
