//! Closed-form gains in the expensive-control and small-delay regimes next to
//! the numerical optimum.
//!
//! cargo run --example asymptotic_gains

use delaykern::asymptotic::{expensive_cost_gap, expensive_gain, small_delay_cubic_gain, small_delay_gain};
use delaykern::scalar::{optimal_gain, ScalarPlant};

fn main() -> delaykern::Result<()> {
    let (a, delay) = (-1.0, 1.0);
    println!("expensive regime, a = {a}, T = {delay}");
    for r in [1e1, 1e2, 1e3, 1e4, 1e5] {
        let opt = optimal_gain(&ScalarPlant::new(a, delay, r)?)?.k;
        let closed = expensive_gain(a, delay, r)?.k;
        let gap = expensive_cost_gap(a, delay, r)?;
        println!("  r = {r:8.0e}: optimal {opt:.6e}, closed form {closed:.6e}, ratio {:.6}, cost gap {:.3e} (limit {:.3e})", opt / closed, gap.gap, gap.limit_t_inf);
    }

    let r = 1.0;
    println!("small-delay regime, a = {a}, r = {r}");
    for delay in [0.1, 0.05, 0.02, 0.01, 0.005] {
        let opt = optimal_gain(&ScalarPlant::new(a, delay, r)?)?.k;
        let linear = small_delay_gain(a, delay, r)?;
        let cubic = small_delay_cubic_gain(a, delay, r)?;
        println!(
            "  T = {delay:5.3}: optimal {opt:.8}, linear {:.8} (err {:.2e}), cubic {:.8} (err {:.2e}){}",
            linear.k,
            (opt - linear.k).abs(),
            cubic.k,
            (opt - cubic.k).abs(),
            if linear.outside_validity { ", outside regime" } else { "" }
        );
    }
    Ok(())
}
