//! Optimal delayed gain and its cost against the delay-free design.
//!
//! cargo run --example optimal_gain

use delaykern::asymptotic::delay_free_gain;
use delaykern::scalar::{optimal_gain, variance_integral, ScalarPlant, StabilityInterval};

fn main() -> delaykern::Result<()> {
    let (a, r) = (-1.0, 1.0);
    let k0 = delay_free_gain(a, r);
    println!("a = {a}, r = {r}, delay-free gain {k0:.6}");
    println!("{:>5} {:>10} {:>10} {:>10} {:>14}", "T", "k_upper", "k_opt", "J_opt", "J(delay-free)");
    for delay in [0.0, 0.1, 0.5, 1.0, 2.0, 3.0] {
        let plant = ScalarPlant::new(a, delay, r)?;
        let interval = StabilityInterval::of(&plant)?;
        let opt = optimal_gain(&plant)?;
        let naive = if interval.contains(k0) {
            format!("{:14.6}", variance_integral(&plant, k0)?.j_value)
        } else {
            format!("{:>14}", "unstable")
        };
        let upper = interval.upper.finite().map_or("inf".to_string(), |v| format!("{v:.5}"));
        println!("{delay:5.2} {upper:>10} {:10.6} {:10.6} {naive}", opt.k, opt.j);
    }
    Ok(())
}
