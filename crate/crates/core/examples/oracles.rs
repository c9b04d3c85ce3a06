//! The closed-form variance against the time-domain and frequency-domain oracles.
//!
//! cargo run --release --example oracles

use delaykern::oracle::oracle_report;
use delaykern::scalar::{stabilizing_upper_bound, ScalarPlant};

fn main() -> delaykern::Result<()> {
    println!("{:>6} {:>5} {:>8} {:>12} {:>10} {:>10}", "a", "T", "k", "f", "err time", "err freq");
    for (a, delay) in [(-2.0, 0.5), (-1.0, 1.0), (0.0, 1.0), (0.5, 1.5)] {
        let plant = ScalarPlant::new(a, delay, 1.0)?;
        let upper = stabilizing_upper_bound(&plant)?.finite().unwrap_or(f64::INFINITY);
        for frac in [0.2, 0.5, 0.8] {
            let k = a + (upper - a) * frac;
            let rep = oracle_report(&plant, k)?;
            println!(
                "{a:6.2} {delay:5.2} {k:8.4} {:12.8} {:10.2e} {:10.2e}",
                rep.f_closed_form, rep.rel_err_time, rep.rel_err_freq
            );
        }
    }
    Ok(())
}
