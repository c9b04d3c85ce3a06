//! Seeded Euler-Maruyama estimate of the stationary variance.
//!
//! cargo run --release --example monte_carlo

use delaykern::oracle::monte_carlo_variance;
use delaykern::scalar::{variance_integral, ScalarPlant};

fn main() -> delaykern::Result<()> {
    let seed = 7;
    for (a, delay, k) in [(-1.0, 0.0, 0.0), (-1.0, 0.5, 1.0), (-0.6, 1.0, 0.3)] {
        let plant = ScalarPlant::new(a, delay, 1.0)?;
        let exact = variance_integral(&plant, k)?.f_value;
        let est = monte_carlo_variance(&plant, k, 0.002, 50.0, 2000, seed)?;
        println!(
            "a = {a:5.2}, T = {delay:4.2}, k = {k:4.2}: closed form {exact:.5}, Monte Carlo {:.5} +- {:.5} (z = {:.2})",
            est.mean,
            est.stderr,
            (est.mean - exact) / est.stderr
        );
    }
    Ok(())
}
