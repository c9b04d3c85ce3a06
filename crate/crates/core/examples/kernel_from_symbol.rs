//! Per-frequency optimal design of a spatially invariant plant and the
//! inverse transform to a convolution kernel, with and without delay.
//!
//! cargo run --release --example kernel_from_symbol

use std::f64::consts::PI;

use delaykern::spatial::{kernel_from_symbol, small_delay_kernel, sweep_optimal_symbol, SymbolFunction};

fn main() -> delaykern::Result<()> {
    let (c, d, r) = (1.0, 1.0, 1.0);
    let (dx, half_width) = (0.05, 8.0);
    let sym = SymbolFunction::reaction_diffusion(c, d, PI / dx, 2001)?;
    let free = sweep_optimal_symbol(&sym, 0.0, r);
    let k_free = kernel_from_symbol(&free, dx, half_width)?;
    let delayed = sweep_optimal_symbol(&sym, 0.5, r);
    let k_delay = kernel_from_symbol(&delayed, dx, half_width)?;
    let k_small = small_delay_kernel(&free, &sym, 0.05, r, dx, half_width)?;
    println!("identity weights: delay-free {:.3e}, delayed {:.3e}, small-delay {:.3e}", k_free.dirac_weight, k_delay.dirac_weight, k_small.dirac_weight);
    if let Some(note) = &k_small.caveat {
        println!("small-delay caveat: {note}");
    }
    println!("{:>6} {:>12} {:>12} {:>12}", "x", "T = 0", "T = 0.5", "T = 0.05 (sd)");
    let m = k_free.half_samples();
    for step in (0..=m).step_by(20) {
        println!(
            "{:6.2} {:12.6} {:12.6} {:12.6}",
            step as f64 * dx,
            k_free.values[m + step],
            k_delay.values[m + step],
            k_small.values[m + step]
        );
    }
    println!("tail log-slope (T = 0): {:.4}", k_free.tail_log_slope()?);
    match k_delay.tail_log_slope() {
        Ok(s) => println!("tail log-slope (T = 0.5): {s:.4}"),
        Err(e) => println!("tail log-slope (T = 0.5): {e}"),
    }
    Ok(())
}
