//! Cost of spatially truncating a delay-aware kernel.
//!
//! cargo run --release --example truncation

use std::f64::consts::PI;

use delaykern::spatial::{
    rd_expensive_kernel, truncation_analysis, Provenance, ReactionDiffusionParams, SpatialKernel, SymbolFunction,
    TruncationRule,
};

fn main() -> delaykern::Result<()> {
    let p = ReactionDiffusionParams::new(1.0, 10.0, 0.5, 10.0)?;
    let dx = 0.1;
    let kernel = SpatialKernel::sample(dx, 40.0, Provenance::ExpensiveClosedForm, |x| rd_expensive_kernel(&p, x))?;
    let sym = SymbolFunction::reaction_diffusion(p.c, p.d, PI / dx, 1001)?;
    let rule = TruncationRule { kappa: 2.0, gamma: 1.0 };
    for cutoff in [1.0, 2.0, 4.0, 8.0, 16.0] {
        let rep = truncation_analysis(&p, &kernel, cutoff, &sym, rule)?;
        match (rep.j_truncated, rep.j_full) {
            (Some(j), Some(full)) => println!("cutoff {cutoff:5.1}: J = {j:.6} ({:+.3}% over the full kernel)", 100.0 * (j / full - 1.0)),
            _ => println!("cutoff {cutoff:5.1}: destabilizes {} frequencies", rep.unstable_frequencies),
        }
    }
    let rep = truncation_analysis(&p, &kernel, 40.0, &sym, rule)?;
    println!("rules of thumb: delay-free {:.3}, delay {:.3}, delay dominates: {}", rep.x_th_delay_free, rep.x_th_delay, rep.delay_dominates);
    Ok(())
}
