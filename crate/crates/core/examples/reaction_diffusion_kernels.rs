//! Expensive-regime reaction-diffusion kernels, their filter form, and the
//! design thresholds.
//!
//! cargo run --example reaction_diffusion_kernels

use delaykern::spatial::{
    rd_convolution_check, rd_delay_free_kernel, rd_design_approximation, rd_expensive_kernel, rd_tail_remainder,
    rd_thresholds, ReactionDiffusionParams,
};

fn main() -> delaykern::Result<()> {
    let p = ReactionDiffusionParams::new(1.0, 10.0, 1.0, 10.0)?;
    let th = rd_thresholds(&p, 0.6, 1.0, 2.0, 1.0)?;
    println!("c = {}, d = {}, T = {}, r = {}", p.c, p.d, p.delay, p.r);
    println!("gain drop at the origin {:.4}, x_th1 = {:.4}, x_th2 = {:.4}", th.gain_gap, th.x_th1, th.x_th2);
    println!(
        "truncation: delay-free {:.3}, delay {:.3}, delay dominates: {}",
        th.x_th_delay_free, th.x_th_delay, th.delay_dominates
    );
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "x", "K_0", "K_T", "design", "tail rem");
    for i in 0..=10 {
        let x = i as f64;
        println!(
            "{x:6.1} {:12.6e} {:12.6e} {:12.6e} {:12.6e}",
            rd_delay_free_kernel(&p, x),
            rd_expensive_kernel(&p, x),
            rd_design_approximation(&p, &th, x)?,
            rd_tail_remainder(&p, x)
        );
    }
    let dev = rd_convolution_check(&p, 0.05, 20.0)?;
    println!("closed form vs filtered delay-free kernel: max deviation {dev:.2e}");
    Ok(())
}
