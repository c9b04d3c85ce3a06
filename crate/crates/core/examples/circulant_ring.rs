//! Delay-aware gains for ten agents on a ring.
//!
//! cargo run --example circulant_ring

use delaykern::circulant::{design_gains, h2_cost, modes_of, small_delay_row, CirculantSystem, Method};

fn main() -> delaykern::Result<()> {
    let sys = CirculantSystem::new(vec![1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0])?;
    let modes = modes_of(&sys)?;
    println!("open-loop modes: {:?}", modes.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>());
    for (delay, r) in [(0.1, 1.0), (0.01, 1.0), (0.01, 10.0)] {
        println!("T = {delay}, r = {r}");
        for method in [Method::DelayFree, Method::SmallDelay, Method::NumericalOpt] {
            let g = design_gains(&sys, delay, r, method)?;
            let cost = h2_cost(&sys, &g, delay, r).map_or("unstable".to_string(), |j| format!("{j:.5}"));
            println!(
                "  {method:?}: self {:.4}, neighbor {:.4}, second {:.4}, cost {cost}",
                g.k_row[0], g.k_row[1], g.k_row[2]
            );
        }
        let spatial = small_delay_row(&sys, delay, r)?;
        println!("  small-delay row built in space: {:?}", spatial.iter().take(3).map(|v| format!("{v:.4}")).collect::<Vec<_>>());
    }
    Ok(())
}
