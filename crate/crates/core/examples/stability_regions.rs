//! Stabilizing interval and the cheap/expensive optimality boundaries along `a`.
//!
//! cargo run --example stability_regions

use delaykern::scalar::{region_boundaries, Boundary};

fn show(b: Boundary) -> String {
    match b {
        Boundary::Value(v) => format!("{v:10.5}"),
        Boundary::Unbounded => format!("{:>10}", "inf"),
        Boundary::Missing => format!("{:>10}", "-"),
    }
}

fn main() -> delaykern::Result<()> {
    let delay = 1.0;
    let grid: Vec<f64> = (0..=14).map(|i| -6.0 + 0.5 * i as f64).collect();
    println!("T = {delay}");
    println!("{:>6} {:>10} {:>10} {:>10}", "a", "k_upper", "cheap", "expensive");
    for row in region_boundaries(&grid, delay)? {
        println!("{:6.2} {} {} {}", row.a, show(row.k_upper), show(row.k_cheap), show(row.k_expensive));
    }
    Ok(())
}
