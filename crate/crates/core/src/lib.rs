//! Synthesis and verification of H2-optimal proportional feedback for
//! spatially invariant systems with a constant feedback delay.
//!
//! Each spatial frequency of a spatially invariant plant decouples into the
//! scalar retarded loop `dx = (a x(t) - k x(t - T)) dt + dw`. The crate
//! evaluates its exact cost, finds optimal gains, provides asymptotic gain
//! formulas, reconstructs spatial convolution kernels, designs circulant
//! ring controllers, and checks every closed form against independent
//! time-domain, frequency-domain, and Monte Carlo oracles.
//!
//! ```
//! use delaykern::scalar::{optimal_gain, ScalarPlant};
//!
//! let plant = ScalarPlant::new(-1.0, 0.0, 1.0).unwrap();
//! let g = optimal_gain(&plant).unwrap();
//! assert!((g.k - (2f64.sqrt() - 1.0)).abs() < 1e-12);
//! ```

pub mod error;
pub mod numerics;
pub mod asymptotic;
pub mod oracle;
pub mod scalar;
pub mod spatial;
pub mod circulant;
pub mod workbench;

pub use error::{Error, Result};
