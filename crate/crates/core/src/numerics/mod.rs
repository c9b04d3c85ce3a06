//! Scalar numerical building blocks: bracketed root finding, bounded
//! minimization, adaptive Gauss-Kronrod quadrature, and composite rules.

mod quadrature;
mod scalar;

pub use quadrature::{adaptive_gauss_kronrod, simpson_uniform, trapezoid_uniform};
pub use scalar::{brent_minimize, brent_root, interior_argmin, interior_argmin_with_slope, Minimum};

/// Error function, via the musl-derived implementation in `libm`.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
