//! Closed forms for `a(l) = -d l^2 - c` in the expensive-control regime.
//!
//! The delay-aware kernel is the delay-free exponential kernel smoothed by a
//! Gaussian filter `g_T` and evaluates to
//!
//! ```text
//! K_T(x) = K_0(0) (phi(x) + phi(-x)),   phi(x) = e^{x sqrt(c/d)} erfc(x / (2 sqrt(dT)) + sqrt(cT)) / 2.
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{erf, erfc};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReactionDiffusionParams {
    pub c: f64,
    pub d: f64,
    pub delay: f64,
    pub r: f64,
}

impl ReactionDiffusionParams {
    pub fn new(c: f64, d: f64, delay: f64, r: f64) -> Result<Self> {
        for (name, v) in [("c", c), ("d", d), ("r", r)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(delay.is_finite() && delay >= 0.0) {
            return Err(Error::Domain(format!("delay must be >= 0, got {delay}")));
        }
        Ok(Self { c, d, delay, r })
    }

    pub fn with_delay(self, delay: f64) -> Self {
        Self { delay, ..self }
    }

    /// `a(l) = -d l^2 - c`.
    pub fn symbol(&self, lambda: f64) -> f64 {
        -self.d * lambda * lambda - self.c
    }

    /// `sqrt(c/d)`, the exponential decay rate of the kernels.
    pub fn decay_rate(&self) -> f64 {
        (self.c / self.d).sqrt()
    }

    /// `K_0(0) = (1/2r) sqrt(pi / (2 d c))`.
    pub fn delay_free_peak(&self) -> f64 {
        0.5 / self.r * (PI / (2.0 * self.d * self.c)).sqrt()
    }
}

/// Delay-free expensive-regime kernel `K_0(0) e^{-sqrt(c/d) |x|}`.
pub fn rd_delay_free_kernel(p: &ReactionDiffusionParams, x: f64) -> f64 {
    p.delay_free_peak() * (-p.decay_rate() * x.abs()).exp()
}

fn phi(p: &ReactionDiffusionParams, x: f64) -> f64 {
    let z = x / (2.0 * (p.d * p.delay).sqrt()) + (p.c * p.delay).sqrt();
    let tail = erfc(z);
    if tail == 0.0 {
        return 0.0;
    }
    0.5 * (p.decay_rate() * x + tail.ln()).exp()
}

/// Delay-aware expensive-regime kernel; the delay-free kernel when `T = 0`.
pub fn rd_expensive_kernel(p: &ReactionDiffusionParams, x: f64) -> f64 {
    if p.delay == 0.0 {
        return rd_delay_free_kernel(p, x);
    }
    p.delay_free_peak() * (phi(p, x) + phi(p, -x))
}

/// Expensive-regime symbol `e^{T a(l)} / (2 r |a(l)|)`.
pub fn rd_expensive_symbol(p: &ReactionDiffusionParams, lambda: f64) -> f64 {
    let a = p.symbol(lambda);
    (p.delay * a).exp() / (2.0 * p.r * a.abs())
}

/// Delay-aware filter `g_T(x) = e^{-cT} / sqrt(2dT) * e^{-x^2 / (4dT)}`.
pub fn gaussian_filter(p: &ReactionDiffusionParams, x: f64) -> f64 {
    let dt = p.d * p.delay;
    (-p.c * p.delay).exp() / (2.0 * dt).sqrt() * (-x * x / (4.0 * dt)).exp()
}

/// Largest deviation between the closed-form delay-aware kernel and the
/// discrete convolution of the sampled delay-free kernel with `g_T`, over
/// `[-L, L]`. The unitary transform makes the convolution carry `1/sqrt(2 pi)`.
/// The delay-free kernel is sampled on a grid padded by eight filter widths
/// so the comparison window sees no truncation.
pub fn rd_convolution_check(p: &ReactionDiffusionParams, dx: f64, half_width: f64) -> Result<f64> {
    if !(dx > 0.0 && half_width > 0.0) {
        return Err(Error::Domain(format!("grid needs dx > 0 and L > 0, got dx={dx}, L={half_width}")));
    }
    if p.delay == 0.0 {
        return Ok(0.0);
    }
    let width = (2.0 * p.d * p.delay).sqrt();
    if dx > width / 8.0 {
        return Err(Error::Resolution(format!("dx = {dx} exceeds sqrt(2dT)/8 = {}", width / 8.0)));
    }
    let m = (half_width / dx).round() as i64;
    let pad = (8.0 * width / dx).ceil() as i64;
    let filter: Vec<f64> = (-pad..=pad).map(|j| gaussian_filter(p, j as f64 * dx)).collect();
    let source: Vec<f64> = (-(m + pad)..=(m + pad)).map(|j| rd_delay_free_kernel(p, j as f64 * dx)).collect();
    let scale = dx / (2.0 * PI).sqrt();
    let mut worst = 0.0f64;
    for i in -m..=m {
        let mut s = 0.0;
        for (jj, g) in filter.iter().enumerate() {
            let offset = jj as i64 - pad;
            s += g * source[(i - offset + m + pad) as usize];
        }
        let dev = (scale * s - rd_expensive_kernel(p, i as f64 * dx)).abs();
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Origin expansion coefficients, validity thresholds, and truncation rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignThresholds {
    pub d0: f64,
    pub d2: f64,
    pub d4: f64,
    pub x_th1: f64,
    pub x_th2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub gamma: f64,
    /// Relative gain drop at the origin, `erf(sqrt(cT))`.
    pub gain_gap: f64,
    /// `alpha x_th1 <= beta x_th2`.
    pub band_consistent: bool,
    /// Delay-free truncation threshold `gamma sqrt(d/c)`.
    pub x_th_delay_free: f64,
    /// Filter truncation threshold `kappa sqrt(2dT)`.
    pub x_th_delay: f64,
    /// `sqrt(2cT) > gamma / kappa`.
    pub delay_dominates: bool,
}

/// Coefficients of `K_T(x) ~ K_0(0) (D0 + D2 x^2)` and the thresholds bounding
/// where the origin and tail approximations hold.
pub fn rd_thresholds(
    p: &ReactionDiffusionParams,
    alpha: f64,
    beta: f64,
    kappa: f64,
    gamma: f64,
) -> Result<DesignThresholds> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(beta > 0.0 && kappa > 0.0 && gamma >= 1.0) {
        return Err(Error::Domain(format!(
            "need beta > 0, kappa > 0, gamma >= 1; got {beta}, {kappa}, {gamma}"
        )));
    }
    let (c, d, t) = (p.c, p.d, p.delay);
    if t <= 0.0 {
        return Err(Error::Domain("thresholds need T > 0: the delay-free kernel has a corner at 0".into()));
    }
    let sqrt_ct = (c * t).sqrt();
    let d0 = erfc(sqrt_ct);
    let slope_term = (c / (PI * t)).sqrt() * (-c * t).exp();
    let d2 = c * d0 / (2.0 * d) - slope_term / (2.0 * d);
    let d4 = 2.0 * c * c * d0 / (d * d) - slope_term / (d * d) * (c + 0.5 / t);
    let x_th1 = (12.0 / d4.abs() * (d2 + (d2 * d2 + d0 * d4.abs() / 6.0).sqrt())).sqrt();
    let x_th2 = 2.0 * ((d * t).sqrt() + (c * d).sqrt() * t);
    Ok(DesignThresholds {
        d0,
        d2,
        d4,
        x_th1,
        x_th2,
        alpha,
        beta,
        kappa,
        gamma,
        gain_gap: erf(sqrt_ct),
        band_consistent: alpha * x_th1 <= beta * x_th2,
        x_th_delay_free: gamma * (d / c).sqrt(),
        x_th_delay: kappa * (2.0 * d * t).sqrt(),
        delay_dominates: (2.0 * c * t).sqrt() > gamma / kappa,
    })
}

/// Piecewise design kernel: the origin parabola up to `alpha x_th1`, the
/// delay-free kernel from `beta x_th2`, linear in between.
pub fn rd_design_approximation(p: &ReactionDiffusionParams, th: &DesignThresholds, x: f64) -> Result<f64> {
    if !th.band_consistent {
        return Err(Error::Domain(format!(
            "alpha x_th1 = {} exceeds beta x_th2 = {}",
            th.alpha * th.x_th1,
            th.beta * th.x_th2
        )));
    }
    let peak = p.delay_free_peak();
    let parabola = |x: f64| peak * (th.d0 + th.d2 * x * x);
    let near = th.alpha * th.x_th1;
    let far = th.beta * th.x_th2;
    let ax = x.abs();
    Ok(if ax <= near {
        parabola(ax)
    } else if ax >= far {
        rd_delay_free_kernel(p, ax)
    } else {
        let w = (ax - near) / (far - near);
        (1.0 - w) * parabola(near) + w * rd_delay_free_kernel(p, far)
    })
}

/// `R(x) = K_T(x) / K_0(x) - 1`.
pub fn rd_tail_remainder(p: &ReactionDiffusionParams, x: f64) -> f64 {
    if p.delay == 0.0 {
        return 0.0;
    }
    let x = x.abs();
    let s = 2.0 * (p.d * p.delay).sqrt();
    let q = (p.c * p.delay).sqrt();
    let z1 = x / s + q;
    let z2 = x / s - q;
    let e1 = erfc(z1);
    let grown = if e1 == 0.0 { 0.0 } else { (2.0 * p.decay_rate() * x + e1.ln()).exp() };
    0.5 * (grown - erfc(z2))
}

/// Lower bound on `R(x)` from the divergent asymptotic series of the normal
/// tail; valid for `x > 2 sqrt(dc) T`.
pub fn rd_tail_remainder_bound(p: &ReactionDiffusionParams, x: f64) -> Result<f64> {
    let (c, d, t) = (p.c, p.d, p.delay);
    let shift = 2.0 * (d * c).sqrt() * t;
    if !(x > shift) {
        return Err(Error::Domain(format!("bound needs x > 2 sqrt(dc) T = {shift}, got {x}")));
    }
    let sigma = (2.0 * d * t).sqrt();
    let norm = (2.0 * PI).sqrt();
    let plus = x + shift;
    let first = (-0.5 * (x * x / (2.0 * d * t) + 2.0 * c * t)).exp() / norm
        * (sigma / plus - sigma.powi(3) / plus.powi(3));
    let second = (-0.5 * (x / sigma - (2.0 * c * t).sqrt()).powi(2)).exp() / norm * sigma / (x - shift);
    Ok(first - second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: f64) -> ReactionDiffusionParams {
        ReactionDiffusionParams::new(1.0, 10.0, t, 10.0).unwrap()
    }

    /// Maclaurin series of erf, summed far past double precision.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..80 {
            term *= -x * x / n as f64;
            sum += term / (2 * n + 1) as f64;
        }
        2.0 / PI.sqrt() * sum
    }

    #[test]
    fn origin_value() {
        let p = params(1.0);
        let k00 = p.delay_free_peak();
        assert!((k00 - 0.0198166).abs() < 1e-7);
        let erf1 = erf_series(1.0);
        assert!((erf1 - 0.8427008).abs() < 1e-7);
        let v = rd_expensive_kernel(&p, 0.0);
        assert!((v - k00 * (1.0 - erf1)).abs() < 1e-15);
        assert!((v - 0.0031171).abs() < 1e-7);
    }

    #[test]
    fn small_delay_limit() {
        let p = params(1e-12);
        let x = 1.0;
        let free = 0.5 / 10.0 * (PI / 20.0).sqrt() * (-(0.1f64).sqrt()).exp();
        assert!((rd_expensive_kernel(&p, x) - free).abs() < 1e-8);
    }

    #[test]
    fn kernel_even_and_below_delay_free() {
        let p = params(0.5);
        for i in 0..200 {
            let x = 0.1 * i as f64;
            assert_eq!(rd_expensive_kernel(&p, x), rd_expensive_kernel(&p, -x));
            assert!(rd_expensive_kernel(&p, x) < rd_delay_free_kernel(&p, x));
        }
        let far = rd_expensive_kernel(&p, 60.0) / rd_delay_free_kernel(&p, 60.0);
        assert!((far - 1.0).abs() < 1e-9);
    }

    #[test]
    fn convolution_matches_closed_form() {
        let p = params(1.0);
        let dev = rd_convolution_check(&p, 0.05, 30.0).unwrap();
        assert!(dev < 1e-4 * p.delay_free_peak(), "{dev}");
        let wider = rd_convolution_check(&p, 0.05, 60.0).unwrap();
        assert!((dev - wider).abs() < 1e-9);
        assert!(matches!(rd_convolution_check(&p, 1.0, 30.0), Err(Error::Resolution(_))));
        assert_eq!(rd_convolution_check(&params(0.0), 0.05, 30.0).unwrap(), 0.0);
    }

    #[test]
    fn threshold_examples() {
        let th = rd_thresholds(&params(1.0), 0.5, 1.0, 2.0, 1.0).unwrap();
        assert!((th.gain_gap - erf_series(1.0)).abs() < 1e-14);
        assert!((th.x_th2 - 4.0 * 10f64.sqrt()).abs() < 1e-12);
        let tiny = rd_thresholds(&params(1e-10), 0.5, 1.0, 2.0, 1.0).unwrap();
        assert!((tiny.d0 - 1.0).abs() < 1e-4 && tiny.gain_gap < 1e-4);
        let half = rd_thresholds(&params(0.5), 0.5, 1.0, 2.0, 1.0).unwrap();
        assert!((half.x_th1 - 5.1417).abs() < 1e-3);
        assert!((half.x_th2 - 7.6344).abs() < 1e-3);
        assert!(rd_thresholds(&params(0.0), 0.5, 1.0, 2.0, 1.0).is_err());
        assert!(rd_thresholds(&params(1.0), 1.5, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn d2_is_half_the_normalized_curvature() {
        // central second difference of the closed-form kernel at the origin
        let p = params(0.5);
        let th = rd_thresholds(&p, 0.5, 1.0, 2.0, 1.0).unwrap();
        let h = 1e-3;
        let k = |x| rd_expensive_kernel(&p, x);
        let curvature = (k(h) - 2.0 * k(0.0) + k(-h)) / (h * h);
        let d2 = curvature / (2.0 * p.delay_free_peak());
        assert!(((d2 - th.d2) / th.d2).abs() < 1e-5, "{d2} vs {}", th.d2);
    }

    #[test]
    fn design_approximation_pieces() {
        let p = params(0.5);
        let th = rd_thresholds(&p, 0.6, 1.0, 2.0, 1.0).unwrap();
        let at0 = rd_design_approximation(&p, &th, 0.0).unwrap();
        assert!((at0 - p.delay_free_peak() * th.d0).abs() < 1e-16);
        assert!((at0 - rd_expensive_kernel(&p, 0.0)).abs() < 1e-15);
        let far = 2.0 * th.beta * th.x_th2;
        assert_eq!(rd_design_approximation(&p, &th, far).unwrap(), rd_delay_free_kernel(&p, far));
        let mut bad = th;
        bad.band_consistent = false;
        assert!(rd_design_approximation(&p, &bad, 1.0).is_err());
    }

    #[test]
    fn tail_remainder_within_bound() {
        for &(t, x) in &[(0.5, 20.0), (0.5, 10.0), (0.1, 10.0), (1.0, 30.0)] {
            let p = params(t);
            let r = rd_tail_remainder(&p, x);
            let direct = rd_expensive_kernel(&p, x) / rd_delay_free_kernel(&p, x) - 1.0;
            assert!((r - direct).abs() < 1e-12);
            assert!(r < 0.0);
            let lb = rd_tail_remainder_bound(&p, x).unwrap();
            assert!(lb <= r, "T={t} x={x}: {lb} > {r}");
        }
        let p = params(0.5);
        assert!(rd_tail_remainder(&p, 80.0).abs() < 1e-20);
        assert!(rd_tail_remainder_bound(&p, 80.0).unwrap().abs() < 1e-20);
        assert!(rd_tail_remainder_bound(&p, 1.0).is_err());
    }
}
