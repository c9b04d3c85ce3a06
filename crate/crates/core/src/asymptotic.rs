//! Closed-form approximations of the optimal gain.
//!
//! | regime        | gain                                  |
//! |---------------|---------------------------------------|
//! | delay-free    | `a + sqrt(a^2 + 1/r)`                 |
//! | expensive     | `e^{Ta} / (2 r |a|)`, also `a -> -inf` |
//! | small delay   | `k0 - (a k0 + 1/r) T`                 |
//! | small delay   | positive root of a cubic in `k`       |

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::delay_free_optimum;

/// `|a| T` above which the small-delay expansion is flagged.
pub const SMALL_DELAY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    DelayFree,
    FastDynamics,
    Expensive,
    SmallDelay,
    SmallDelayCubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainFormulaResult {
    pub k: f64,
    pub regime: Regime,
    /// The asymptotic parameter the formula was requested at (`r` or `T`).
    pub validity_hint: f64,
    /// Set when the parameters leave the regime the formula was derived for.
    pub outside_validity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostGapResult {
    pub gap: f64,
    pub limit_t_inf: f64,
}

fn check_weight(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("control weight must be > 0, got {r}")))
    }
}

fn check_delay(t: f64) -> Result<()> {
    if t >= 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("delay must be >= 0, got {t}")))
    }
}

fn check_stable_open_loop(a: f64) -> Result<()> {
    if a < 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("formula requires a < 0, got {a}")))
    }
}

/// `a + sqrt(a^2 + 1/r)`, rationalized for `a < 0`.
pub fn delay_free_gain(a: f64, r: f64) -> f64 {
    delay_free_optimum(a, r)
}

/// Expensive-control (and fast-dynamics) gain `e^{Ta} / (2 r |a|)`.
pub fn expensive_gain(a: f64, delay: f64, r: f64) -> Result<GainFormulaResult> {
    check_stable_open_loop(a)?;
    check_delay(delay)?;
    check_weight(r)?;
    Ok(GainFormulaResult {
        k: (delay * a).exp() / (2.0 * r * a.abs()),
        regime: Regime::Expensive,
        validity_hint: r,
        outside_validity: false,
    })
}

/// First-order small-delay gain `k0 - (a k0 + 1/r) T`.
pub fn small_delay_gain(a: f64, delay: f64, r: f64) -> Result<GainFormulaResult> {
    check_delay(delay)?;
    check_weight(r)?;
    let k0 = delay_free_optimum(a, r);
    Ok(GainFormulaResult {
        k: k0 - small_delay_correction(a, r) * delay,
        regime: Regime::SmallDelay,
        validity_hint: delay,
        outside_validity: a.abs() * delay > SMALL_DELAY_LIMIT,
    })
}

/// `a k0 + 1/r`, positive for every finite `a`.
pub fn small_delay_correction(a: f64, r: f64) -> f64 {
    // a k0 + 1/r = (1/r) sqrt(a^2 + 1/r) / (sqrt(a^2 + 1/r) - a), free of cancellation
    let root = (a * a + 1.0 / r).sqrt();
    if a < 0.0 {
        (root / r) / (root - a)
    } else {
        a * (a + root) + 1.0 / r
    }
}

/// Coefficients `[c3, c2, c1, c0]` of the small-delay optimality cubic
/// `2rT k^3 + (1 - 3Ta) r k^2 - 2ra k - (1 + Ta)`.
pub fn small_delay_cubic(a: f64, delay: f64, r: f64) -> [f64; 4] {
    [
        2.0 * r * delay,
        (1.0 - 3.0 * delay * a) * r,
        -2.0 * r * a,
        -(1.0 + delay * a),
    ]
}

fn horner(c: &[f64; 4], k: f64) -> f64 {
    ((c[0] * k + c[1]) * k + c[2]) * k + c[3]
}

fn horner_slope(c: &[f64; 4], k: f64) -> f64 {
    (3.0 * c[0] * k + 2.0 * c[1]) * k + c[2]
}

/// Real roots of `c3 k^3 + c2 k^2 + c1 k + c0` by Cardano, trigonometric
/// form when all three are real.
fn cardano_real_roots(c: &[f64; 4]) -> Vec<f64> {
    let b = c[1] / c[0];
    let cc = c[2] / c[0];
    let d = c[3] / c[0];
    let p = cc - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    let shift = -b / 3.0;
    let disc = 0.25 * q * q + p * p * p / 27.0;
    if disc > 0.0 {
        let big = -(q.signum()) * (0.5 * q.abs() + disc.sqrt()).cbrt();
        let small = if big == 0.0 { 0.0 } else { -p / (3.0 * big) };
        vec![big + small + shift]
    } else if p == 0.0 {
        vec![shift]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|j| m * (theta - 2.0 * PI * j as f64 / 3.0).cos() + shift)
            .collect()
    }
}

fn newton_polish(c: &[f64; 4], mut k: f64) -> f64 {
    for _ in 0..8 {
        let slope = horner_slope(c, k);
        if slope == 0.0 {
            break;
        }
        let step = horner(c, k) / slope;
        k -= step;
        if step.abs() <= 4.0 * f64::EPSILON * k.abs() {
            break;
        }
    }
    k
}

/// All real roots, polished. The dominant Cardano root is accurate even when
/// `T -> 0` sends it to `-1/(2T)`; the other two are recovered from the
/// backward-deflated quadratic, which avoids the cancellation Cardano suffers
/// there.
fn cubic_real_roots(c: &[f64; 4]) -> Vec<f64> {
    let seeds = cardano_real_roots(c);
    let dominant = seeds.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let r1 = newton_polish(c, dominant);
    let mut roots = vec![r1];
    if r1 == 0.0 {
        return roots;
    }
    let e0 = -c[3] / r1;
    let e1 = (e0 - c[2]) / r1;
    let disc = e1 * e1 - 4.0 * c[0] * e0;
    if disc >= 0.0 {
        let qq = -0.5 * (e1 + disc.sqrt().copysign(e1));
        if qq != 0.0 {
            roots.push(newton_polish(c, qq / c[0]));
            roots.push(newton_polish(c, e0 / qq));
        }
    }
    roots
}

/// Unique positive root of the small-delay cubic. Descartes' rule gives
/// exactly one whenever `1 + Ta > 0`.
pub fn small_delay_cubic_root(a: f64, delay: f64, r: f64) -> Result<f64> {
    check_weight(r)?;
    if !(delay > 0.0 && delay.is_finite()) {
        return Err(Error::Domain(format!("cubic needs T > 0, got {delay}")));
    }
    let c = small_delay_cubic(a, delay, r);
    let mut best: Option<f64> = None;
    for root in cubic_real_roots(&c) {
        if root > 0.0 && root.is_finite() {
            best = match best {
                Some(b) if horner(&c, b).abs() <= horner(&c, root).abs() => Some(b),
                _ => Some(root),
            };
        }
    }
    best.ok_or_else(|| {
        Error::Domain(format!("no positive root of the small-delay cubic at a={a}, T={delay}, r={r}"))
    })
}

/// Same root wrapped with its regime tag.
pub fn small_delay_cubic_gain(a: f64, delay: f64, r: f64) -> Result<GainFormulaResult> {
    Ok(GainFormulaResult {
        k: small_delay_cubic_root(a, delay, r)?,
        regime: Regime::SmallDelayCubic,
        validity_hint: delay,
        outside_validity: a.abs() * delay > SMALL_DELAY_LIMIT,
    })
}

/// Extra cost of the expensive-regime design per frequency,
/// `(1 - e^{2Ta}) / (8 r |a|^3)`. `T = +inf` is accepted.
pub fn expensive_cost_gap(a: f64, delay: f64, r: f64) -> Result<CostGapResult> {
    check_stable_open_loop(a)?;
    check_delay(delay)?;
    check_weight(r)?;
    let limit = 1.0 / (8.0 * r * a.abs().powi(3));
    let gap = if delay.is_infinite() {
        limit
    } else {
        -(2.0 * delay * a).exp_m1() * limit
    };
    Ok(CostGapResult { gap, limit_t_inf: limit })
}
