//! Exact H2 cost and optimal gain for one spatial-frequency subsystem
//!
//! ```text
//! dx = (a x(t) - k x(t - T)) dt + dw
//! ```
//!
//! The stationary variance `f(k)` has a closed form with a hyperbolic branch
//! (`|k| < -a`), a boundary value (`k = |a|`), and a trigonometric branch
//! (`|a| < k < k_u`). Gains are stabilizing exactly on `(a, k_u)`, where `k_u`
//! solves `T sqrt(k^2 - a^2) = arccos(a / k)`.
//!
//! Both branches are evaluated through the single expression
//!
//! ```text
//! f = -(1 + k S(u)) / (2 (a - k C(u))),   u = k^2 - a^2,
//! ```
//!
//! with `S = sin(lT)/l`, `C = cos(lT)` for `u > 0` and their hyperbolic
//! counterparts for `u < 0`. `S` and `C` are entire in `u`, so near `k = |a|`
//! they are summed as power series and no cancellation occurs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{brent_root, interior_argmin_with_slope};

/// Grid size seeding every interval minimization.
pub const SEED_GRID: usize = 128;

/// One spatial-frequency subsystem: open-loop coefficient, feedback delay, control weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarPlant {
    pub a: f64,
    pub delay: f64,
    pub weight: f64,
}

impl ScalarPlant {
    pub fn new(a: f64, delay: f64, weight: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::Domain(format!("open-loop coefficient must be finite, got {a}")));
        }
        if !(delay.is_finite() && delay >= 0.0) {
            return Err(Error::Domain(format!("delay must be finite and >= 0, got {delay}")));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::Domain(format!("control weight must be > 0, got {weight}")));
        }
        Ok(Self { a, delay, weight })
    }

    /// `a T < 1`: some proportional gain stabilizes the delayed loop.
    pub fn is_stabilizable(&self) -> bool {
        self.a * self.delay < 1.0
    }

    fn require_stabilizable(&self) -> Result<()> {
        if self.is_stabilizable() {
            Ok(())
        } else {
            Err(Error::NoSolution(format!(
                "a*T = {} >= 1: no stabilizing gain exists",
                self.a * self.delay
            )))
        }
    }
}

/// Upper end of the stabilizing interval. The delay-free case has none.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum UpperBound {
    Finite(f64),
    Unbounded,
}

impl UpperBound {
    pub fn finite(self) -> Option<f64> {
        match self {
            UpperBound::Finite(v) => Some(v),
            UpperBound::Unbounded => None,
        }
    }

    /// `k < bound`.
    pub fn exceeds(self, k: f64) -> bool {
        match self {
            UpperBound::Finite(v) => k < v,
            UpperBound::Unbounded => k.is_finite(),
        }
    }
}

/// The open interval `(lower, upper)` of stabilizing gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityInterval {
    pub lower: f64,
    pub upper: UpperBound,
}

impl StabilityInterval {
    pub fn of(plant: &ScalarPlant) -> Result<Self> {
        Ok(Self { lower: plant.a, upper: stabilizing_upper_bound(plant)? })
    }

    pub fn contains(&self, k: f64) -> bool {
        k > self.lower && self.upper.exceeds(k)
    }
}

/// Which case of the piecewise closed form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Below,
    Equal,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Stationary variance (energy of the fundamental solution).
    pub f_value: f64,
    /// `(1 + r k^2) f`.
    pub j_value: f64,
    pub branch: Branch,
}

fn branch_of(a: f64, k: f64) -> Branch {
    if a < 0.0 && (k - a.abs()).abs() < 1e-10 * a.abs().max(1.0) {
        Branch::Equal
    } else if k < a.abs() {
        Branch::Below
    } else {
        Branch::Above
    }
}

/// `S(u) = sin(sqrt(u) T)/sqrt(u)` and `C(u) = cos(sqrt(u) T)` as power series in `z = u T^2`.
fn series_sc(u: f64, delay: f64) -> (f64, f64) {
    let z = u * delay * delay;
    let mut s_term = 1.0;
    let mut c_term = 1.0;
    let mut s = 1.0;
    let mut c = 1.0;
    for n in 1..30 {
        let n = n as f64;
        c_term *= -z / ((2.0 * n - 1.0) * (2.0 * n));
        s_term *= -z / ((2.0 * n) * (2.0 * n + 1.0));
        c += c_term;
        s += s_term;
        if c_term.abs() < 1e-18 && s_term.abs() < 1e-18 {
            break;
        }
    }
    (delay * s, c)
}

/// `dS/du` by power series; `(T C - S) / (2u)` cancels near `u = 0`.
fn series_ds(u: f64, delay: f64) -> f64 {
    let z = u * delay * delay;
    // sum over n >= 1 of n (-z)^(n-1) / (2n+1)!, times -T^3
    let mut term = 1.0 / 6.0;
    let mut sum = term;
    for n in 2..30 {
        let n = n as f64;
        term *= -z * n / ((n - 1.0) * (2.0 * n) * (2.0 * n + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    -delay * delay * delay * sum
}

/// Variance and its slope `df/dk`, without domain checks.
///
/// The large-argument hyperbolic branch is rewritten in `sech(lT)` and
/// `tanh(lT)/l`, and `1 + a tanh(lT)/l` is assembled from `1 - tanh` so the
/// slope keeps full relative precision when the optimal gain is of order
/// `e^{Ta}`.
pub(crate) fn variance_and_slope_unchecked(a: f64, delay: f64, k: f64) -> (f64, f64) {
    if delay == 0.0 {
        let g = k - a;
        return (0.5 / g, -0.5 / (g * g));
    }
    let u = (k - a) * (k + a);
    let z = u * delay * delay;
    if u < 0.0 && z.abs() >= 1.0 {
        let l = (-u).sqrt();
        let lt = l * delay;
        let iota = 1.0 / lt.cosh();
        let e2 = (-2.0 * lt).exp();
        let sigma = lt.tanh() / l;
        // 1 + a sigma, with a = -|a| on this branch
        let big_e = (-k * k / (l + a.abs()) + a.abs() * 2.0 * e2 / (1.0 + e2)) / l;
        let n = iota + k * sigma;
        let d = a * iota - k;
        let q = (delay - sigma) / u + delay * sigma * sigma;
        let num = iota * big_e + k * k * (q * d - delay * sigma * iota * big_e);
        return (-n / (2.0 * d), -num / (2.0 * d * d));
    }
    let (s, c, s_u) = if z.abs() < 1.0 {
        let (s, c) = series_sc(u, delay);
        (s, c, series_ds(u, delay))
    } else {
        let l = u.abs().sqrt();
        let lt = l * delay;
        let (s, c) = if u > 0.0 { (lt.sin() / l, lt.cos()) } else { (lt.sinh() / l, lt.cosh()) };
        (s, c, (delay * c - s) / (2.0 * u))
    };
    let c_u = -0.5 * delay * s;
    let n = 1.0 + k * s;
    let d = a - k * c;
    let n_k = s + 2.0 * k * k * s_u;
    let d_k = -c - 2.0 * k * k * c_u;
    (-n / (2.0 * d), -(n_k * d - n * d_k) / (2.0 * d * d))
}

/// Closed-form variance without domain checks. The caller guarantees
/// `a T < 1` and that `k` lies inside the stability interval.
pub(crate) fn variance_unchecked(a: f64, delay: f64, k: f64) -> f64 {
    if delay == 0.0 {
        return 0.5 / (k - a);
    }
    if k == 0.0 {
        return -0.5 / a;
    }
    if branch_of(a, k) == Branch::Equal {
        return delay / 4.0 + 0.25 / a.abs();
    }
    let u = (k - a) * (k + a);
    let z = u * delay * delay;
    if z.abs() < 1.0 {
        let (s, c) = series_sc(u, delay);
        return -(1.0 + k * s) / (2.0 * (a - k * c));
    }
    let l = u.abs().sqrt();
    let lt = l * delay;
    if u > 0.0 {
        (-k * lt.sin() - l) / (2.0 * l * (a - k * lt.cos()))
    } else {
        // divide through by cosh(lT) so large arguments neither overflow nor cancel
        let sech = 1.0 / lt.cosh();
        let th = lt.tanh();
        -(sech + k * th / l) / (2.0 * (a * sech - k))
    }
}

/// Stationary variance `f(k)` and H2 cost `J(k) = (1 + r k^2) f(k)`.
pub fn variance_integral(plant: &ScalarPlant, k: f64) -> Result<CostBreakdown> {
    let ScalarPlant { a, delay, weight } = *plant;
    if !k.is_finite() {
        return Err(Error::Domain(format!("gain must be finite, got {k}")));
    }
    if a == 0.0 && k == 0.0 {
        return Err(Error::Boundary("k = |a| with a = 0 has no closed form".into()));
    }
    if !plant.is_stabilizable() {
        return Err(Error::Domain(format!("a*T = {} >= 1", a * delay)));
    }
    let interval = StabilityInterval::of(plant)?;
    if !interval.contains(k) {
        return Err(Error::Domain(format!(
            "gain {k} outside stabilizing interval ({}, {:?})",
            interval.lower, interval.upper
        )));
    }
    let f_value = variance_unchecked(a, delay, k);
    Ok(CostBreakdown {
        f_value,
        j_value: (1.0 + weight * k * k) * f_value,
        branch: branch_of(a, k),
    })
}

/// Upper end `k_u` of the stabilizing interval; unbounded when `T = 0`.
///
/// Solved in `s = sqrt(k^2 - a^2)`: `T s = atan2(s, a)` has exactly one root in
/// `(0, pi/T]` when `a T < 1`, and `k_u = hypot(s, a)`.
pub fn stabilizing_upper_bound(plant: &ScalarPlant) -> Result<UpperBound> {
    plant.require_stabilizable()?;
    let (a, delay) = (plant.a, plant.delay);
    if delay == 0.0 {
        return Ok(UpperBound::Unbounded);
    }
    let h = |s: f64| delay * s - s.atan2(a);
    let mut hi = std::f64::consts::PI / delay;
    while h(hi) <= 0.0 {
        hi *= 2.0;
    }
    let s = brent_root(h, f64::MIN_POSITIVE, hi, 0.0, 400)?;
    Ok(UpperBound::Finite(s.hypot(a)))
}

/// `dk_u/da = k_u (aT - 1) / (k_u^2 T - a)` from the implicit function theorem.
pub fn upper_bound_derivative(plant: &ScalarPlant) -> Result<f64> {
    if plant.delay <= 0.0 {
        return Err(Error::Domain("upper-bound derivative needs T > 0".into()));
    }
    if !plant.is_stabilizable() {
        return Err(Error::Domain(format!("a*T = {} >= 1", plant.a * plant.delay)));
    }
    let ku = stabilizing_upper_bound(plant)?
        .finite()
        .expect("T > 0 gives a finite bound");
    let (a, t) = (plant.a, plant.delay);
    Ok(ku * (a * t - 1.0) / (ku * ku * t - a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalGain {
    pub k: f64,
    pub j: f64,
}

/// Delay-free optimum `a + sqrt(a^2 + 1/r)`.
pub(crate) fn delay_free_optimum(a: f64, weight: f64) -> f64 {
    let root = (a * a + 1.0 / weight).sqrt();
    // the sum cancels for a << 0; rationalize there
    if a < 0.0 {
        (1.0 / weight) / (root - a)
    } else {
        a + root
    }
}

/// Global minimizer of `J(k) = (1 + r k^2) f(k)` over the stabilizing interval.
pub fn optimal_gain(plant: &ScalarPlant) -> Result<OptimalGain> {
    plant.require_stabilizable()?;
    let ScalarPlant { a, delay, weight } = *plant;
    if delay == 0.0 {
        let k = delay_free_optimum(a, weight);
        return Ok(OptimalGain { k, j: (1.0 + weight * k * k) * 0.5 / (k - a) });
    }
    let ku = stabilizing_upper_bound(plant)?.finite().expect("finite for T > 0");
    let eps = 1.0 / weight;
    let objective = |k: f64| (eps + k * k) * variance_unchecked(a, delay, k);
    let slope = |k: f64| {
        let (f, df) = variance_and_slope_unchecked(a, delay, k);
        2.0 * k * f + (eps + k * k) * df
    };
    let m = interior_argmin_with_slope(objective, slope, a, ku, SEED_GRID);
    let k = m.x;
    Ok(OptimalGain { k, j: (1.0 + weight * k * k) * variance_unchecked(a, delay, k) })
}

/// A boundary curve value: finite, unbounded, or missing (unstabilizable).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Boundary {
    Value(f64),
    Unbounded,
    Missing,
}

impl Boundary {
    pub fn value(self) -> Option<f64> {
        match self {
            Boundary::Value(v) => Some(v),
            _ => None,
        }
    }
}

/// Stability- and optimality-region boundaries for one open-loop coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub a: f64,
    pub k_upper: Boundary,
    /// `r -> 0` boundary: minimizer of `f` alone.
    pub k_cheap: Boundary,
    /// `r -> infinity` boundary: minimizer of `k^2 f`.
    pub k_expensive: Boundary,
}

/// Minimizer of the variance alone (cheap-control limit).
pub fn cheap_gain(a: f64, delay: f64) -> Result<Boundary> {
    let plant = ScalarPlant::new(a, delay, 1.0)?;
    plant.require_stabilizable()?;
    if delay == 0.0 {
        return Ok(Boundary::Unbounded);
    }
    let ku = stabilizing_upper_bound(&plant)?.finite().expect("finite for T > 0");
    let m = interior_argmin_with_slope(
        |k| variance_unchecked(a, delay, k),
        |k| variance_and_slope_unchecked(a, delay, k).1,
        a,
        ku,
        SEED_GRID,
    );
    Ok(Boundary::Value(m.x))
}

/// Minimizer of `k^2 f` (expensive-control limit). For `a <= 0` the infimum
/// sits at `k = 0`.
pub fn expensive_limit_gain(a: f64, delay: f64) -> Result<Boundary> {
    let plant = ScalarPlant::new(a, delay, 1.0)?;
    plant.require_stabilizable()?;
    if a <= 0.0 {
        return Ok(Boundary::Value(0.0));
    }
    if delay == 0.0 {
        return Ok(Boundary::Value(2.0 * a));
    }
    let ku = stabilizing_upper_bound(&plant)?.finite().expect("finite for T > 0");
    let m = interior_argmin_with_slope(
        |k| k * k * variance_unchecked(a, delay, k),
        |k| {
            let (f, df) = variance_and_slope_unchecked(a, delay, k);
            2.0 * k * f + k * k * df
        },
        a,
        ku,
        SEED_GRID,
    );
    Ok(Boundary::Value(m.x))
}

/// Region boundaries over a grid of open-loop coefficients. Entries with
/// `a T >= 1` come back as [`Boundary::Missing`].
pub fn region_boundaries(a_grid: &[f64], delay: f64) -> Result<Vec<RegionRow>> {
    if !(delay.is_finite() && delay >= 0.0) {
        return Err(Error::Domain(format!("delay must be >= 0, got {delay}")));
    }
    a_grid
        .iter()
        .map(|&a| {
            if a * delay >= 1.0 {
                return Ok(RegionRow {
                    a,
                    k_upper: Boundary::Missing,
                    k_cheap: Boundary::Missing,
                    k_expensive: Boundary::Missing,
                });
            }
            let plant = ScalarPlant::new(a, delay, 1.0)?;
            let k_upper = match stabilizing_upper_bound(&plant)? {
                UpperBound::Finite(v) => Boundary::Value(v),
                UpperBound::Unbounded => Boundary::Unbounded,
            };
            Ok(RegionRow {
                a,
                k_upper,
                k_cheap: cheap_gain(a, delay)?,
                k_expensive: expensive_limit_gain(a, delay)?,
            })
        })
        .collect()
}
