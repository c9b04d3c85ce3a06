//! Independent numerical oracles for the stationary variance `f(k)`.
//!
//! * time domain: energy of the fundamental solution `x0` of
//!   `x'(t) = a x(t) - k x(t - T)`, `x0(0) = 1`, zero history;
//! * frequency domain: `(1/2pi) * integral over R of 1 / |jw - a + k e^{-jwT}|^2`;
//! * Monte Carlo: Euler-Maruyama paths of the stochastically forced loop.
//!
//! None of them touches the closed form in [`crate::scalar`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_gauss_kronrod, simpson_uniform};
use crate::scalar::{variance_integral, ScalarPlant, StabilityInterval};

const BLOWUP: f64 = 1e9;
const MAX_STEPS: usize = 8_000_000;

/// Sampled fundamental solution and its energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSolution {
    /// Integration step, an exact divisor of the delay.
    pub step: f64,
    pub x0: Vec<f64>,
    /// `integral of x0^2` over `[0, horizon]` plus the extrapolated tail.
    pub energy: f64,
    pub truncation_time: f64,
    /// Share of `energy` contributed by the extrapolated tail.
    pub tail_fraction: f64,
}

impl FundamentalSolution {
    pub fn t_grid(&self) -> Vec<f64> {
        (0..self.x0.len()).map(|i| i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub f_closed_form: f64,
    pub f_time_domain: f64,
    pub f_freq_domain: f64,
    pub rel_err_time: f64,
    pub rel_err_freq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub paths: usize,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Step count per delay interval: `ceil(T/h)` rounded up to even, so the
/// derivative kinks at multiples of `T` land on Simpson panel edges.
fn steps_per_delay(delay: f64, h: f64) -> usize {
    let n = (delay / h).ceil().max(1.0) as usize;
    n + n % 2
}

fn sample_count(horizon: f64, h: f64) -> Result<usize> {
    let m = (horizon / h).ceil() as usize;
    let m = m.max(20);
    let m = m + m % 2;
    if m > MAX_STEPS {
        return Err(Error::Resolution(format!("{m} steps exceed the limit of {MAX_STEPS}")));
    }
    Ok(m)
}

fn blowup(t: f64) -> Error {
    Error::Divergence(format!("|x0| exceeded {BLOWUP:e} at t = {t}"))
}

/// Integrate the fundamental solution by the method of steps with classical
/// RK4. Delayed values come from cubic Hermite interpolation on the stored
/// solution; `h` is shrunk to `T / N` with `N` even.
///
/// Fails with [`Error::Divergence`] when the solution blows up or its tail
/// energy stops decaying, which is how a non-stabilizing gain shows up.
pub fn fundamental_solution(plant: &ScalarPlant, k: f64, h: f64, horizon: f64) -> Result<FundamentalSolution> {
    let (step, x) = integrate(plant, k, h, horizon)?;
    let parts = EnergyParts::of(&x, step);
    if !(parts.ratio < 1.0) {
        return Err(parts.not_decaying());
    }
    Ok(parts.finish(x, step))
}

fn integrate(plant: &ScalarPlant, k: f64, h: f64, horizon: f64) -> Result<(f64, Vec<f64>)> {
    check_positive("step", h)?;
    check_positive("horizon", horizon)?;
    if !k.is_finite() {
        return Err(Error::Domain(format!("gain must be finite, got {k}")));
    }
    let (a, delay) = (plant.a, plant.delay);
    if delay == 0.0 {
        let m = sample_count(horizon, h)?;
        Ok((h, integrate_delay_free(a - k, h, m)?))
    } else {
        let n = steps_per_delay(delay, h);
        let step = delay / n as f64;
        let m = sample_count(horizon, step)?;
        Ok((step, integrate_delayed(a, k, step, n, m)?))
    }
}

/// Simpson energy of the samples plus a geometric tail fitted to the
/// energies of the last two tenths of the horizon.
struct EnergyParts {
    body: f64,
    tail: f64,
    ratio: f64,
    end: f64,
}

impl EnergyParts {
    fn of(x: &[f64], step: f64) -> Self {
        let m = x.len() - 1;
        let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
        let body = simpson_uniform(&sq, step);
        let i1 = even_index(0.8 * m as f64);
        let i2 = even_index(0.9 * m as f64);
        let e1 = simpson_uniform(&sq[i1..=i2], step);
        let e2 = simpson_uniform(&sq[i2..=m], step) * (i2 - i1) as f64 / (m - i2) as f64;
        let (ratio, tail) = if e2 == 0.0 {
            (0.0, 0.0)
        } else {
            let rho = e2 / e1;
            (rho, e2 * rho / (1.0 - rho))
        };
        Self { body, tail, ratio, end: m as f64 * step }
    }

    fn not_decaying(&self) -> Error {
        Error::Divergence(format!(
            "tail energy not decaying (window ratio {}) by t = {}",
            self.ratio, self.end
        ))
    }

    fn finish(self, x0: Vec<f64>, step: f64) -> FundamentalSolution {
        let energy = self.body + self.tail;
        FundamentalSolution {
            step,
            x0,
            energy,
            truncation_time: self.end,
            tail_fraction: if energy > 0.0 { self.tail / energy } else { 0.0 },
        }
    }
}

fn even_index(v: f64) -> usize {
    let i = v.round() as usize;
    i - i % 2
}

fn integrate_delay_free(rate: f64, h: f64, m: usize) -> Result<Vec<f64>> {
    let mut x = Vec::with_capacity(m + 1);
    x.push(1.0);
    let mut v: f64 = 1.0;
    for i in 0..m {
        let k1 = rate * v;
        let k2 = rate * (v + 0.5 * h * k1);
        let k3 = rate * (v + 0.5 * h * k2);
        let k4 = rate * (v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(v.abs() <= BLOWUP) {
            return Err(blowup((i + 1) as f64 * h));
        }
        x.push(v);
    }
    Ok(x)
}

/// Interval `j` spans `[j h, (j+1) h]`; for the delayed lookup it carries its
/// end values and one-sided end slopes. Intervals before `t = 0` are zero.
fn integrate_delayed(a: f64, k: f64, h: f64, n: usize, m: usize) -> Result<Vec<f64>> {
    let mut x = Vec::with_capacity(m + 1);
    let mut slope_start = Vec::with_capacity(m);
    let mut slope_end = Vec::with_capacity(m);
    x.push(1.0);
    for i in 0..m {
        // delayed values at theta = 0, 1/2, 1 of interval i - n
        let (d0, dmid, d1) = if i >= n {
            let j = i - n;
            let (y0, y1) = (x[j], x[j + 1]);
            (y0, 0.5 * (y0 + y1) + h * (slope_start[j] - slope_end[j]) / 8.0, y1)
        } else {
            (0.0, 0.0, 0.0)
        };
        let xi = x[i];
        let k1 = a * xi - k * d0;
        let k2 = a * (xi + 0.5 * h * k1) - k * dmid;
        let k3 = a * (xi + 0.5 * h * k2) - k * dmid;
        let k4 = a * (xi + h * k3) - k * d1;
        let next = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(next.abs() <= BLOWUP) {
            return Err(blowup((i + 1) as f64 * h));
        }
        x.push(next);
        slope_start.push(k1);
        slope_end.push(a * next - k * d1);
    }
    Ok(x)
}

/// Step and horizon heuristics for [`fundamental_energy`].
fn default_step(plant: &ScalarPlant, k: f64) -> f64 {
    0.02 / plant.a.abs().max(k.abs()).max(1.0)
}

/// Fundamental-solution energy with automatic step and horizon: the horizon
/// doubles until the extrapolated tail is below `1e-6` of the total.
pub fn fundamental_energy(plant: &ScalarPlant, k: f64) -> Result<FundamentalSolution> {
    let h = default_step(plant, k);
    let scale = plant.delay.max(1.0 / (k - plant.a).abs()).max(1.0);
    let mut horizon = 40.0 * scale;
    loop {
        let (step, x) = integrate(plant, k, h, horizon)?;
        let parts = EnergyParts::of(&x, step);
        let settled = parts.ratio < 1.0 && parts.tail <= 1e-6 * (parts.body + parts.tail);
        let last_try = 2.0 * horizon / h > MAX_STEPS as f64;
        if settled || (last_try && parts.ratio < 1.0) {
            return Ok(parts.finish(x, step));
        }
        if last_try {
            return Err(parts.not_decaying());
        }
        horizon *= 2.0;
    }
}

/// `|jw - a + k e^{-jwT}|^2`.
fn transfer_denominator(a: f64, k: f64, delay: f64, w: f64) -> f64 {
    let (s, c) = (delay * w).sin_cos();
    w * w - 2.0 * k * w * s + a * a + k * k - 2.0 * a * k * c
}

/// `(1/pi) * integral over [0, inf) of dw / |jw - a + k e^{-jwT}|^2`.
///
/// Adaptive G7K15 on `[0, W]` in panels no longer than half an oscillation
/// period, plus the asymptotic expansion of the integrand beyond `W`.
pub fn freq_domain_cost(plant: &ScalarPlant, k: f64) -> Result<f64> {
    let (a, delay) = (plant.a, plant.delay);
    if !plant.is_stabilizable() {
        return Err(Error::Domain(format!("a*T = {} >= 1", a * delay)));
    }
    let interval = StabilityInterval::of(plant)?;
    if !interval.contains(k) {
        return Err(Error::Domain(format!("gain {k} is not stabilizing")));
    }
    let mut w_max = 1e4f64.max(1e3 * (a.abs() + k.abs()));
    if delay > 0.0 {
        w_max = w_max.max(200.0 / delay);
    }
    let panel = if delay > 0.0 {
        (std::f64::consts::PI / delay).min((w_max / 2048.0).max(1.0))
    } else {
        (w_max / 2048.0).max(1.0)
    };
    let pieces = (w_max / panel).ceil() as usize;
    let breaks: Vec<f64> = (0..=pieces).map(|i| (i as f64 * panel).min(w_max)).collect();
    let (body, _) = adaptive_gauss_kronrod(
        |w| 1.0 / transfer_denominator(a, k, delay, w),
        &breaks,
        1e-10,
        breaks.len() * 64,
    );
    let tail = if delay == 0.0 {
        let g = k - a;
        (std::f64::consts::FRAC_PI_2 - (w_max / g).atan()) / g
    } else {
        let w3 = w_max * w_max * w_max;
        1.0 / w_max + (k * k - a * a) / (3.0 * w3) + 2.0 * k * (delay * w_max).cos() / (delay * w3)
    };
    Ok((body + tail) / std::f64::consts::PI)
}

/// Closed form against both deterministic oracles.
pub fn oracle_report(plant: &ScalarPlant, k: f64) -> Result<OracleReport> {
    let closed = variance_integral(plant, k)?.f_value;
    let time = fundamental_energy(plant, k)?.energy;
    let freq = freq_domain_cost(plant, k)?;
    Ok(OracleReport {
        f_closed_form: closed,
        f_time_domain: time,
        f_freq_domain: freq,
        rel_err_time: ((time - closed) / closed).abs(),
        rel_err_freq: ((freq - closed) / closed).abs(),
    })
}

/// SplitMix64 finalizer, used to derive independent per-path seeds.
fn mix_seed(seed: u64, path: u64) -> u64 {
    let mut z = seed ^ path.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Time average of `x^2` over the second half of one Euler-Maruyama path
/// started from the zero history.
fn simulate_path(a: f64, k: f64, h: f64, lag: usize, steps: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let sqrt_h = h.sqrt();
    // ring buffer holds x at the last `lag` nodes; slot i % lag is x_{i - lag} before overwrite
    let mut ring = vec![0.0; lag.max(1)];
    let mut x = 0.0f64;
    let start = steps / 2;
    let mut acc = 0.0;
    for i in 0..steps {
        let delayed = if lag == 0 {
            x
        } else {
            let slot = i % lag;
            let old = ring[slot];
            ring[slot] = x;
            old
        };
        let xi: f64 = StandardNormal.sample(rng);
        x += h * (a * x - k * delayed) + sqrt_h * xi;
        if !(x.abs() <= BLOWUP) {
            return Err(blowup((i + 1) as f64 * h));
        }
        if i + 1 > start {
            acc += x * x;
        }
    }
    Ok(acc / (steps - start) as f64)
}

/// Seeded Monte Carlo estimate of the stationary variance. Each path owns a
/// ChaCha8 stream seeded from `(seed, path index)`, so results are
/// bit-identical across runs.
pub fn monte_carlo_variance(
    plant: &ScalarPlant,
    k: f64,
    h: f64,
    horizon: f64,
    paths: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_positive("step", h)?;
    check_positive("horizon", horizon)?;
    if paths < 100 {
        return Err(Error::Domain(format!("at least 100 paths required, got {paths}")));
    }
    let (a, delay) = (plant.a, plant.delay);
    let (step, lag) = if delay > 0.0 {
        let n = (delay / h).ceil() as usize;
        (delay / n as f64, n)
    } else {
        (h, 0)
    };
    let steps = ((horizon / step).ceil() as usize).max(2);
    // paths are split into contiguous blocks; each path's stream depends only
    // on its index, and the reduction below runs in path order
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(paths);
    let block = paths.div_ceil(workers);
    let blocks: Vec<Result<Vec<f64>>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..paths)
            .step_by(block)
            .map(|first| {
                s.spawn(move || {
                    (first..(first + block).min(paths))
                        .map(|p| {
                            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, p as u64));
                            simulate_path(a, k, step, lag, steps, &mut rng)
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("path worker panicked")).collect()
    });
    let mut samples = Vec::with_capacity(paths);
    for b in blocks {
        samples.extend(b?);
    }
    let n = paths as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    Ok(MonteCarloEstimate { mean, stderr: (var / n).sqrt(), paths })
}
