//! Spatially invariant synthesis on the real line.
//!
//! Transforms use the unitary convention
//!
//! ```text
//! K^(l) = (1/sqrt(2 pi)) * integral of K(x) e^{-j l x} dx
//! ```
//!
//! so for even kernels `K(x) = sqrt(2/pi) * integral over [0, inf) of K^(l) cos(l x) dl`.
//! A constant symbol `w` is the operator `w * identity`; kernels carry it
//! as [`SpatialKernel::dirac_weight`] instead of rasterizing a spike.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod reaction_diffusion;
mod synthesis;

pub use reaction_diffusion::{
    gaussian_filter, rd_convolution_check, rd_delay_free_kernel, rd_design_approximation, rd_expensive_kernel,
    rd_expensive_symbol, rd_tail_remainder, rd_tail_remainder_bound, rd_thresholds, DesignThresholds,
    ReactionDiffusionParams,
};
pub use synthesis::{
    small_delay_kernel, sweep_optimal_symbol, truncation_analysis, TruncationReport, TruncationRule,
};

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Fourier symbol `a(l)` of the open-loop operator, sampled on `[0, lambda_max]`.
/// Evenness is enforced by evaluating at `|l|`.
#[derive(Clone)]
pub struct SymbolFunction {
    a_of_lambda: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub lambda_max: f64,
    pub n_lambda: usize,
}

impl fmt::Debug for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolFunction")
            .field("lambda_max", &self.lambda_max)
            .field("n_lambda", &self.n_lambda)
            .finish_non_exhaustive()
    }
}

impl SymbolFunction {
    pub fn new<F>(a_of_lambda: F, lambda_max: f64, n_lambda: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lambda_max.is_finite() && lambda_max > 0.0) {
            return Err(Error::Domain(format!("lambda_max must be > 0, got {lambda_max}")));
        }
        if n_lambda < 3 {
            return Err(Error::Domain(format!("need at least 3 frequency samples, got {n_lambda}")));
        }
        Ok(Self { a_of_lambda: Arc::new(a_of_lambda), lambda_max, n_lambda })
    }

    /// `a(l) = -d l^2 - c`.
    pub fn reaction_diffusion(c: f64, d: f64, lambda_max: f64, n_lambda: usize) -> Result<Self> {
        Self::new(move |l| -d * l * l - c, lambda_max, n_lambda)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        (self.a_of_lambda)(lambda.abs())
    }

    pub fn step(&self) -> f64 {
        self.lambda_max / (self.n_lambda - 1) as f64
    }

    pub fn lambdas(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_lambda).map(|i| i as f64 * h).collect()
    }
}

/// One frequency that could not be designed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignFailure {
    pub index: usize,
    pub lambda: f64,
    pub reason: String,
}

/// Per-frequency design table on a uniform grid `l_i = i * dl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDesign {
    pub lambda: Vec<f64>,
    pub a: Vec<f64>,
    pub k: Vec<Option<f64>>,
    pub j: Vec<Option<f64>>,
    pub failures: Vec<DesignFailure>,
}

impl SpectralDesign {
    /// Fill the gain column from an arbitrary closed-form symbol `k(l, a(l))`.
    pub fn tabulate(sym: &SymbolFunction, gain: impl Fn(f64, f64) -> f64) -> Self {
        let lambda = sym.lambdas();
        let a: Vec<f64> = lambda.iter().map(|&l| sym.eval(l)).collect();
        let k = lambda.iter().zip(&a).map(|(&l, &av)| Some(gain(l, av))).collect();
        let j = vec![None; lambda.len()];
        Self { lambda, a, k, j, failures: Vec::new() }
    }

    /// Gain column, failing on the first missing entry.
    pub fn gains(&self) -> Result<Vec<f64>> {
        self.k
            .iter()
            .enumerate()
            .map(|(i, k)| k.ok_or_else(|| Error::Domain(format!("no gain at lambda = {}", self.lambda[i]))))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    NumericalOpt,
    ExpensiveClosedForm,
    DelayFree,
    SmallDelay,
    Truncated,
    Approximation,
}

/// Even kernel sampled at `x_i = (i - m) dx`, `i = 0..=2m`, `m dx = half_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialKernel {
    pub dx: f64,
    pub half_width: f64,
    pub values: Vec<f64>,
    /// Weight of the identity part of the operator, in symbol units.
    pub dirac_weight: f64,
    pub provenance: Provenance,
    /// Caveat attached by the producer, for example a violated hypothesis.
    pub caveat: Option<String>,
}

fn half_count(dx: f64, half_width: f64) -> Result<usize> {
    if !(dx.is_finite() && dx > 0.0 && half_width.is_finite() && half_width > 0.0) {
        return Err(Error::Domain(format!("grid needs dx > 0 and L > 0, got dx={dx}, L={half_width}")));
    }
    let m = (half_width / dx).round();
    if m < 1.0 || m > 5e7 {
        return Err(Error::Resolution(format!("L/dx = {} is not a usable sample count", half_width / dx)));
    }
    Ok(m as usize)
}

impl SpatialKernel {
    /// Sample an even function on the grid; only `x >= 0` is evaluated.
    pub fn sample(dx: f64, half_width: f64, provenance: Provenance, f: impl Fn(f64) -> f64) -> Result<Self> {
        let m = half_count(dx, half_width)?;
        let right: Vec<f64> = (0..=m).map(|i| f(i as f64 * dx)).collect();
        Ok(Self::mirrored(dx, m, right, 0.0, provenance))
    }

    fn mirrored(dx: f64, m: usize, right: Vec<f64>, dirac_weight: f64, provenance: Provenance) -> Self {
        let mut values = Vec::with_capacity(2 * m + 1);
        values.extend(right[1..].iter().rev());
        values.extend(right.iter());
        Self { dx, half_width: m as f64 * dx, values, dirac_weight, provenance, caveat: None }
    }

    pub fn half_samples(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    pub fn x_grid(&self) -> Vec<f64> {
        let m = self.half_samples() as f64;
        (0..self.values.len()).map(|i| (i as f64 - m) * self.dx).collect()
    }

    /// Samples at `x >= 0`, origin first.
    pub fn right_half(&self) -> &[f64] {
        &self.values[self.half_samples()..]
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Forward cosine transform at the given frequencies, trapezoid over `[0, L]`,
    /// plus the identity weight.
    pub fn symbol_at(&self, lambdas: &[f64]) -> Vec<f64> {
        let right = self.right_half();
        let last = right.len() - 1;
        lambdas
            .iter()
            .map(|&l| {
                let mut s = 0.5 * right[0] + 0.5 * right[last] * (l * last as f64 * self.dx).cos();
                for (i, v) in right.iter().enumerate().take(last).skip(1) {
                    s += v * (l * i as f64 * self.dx).cos();
                }
                SQRT_2_OVER_PI * self.dx * s + self.dirac_weight
            })
            .collect()
    }

    /// Zero every sample with `|x| > cutoff`.
    pub fn truncated(&self, cutoff: f64) -> Self {
        let m = self.half_samples();
        // index form, so samples sitting exactly on the cutoff survive rounding
        let keep = (cutoff / self.dx + 1e-9).floor().max(-1.0);
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| if (i.abs_diff(m) as f64) > keep { 0.0 } else { v })
            .collect();
        Self { values, provenance: Provenance::Truncated, ..self.clone() }
    }

    /// Least-squares slope of `ln K` over the last quarter of the positive half.
    pub fn tail_log_slope(&self) -> Result<f64> {
        let right = self.right_half();
        let m = right.len() - 1;
        let start = (0.75 * m as f64).floor() as usize;
        let pts: Vec<(f64, f64)> = (start..=m)
            .map(|i| (i as f64 * self.dx, right[i]))
            .collect();
        if pts.iter().any(|&(_, v)| !(v > 0.0)) {
            return Err(Error::Domain("log-slope needs a positive tail".into()));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Ok(sxy / sxx)
    }
}

/// Limit of the symbol as `l -> inf`, extrapolated from the last sample and
/// the sample at half the cutoff under the model `w + B / l^2`. Values below
/// `1e-6` of the symbol's peak count as zero.
fn dirac_limit(lambda: &[f64], k: &[f64]) -> f64 {
    let n = lambda.len();
    let (l1, k1) = (lambda[n - 1], k[n - 1]);
    let i2 = (n - 1) / 2;
    let (l2, k2) = (lambda[i2], k[i2]);
    let w = if l2 > 0.0 { (l1 * l1 * k1 - l2 * l2 * k2) / (l1 * l1 - l2 * l2) } else { k1 };
    let peak = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if w.abs() < 1e-6 * peak {
        0.0
    } else {
        w
    }
}

/// Inverse cosine transform of a sampled symbol: trapezoid over `[0, l_max]`.
/// The `l -> inf` limit becomes [`SpatialKernel::dirac_weight`] and is removed
/// from the samples before transforming.
pub fn kernel_from_symbol(design: &SpectralDesign, dx: f64, half_width: f64) -> Result<SpatialKernel> {
    kernel_from_values(&design.lambda, &design.gains()?, dx, half_width, Provenance::NumericalOpt)
}

pub(crate) fn kernel_from_values(
    lambda: &[f64],
    k: &[f64],
    dx: f64,
    half_width: f64,
    provenance: Provenance,
) -> Result<SpatialKernel> {
    let m = half_count(dx, half_width)?;
    let n = lambda.len();
    if n < 3 || k.len() != n {
        return Err(Error::Domain("symbol needs at least 3 samples and matching columns".into()));
    }
    let dl = lambda[n - 1] / (n - 1) as f64;
    if lambda[0] != 0.0 || lambda.iter().enumerate().any(|(i, &l)| (l - i as f64 * dl).abs() > 1e-9 * lambda[n - 1]) {
        return Err(Error::Domain("symbol must be sampled uniformly from l = 0".into()));
    }
    let required = std::f64::consts::PI / dx;
    if lambda[n - 1] < required * (1.0 - 1e-12) {
        return Err(Error::Alias { lambda_max: lambda[n - 1], required });
    }
    let w = dirac_limit(lambda, k);
    let centered: Vec<f64> = k.iter().map(|v| v - w).collect();
    let right: Vec<f64> = (0..=m)
        .map(|i| {
            let x = i as f64 * dx;
            let mut s = 0.5 * (centered[0] + centered[n - 1] * (lambda[n - 1] * x).cos());
            for j in 1..n - 1 {
                s += centered[j] * (lambda[j] * x).cos();
            }
            SQRT_2_OVER_PI * dl * s
        })
        .collect();
    Ok(SpatialKernel::mirrored(dx, m, right, w, provenance))
}
