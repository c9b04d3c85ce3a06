//! Frequency sweeps, small-delay kernels, and the cost of truncated kernels.

use serde::{Deserialize, Serialize};

use super::{kernel_from_values, DesignFailure, Provenance, ReactionDiffusionParams, SpatialKernel, SpectralDesign, SymbolFunction};
use crate::asymptotic::SMALL_DELAY_LIMIT;
use crate::error::{Error, Result};
use crate::numerics::trapezoid_uniform;
use crate::scalar::{optimal_gain, variance_integral, ScalarPlant, StabilityInterval};

/// Optimal gain and cost at every sampled frequency. Frequencies that cannot
/// be designed are kept as missing entries with a reason.
pub fn sweep_optimal_symbol(sym: &SymbolFunction, delay: f64, r: f64) -> SpectralDesign {
    let lambda = sym.lambdas();
    let a: Vec<f64> = lambda.iter().map(|&l| sym.eval(l)).collect();
    let mut k = Vec::with_capacity(lambda.len());
    let mut j = Vec::with_capacity(lambda.len());
    let mut failures = Vec::new();
    for (i, (&l, &av)) in lambda.iter().zip(&a).enumerate() {
        match ScalarPlant::new(av, delay, r).and_then(|p| optimal_gain(&p)) {
            Ok(g) => {
                k.push(Some(g.k));
                j.push(Some(g.j));
            }
            Err(e) => {
                k.push(None);
                j.push(None);
                failures.push(DesignFailure { index: i, lambda: l, reason: e.to_string() });
            }
        }
    }
    SpectralDesign { lambda, a, k, j, failures }
}

/// First-order small-delay kernel `(I - A T) K_0 - (T/r) delta`, built per
/// frequency from a delay-free design and inverted on the given grid.
///
/// The expansion assumes `|a(l)| T` small at every frequency. When the window
/// reaches past that, the kernel carries a caveat.
pub fn small_delay_kernel(
    design0: &SpectralDesign,
    sym: &SymbolFunction,
    delay: f64,
    r: f64,
    dx: f64,
    half_width: f64,
) -> Result<SpatialKernel> {
    if !(delay >= 0.0 && r > 0.0) {
        return Err(Error::Domain(format!("need T >= 0 and r > 0, got T={delay}, r={r}")));
    }
    let k0 = design0.gains()?;
    let symbol: Vec<f64> = design0
        .lambda
        .iter()
        .zip(&k0)
        .map(|(&l, &k)| (1.0 - sym.eval(l) * delay) * k - delay / r)
        .collect();
    let mut kernel = kernel_from_values(&design0.lambda, &symbol, dx, half_width, Provenance::SmallDelay)?;
    if let Some(l) = design0.lambda.iter().find(|&&l| sym.eval(l).abs() * delay > SMALL_DELAY_LIMIT) {
        kernel.caveat = Some(format!(
            "|a(l)| T exceeds {SMALL_DELAY_LIMIT} from l = {l}; the small-delay expansion is outside its regime there"
        ));
    }
    Ok(kernel)
}

/// Truncation rule of thumb: keep `kappa` filter widths, or `gamma` delay-free decay lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRule {
    pub kappa: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub cutoff: f64,
    /// Cost of the truncated kernel; `None` when it destabilizes some frequency.
    pub j_truncated: Option<f64>,
    pub j_full: Option<f64>,
    pub stable: bool,
    pub unstable_frequencies: usize,
    pub delay_dominates: bool,
    pub x_th_delay_free: f64,
    pub x_th_delay: f64,
}

/// `2 * integral over [0, l_max] of J_l(k(l)) dl` for the kernel's symbol, or
/// the number of frequencies where that symbol is not stabilizing.
fn kernel_cost(
    kernel: &SpatialKernel,
    sym: &SymbolFunction,
    delay: f64,
    r: f64,
) -> Result<std::result::Result<f64, usize>> {
    let lambda = sym.lambdas();
    let symbol = kernel.symbol_at(&lambda);
    let mut costs = Vec::with_capacity(lambda.len());
    let mut unstable = 0;
    for (&l, &k) in lambda.iter().zip(&symbol) {
        let plant = ScalarPlant::new(sym.eval(l), delay, r)?;
        if !plant.is_stabilizable() || !StabilityInterval::of(&plant)?.contains(k) {
            unstable += 1;
            continue;
        }
        costs.push(variance_integral(&plant, k)?.j_value);
    }
    if unstable > 0 {
        return Ok(Err(unstable));
    }
    Ok(Ok(2.0 * trapezoid_uniform(&costs, sym.step())))
}

/// Cost of the kernel truncated at `|x| <= cutoff` against the full kernel,
/// evaluated frequency by frequency over the symbol's window.
pub fn truncation_analysis(
    p: &ReactionDiffusionParams,
    kernel: &SpatialKernel,
    cutoff: f64,
    sym: &SymbolFunction,
    rule: TruncationRule,
) -> Result<TruncationReport> {
    if !(cutoff > 0.0) {
        return Err(Error::Domain(format!("cutoff must be > 0, got {cutoff}")));
    }
    if !(rule.kappa > 0.0 && rule.gamma > 0.0) {
        return Err(Error::Domain("kappa and gamma must be > 0".into()));
    }
    let nyquist = std::f64::consts::PI / kernel.dx;
    if sym.lambda_max > nyquist * (1.0 + 1e-12) {
        return Err(Error::Alias { lambda_max: sym.lambda_max, required: nyquist });
    }
    let full = kernel_cost(kernel, sym, p.delay, p.r)?;
    let truncated = if cutoff >= kernel.half_width {
        full.clone()
    } else {
        kernel_cost(&kernel.truncated(cutoff), sym, p.delay, p.r)?
    };
    Ok(TruncationReport {
        cutoff,
        j_truncated: truncated.ok(),
        j_full: full.ok(),
        stable: truncated.is_ok(),
        unstable_frequencies: truncated.err().unwrap_or(0),
        delay_dominates: (2.0 * p.c * p.delay).sqrt() > rule.gamma / rule.kappa,
        x_th_delay_free: rule.gamma * (p.d / p.c).sqrt(),
        x_th_delay: rule.kappa * (2.0 * p.d * p.delay).sqrt(),
    })
}
