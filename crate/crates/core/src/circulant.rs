//! Delay-aware gains for agents on a ring coupled by a symmetric circulant matrix.
//!
//! The DFT diagonalizes `circ(a_row)`; mode `l` has the real eigenvalue
//! `sum_j a_j cos(2 pi l j / n)`. Each mode is designed as a scalar plant
//! and the gain row is recovered by the inverse DFT.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::asymptotic::{delay_free_gain, small_delay_gain};
use crate::error::{Error, Result};
use crate::scalar::{optimal_gain, variance_integral, ScalarPlant, StabilityInterval};

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantSystem {
    pub n: usize,
    pub a_row: Vec<f64>,
}

impl CirculantSystem {
    pub fn new(a_row: Vec<f64>) -> Result<Self> {
        let n = a_row.len();
        if n < 2 {
            return Err(Error::Domain(format!("ring needs at least 2 agents, got {n}")));
        }
        if a_row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("coupling row must be finite".into()));
        }
        for i in 1..n {
            let (left, right) = (a_row[i], a_row[n - i]);
            if (left - right).abs() > SYMMETRY_TOL * left.abs().max(right.abs()).max(1.0) {
                return Err(Error::Symmetry { index: i, left, right });
            }
        }
        Ok(Self { n, a_row })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    NumericalOpt,
    SmallDelay,
    DelayFree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantGains {
    pub k_row: Vec<f64>,
    pub k_modes: Vec<f64>,
    pub self_gain: f64,
    pub provenance: Method,
}

/// `cos(2 pi m / n)` with the argument reduced to an exact index first.
fn unit_cos(m: usize, n: usize) -> f64 {
    (2.0 * PI * (m % n) as f64 / n as f64).cos()
}

fn unit_sin(m: usize, n: usize) -> f64 {
    (2.0 * PI * (m % n) as f64 / n as f64).sin()
}

/// Forward real DFT of a symmetric row; half the spectrum is computed and mirrored.
fn cosine_modes(row: &[f64]) -> Vec<f64> {
    let n = row.len();
    let half: Vec<f64> = (0..=n / 2)
        .map(|l| row.iter().enumerate().map(|(j, v)| v * unit_cos(l * j, n)).sum())
        .collect();
    (0..n).map(|l| half[l.min(n - l)]).collect()
}

/// Inverse real DFT: `row_j = (1/n) sum_l k_l cos(2 pi l j / n)`.
pub fn row_from_modes(modes: &[f64]) -> Vec<f64> {
    let n = modes.len();
    let half: Vec<f64> = (0..=n / 2)
        .map(|j| modes.iter().enumerate().map(|(l, v)| v * unit_cos(l * j, n)).sum::<f64>() / n as f64)
        .collect();
    (0..n).map(|j| half[j.min(n - j)]).collect()
}

/// Eigenvalues of `circ(a_row)` in DFT order. The imaginary part of every
/// mode is checked to vanish.
pub fn modes_of(sys: &CirculantSystem) -> Result<Vec<f64>> {
    let n = sys.n;
    for l in 0..=n / 2 {
        let imag: f64 = sys.a_row.iter().enumerate().map(|(j, v)| v * unit_sin(l * j, n)).sum();
        let scale = sys.a_row.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        if imag.abs() > 1e-10 * scale {
            return Err(Error::Symmetry { index: l, left: imag, right: 0.0 });
        }
    }
    Ok(cosine_modes(&sys.a_row))
}

/// Design one gain per mode and rebuild the gain row.
pub fn design_gains(sys: &CirculantSystem, delay: f64, r: f64, method: Method) -> Result<CirculantGains> {
    if !(delay.is_finite() && delay >= 0.0 && r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("need T >= 0 and r > 0, got T={delay}, r={r}")));
    }
    let modes = modes_of(sys)?;
    let n = sys.n;
    let mut half = Vec::with_capacity(n / 2 + 1);
    for (l, &a) in modes.iter().enumerate().take(n / 2 + 1) {
        if a * delay >= 1.0 {
            return Err(Error::Unstabilizable { mode: l, product: a * delay });
        }
        let k = match method {
            Method::NumericalOpt => optimal_gain(&ScalarPlant::new(a, delay, r)?)?.k,
            Method::SmallDelay => small_delay_gain(a, delay, r)?.k,
            Method::DelayFree => delay_free_gain(a, r),
        };
        half.push(k);
    }
    let k_modes: Vec<f64> = (0..n).map(|l| half[l.min(n - l)]).collect();
    let k_row = row_from_modes(&k_modes);
    Ok(CirculantGains { self_gain: k_row[0], k_row, k_modes, provenance: method })
}

/// `circ(row) x`, which for a symmetric row is circular convolution with `row`.
pub fn circulant_apply(row: &[f64], x: &[f64]) -> Vec<f64> {
    let n = row.len();
    (0..n)
        .map(|i| (0..n).map(|j| row[(j + n - i) % n] * x[j]).sum())
        .collect()
}

/// Small-delay gain row assembled in space: `(I - A T) k0_row - (T/r) e0`.
pub fn small_delay_row(sys: &CirculantSystem, delay: f64, r: f64) -> Result<Vec<f64>> {
    let k0 = design_gains(sys, 0.0, r, Method::DelayFree)?.k_row;
    let ak0 = circulant_apply(&sys.a_row, &k0);
    let mut row: Vec<f64> = k0.iter().zip(&ak0).map(|(k, ak)| k - delay * ak).collect();
    row[0] -= delay / r;
    Ok(row)
}

/// Exact stability certificate: every mode gain inside `(a_l, k_u(a_l, T))`.
pub fn verify_closed_loop(sys: &CirculantSystem, gains: &CirculantGains, delay: f64) -> bool {
    let Ok(modes) = modes_of(sys) else { return false };
    if gains.k_modes.len() != modes.len() {
        return false;
    }
    modes.iter().zip(&gains.k_modes).all(|(&a, &k)| {
        ScalarPlant::new(a, delay, 1.0)
            .and_then(|p| StabilityInterval::of(&p))
            .map(|iv| iv.contains(k))
            .unwrap_or(false)
    })
}

/// Sum over all modes of `J_l(k_l)`.
pub fn h2_cost(sys: &CirculantSystem, gains: &CirculantGains, delay: f64, r: f64) -> Result<f64> {
    if !verify_closed_loop(sys, gains, delay) {
        return Err(Error::Instability("some mode gain lies outside its stabilizing interval".into()));
    }
    let modes = modes_of(sys)?;
    let mut total = 0.0;
    for (&a, &k) in modes.iter().zip(&gains.k_modes) {
        total += variance_integral(&ScalarPlant::new(a, delay, r)?, k)?.j_value;
    }
    Ok(total)
}

/// JSON request `{n, a_row, T, r, method}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantRequest {
    pub n: usize,
    pub a_row: Vec<f64>,
    #[serde(rename = "T")]
    pub delay: f64,
    pub r: f64,
    pub method: Method,
}

/// JSON report `{k_row, k_modes, self_gain, cost, stable}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantReport {
    pub k_row: Vec<f64>,
    pub k_modes: Vec<f64>,
    pub self_gain: f64,
    pub cost: Option<f64>,
    pub stable: bool,
}

pub fn run_request(req: &CirculantRequest) -> Result<CirculantReport> {
    if req.n != req.a_row.len() {
        return Err(Error::Config(format!("n = {} but a_row has {} entries", req.n, req.a_row.len())));
    }
    let sys = CirculantSystem::new(req.a_row.clone())?;
    let gains = design_gains(&sys, req.delay, req.r, req.method)?;
    let stable = verify_closed_loop(&sys, &gains, req.delay);
    let cost = if stable { Some(h2_cost(&sys, &gains, req.delay, req.r)?) } else { None };
    Ok(CirculantReport {
        k_row: gains.k_row,
        k_modes: gains.k_modes,
        self_gain: gains.self_gain,
        cost,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> CirculantSystem {
        CirculantSystem::new(vec![1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0]).unwrap()
    }

    #[test]
    fn mode_examples() {
        let mut e = vec![0.0; 6];
        e[0] = 1.0;
        assert!(modes_of(&CirculantSystem::new(e).unwrap()).unwrap().iter().all(|&m| m == 1.0));
        assert!(modes_of(&CirculantSystem::new(vec![0.0; 5]).unwrap()).unwrap().iter().all(|&m| m == 0.0));
        let modes = modes_of(&ring()).unwrap();
        for (l, m) in modes.iter().enumerate() {
            let th = 2.0 * PI * l as f64 / 10.0;
            assert!((m - (1.0 + 2.0 * th.cos() + (2.0 * th).cos())).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_row_rejected() {
        assert!(matches!(CirculantSystem::new(vec![1.0, 2.0, 0.0, 0.5]), Err(Error::Symmetry { index: 1, .. })));
    }

    #[test]
    fn dft_round_trip() {
        let row = vec![3.0, -1.0, 0.25, 0.7, 0.25, -1.0];
        let back = row_from_modes(&cosine_modes(&row));
        for (a, b) in row.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn small_delay_row_two_ways() {
        let sys = ring();
        for &(t, r) in &[(0.01, 1.0), (0.01, 10.0), (0.05, 1.0)] {
            let spectral = design_gains(&sys, t, r, Method::SmallDelay).unwrap().k_row;
            let spatial = small_delay_row(&sys, t, r).unwrap();
            for (a, b) in spectral.iter().zip(&spatial) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_delay_methods_coincide() {
        let sys = ring();
        let a = design_gains(&sys, 0.0, 1.0, Method::SmallDelay).unwrap();
        let b = design_gains(&sys, 0.0, 1.0, Method::DelayFree).unwrap();
        assert_eq!(a.k_row, b.k_row);
        assert!(verify_closed_loop(&sys, &b, 0.0));
    }

    #[test]
    fn certificate_examples() {
        let sys = ring();
        let sd = design_gains(&sys, 0.01, 1.0, Method::SmallDelay).unwrap();
        assert!(verify_closed_loop(&sys, &sd, 0.01));
        let mut big = design_gains(&sys, 0.1, 1.0, Method::NumericalOpt).unwrap();
        big.k_modes.iter_mut().for_each(|k| *k *= 10.0);
        assert!(!verify_closed_loop(&sys, &big, 0.1));
        assert!(matches!(h2_cost(&sys, &big, 0.1, 1.0), Err(Error::Instability(_))));
    }

    #[test]
    fn unstabilizable_mode_named() {
        let sys = ring();
        assert!(matches!(
            design_gains(&sys, 0.3, 1.0, Method::NumericalOpt),
            Err(Error::Unstabilizable { mode: 0, .. })
        ));
    }

    #[test]
    fn independent_ou_processes() {
        let mut row = vec![0.0; 4];
        row[0] = -1.0;
        let sys = CirculantSystem::new(row).unwrap();
        let gains = CirculantGains { k_row: vec![0.0; 4], k_modes: vec![0.0; 4], self_gain: 0.0, provenance: Method::DelayFree };
        assert!((h2_cost(&sys, &gains, 0.7, 1.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cost_ordering() {
        let sys = ring();
        let t = 0.05;
        let cost = |m| h2_cost(&sys, &design_gains(&sys, t, 1.0, m).unwrap(), t, 1.0).unwrap();
        let (opt, sd, free) = (cost(Method::NumericalOpt), cost(Method::SmallDelay), cost(Method::DelayFree));
        assert!(opt <= sd && sd <= free, "{opt} {sd} {free}");
    }

    #[test]
    fn two_agent_ring() {
        let req = CirculantRequest { n: 2, a_row: vec![-1.0, 0.5], delay: 0.1, r: 1.0, method: Method::NumericalOpt };
        let rep = run_request(&req).unwrap();
        assert!(rep.stable && rep.cost.is_some());
    }

    #[test]
    fn ring_anchor_gains() {
        let sys = ring();
        for method in [Method::SmallDelay, Method::NumericalOpt] {
            let g1 = design_gains(&sys, 0.01, 1.0, method).unwrap();
            let g10 = design_gains(&sys, 0.01, 10.0, method).unwrap();
            assert!((g1.self_gain - 2.8).abs() <= 0.1, "{}", g1.self_gain);
            assert!((g10.self_gain - 2.3).abs() <= 0.1, "{}", g10.self_gain);
            assert!((g1.k_row[1] - 1.6).abs() <= 0.1, "{}", g1.k_row[1]);
            assert!((g10.k_row[1] - 1.7).abs() <= 0.1, "{}", g10.k_row[1]);
            assert!(g10.k_row[1] > g1.k_row[1]);
        }
    }

    #[test]
    fn delayed_mode_gains_shrink() {
        let sys = ring();
        let free = design_gains(&sys, 0.0, 1.0, Method::NumericalOpt).unwrap();
        for t in [0.01, 0.05, 0.1] {
            let g = design_gains(&sys, t, 1.0, Method::NumericalOpt).unwrap();
            assert!(g.k_modes.iter().zip(&free.k_modes).all(|(k, k0)| k <= k0));
        }
    }

    #[test]
    fn small_delay_error_is_second_order() {
        let sys = ring();
        let err = |t: f64| {
            let opt = design_gains(&sys, t, 1.0, Method::NumericalOpt).unwrap().k_modes;
            let sd = design_gains(&sys, t, 1.0, Method::SmallDelay).unwrap().k_modes;
            opt.iter().zip(&sd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let ratio = err(0.01) / err(0.005);
        assert!(ratio >= 3.5, "{ratio}");
    }

    #[test]
    fn optimal_cost_falls_with_delay() {
        let sys = ring();
        let mut last = f64::INFINITY;
        for t in [0.2, 0.1, 0.05, 0.01] {
            let g = design_gains(&sys, t, 1.0, Method::NumericalOpt).unwrap();
            let j = h2_cost(&sys, &g, t, 1.0).unwrap();
            assert!(j < last, "T={t}: {j} >= {last}");
            last = j;
        }
    }
}
