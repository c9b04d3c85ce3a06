use serde::{Deserialize, Serialize};

use super::csv::Table;
use super::svg::{Plot, Series};
use super::{linspace, require, Format, Output};
use crate::circulant::{modes_of, run_request, CirculantRequest, CirculantReport, CirculantSystem, Method};
use crate::error::{Error, Result};
use crate::oracle::{monte_carlo_variance, oracle_report, MonteCarloEstimate};
use crate::scalar::{
    optimal_gain, region_boundaries, stabilizing_upper_bound, variance_integral, Boundary, Branch, ScalarPlant,
};
use crate::spatial::{
    kernel_from_symbol, rd_delay_free_kernel, rd_design_approximation, rd_expensive_kernel, rd_thresholds,
    sweep_optimal_symbol, truncation_analysis, DesignThresholds, Provenance, ReactionDiffusionParams, SpatialKernel,
    SymbolFunction, TruncationReport, TruncationRule,
};

fn finite(name: &str, v: f64) -> Result<()> {
    require(v.is_finite(), || format!("{name} must be finite, got {v}"))
}

fn grid(a_min: f64, a_max: f64, n_points: usize) -> Result<Vec<f64>> {
    finite("a_min", a_min)?;
    finite("a_max", a_max)?;
    require(a_min < a_max, || format!("need a_min < a_max, got {a_min} >= {a_max}"))?;
    require((2..=100_000).contains(&n_points), || format!("n_points must lie in [2, 100000], got {n_points}"))?;
    Ok(linspace(a_min, a_max, n_points))
}

fn delay_ok(name: &str, t: f64) -> Result<()> {
    require(t.is_finite() && t >= 0.0, || format!("{name} must be finite and >= 0, got {t}"))
}

fn positive(name: &str, v: f64) -> Result<()> {
    require(v.is_finite() && v > 0.0, || format!("{name} must be finite and > 0, got {v}"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionsConfig {
    pub a_min: f64,
    pub a_max: f64,
    pub n_points: usize,
    #[serde(rename = "T")]
    pub delay: f64,
}

impl Default for RegionsConfig {
    fn default() -> Self {
        Self { a_min: -6.0, a_max: 0.9, n_points: 139, delay: 1.0 }
    }
}

#[derive(Serialize)]
struct RegionsReport<'a> {
    config: &'a RegionsConfig,
    rows: Vec<crate::scalar::RegionRow>,
}

pub fn run_regions(cfg: &RegionsConfig, format: Format, out: &mut Output) -> Result<()> {
    let a_grid = grid(cfg.a_min, cfg.a_max, cfg.n_points)?;
    delay_ok("T", cfg.delay)?;
    let rows = region_boundaries(&a_grid, cfg.delay)?;
    match format {
        Format::Csv => {
            let mut t = Table::new(&["a", "k_upper", "k_cheap", "k_expensive", "diagonal"]);
            for r in &rows {
                t.push(vec![Some(r.a), r.k_upper.value(), r.k_cheap.value(), r.k_expensive.value(), Some(r.a)]);
            }
            out.write("regions.csv", &t.render())
        }
        Format::Json => out.write_json("regions.json", &RegionsReport { config: cfg, rows }),
        Format::Svg => {
            let curve = |f: fn(&crate::scalar::RegionRow) -> Boundary| {
                rows.iter().map(|r| (r.a, f(r).value().unwrap_or(f64::NAN))).collect::<Vec<_>>()
            };
            let plot = Plot::new(format!("Stability and optimality regions, T = {}", cfg.delay), "a", "k")
                .with(Series::new("k upper", curve(|r| r.k_upper)))
                .with(Series::new("cheap", curve(|r| r.k_cheap)))
                .with(Series::new("expensive", curve(|r| r.k_expensive)))
                .with(Series::new("k = a", rows.iter().map(|r| (r.a, r.a)).collect()).dashed());
            out.write("regions.svg", &plot.render())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalarSweepConfig {
    pub a_min: f64,
    pub a_max: f64,
    pub n_points: usize,
    #[serde(rename = "T_list")]
    pub delays: Vec<f64>,
    pub r: f64,
}

impl Default for ScalarSweepConfig {
    fn default() -> Self {
        Self { a_min: -3.0, a_max: 1.5, n_points: 91, delays: vec![0.0, 1.0, 2.0, 3.0], r: 1.0 }
    }
}

/// Optimal gains along `a` for one delay; stops where `a T >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct SweepCurve {
    #[serde(rename = "T")]
    delay: f64,
    a: Vec<f64>,
    k: Vec<f64>,
    j: Vec<f64>,
}

pub fn run_scalar_sweep(cfg: &ScalarSweepConfig, format: Format, out: &mut Output) -> Result<()> {
    let a_grid = grid(cfg.a_min, cfg.a_max, cfg.n_points)?;
    require(!cfg.delays.is_empty(), || "T_list must not be empty".into())?;
    for &t in &cfg.delays {
        delay_ok("T_list entry", t)?;
    }
    positive("r", cfg.r)?;
    let mut curves = Vec::with_capacity(cfg.delays.len());
    for &t in &cfg.delays {
        let mut c = SweepCurve { delay: t, a: Vec::new(), k: Vec::new(), j: Vec::new() };
        for &a in a_grid.iter().filter(|&&a| a * t < 1.0) {
            let g = optimal_gain(&ScalarPlant::new(a, t, cfg.r)?)?;
            c.a.push(a);
            c.k.push(g.k);
            c.j.push(g.j);
        }
        curves.push(c);
    }
    match format {
        Format::Csv => {
            let mut t = Table::new(&["T", "a", "k", "J"]);
            for c in &curves {
                for i in 0..c.a.len() {
                    t.push_values(&[c.delay, c.a[i], c.k[i], c.j[i]]);
                }
            }
            out.write("scalar_sweep.csv", &t.render())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                config: &'a ScalarSweepConfig,
                curves: &'a [SweepCurve],
            }
            out.write_json("scalar_sweep.json", &Report { config: cfg, curves: &curves })
        }
        Format::Svg => {
            let mut plot = Plot::new(format!("Optimal gain, r = {}", cfg.r), "a", "k*");
            for c in &curves {
                let pts = c.a.iter().zip(&c.k).map(|(&a, &k)| (a, k)).collect();
                plot = plot.with(Series::new(format!("T = {}", c.delay), pts));
            }
            out.write("scalar_sweep.svg", &plot.render())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RdKernelsConfig {
    pub c: f64,
    pub d: f64,
    #[serde(rename = "T")]
    pub delay: f64,
    pub r: f64,
    pub dx: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
    /// Frequency samples on `[0, pi/dx]`.
    pub n_lambda: usize,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl Default for RdKernelsConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            d: 1.0,
            delay: 1.0,
            r: 1.0,
            dx: 0.05,
            half_width: 10.0,
            n_lambda: 2001,
            alpha: 0.6,
            beta: 1.0,
            kappa: 2.0,
            gamma: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct KernelEntry {
    name: &'static str,
    provenance: Provenance,
    dirac_weight: f64,
    peak: f64,
    caveat: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct RdKernelsReport<'a> {
    config: &'a RdKernelsConfig,
    x: Option<Vec<f64>>,
    kernels: Vec<KernelEntry>,
    thresholds: Option<DesignThresholds>,
    /// Relative L2 distance between the numerical delay-aware kernel and the closed form.
    l2_gap: Option<f64>,
    truncation: Vec<TruncationReport>,
    notes: Vec<String>,
}

fn l2_relative(a: &SpatialKernel, b: &SpatialKernel) -> f64 {
    let num: f64 = a.values.iter().zip(&b.values).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.values.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

pub fn run_rd_kernels(cfg: &RdKernelsConfig, format: Format, out: &mut Output) -> Result<()> {
    positive("dx", cfg.dx)?;
    positive("L", cfg.half_width)?;
    require(cfg.half_width >= cfg.dx, || "L must be at least dx".into())?;
    require((3..=200_001).contains(&cfg.n_lambda), || format!("n_lambda must lie in [3, 200001], got {}", cfg.n_lambda))?;
    let p = ReactionDiffusionParams::new(cfg.c, cfg.d, cfg.delay, cfg.r).map_err(|e| Error::Config(e.to_string()))?;
    let sym = SymbolFunction::reaction_diffusion(p.c, p.d, std::f64::consts::PI / cfg.dx, cfg.n_lambda)?;

    let mut kernels: Vec<(&'static str, SpatialKernel)> = Vec::new();
    let mut notes = Vec::new();
    let mut thresholds = None;
    let mut l2_gap = None;
    let mut truncation = Vec::new();

    let free = kernel_from_symbol(&sweep_optimal_symbol(&sym, 0.0, p.r), cfg.dx, cfg.half_width)?;
    let free = SpatialKernel { provenance: Provenance::DelayFree, ..free };
    kernels.push(("delay_free", free));
    if p.delay > 0.0 {
        let delayed = kernel_from_symbol(&sweep_optimal_symbol(&sym, p.delay, p.r), cfg.dx, cfg.half_width)?;
        let closed = SpatialKernel::sample(cfg.dx, cfg.half_width, Provenance::ExpensiveClosedForm, |x| {
            rd_expensive_kernel(&p, x)
        })?;
        let closed_free = SpatialKernel::sample(cfg.dx, cfg.half_width, Provenance::ExpensiveClosedForm, |x| {
            rd_delay_free_kernel(&p, x)
        })?;
        l2_gap = Some(l2_relative(&delayed, &closed));
        let th = rd_thresholds(&p, cfg.alpha, cfg.beta, cfg.kappa, cfg.gamma).map_err(|e| Error::Config(e.to_string()))?;
        if th.band_consistent {
            rd_design_approximation(&p, &th, 0.0)?;
            let design = SpatialKernel::sample(cfg.dx, cfg.half_width, Provenance::Approximation, |x| {
                rd_design_approximation(&p, &th, x).unwrap_or(f64::NAN)
            })?;
            kernels.push(("design", design));
        } else {
            notes.push(format!(
                "design approximation skipped: alpha x_th1 = {} exceeds beta x_th2 = {}",
                th.alpha * th.x_th1,
                th.beta * th.x_th2
            ));
        }
        let rule = TruncationRule { kappa: cfg.kappa, gamma: cfg.gamma };
        for cutoff in [th.x_th_delay_free, th.x_th_delay] {
            truncation.push(truncation_analysis(&p, &delayed, cutoff, &sym, rule)?);
        }
        thresholds = Some(th);
        kernels.insert(1, ("delay", delayed));
        kernels.insert(2, ("expensive", closed));
        kernels.insert(3, ("expensive_delay_free", closed_free));
    }

    let entry = |name, k: &SpatialKernel, with_values: bool| KernelEntry {
        name,
        provenance: k.provenance,
        dirac_weight: k.dirac_weight,
        peak: k.peak(),
        caveat: k.caveat.clone(),
        values: with_values.then(|| k.values.clone()),
    };
    let x = kernels[0].1.x_grid();
    match format {
        Format::Csv => {
            for (name, k) in &kernels {
                let mut t = Table::new(&["x", "K"]);
                for (xi, v) in x.iter().zip(&k.values) {
                    t.push_values(&[*xi, *v]);
                }
                out.write(&format!("kernel_{name}.csv"), &t.render())?;
            }
            let report = RdKernelsReport {
                config: cfg,
                x: None,
                kernels: kernels.iter().map(|(n, k)| entry(*n, k, false)).collect(),
                thresholds,
                l2_gap,
                truncation,
                notes,
            };
            out.write_json("rd_kernels.meta.json", &report)
        }
        Format::Json => {
            let report = RdKernelsReport {
                config: cfg,
                x: Some(x),
                kernels: kernels.iter().map(|(n, k)| entry(*n, k, true)).collect(),
                thresholds,
                l2_gap,
                truncation,
                notes,
            };
            out.write_json("rd_kernels.json", &report)
        }
        Format::Svg => {
            let mut plot = Plot::new(
                format!("Feedback kernels, c = {}, d = {}, T = {}, r = {}", p.c, p.d, p.delay, p.r),
                "x",
                "K(x)",
            );
            for (name, k) in &kernels {
                let pts = x.iter().zip(&k.values).map(|(&a, &b)| (a, b)).collect();
                let s = Series::new(name.replace('_', " "), pts);
                plot = plot.with(if k.provenance == Provenance::ExpensiveClosedForm { s.dashed() } else { s });
            }
            if let Some(th) = thresholds {
                for sign in [-1.0, 1.0] {
                    plot = plot
                        .marker(if sign > 0.0 { "x_th1" } else { "" }, sign * th.x_th1)
                        .marker(if sign > 0.0 { "x_th2" } else { "" }, sign * th.x_th2);
                }
                plot = plot.marker("delay cutoff", th.x_th_delay).marker("delay-free cutoff", th.x_th_delay_free);
            }
            out.write("rd_kernels.svg", &plot.render())
        }
    }
}

/// One request, or a batch under `runs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CirculantConfig {
    Batch { runs: Vec<CirculantRequest> },
    Single(CirculantRequest),
}

impl Default for CirculantConfig {
    fn default() -> Self {
        let a_row = vec![1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0];
        let mut runs = Vec::new();
        for (delay, r) in [(0.1, 1.0), (0.01, 1.0), (0.01, 10.0)] {
            for method in [Method::NumericalOpt, Method::SmallDelay] {
                runs.push(CirculantRequest { n: a_row.len(), a_row: a_row.clone(), delay, r, method });
            }
        }
        CirculantConfig::Batch { runs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct CirculantRun {
    input: CirculantRequest,
    output: CirculantReport,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::NumericalOpt => "numerical_opt",
        Method::SmallDelay => "small_delay",
        Method::DelayFree => "delay_free",
    }
}

pub fn run_circulant(cfg: &CirculantConfig, format: Format, out: &mut Output) -> Result<()> {
    let requests: Vec<&CirculantRequest> = match cfg {
        CirculantConfig::Batch { runs } => runs.iter().collect(),
        CirculantConfig::Single(req) => vec![req],
    };
    require(!requests.is_empty(), || "no circulant runs configured".into())?;
    let mut runs = Vec::with_capacity(requests.len());
    let mut modes = Vec::with_capacity(requests.len());
    for req in &requests {
        let sys = CirculantSystem::new(req.a_row.clone())?;
        modes.push(modes_of(&sys)?);
        runs.push(CirculantRun { input: (*req).clone(), output: run_request(req)? });
    }
    match format {
        Format::Csv => {
            let mut t = Table::new(&["run", "method", "T", "r", "index", "a_mode", "k_mode", "k_row"]);
            for (i, (run, a_modes)) in runs.iter().zip(&modes).enumerate() {
                for j in 0..run.input.n {
                    let num = |v: f64| super::csv::format_value(Some(v));
                    t.push_cells(vec![
                        i.to_string(),
                        method_name(run.input.method).into(),
                        num(run.input.delay),
                        num(run.input.r),
                        j.to_string(),
                        num(a_modes[j]),
                        num(run.output.k_modes[j]),
                        num(run.output.k_row[j]),
                    ]);
                }
            }
            out.write("circulant.csv", &t.render())
        }
        Format::Json => match cfg {
            CirculantConfig::Single(_) => out.write_json("circulant.json", &runs[0].output),
            CirculantConfig::Batch { .. } => out.write_json("circulant.json", &serde_json::json!({ "runs": runs })),
        },
        Format::Svg => {
            for (i, (run, a_modes)) in runs.iter().zip(&modes).enumerate() {
                let n = run.input.n;
                let half = |v: &[f64]| (0..=n / 2).map(|j| (j as f64, v[j])).collect::<Vec<_>>();
                let plot = Plot::new(
                    format!("{}, T = {}, r = {}", method_name(run.input.method), run.input.delay, run.input.r),
                    "mode / offset",
                    "value",
                )
                .with(Series::new("open-loop mode", half(a_modes)).dashed())
                .with(Series::new("mode gain", half(&run.output.k_modes)))
                .with(Series::new("gain row", half(&run.output.k_row)));
                out.write(&format!("circulant_{i}.svg"), &plot.render())?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub a_values: Vec<f64>,
    #[serde(rename = "T_values")]
    pub delays: Vec<f64>,
    /// Gains per `(a, T)`: `k = 0` and `k = |a|` when stabilizing, then
    /// evenly spaced interior points of the stabilizing interval.
    pub k_per_pair: usize,
    pub seed: u64,
    pub mc_paths: usize,
    pub mc_step: f64,
    pub mc_horizon: f64,
    pub tol_time: f64,
    pub tol_freq: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            a_values: vec![-2.0, -1.0, -0.5, 0.0, 0.5],
            delays: vec![0.25, 0.5, 1.0, 1.5],
            k_per_pair: 6,
            seed: 20_240_601,
            mc_paths: 200,
            mc_step: 0.002,
            mc_horizon: 40.0,
            tol_time: 1e-3,
            tol_freq: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub a: f64,
    #[serde(rename = "T")]
    pub delay: f64,
    pub k: f64,
    pub branch: Branch,
    pub f_closed_form: f64,
    pub f_time_domain: f64,
    pub f_freq_domain: f64,
    pub rel_err_time: f64,
    pub rel_err_freq: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct MonteCarloRow {
    a: f64,
    #[serde(rename = "T")]
    delay: f64,
    k: f64,
    f_closed_form: f64,
    estimate: MonteCarloEstimate,
    z_score: f64,
}

/// Gains checked for one `(a, T)`.
pub(crate) fn verify_gains(plant: &ScalarPlant, count: usize) -> Result<Vec<f64>> {
    let a = plant.a;
    let ku = stabilizing_upper_bound(plant)?.finite().unwrap_or(a.abs() + 2.0 * a.abs().max(1.0));
    let mut ks = Vec::with_capacity(count);
    if a < 0.0 {
        ks.push(0.0);
        if a.abs() < ku {
            ks.push(a.abs());
        }
    }
    let rest = count.saturating_sub(ks.len());
    for i in 1..=rest {
        ks.push(a + (ku - a) * i as f64 / (rest + 1) as f64);
    }
    ks.truncate(count);
    Ok(ks)
}

pub fn run_verify(cfg: &VerifyConfig, format: Format, out: &mut Output) -> Result<()> {
    require(!cfg.a_values.is_empty() && !cfg.delays.is_empty(), || "a_values and T_values must not be empty".into())?;
    require(cfg.k_per_pair >= 1, || "k_per_pair must be >= 1".into())?;
    for &a in &cfg.a_values {
        finite("a", a)?;
    }
    for &t in &cfg.delays {
        delay_ok("T", t)?;
    }
    positive("tol_time", cfg.tol_time)?;
    positive("tol_freq", cfg.tol_freq)?;
    if cfg.mc_paths > 0 {
        require(cfg.mc_paths >= 100, || format!("mc_paths must be 0 or >= 100, got {}", cfg.mc_paths))?;
        positive("mc_step", cfg.mc_step)?;
        positive("mc_horizon", cfg.mc_horizon)?;
    }

    let mut rows = Vec::new();
    let mut mc = Vec::new();
    for &a in &cfg.a_values {
        for &t in &cfg.delays {
            let plant = ScalarPlant::new(a, t, 1.0)?;
            require(plant.is_stabilizable(), || format!("(a, T) = ({a}, {t}) is not stabilizable: a T >= 1"))?;
            let ks = verify_gains(&plant, cfg.k_per_pair)?;
            for &k in &ks {
                let rep = oracle_report(&plant, k)?;
                let branch = variance_integral(&plant, k)?.branch;
                let mut pass = rep.rel_err_time < cfg.tol_time && rep.rel_err_freq < cfg.tol_freq;
                if k == 0.0 {
                    let exact = -0.5 / a;
                    pass &= ((rep.f_closed_form - exact) / exact).abs() < 1e-9;
                }
                rows.push(VerifyRow {
                    a,
                    delay: t,
                    k,
                    branch,
                    f_closed_form: rep.f_closed_form,
                    f_time_domain: rep.f_time_domain,
                    f_freq_domain: rep.f_freq_domain,
                    rel_err_time: rep.rel_err_time,
                    rel_err_freq: rep.rel_err_freq,
                    pass,
                });
            }
            if cfg.mc_paths > 0 {
                let k = ks[ks.len() / 2];
                let f = variance_integral(&plant, k)?.f_value;
                let est = monte_carlo_variance(&plant, k, cfg.mc_step, cfg.mc_horizon, cfg.mc_paths, cfg.seed)?;
                mc.push(MonteCarloRow { a, delay: t, k, f_closed_form: f, estimate: est, z_score: (est.mean - f) / est.stderr });
            }
        }
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    let max_time = rows.iter().map(|r| r.rel_err_time).fold(0.0, f64::max);
    let max_freq = rows.iter().map(|r| r.rel_err_freq).fold(0.0, f64::max);

    match format {
        Format::Csv => {
            let mut t = Table::new(&[
                "a", "T", "k", "branch", "f_closed_form", "f_time_domain", "f_freq_domain", "rel_err_time",
                "rel_err_freq", "pass",
            ]);
            let num = |v: f64| super::csv::format_value(Some(v));
            for r in &rows {
                let branch = match r.branch {
                    Branch::Below => "below",
                    Branch::Equal => "equal",
                    Branch::Above => "above",
                };
                t.push_cells(vec![
                    num(r.a),
                    num(r.delay),
                    num(r.k),
                    branch.into(),
                    num(r.f_closed_form),
                    num(r.f_time_domain),
                    num(r.f_freq_domain),
                    num(r.rel_err_time),
                    num(r.rel_err_freq),
                    r.pass.to_string(),
                ]);
            }
            out.write("verify.csv", &t.render())?;
            if !mc.is_empty() {
                let mut m = Table::new(&["a", "T", "k", "f_closed_form", "mc_mean", "mc_stderr", "z_score"]);
                for r in &mc {
                    m.push_values(&[r.a, r.delay, r.k, r.f_closed_form, r.estimate.mean, r.estimate.stderr, r.z_score]);
                }
                out.write("verify_monte_carlo.csv", &m.render())?;
            }
        }
        Format::Json => {
            let report = serde_json::json!({
                "config": cfg,
                "rows": rows,
                "monte_carlo": mc,
                "summary": {
                    "rows": rows.len(),
                    "failures": failures,
                    "max_rel_err_time": max_time,
                    "max_rel_err_freq": max_freq,
                },
            });
            out.write_json("verify.json", &report)?;
        }
        Format::Svg => {
            let idx = |f: fn(&VerifyRow) -> f64| {
                rows.iter().enumerate().map(|(i, r)| (i as f64, f(r).max(1e-18).log10())).collect::<Vec<_>>()
            };
            let plot = Plot::new("Closed form against oracles", "row", "log10 relative error")
                .with(Series::new("time domain", idx(|r| r.rel_err_time)))
                .with(Series::new("frequency domain", idx(|r| r.rel_err_freq)))
                .with(Series::new("time tolerance", vec![(0.0, cfg.tol_time.log10()), ((rows.len() - 1) as f64, cfg.tol_time.log10())]).dashed())
                .with(Series::new("frequency tolerance", vec![(0.0, cfg.tol_freq.log10()), ((rows.len() - 1) as f64, cfg.tol_freq.log10())]).dashed());
            out.write("verify.svg", &plot.render())?;
        }
    }
    if failures > 0 {
        return Err(Error::Divergence(format!(
            "{failures} of {} oracle checks exceeded tolerance (max time {max_time:e}, max freq {max_freq:e})",
            rows.len()
        )));
    }
    Ok(())
}
