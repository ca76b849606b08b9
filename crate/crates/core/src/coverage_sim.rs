//! Monte Carlo coverage of the confidence intervals, and the simulated tail
//! plots used as a visual sanity check.
//!
//! Sample sizes are set through the effective sample size
//! `n_eff = n · P(min(X₁, X₂) ≥ u) = n F̄(u)²`, the expected number of pairs
//! per observation that reach the threshold.

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{shifted_gamma_mean_ten, DistributionSpec};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::tail_math::{pareto_tail_value, theoretical_tail_value, Alpha};
use crate::ustat::{tail_curve, TailEstimate};
use crate::variance_ci::{
    interval_bounds, sigma_hat_bootstrap, ExceedanceSums, VarianceMethod,
};

pub const MIN_REPS: usize = 100;
/// Share of dropped replicates above which a report is flagged.
pub const DROP_FLAG_SHARE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageConfig {
    pub dist: DistributionSpec,
    pub u: f64,
    pub n_eff: f64,
    pub level: f64,
    pub reps: usize,
    pub methods: Vec<VarianceMethod>,
    pub seed: u64,
}

impl CoverageConfig {
    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        if !(self.n_eff.is_finite() && self.n_eff > 0.0) {
            return Err(Error::domain("n_eff", self.n_eff, "must be positive"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::domain("level", self.level, "must lie strictly between 0 and 1"));
        }
        if self.reps < MIN_REPS {
            return Err(Error::InvalidParameter {
                name: "reps",
                value: self.reps as f64,
                reason: "coverage needs at least 100 replicates",
            });
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter {
                name: "methods",
                value: 0.0,
                reason: "no variance method selected",
            });
        }
        for m in &self.methods {
            if let VarianceMethod::Bootstrap { reps: 0, .. } = m {
                return Err(Error::InvalidParameter {
                    name: "bootstrap_reps",
                    value: 0.0,
                    reason: "need at least one bootstrap replicate",
                });
            }
        }
        required_n(&self.dist, self.u, self.n_eff).map(|_| ())
    }
}

/// `round(n_eff / ν_u)` with `ν_u = F̄(u)²`, at least 4.
pub fn required_n(dist: &DistributionSpec, u: f64, n_eff: f64) -> Result<usize> {
    let nu = dist.min_survival(u);
    if !(nu > 0.0) {
        return Err(Error::DegenerateThreshold { u });
    }
    let n = (n_eff / nu).round();
    if !n.is_finite() || n > 1e9 {
        return Err(Error::InvalidParameter {
            name: "n_eff",
            value: n_eff,
            reason: "implied sample size is too large",
        });
    }
    Ok((n as usize).max(4))
}

/// `t(u)`: closed form for Pareto I, quadrature otherwise.
pub fn true_tail_value(dist: &DistributionSpec, u: f64) -> Result<f64> {
    match *dist {
        DistributionSpec::ParetoI { x_m, alpha } if u >= x_m => {
            Ok(pareto_tail_value(Alpha::new(alpha)?))
        }
        _ => theoretical_tail_value(dist, u),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodCoverage {
    pub method: VarianceMethod,
    pub evaluated: usize,
    pub covered: usize,
    /// Replicates where the method was undefined (too few exceedances, or an
    /// unstable bootstrap).
    pub dropped: usize,
    /// Percent of evaluated replicates whose interval contains `t(u)`.
    pub coverage: f64,
    /// `100 √(p(1 − p) / evaluated)`.
    pub std_error: f64,
    pub mean_width: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub config: CoverageConfig,
    pub n: usize,
    pub true_value: f64,
    pub methods: Vec<MethodCoverage>,
}

#[derive(Debug, Clone, Copy)]
enum Outcome {
    Dropped,
    Evaluated { covered: bool, width: f64 },
}

/// Runs the study. Replicate `r` samples from stream `(seed, r)`; a bootstrap
/// inside it seeds from that stream's child seed (the `seed` carried by
/// [`VarianceMethod::Bootstrap`] is not used here). Outcomes are collected in
/// replicate order and summed sequentially, so the report is identical for
/// any number of worker threads.
pub fn run_coverage(config: &CoverageConfig) -> Result<CoverageReport> {
    config.validate()?;
    let n = required_n(&config.dist, config.u, config.n_eff)?;
    let truth = true_tail_value(&config.dist, config.u)?;
    let outcomes: Vec<Vec<Outcome>> = (0..config.reps)
        .into_par_iter()
        .map(|rep| replicate(config, n, truth, rep as u64))
        .collect::<Result<_>>()?;
    let methods = config
        .methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let (mut evaluated, mut covered, mut dropped, mut width) = (0, 0, 0, 0.0);
            for o in outcomes.iter().map(|row| row[k]) {
                match o {
                    Outcome::Dropped => dropped += 1,
                    Outcome::Evaluated { covered: c, width: w } => {
                        evaluated += 1;
                        covered += c as usize;
                        width += w;
                    }
                }
            }
            let p = if evaluated > 0 { covered as f64 / evaluated as f64 } else { f64::NAN };
            MethodCoverage {
                method,
                evaluated,
                covered,
                dropped,
                coverage: 100.0 * p,
                std_error: 100.0 * (p * (1.0 - p) / evaluated as f64).sqrt(),
                mean_width: width / evaluated as f64,
                flagged: dropped as f64 > DROP_FLAG_SHARE * config.reps as f64,
            }
        })
        .collect();
    Ok(CoverageReport {
        config: config.clone(),
        n,
        true_value: truth,
        methods,
    })
}

fn replicate(config: &CoverageConfig, n: usize, truth: f64, rep: u64) -> Result<Vec<Outcome>> {
    let stream = RngStream::new(config.seed, rep);
    let sample = config.dist.sample(n, stream)?;
    let sums = ExceedanceSums::new(&sample, config.u);
    let t_hat = if sums.m >= 2 { sums.t_hat() } else { f64::NAN };
    config
        .methods
        .iter()
        .map(|&method| {
            if sums.m < method.min_exceedances() {
                return Ok(Outcome::Dropped);
            }
            let var = match method {
                VarianceMethod::Unbiased => sums.plugin_variance()?,
                VarianceMethod::Jackknife => sums.jackknife_variance()?,
                VarianceMethod::Bootstrap { reps, .. } => {
                    match sigma_hat_bootstrap(&sample, config.u, reps, stream.child_seed()) {
                        Ok(v) => v,
                        Err(Error::UnstableBootstrap { .. }) => return Ok(Outcome::Dropped),
                        Err(e) => return Err(e),
                    }
                }
            };
            let (lo, hi) = interval_bounds(t_hat, var.sqrt(), sums.n_u2(), config.level);
            Ok(Outcome::Evaluated {
                covered: lo <= truth && truth <= hi,
                width: hi - lo,
            })
        })
        .collect()
}

/// The three methods in table order: plug-in, bootstrap, jackknife.
pub fn table_methods(bootstrap_reps: usize) -> Vec<VarianceMethod> {
    vec![
        VarianceMethod::Unbiased,
        VarianceMethod::Bootstrap {
            reps: bootstrap_reps,
            seed: 0,
        },
        VarianceMethod::Jackknife,
    ]
}

/// Named study designs.
///
/// * `table1` — Pareto I (`x_m = 1`), `α ∈ {0.2, 0.5, 1, 2, 3}`, `n_eff = 20`,
///   at both `u = 2` and `u = 3`.
/// * `table2` — Pareto I, `α = 1`, `u = 2`, `n_eff ∈ {10, 20, 40, 80, 160}`.
/// * `smoke` — one small `table2` cell with 100 replicates.
pub fn preset(name: &str, reps: usize, bootstrap_reps: usize, seed: u64) -> Option<Vec<CoverageConfig>> {
    let pareto = |alpha| DistributionSpec::ParetoI { x_m: 1.0, alpha };
    let cell = |alpha, u, n_eff, reps| CoverageConfig {
        dist: pareto(alpha),
        u,
        n_eff,
        level: 0.95,
        reps,
        methods: table_methods(bootstrap_reps),
        seed,
    };
    match name {
        "table1" => Some(
            [2.0, 3.0]
                .iter()
                .flat_map(|&u| [0.2, 0.5, 1.0, 2.0, 3.0].map(|a| cell(a, u, 20.0, reps)))
                .collect(),
        ),
        "table2" => Some([10.0, 20.0, 40.0, 80.0, 160.0].map(|e| cell(1.0, 2.0, e, reps)).to_vec()),
        "smoke" => Some(vec![cell(1.0, 2.0, 20.0, MIN_REPS)]),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 3] = ["table1", "table2", "smoke"];

/// Aligned text rendering: one row per study cell, one column per method.
pub fn render_table(reports: &[CoverageReport]) -> String {
    let mut out = String::new();
    let Some(first) = reports.first() else {
        return out;
    };
    let mut header = format!("{:<28} {:>6} {:>7} {:>7}", "distribution", "u", "n_eff", "n");
    for m in &first.methods {
        header.push_str(&format!(" {:>16}", m.method.name()));
    }
    out.push_str(&header);
    out.push('\n');
    for r in reports {
        let mut line = format!(
            "{:<28} {:>6} {:>7.1} {:>7}",
            r.config.dist.to_string(),
            r.config.u,
            r.config.n_eff,
            r.n
        );
        for m in &r.methods {
            let flag = if m.flagged { "*" } else { " " };
            line.push_str(&format!(" {:>8.1} ({:>4.2}){flag}", m.coverage, m.std_error));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    if reports.iter().any(|r| r.methods.iter().any(|m| m.flagged)) {
        out.push_str("* more than 10% of replicates dropped\n");
    }
    out
}

/// One simulated tail plot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatedCurve {
    pub dist: DistributionSpec,
    /// The `0.995` sample quantile; the curve stops there.
    pub u_max: f64,
    pub points: Vec<TailEstimate>,
}

impl SimulatedCurve {
    /// Mean of `t̂` over thresholds in `[lo, hi]`.
    pub fn mean_between(&self, lo: f64, hi: f64) -> Option<f64> {
        let inside: Vec<f64> = self
            .points
            .iter()
            .filter(|p| p.u >= lo && p.u <= hi)
            .map(|p| p.t_hat)
            .collect();
        (!inside.is_empty()).then(|| inside.iter().sum::<f64>() / inside.len() as f64)
    }

    /// The estimate at the largest threshold not above `u`.
    pub fn at(&self, u: f64) -> Option<&TailEstimate> {
        self.points.iter().rev().find(|p| p.u <= u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure2 {
    pub preset: String,
    pub n: usize,
    pub seed: u64,
    pub curves: Vec<SimulatedCurve>,
    /// `(α, t̃_α)` reference lines.
    pub reference: Vec<(f64, f64)>,
}

pub const FIGURE2_PRESETS: [&str; 3] = ["pareto", "loggamma", "shifted_gamma"];

/// Distributions of one row of the simulated tail-plot figure, all on
/// `(1, ∞)`:
///
/// * `pareto` — Pareto I `α = 0.5`; Pareto II `θ = 5, α = 1.5`; Pareto III `θ = 5, α = 3`;
/// * `loggamma` — log-gamma `α ∈ {0.5, 1.5, 3}`, `β = 2`;
/// * `shifted_gamma` — `1 + Gamma(shape, 9/shape)` for shapes `{0.5, 2, 8}` (mean 10).
pub fn figure2_distributions(preset: &str) -> Option<Vec<DistributionSpec>> {
    use DistributionSpec::*;
    match preset {
        "pareto" => Some(vec![
            ParetoI { x_m: 1.0, alpha: 0.5 },
            ParetoII { theta: 5.0, alpha: 1.5, loc: 1.0 },
            ParetoIII { theta: 5.0, alpha: 3.0, loc: 1.0 },
        ]),
        "loggamma" => Some([0.5, 1.5, 3.0].map(|alpha| LogGamma { alpha, beta: 2.0 }).to_vec()),
        "shifted_gamma" => Some([0.5, 2.0, 8.0].map(shifted_gamma_mean_ten).to_vec()),
        _ => None,
    }
}

/// Simulates each distribution of a preset (stream `(seed, i)` for panel `i`)
/// and evaluates `t̂` at every order statistic up to the `0.995` quantile.
pub fn figure2_curves(preset: &str, n: usize, seed: u64) -> Result<Figure2> {
    let dists = figure2_distributions(preset).ok_or_else(|| {
        Error::InvalidSample(format!(
            "unknown figure preset `{preset}` (expected one of {})",
            FIGURE2_PRESETS.join(", ")
        ))
    })?;
    let curves = dists
        .into_iter()
        .enumerate()
        .map(|(i, dist)| {
            let sample = dist.sample(n, RngStream::new(seed, i as u64))?;
            let u_max = sample.quantile(0.995);
            let k_max = sample.values().partition_point(|&x| x <= u_max).clamp(1, n - 1);
            let points = tail_curve(&sample, k_max)?;
            Ok(SimulatedCurve { dist, u_max, points })
        })
        .collect::<Result<_>>()?;
    let reference = [1.0, 2.0]
        .iter()
        .map(|&a| (a, pareto_tail_value(Alpha::new(a).expect("positive"))))
        .collect();
    Ok(Figure2 {
        preset: preset.to_string(),
        n,
        seed,
        curves,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn pareto(alpha: f64) -> DistributionSpec {
        DistributionSpec::ParetoI { x_m: 1.0, alpha }
    }

    #[test]
    fn sample_size_rule() {
        assert_eq!(required_n(&pareto(1.0), 2.0, 20.0).unwrap(), 80);
        assert_eq!(required_n(&pareto(1.0), 1.0, 20.0).unwrap(), 20);
        assert_eq!(required_n(&pareto(1.0), 2.0, 160.0).unwrap(), 640);
        assert_eq!(required_n(&pareto(1.0), 1.0, 1.0).unwrap(), 4);
        assert_eq!(required_n(&pareto(3.0), 3.0, 20.0).unwrap(), 14580);
        let w = DistributionSpec::Weibull { k: 2.0, scale: 1.0 };
        assert_eq!(required_n(&w, 1e3, 20.0), Err(Error::DegenerateThreshold { u: 1e3 }));
    }

    #[test]
    fn true_value_uses_closed_form_for_pareto() {
        assert!((true_tail_value(&pareto(1.0), 2.0).unwrap() - (2.0 * LN_2 - 1.0)).abs() < 1e-15);
        let p2 = DistributionSpec::ParetoII { theta: 5.0, alpha: 1.5, loc: 1.0 };
        assert!(true_tail_value(&p2, 10.0).unwrap() > 0.0);
    }

    #[test]
    fn validation() {
        let mut c = preset("smoke", 0, 50, 1).unwrap().remove(0);
        assert!(c.validate().is_ok());
        c.reps = 99;
        assert!(c.validate().is_err());
        c.reps = 100;
        c.level = 1.0;
        assert!(c.validate().is_err());
        c.level = 0.95;
        c.methods.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn accounting_and_determinism() {
        let config = CoverageConfig {
            dist: pareto(1.0),
            u: 2.0,
            n_eff: 10.0,
            level: 0.95,
            reps: 200,
            methods: table_methods(49),
            seed: 17,
        };
        let a = run_coverage(&config).unwrap();
        for m in &a.methods {
            assert_eq!(m.evaluated + m.dropped, config.reps);
            assert!((0.0..=100.0).contains(&m.coverage));
            let p = m.covered as f64 / m.evaluated as f64;
            assert!((m.std_error - 100.0 * (p * (1.0 - p) / m.evaluated as f64).sqrt()).abs() < 1e-12);
        }
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = single.install(|| run_coverage(&config).unwrap());
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn presets_exist() {
        assert_eq!(preset("table1", 1000, 199, 1).unwrap().len(), 10);
        assert_eq!(preset("table2", 1000, 199, 1).unwrap().len(), 5);
        assert!(preset("nope", 1000, 199, 1).is_none());
        let table = render_table(&run_coverage(&preset("smoke", 0, 19, 3).unwrap()[0]).map(|r| vec![r]).unwrap());
        assert!(table.starts_with("distribution"));
        assert_eq!(table.lines().count(), 2);
    }

    #[test]
    fn figure2_shape() {
        let fig = figure2_curves("shifted_gamma", 2000, 5).unwrap();
        assert_eq!(fig.curves.len(), 3);
        assert_eq!(fig.reference.len(), 2);
        assert!((fig.reference[0].1 - (2.0 * LN_2 - 1.0)).abs() < 1e-15);
        for c in &fig.curves {
            assert!(c.points.last().unwrap().u <= c.u_max);
            assert!(c.points.iter().all(|p| p.m >= 2));
        }
        assert!(figure2_curves("bogus", 100, 1).is_err());
    }
}
