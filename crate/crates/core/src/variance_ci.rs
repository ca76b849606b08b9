//! Variance estimators for the tail estimate and the normal confidence
//! intervals built from them.
//!
//! All three estimators are reported on the scale of the asymptotic variance
//! `σ_u²` of `√(n ν_u) (t̂ − t(u))`, so one interval formula serves them all:
//! `t̂ ± z σ̂_u / √(n U₂)`, clipped to `[0, 1]`.
//!
//! Everything a threshold needs lives on its exceedances: both kernels vanish
//! unless both arguments are `≥ u`. With `r_ab = |x_a − x_b| / (x_a + x_b)`
//! over exceedances, row sums `R_a = Σ_b r_ab`, `A = Σ_{a<b} r_ab` and
//! `Q = Σ_{a<b} r_ab²`, the general `O(n²)` U-statistic sums collapse to
//! `O(m²)` work.

use std::fmt;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::ustat::{forward_row, pair_fraction, pairs, tail_curve, SortedSample};

pub const DEFAULT_BOOTSTRAP_REPS: usize = 999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarianceMethod {
    /// Plug-in of the unbiased U-statistic variance and covariance estimates.
    Unbiased,
    /// Delete-one jackknife over the exceedances.
    Jackknife,
    /// Nonparametric bootstrap of the full sample.
    Bootstrap { reps: usize, seed: u64 },
}

impl VarianceMethod {
    pub fn name(&self) -> &'static str {
        match self {
            VarianceMethod::Unbiased => "unbiased",
            VarianceMethod::Jackknife => "jackknife",
            VarianceMethod::Bootstrap { .. } => "bootstrap",
        }
    }

    /// Fewest exceedances for which the estimator is defined.
    pub fn min_exceedances(&self) -> usize {
        match self {
            VarianceMethod::Unbiased => 4,
            VarianceMethod::Jackknife => 3,
            VarianceMethod::Bootstrap { .. } => 2,
        }
    }
}

impl fmt::Display for VarianceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Estimates of `ζ_0, ζ_1, ζ_2` and the row/pair sums they derive from, for
/// a degree-2 U-statistic `U_n = Σ_{i≠j} h(X_i, X_j) / (n(n − 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UStatMoments {
    pub n: usize,
    pub u_stat: f64,
    pub zeta0: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    /// `C₁² = Σ_i S_i²` with `S_i = Σ_{j≠i} h(X_i, X_j)`.
    pub c1sq: f64,
    /// `C₂² = Σ_{i≠j} h(X_i, X_j)²`.
    pub c2sq: f64,
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

impl UStatMoments {
    pub fn new<K: Fn(f64, f64) -> f64>(sample: &SortedSample, kernel: K) -> Result<Self> {
        let x = sample.values();
        let n = x.len();
        if n < 4 {
            return Err(Error::InsufficientSample { n, required: 4 });
        }
        let (mut total, mut c1sq, mut c2sq) = (0.0, 0.0, 0.0);
        for (i, &xi) in x.iter().enumerate() {
            let mut s = 0.0;
            for (j, &xj) in x.iter().enumerate() {
                if i != j {
                    let h = kernel(xi, xj);
                    s += h;
                    c2sq += h * h;
                }
            }
            total += s;
            c1sq += s * s;
        }
        let u_stat = total / falling(n, 2);
        Ok(UStatMoments {
            n,
            u_stat,
            zeta0: (total * total - 4.0 * c1sq + 2.0 * c2sq) / falling(n, 4),
            zeta1: (c1sq - c2sq) / falling(n, 3),
            zeta2: c2sq / falling(n, 2),
            c1sq,
            c2sq,
        })
    }

    /// `(4C₁² − 2C₂²) / n⁽⁴⁾ − (4n − 6) / ((n − 2)(n − 3)) · U_n²`.
    pub fn variance(&self) -> f64 {
        let n = self.n as f64;
        (4.0 * self.c1sq - 2.0 * self.c2sq) / falling(self.n, 4)
            - (4.0 * n - 6.0) / ((n - 2.0) * (n - 3.0)) * self.u_stat * self.u_stat
    }

    /// `2 / (n(n − 1)) · {2(n − 2) ζ̂₁ + ζ̂₂ − (2n − 3) ζ̂₀}`; algebraically the
    /// same as [`Self::variance`].
    pub fn variance_zeta_form(&self) -> f64 {
        let n = self.n as f64;
        2.0 / (n * (n - 1.0))
            * (2.0 * (n - 2.0) * self.zeta1 + self.zeta2 - (2.0 * n - 3.0) * self.zeta0)
    }
}

/// Minimum variance unbiased estimate of `Var(U_n)`. May be negative.
pub fn ustat_var_unbiased<K: Fn(f64, f64) -> f64>(sample: &SortedSample, kernel: K) -> Result<f64> {
    Ok(UStatMoments::new(sample, kernel)?.variance())
}

/// Unbiased estimate of `Cov(U_n^(1), U_n^(2))` for two kernels on one sample.
pub fn ustat_cov_unbiased<K1, K2>(sample: &SortedSample, kernel1: K1, kernel2: K2) -> Result<f64>
where
    K1: Fn(f64, f64) -> f64,
    K2: Fn(f64, f64) -> f64,
{
    let x = sample.values();
    let n = x.len();
    if n < 4 {
        return Err(Error::InsufficientSample { n, required: 4 });
    }
    let (mut t1, mut t2, mut c1, mut c2) = (0.0, 0.0, 0.0, 0.0);
    for (i, &xi) in x.iter().enumerate() {
        let (mut s1, mut s2) = (0.0, 0.0);
        for (j, &xj) in x.iter().enumerate() {
            if i != j {
                let (h1, h2) = (kernel1(xi, xj), kernel2(xi, xj));
                s1 += h1;
                s2 += h2;
                c2 += h1 * h2;
            }
        }
        t1 += s1;
        t2 += s2;
        c1 += s1 * s2;
    }
    let nf = n as f64;
    let (u1, u2) = (t1 / falling(n, 2), t2 / falling(n, 2));
    Ok((4.0 * c1 - 2.0 * c2) / falling(n, 4) - (4.0 * nf - 6.0) / ((nf - 2.0) * (nf - 3.0)) * u1 * u2)
}

/// Pair sums of the exceedances of one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceSums {
    pub n: usize,
    pub m: usize,
    /// `A = Σ_{a<b} r_ab`.
    pub pair_sum: f64,
    /// `Q = Σ_{a<b} r_ab²`.
    pub square_sum: f64,
    /// `Σ_a R_a²`.
    pub row_square_sum: f64,
    /// `Σ_a (R_a − R̄)²`, accumulated directly where the rows are available.
    row_spread: f64,
}

impl ExceedanceSums {
    pub fn new(sample: &SortedSample, u: f64) -> Self {
        let exc = sample.exceedances(u);
        let m = exc.len();
        let mut rows = vec![0.0; m];
        let mut pair_sum = 0.0;
        let mut square_sum = 0.0;
        for a in 0..m {
            let mut row = 0.0;
            for b in (a + 1)..m {
                let r = (exc[b] - exc[a]) / (exc[a] + exc[b]);
                row += r;
                square_sum += r * r;
                rows[b] += r;
            }
            rows[a] += row;
            pair_sum += row;
        }
        let mean = if m > 0 { rows.iter().sum::<f64>() / m as f64 } else { 0.0 };
        ExceedanceSums {
            n: sample.len(),
            m,
            pair_sum,
            square_sum,
            row_square_sum: rows.iter().map(|r| r * r).sum(),
            row_spread: rows.iter().map(|r| (r - mean) * (r - mean)).sum(),
        }
    }

    fn require(&self, required: usize) -> Result<()> {
        if self.m < required {
            Err(Error::InsufficientExceedances { m: self.m, required })
        } else {
            Ok(())
        }
    }

    pub fn t_hat(&self) -> f64 {
        self.pair_sum / pairs(self.m)
    }

    /// `n U₂ = m(m − 1) / (n − 1)`, the effective number of pairs per observation.
    pub fn n_u2(&self) -> f64 {
        self.n as f64 * pair_fraction(self.n, self.m)
    }

    /// Plug-in `σ̂_u² = n / U₂ · (σ̂²_{U1} − 2 t̂ σ̂_{U1,U2} + t̂² σ̂²_{U2})`,
    /// floored at zero. Needs `m ≥ 4`.
    pub fn plugin_variance(&self) -> Result<f64> {
        self.require(4)?;
        let n = self.n as f64;
        let m = self.m as f64;
        let n2 = falling(self.n, 2);
        let n4 = falling(self.n, 4);
        let k = (4.0 * n - 6.0) / ((n - 2.0) * (n - 3.0));
        let a = self.pair_sum;
        let u1 = 2.0 * a / n2;
        let u2 = m * (m - 1.0) / n2;
        // C₁², C₂² per kernel pair, from S_i = R_i (h1) and S_i = m − 1 (h2).
        let v11 = (4.0 * self.row_square_sum - 4.0 * self.square_sum) / n4 - k * u1 * u1;
        let v12 = (8.0 * (m - 1.0) * a - 4.0 * a) / n4 - k * u1 * u2;
        let v22 = (4.0 * m * (m - 1.0) * (m - 1.0) - 2.0 * m * (m - 1.0)) / n4 - k * u2 * u2;
        let t = a / pairs(self.m);
        Ok((n / u2 * (v11 - 2.0 * t * v12 + t * t * v22)).max(0.0))
    }

    /// Delete-one jackknife variance of `t̂` itself, before rescaling:
    /// `(m − 1)/m · Σ (t̂_(−a) − t̄)²` with `t̂_(−a) = (A − R_a) / C(m − 1, 2)`.
    pub fn jackknife_variance_direct(&self) -> Result<f64> {
        self.require(3)?;
        let m = self.m as f64;
        let c = pairs(self.m - 1);
        Ok((m - 1.0) / m * self.row_spread / (c * c))
    }

    /// Jackknife variance rescaled to the `σ_u²` scale. Needs `m ≥ 3`.
    pub fn jackknife_variance(&self) -> Result<f64> {
        Ok(self.jackknife_variance_direct()? * self.n_u2())
    }
}

/// Plug-in `σ̂_u²` from the unbiased U-statistic (co)variance estimates.
pub fn sigma_hat_plugin(sample: &SortedSample, u: f64) -> Result<f64> {
    ExceedanceSums::new(sample, u).plugin_variance()
}

/// Jackknife estimate of `σ_u²`.
pub fn sigma_hat_jackknife(sample: &SortedSample, u: f64) -> Result<f64> {
    ExceedanceSums::new(sample, u).jackknife_variance()
}

/// Bootstrap estimate of `σ_u²` from `reps` resamples of the full sample.
///
/// Only the exceedances of a resample matter, so each replicate draws its
/// exceedance count `m* ~ Binomial(n, m/n)` and then `m*` exceedances
/// uniformly with replacement — the same law as resampling all `n` points.
/// Replicates with `m* < 2` are dropped; more than half dropped is an error.
/// Replicate `i` uses stream `(seed, i)`, so the result does not depend on
/// the thread count.
pub fn sigma_hat_bootstrap(sample: &SortedSample, u: f64, reps: usize, seed: u64) -> Result<f64> {
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            value: 0.0,
            reason: "need at least one bootstrap replicate",
        });
    }
    let exc = sample.exceedances(u);
    let n = sample.len();
    let m = exc.len();
    if m < 2 {
        return Err(Error::InsufficientExceedances { m, required: 2 });
    }
    let binomial = Binomial::new(n as u64, m as f64 / n as f64).expect("0 < m/n ≤ 1");
    let replicates: Vec<Option<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = RngStream::new(seed, rep as u64).rng();
            let m_star = binomial.sample(&mut rng) as usize;
            if m_star < 2 {
                return None;
            }
            let mut counts = vec![0u32; m];
            for _ in 0..m_star {
                counts[rng.random_range(0..m)] += 1;
            }
            Some(weighted_pair_sum(exc, &counts) / pairs(m_star))
        })
        .collect();
    let kept: Vec<f64> = replicates.into_iter().flatten().collect();
    let dropped = reps - kept.len();
    if 2 * dropped > reps {
        return Err(Error::UnstableBootstrap { dropped, reps });
    }
    if kept.len() < 2 {
        return Ok(0.0);
    }
    let mean = kept.iter().sum::<f64>() / kept.len() as f64;
    let var = kept.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (kept.len() - 1) as f64;
    Ok(var * n as f64 * pair_fraction(n, m))
}

/// `Σ_{a<b} w_a w_b r_ab` over the exceedances drawn at least once.
fn weighted_pair_sum(exc: &[f64], counts: &[u32]) -> f64 {
    let drawn: Vec<(f64, f64)> = counts
        .iter()
        .zip(exc)
        .filter(|(&w, _)| w > 0)
        .map(|(&w, &x)| (x, w as f64))
        .collect();
    let mut total = 0.0;
    for (i, &(xa, wa)) in drawn.iter().enumerate() {
        let row: f64 = drawn[i + 1..].iter().map(|&(xb, wb)| wb * (xb - xa) / (xb + xa)).sum();
        total += wa * row;
    }
    total
}

/// `Φ⁻¹(p)`.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("level", level, "must lie strictly between 0 and 1"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub level: f64,
    pub t_hat: f64,
    pub lo: f64,
    pub hi: f64,
    pub sigma_hat: f64,
    pub method: VarianceMethod,
}

/// `[max(t̂ − h, 0), min(t̂ + h, 1)]` with `h = z_{(1+level)/2} σ̂ / √(n U₂)`.
pub fn interval_bounds(t_hat: f64, sigma_hat: f64, n_u2: f64, level: f64) -> (f64, f64) {
    let half = normal_quantile(0.5 + 0.5 * level) * sigma_hat / n_u2.sqrt();
    ((t_hat - half).max(0.0), (t_hat + half).min(1.0))
}

pub fn confidence_interval(
    sample: &SortedSample,
    u: f64,
    level: f64,
    method: VarianceMethod,
) -> Result<ConfidenceInterval> {
    check_level(level)?;
    let sums = ExceedanceSums::new(sample, u);
    sums.require(2)?;
    let var = match method {
        VarianceMethod::Unbiased => sums.plugin_variance()?,
        VarianceMethod::Jackknife => sums.jackknife_variance()?,
        VarianceMethod::Bootstrap { reps, seed } => sigma_hat_bootstrap(sample, u, reps, seed)?,
    };
    let t_hat = sums.t_hat();
    let sigma_hat = var.sqrt();
    let (lo, hi) = interval_bounds(t_hat, sigma_hat, sums.n_u2(), level);
    Ok(ConfidenceInterval {
        level,
        t_hat,
        lo,
        hi,
        sigma_hat,
        method,
    })
}

/// A point of the tail plot with its pointwise interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub u: f64,
    pub m: usize,
    pub t_hat: f64,
    pub lo: f64,
    pub hi: f64,
    /// `None` where the variance estimator is undefined (too few
    /// exceedances); the interval then collapses to `[t̂, t̂]`.
    pub sigma_hat: Option<f64>,
}

/// `t̂` and its interval at `X_(1), …, X_(k_max)`.
///
/// The plug-in and jackknife variances only need `A`, `Q` and `Σ R_a²` per
/// threshold; these are carried from the top of the sample downwards, so the
/// whole curve costs `O(n²)`. The bootstrap is evaluated per threshold.
pub fn interval_curve(
    sample: &SortedSample,
    k_max: usize,
    level: f64,
    method: VarianceMethod,
) -> Result<Vec<CurvePoint>> {
    check_level(level)?;
    let curve = tail_curve(sample, k_max)?;
    let x = sample.values();
    let n = x.len();
    let running = match method {
        VarianceMethod::Bootstrap { .. } => None,
        _ => Some(running_sums(x)),
    };
    curve
        .iter()
        .map(|est| {
            let start = n - est.m;
            let var = match (method, &running) {
                (VarianceMethod::Bootstrap { reps, seed }, _) => {
                    if est.m >= 2 {
                        Some(sigma_hat_bootstrap(sample, est.u, reps, seed)?)
                    } else {
                        None
                    }
                }
                (_, Some(sums)) => {
                    let s = sums.at(n, start);
                    match method {
                        VarianceMethod::Unbiased if s.m >= 4 => Some(s.plugin_variance()?),
                        VarianceMethod::Jackknife if s.m >= 3 => Some(s.jackknife_variance()?),
                        _ => None,
                    }
                }
                _ => None,
            };
            let sigma_hat = var.map(f64::sqrt);
            let (lo, hi) = match sigma_hat {
                Some(s) => interval_bounds(est.t_hat, s, n as f64 * pair_fraction(n, est.m), level),
                None => (est.t_hat, est.t_hat),
            };
            Ok(CurvePoint {
                u: est.u,
                m: est.m,
                t_hat: est.t_hat,
                lo,
                hi,
                sigma_hat,
            })
        })
        .collect()
}

/// `A`, `Q`, `Σ R²` for every suffix `x[i..]` of an ascending sample.
struct RunningSums {
    pair_sum: Vec<f64>,
    square_sum: Vec<f64>,
    row_square_sum: Vec<f64>,
}

impl RunningSums {
    fn at(&self, n: usize, start: usize) -> ExceedanceSums {
        let m = n - start;
        let (a, r2) = (self.pair_sum[start], self.row_square_sum[start]);
        ExceedanceSums {
            n,
            m,
            pair_sum: a,
            square_sum: self.square_sum[start],
            row_square_sum: r2,
            row_spread: (r2 - 4.0 * a * a / m as f64).max(0.0),
        }
    }
}

fn running_sums(x: &[f64]) -> RunningSums {
    let n = x.len();
    let mut rows = vec![0.0; n];
    let mut out = RunningSums {
        pair_sum: vec![0.0; n + 1],
        square_sum: vec![0.0; n + 1],
        row_square_sum: vec![0.0; n + 1],
    };
    for i in (0..n).rev() {
        // Adding x_i raises every row above it by r_ij and opens its own row.
        let (mut own, mut squares, mut cross) = (0.0, 0.0, 0.0);
        for j in (i + 1)..n {
            let r = (x[j] - x[i]) / (x[j] + x[i]);
            own += r;
            squares += r * r;
            cross += 2.0 * rows[j] * r + r * r;
            rows[j] += r;
        }
        rows[i] = own;
        out.pair_sum[i] = out.pair_sum[i + 1] + own;
        out.square_sum[i] = out.square_sum[i + 1] + squares;
        out.row_square_sum[i] = out.row_square_sum[i + 1] + cross + own * own;
    }
    debug_assert!((out.pair_sum[0] - (0..n).map(|i| forward_row(x[i], &x[i + 1..])).sum::<f64>()).abs() <= 1e-9 * (1.0 + out.pair_sum[0]));
    out
}
