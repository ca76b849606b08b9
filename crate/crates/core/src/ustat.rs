//! The pair-sum estimator of the tail functional.
//!
//! For a threshold `u`, the estimator averages `|x₁ − x₂| / (x₁ + x₂)` over all
//! pairs of observations that are both `≥ u`. Evaluated at the order
//! statistics it is a U-statistic on the upper tail of the sample.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive, finite observations in ascending order; at least two of them.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientSample {
                n: values.len(),
                required: 2,
            });
        }
        if let Some((i, x)) = values
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.is_finite() && **x > 0.0))
        {
            return Err(Error::InvalidSample(format!(
                "observation {} is {x}, expected a positive finite value",
                i + 1
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(SortedSample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the first observation `≥ u`.
    pub fn first_at_or_above(&self, u: f64) -> usize {
        self.values.partition_point(|&x| x < u)
    }

    /// Observations `≥ u`, ascending.
    pub fn exceedances(&self, u: f64) -> &[f64] {
        &self.values[self.first_at_or_above(u)..]
    }

    /// The empirical `q`-quantile (type 7, linear interpolation).
    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.values.len();
        let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(n - 1);
        self.values[lo] + (h - lo as f64) * (self.values[hi] - self.values[lo])
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        SortedSample::new(self.values.iter().map(|x| c * x).collect())
    }
}

impl TryFrom<Vec<f64>> for SortedSample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        SortedSample::new(values)
    }
}

/// Values of the two U-statistics at a threshold and the exceedance count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairStats {
    pub u: f64,
    pub u1: f64,
    pub u2: f64,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub u: f64,
    pub m: usize,
    pub t_hat: f64,
}

/// `|x₁ − x₂| / (x₁ + x₂)` when both arguments are `≥ u`, else 0.
#[inline]
pub fn kernel_h1(x1: f64, x2: f64, u: f64) -> f64 {
    if x1.min(x2) >= u {
        (x1 - x2).abs() / (x1 + x2)
    } else {
        0.0
    }
}

/// Indicator that both arguments are `≥ u`.
#[inline]
pub fn kernel_h2(x1: f64, x2: f64, u: f64) -> f64 {
    if x1.min(x2) >= u {
        1.0
    } else {
        0.0
    }
}

pub fn exceedance_count(sample: &SortedSample, u: f64) -> usize {
    sample.len() - sample.first_at_or_above(u)
}

/// `U_n^(2)(u) = m(m − 1) / (n(n − 1))`.
pub fn pair_fraction(n: usize, m: usize) -> f64 {
    (m as f64 * (m as f64 - 1.0)) / (n as f64 * (n as f64 - 1.0))
}

pub(crate) fn pairs(m: usize) -> f64 {
    m as f64 * (m as f64 - 1.0) / 2.0
}

/// Exact double loop over every pair of the full sample.
pub fn brute_force_estimate(sample: &SortedSample, u: f64) -> Result<(PairStats, TailEstimate)> {
    let x = sample.values();
    let n = x.len();
    let mut sum1 = 0.0;
    let mut sum2 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum1 += kernel_h1(x[i], x[j], u);
            sum2 += kernel_h2(x[i], x[j], u);
        }
    }
    let m = exceedance_count(sample, u);
    if m < 2 {
        return Err(Error::InsufficientExceedances { m, required: 2 });
    }
    let norm = pairs(n);
    let stats = PairStats {
        u,
        u1: sum1 / norm,
        u2: sum2 / norm,
        m,
    };
    Ok((
        stats,
        TailEstimate {
            u,
            m,
            t_hat: sum1 / sum2,
        },
    ))
}

/// Sum of `(x_j − x_i) / (x_i + x_j)` over `i < j` of an ascending slice.
pub(crate) fn pair_sum(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, &xi)| forward_row(xi, &x[i + 1..]))
        .sum()
}

#[inline]
pub(crate) fn forward_row(xi: f64, rest: &[f64]) -> f64 {
    rest.iter().map(|&xj| (xj - xi) / (xj + xi)).sum()
}

/// The estimate at a single threshold in `O(m²)`, touching exceedances only.
pub fn estimate(sample: &SortedSample, u: f64) -> Result<TailEstimate> {
    let exc = sample.exceedances(u);
    let m = exc.len();
    if m < 2 {
        return Err(Error::InsufficientExceedances { m, required: 2 });
    }
    Ok(TailEstimate {
        u,
        m,
        t_hat: pair_sum(exc) / pairs(m),
    })
}

/// `t̂` at the order statistics `X_(1), …, X_(k_max)` in `O(n²)` total.
///
/// The pair sum over the top `n − k + 1` observations is accumulated from
/// the top down, adding the row of `X_(k)` against everything above it.
/// Rows are independent and may be computed in parallel; the accumulation
/// runs in a fixed order so the result does not depend on the thread count.
pub fn tail_curve(sample: &SortedSample, k_max: usize) -> Result<Vec<TailEstimate>> {
    let x = sample.values();
    let n = x.len();
    if k_max == 0 || k_max > n - 1 {
        return Err(Error::IndexOutOfRange { k: k_max, max: n - 1 });
    }
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| forward_row(x[i], &x[i + 1..]))
        .collect();
    // suffix[i] = pair sum over x[i..].
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + rows[i];
    }
    Ok((0..k_max)
        .map(|k| {
            // Ties with X_(k) below index k are exceedances too.
            let start = sample.first_at_or_above(x[k]);
            let m = n - start;
            TailEstimate {
                u: x[k],
                m,
                t_hat: suffix[start] / pairs(m),
            }
        })
        .collect())
}
