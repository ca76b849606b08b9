//! Theoretical values of the tail functional.
//!
//! Under a Pareto law with shape `α` the functional
//! `t(u) = E[|X₁ − X₂| / (X₁ + X₂) | min(X₁, X₂) ≥ u]` does not depend on `u`;
//! its constant value `t̃_α` has a closed form through the digamma function,
//! decreases strictly from 1 (as `α → 0`) to 0 (as `α → ∞`) and can therefore
//! be inverted to read off a tail index. For other families `t(u)` is computed
//! by nested quadrature over the conditional density of
//! `Z = (X_(2) − X_(1)) / (X_(1) + X_(2))` given the smaller observation.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::special::digamma_unchecked;

/// Pareto shape parameter: positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Alpha(value))
        } else {
            Err(Error::domain("alpha", value, "must be positive and finite"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

/// A value of the tail functional, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TailValue(f64);

impl TailValue {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(TailValue(value))
        } else {
            Err(Error::domain("t", value, "must lie strictly between 0 and 1"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TailValue {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        TailValue::new(value)
    }
}

impl From<TailValue> for f64 {
    fn from(t: TailValue) -> f64 {
        t.0
    }
}

const INTEGER_TOLERANCE: f64 = 1e-9;
// Above this the alternating sum costs O(α) and loses digits; the digamma
// form is smooth across integers anyway.
const INTEGER_BRANCH_MAX: f64 = 10_000.0;

pub const ALPHA_BRACKET: (f64, f64) = (1e-8, 1e8);

/// `t̃_α`, the constant value of the tail functional under a Pareto law.
///
/// Integer `α` use `2α Σ_{k=1}^{α−1} (−1)^{α+1−k}/k + (−1)^{α+1} 2α ln 2 − 1`;
/// all other `α` use `α (Ψ((α+1)/2) − Ψ(α/2)) − 1`.
pub fn pareto_tail_value(alpha: Alpha) -> f64 {
    let a = alpha.get();
    if a >= ASYMPTOTIC_FROM {
        return asymptotic_form(a);
    }
    let rounded = a.round();
    if rounded >= 1.0 && rounded <= INTEGER_BRANCH_MAX && (a - rounded).abs() < INTEGER_TOLERANCE {
        integer_tail_value(rounded as u64)
    } else {
        digamma_form(a)
    }
}

fn digamma_form(a: f64) -> f64 {
    if a >= ASYMPTOTIC_FROM {
        return asymptotic_form(a);
    }
    a * (digamma_unchecked(0.5 * (a + 1.0)) - digamma_unchecked(0.5 * a)) - 1.0
}

// For large α both exact forms subtract numbers near 1 to produce O(1/α);
// the digamma difference alone loses ~α·1e-16. Switch to the expansion
// Ψ((α+1)/2) − Ψ(α/2) = 2 Σ_k (−1)^k / (α + k) ~ Σ (−1)^{j+1} T_j / (2^{2j} α^{2j}),
// with T_j the tangent numbers; at α ≥ 30 the first omitted term is < 1e-16.
const ASYMPTOTIC_FROM: f64 = 30.0;
const TANGENT_COEFFS: [f64; 6] = [
    0.5,
    -0.25,
    0.5,
    -17.0 / 8.0,
    31.0 / 2.0,
    -691.0 / 4.0,
];

fn asymptotic_form(a: f64) -> f64 {
    let inv2 = 1.0 / (a * a);
    let poly = TANGENT_COEFFS.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c);
    poly / a
}

fn integer_tail_value(alpha: u64) -> f64 {
    let a = alpha as f64;
    // Smallest terms first.
    let mut sum = 0.0;
    for k in (1..alpha).rev() {
        let sign = if (alpha + 1 - k) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / k as f64;
    }
    let sign = if (alpha + 1) % 2 == 0 { 1.0 } else { -1.0 };
    2.0 * a * sum + sign * 2.0 * a * LN_2 - 1.0
}

/// Convenience wrapper over [`pareto_tail_value`] for raw values.
pub fn tail_value(alpha: f64) -> Result<f64> {
    Ok(pareto_tail_value(Alpha::new(alpha)?))
}

/// `t̃_α = 2 ∫₀¹ y^α / (1 + y)² dy` by adaptive quadrature.
pub fn pareto_tail_value_quadrature(alpha: Alpha) -> Result<f64> {
    let a = alpha.get();
    let q = Quadrature::with_tolerance(1e-13, 1e-13);
    let r = q.integrate(|y| 2.0 * y.powf(a) / ((1.0 + y) * (1.0 + y)), 0.0, 1.0)?;
    Ok(r.value)
}

/// The unique `α` with `t̃_α = t`, by bisection on `ln α` over
/// [`ALPHA_BRACKET`] until the bracket is narrower than `1e-12`.
pub fn invert_tail_value(t: TailValue) -> Result<Alpha> {
    let target = t.get();
    let (lo_alpha, hi_alpha) = ALPHA_BRACKET;
    // The integer branch is constant on a ±1e-9 window, which would stall
    // bisection at the window's edge; the digamma form is strictly monotone.
    let at = |ln_alpha: f64| digamma_form(ln_alpha.exp());
    let mut lo = lo_alpha.ln();
    let mut hi = hi_alpha.ln();
    // Decreasing: large t needs small α.
    if target >= at(lo) || target <= at(hi) {
        return Err(Error::OutOfBracket {
            t: target,
            lo: lo_alpha,
            hi: hi_alpha,
        });
    }
    while hi - lo >= 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Alpha::new((0.5 * (lo + hi)).exp())
}

/// Convenience wrapper over [`invert_tail_value`] for raw values.
pub fn alpha_for(t: f64) -> Result<f64> {
    Ok(invert_tail_value(TailValue::new(t)?)?.get())
}

/// Pareto limit density `g̃_α(z) = 2α (1 + z)^{−(α+1)} (1 − z)^{α−1}`.
pub fn pareto_limit_density(alpha: Alpha, z: f64) -> Result<f64> {
    check_unit(z)?;
    let a = alpha.get();
    Ok(2.0 * a * (-(a + 1.0) * z.ln_1p() + (a - 1.0) * (-z).ln_1p()).exp())
}

fn check_unit(z: f64) -> Result<()> {
    if (0.0..1.0).contains(&z) {
        Ok(())
    } else {
        Err(Error::domain("z", z, "must lie in [0, 1)"))
    }
}

/// Density of `Z = (X_(2) − X_(1)) / (X_(1) + X_(2))` given `X_(1) = u`:
/// `g(z | u) = 2u f(u(1+z)/(1−z)) / ((1 − z)² F̄(u))`.
pub fn huge_jump_density(dist: &DistributionSpec, u: f64, z: f64) -> Result<f64> {
    check_unit(z)?;
    let ln_sf_u = conditioning(dist, u)?;
    Ok(conditional_density(dist, u, ln_sf_u, 1.0 - z))
}

/// Validates `u` and returns `ln F̄(u)`.
fn conditioning(dist: &DistributionSpec, u: f64) -> Result<f64> {
    dist.validate()?;
    if !(u.is_finite() && u >= dist.left_endpoint() && u > 0.0) {
        return Err(Error::domain(
            "u",
            u,
            "threshold must be positive and not below the left endpoint",
        ));
    }
    let ln_sf = dist.ln_survival(u);
    if ln_sf == f64::NEG_INFINITY {
        return Err(Error::DegenerateConditioning { u });
    }
    Ok(ln_sf)
}

// Takes 1 − z directly so that z → 1 keeps full precision.
fn conditional_density(dist: &DistributionSpec, u: f64, ln_sf_u: f64, one_minus_z: f64) -> f64 {
    if one_minus_z <= 0.0 {
        return 0.0;
    }
    let ln_x = u.ln() + (2.0 - one_minus_z).ln() - one_minus_z.ln();
    let ln_f = dist.ln_density_at_log(ln_x);
    if ln_f == f64::NEG_INFINITY {
        return 0.0;
    }
    (LN_2 + u.ln() + ln_f - 2.0 * one_minus_z.ln() - ln_sf_u).exp()
}

/// `∫₀¹ φ(z) g(z|e^{ln_u}) dz` with the substitution `z = 1 − e^{−w}`, which
/// turns the `(1 − z)^{α−1}` endpoint behaviour into decay in `w`. Everything
/// is carried in logs: for log-Cauchy a visible share of the mass sits at
/// `X / u` beyond the `f64` range.
fn integrate_conditional<P: Fn(f64) -> f64>(
    dist: &DistributionSpec,
    ln_u: f64,
    ln_sf_u: f64,
    weight: P,
    q: &Quadrature,
) -> Result<f64> {
    let r = q.integrate_to_infinity(
        |w| {
            // x = u (2 − e^{−w}) e^{w};  g(z) dz/dw = 2 u f(x) e^{w} / F̄(u).
            let ln_x = ln_u + w + LN_2 + (-0.5 * (-w).exp()).ln_1p();
            let ln_f = dist.ln_density_at_log(ln_x);
            if ln_f == f64::NEG_INFINITY {
                return 0.0;
            }
            weight(-(-w).exp_m1()) * (LN_2 + ln_u + ln_f + w - ln_sf_u).exp()
        },
        0.0,
    )?;
    Ok(r.value)
}

/// `∫₀¹ g(z|u) dz`; equals 1 up to quadrature error.
pub fn huge_jump_mass(dist: &DistributionSpec, u: f64) -> Result<f64> {
    let ln_sf_u = conditioning(dist, u)?;
    integrate_conditional(dist, u.ln(), ln_sf_u, |_| 1.0, &Quadrature::with_tolerance(1e-11, 1e-11))
}

/// `E[Z | X_(1) = u] = ∫₀¹ z g(z|u) dz`.
pub fn huge_jump_mean(dist: &DistributionSpec, u: f64) -> Result<f64> {
    let ln_sf_u = conditioning(dist, u)?;
    integrate_conditional(dist, u.ln(), ln_sf_u, |z| z, &Quadrature::with_tolerance(1e-11, 1e-11))
}

/// Relative mass of the outer integrand allowed beyond the truncation point.
const OUTER_TAIL_MASS: f64 = 1e-10;
const OUTER_RANGE_LIMIT: f64 = 1e12;

/// Numerical `t(u) = E[Z | X_(1) ≥ u]`.
///
/// Integrates `E[Z | X_(1) = s]` against the density `2 f(s) F̄(s)` of the
/// minimum over `s ≥ u`, normalised by `F̄(u)²`. The outer variable is
/// `s = u e^v`; the range stops where the remaining mass of the minimum,
/// `F̄(s)² / F̄(u)²`, drops below `1e-10`.
pub fn theoretical_tail_value(dist: &DistributionSpec, u: f64) -> Result<f64> {
    let ln_sf_u = conditioning(dist, u)?;
    let ln_u = u.ln();
    let ln_cut = 0.5 * OUTER_TAIL_MASS.ln();
    let mut v_max: f64 = 1.0;
    while dist.ln_survival_at_log(ln_u + v_max) - ln_sf_u > ln_cut {
        v_max *= 2.0;
        if v_max > OUTER_RANGE_LIMIT {
            return Err(Error::Quadrature {
                reason: "tail of the minimum does not decay within the search range",
                estimate: f64::NAN,
                error: f64::INFINITY,
                intervals: 0,
            });
        }
    }
    let inner = Quadrature::with_tolerance(1e-10, 1e-10);
    let outer = Quadrature::with_tolerance(1e-8, 1e-8);
    // Quadrature failures inside the closure are carried out through this cell.
    let failure = std::cell::Cell::new(None);
    let r = outer.integrate(
        |v| {
            let ln_s = ln_u + v;
            let ln_sf_s = dist.ln_survival_at_log(ln_s);
            let ln_w = LN_2 + dist.ln_density_at_log(ln_s) + ln_sf_s - 2.0 * ln_sf_u + ln_s;
            if ln_w == f64::NEG_INFINITY || ln_sf_s == f64::NEG_INFINITY {
                return 0.0;
            }
            match integrate_conditional(dist, ln_s, ln_sf_s, |z| z, &inner) {
                Ok(mean) => mean * ln_w.exp(),
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        0.0,
        v_max,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn a(x: f64) -> Alpha {
        Alpha::new(x).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert!((pareto_tail_value(a(0.5)) - (PI / 2.0 - 1.0)).abs() < 1e-12);
        assert!((pareto_tail_value(a(1.0)) - (2.0 * LN_2 - 1.0)).abs() < 1e-12);
        assert!((pareto_tail_value(a(2.0)) - (3.0 - 4.0 * LN_2)).abs() < 1e-12);
        assert!((pareto_tail_value(a(3.0)) - (6.0 * LN_2 - 4.0)).abs() < 1e-12);
        assert!((pareto_tail_value(a(0.5)) - 0.5707963267948966).abs() < 1e-12);
        assert!((pareto_tail_value(a(1.0)) - 0.3862943611198906).abs() < 1e-12);
        assert!((pareto_tail_value(a(2.0)) - 0.22741127776021953).abs() < 1e-12);
        assert!((pareto_tail_value(a(3.0)) - 0.15888308335967186).abs() < 1e-12);
    }

    #[test]
    fn quadrature_values() {
        assert!((pareto_tail_value_quadrature(a(0.5)).unwrap() - 0.5707963267948966).abs() < 1e-12);
        assert!((pareto_tail_value_quadrature(a(1.0)).unwrap() - 0.3862943611198906).abs() < 1e-12);
        let t50 = pareto_tail_value_quadrature(a(50.0)).unwrap();
        assert!(t50 > 0.0 && t50 <= 2.0 / 51.0);
    }

    #[test]
    fn branches_agree_with_quadrature() {
        for i in 1..=100 {
            let alpha = a(i as f64 / 10.0);
            let closed = pareto_tail_value(alpha);
            let quad = pareto_tail_value_quadrature(alpha).unwrap();
            assert!((closed - quad).abs() <= 1e-10, "α = {}: {closed} vs {quad}", alpha.get());
        }
    }

    #[test]
    fn large_alpha_expansion_matches_quadrature() {
        for &x in &[30.0, 30.5, 47.0, 100.0, 1000.5] {
            let quad = pareto_tail_value_quadrature(a(x)).unwrap();
            let rel = (pareto_tail_value(a(x)) - quad).abs() / quad;
            assert!(rel < 1e-10, "α = {x}: rel {rel}");
        }
        // Just below the switch the exact form agrees with the expansion.
        assert!((digamma_form(29.999999) - asymptotic_form(29.999999)).abs() < 1e-13);
        assert!((pareto_tail_value(a(1e8)) - 5e-9).abs() < 1e-16);
    }

    #[test]
    fn limits() {
        assert!(pareto_tail_value(a(1e-6)) > 0.999);
        assert!(pareto_tail_value(a(1e4)) < 1e-3);
        assert!(pareto_tail_value(a(1e4)) > 0.0);
    }

    #[test]
    fn continuous_across_integers() {
        for k in 1..=4 {
            let k = k as f64;
            let at = pareto_tail_value(a(k));
            assert!((pareto_tail_value(a(k + 1e-7)) - at).abs() < 1e-5);
            assert!((pareto_tail_value(a(k - 1e-7)) - at).abs() < 1e-5);
        }
    }

    #[test]
    fn inversion() {
        let one = alpha_for(2.0 * LN_2 - 1.0).unwrap();
        assert!((one - 1.0).abs() < 1e-9);
        let two = alpha_for(0.22741127776021953).unwrap();
        assert!((two - 2.0).abs() < 1e-9);
        for &x in &[0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let back = alpha_for(tail_value(x).unwrap()).unwrap();
            assert!((back - x).abs() < 1e-8, "α = {x}: {back}");
        }
        // Reading off the shape from an observed plateau near 0.30.
        let danish = alpha_for(0.30).unwrap();
        assert!((danish - 1.4).abs() < 0.05);
        assert!((danish - 1.4205958384989947).abs() < 1e-10);
        assert!(TailValue::new(1.5).is_err());
        assert!(TailValue::new(0.0).is_err());
        assert!(matches!(alpha_for(1.0 - 1e-12), Err(Error::OutOfBracket { .. })));
        assert!(matches!(alpha_for(1e-12), Err(Error::OutOfBracket { .. })));
    }

    // g̃_α(1 − e^{−w}) e^{−w}, written in 1 − z = e^{−w} so nothing cancels.
    fn limit_in_w(alpha: f64, w: f64) -> f64 {
        let omz = (-w).exp();
        2.0 * alpha * (2.0 - omz).powf(-(alpha + 1.0)) * omz.powf(alpha)
    }

    #[test]
    fn limit_density() {
        assert!((limit_in_w(1.5, 0.7) - pareto_limit_density(a(1.5), -(-0.7f64).exp_m1()).unwrap() * (-0.7f64).exp()).abs() < 1e-14);
        assert_eq!(pareto_limit_density(a(1.0), 0.0).unwrap(), 2.0);
        assert!(pareto_limit_density(a(1.0), 1.0).is_err());
        assert!(pareto_limit_density(a(1.0), -0.1).is_err());
        let q = Quadrature::with_tolerance(1e-11, 1e-11);
        for &alpha in &[0.5, 1.0, 2.0, 3.0] {
            // z = 1 − e^{−w} removes the (1 − z)^{α−1} singularity.
            let mass = q
                .integrate_to_infinity(|w| limit_in_w(alpha, w), 0.0)
                .unwrap()
                .value;
            assert!((mass - 1.0).abs() < 1e-9, "α = {alpha}: {mass}");
        }
        for &alpha in &[0.5, 1.0, 2.0] {
            let mean = q
                .integrate_to_infinity(|w| -(-w).exp_m1() * limit_in_w(alpha, w), 0.0)
                .unwrap()
                .value;
            assert!((mean - pareto_tail_value(a(alpha))).abs() < 1e-9);
        }
    }

    #[test]
    fn pareto_conditional_density_is_the_limit() {
        let p = DistributionSpec::ParetoI { x_m: 1.0, alpha: 1.5 };
        for &u in &[1.5, 2.0, 10.0, 100.0] {
            let g = huge_jump_density(&p, u, 0.3).unwrap();
            let lim = pareto_limit_density(a(1.5), 0.3).unwrap();
            assert!((g - lim).abs() < 1e-12);
        }
    }

    #[test]
    fn conditioning_errors() {
        let p = DistributionSpec::ParetoI { x_m: 1.0, alpha: 1.5 };
        assert!(huge_jump_density(&p, 0.5, 0.3).is_err());
        assert!(huge_jump_density(&p, 2.0, 1.0).is_err());
        // F̄(u) underflows to exactly zero.
        let w = DistributionSpec::Weibull { k: 2.0, scale: 1.0 };
        assert!(w.ln_survival(1e200).is_finite() || w.ln_survival(1e200) == f64::NEG_INFINITY);
        assert_eq!(
            huge_jump_density(&w, 1e200, 0.3),
            Err(Error::DegenerateConditioning { u: 1e200 })
        );
    }

    fn families() -> Vec<DistributionSpec> {
        use DistributionSpec::*;
        vec![
            ParetoI { x_m: 1.0, alpha: 2.0 },
            ParetoI { x_m: 2.5, alpha: 0.5 },
            Gpd { beta: 1.0, xi: 1.0 },
            Gpd { beta: 2.0, xi: 0.3 },
            ParetoII { theta: 5.0, alpha: 1.5, loc: 1.0 },
            ParetoIII { theta: 5.0, alpha: 3.0, loc: 1.0 },
            LogGamma { alpha: 0.7, beta: 2.0 },
            LogGamma { alpha: 1.5, beta: 0.8 },
            Weibull { k: 2.0, scale: 1.0 },
            Weibull { k: 0.5, scale: 3.0 },
            LogCauchy { truncated: false },
            LogCauchy { truncated: true },
            crate::distributions::shifted_gamma_mean_ten(2.0),
            crate::distributions::shifted_gamma_mean_ten(0.5),
        ]
    }

    #[test]
    fn conditional_density_normalizes() {
        for d in families() {
            for &q in &[0.5, 0.05, 1e-3] {
                let u = d.inverse_survival(q).unwrap();
                let mass = huge_jump_mass(&d, u).unwrap();
                assert!((mass - 1.0).abs() < 1e-8, "{d} at u = {u}: {mass}");
            }
        }
        let w = DistributionSpec::Weibull { k: 2.0, scale: 1.0 };
        assert!((huge_jump_mass(&w, 5.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn pareto_conditional_density_is_pointwise_invariant() {
        let p = DistributionSpec::ParetoI { x_m: 1.0, alpha: 0.8 };
        for i in 0..50 {
            let z = i as f64 / 50.0;
            let g2 = huge_jump_density(&p, 2.0, z).unwrap();
            for &u in &[10.0, 100.0] {
                assert!((huge_jump_density(&p, u, z).unwrap() - g2).abs() < 1e-12);
            }
        }
    }

    fn sup_distance(d: &DistributionSpec, u: f64, alpha: f64) -> f64 {
        (1..1000)
            .map(|i| {
                let z = i as f64 / 1000.0;
                (huge_jump_density(d, u, z).unwrap() - pareto_limit_density(a(alpha), z).unwrap()).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn log_gamma_conditional_density_approaches_the_limit() {
        let d = DistributionSpec::LogGamma { alpha: 0.7, beta: 2.0 };
        let near = sup_distance(&d, 1e6, 0.7);
        let far = sup_distance(&d, 1e2, 0.7);
        assert!(near < far, "{near} vs {far}");
    }

    #[test]
    fn theoretical_value_of_pareto_is_constant() {
        let p = DistributionSpec::ParetoI { x_m: 1.0, alpha: 1.0 };
        for &u in &[1.0, 3.0, 1e3] {
            let t = theoretical_tail_value(&p, u).unwrap();
            assert!((t - (2.0 * LN_2 - 1.0)).abs() < 1e-6, "u = {u}: {t}");
        }
        let p = DistributionSpec::ParetoI { x_m: 2.0, alpha: 0.5 };
        let t = theoretical_tail_value(&p, 5.0).unwrap();
        assert!((t - (PI / 2.0 - 1.0)).abs() < 1e-6, "{t}");
    }

    #[test]
    fn theoretical_value_regular_variation_limit() {
        let d = DistributionSpec::ParetoII { theta: 5.0, alpha: 1.5, loc: 1.0 };
        let t = theoretical_tail_value(&d, 1e4).unwrap();
        assert!((t - pareto_tail_value(a(1.5))).abs() < 0.01, "{t}");
    }

    #[test]
    fn theoretical_value_light_tail_goes_to_zero() {
        let d = crate::distributions::shifted_gamma_mean_ten(2.0);
        let t = theoretical_tail_value(&d, 1e3).unwrap();
        assert!(t < 0.05 && t > 0.0, "{t}");
    }

    proptest! {
        #[test]
        fn strictly_decreasing(x in 1e-3f64..50.0, y in 1e-3f64..50.0) {
            prop_assume!((x - y).abs() > 1e-9 * x.max(y));
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            prop_assert!(pareto_tail_value(a(lo)) > pareto_tail_value(a(hi)));
        }
    }
}
