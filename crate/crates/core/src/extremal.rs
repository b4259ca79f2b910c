//! The extremal family `p_{alpha,n}(z) = sqrt(alpha/n) (z_1 + ... + z_n)` and
//! the Gaussian limits of its powers.
//!
//! Under `dA_alpha` on `D^n`, `sqrt(1/n) sum z_i` tends in law to
//! `G / sqrt(alpha)` where `G` is a complex Gaussian with `E|G|^2 = 1`, so
//! `|G|^2` is exponential and `E|G|^s = Gamma(s/2 + 1)`.

use num_traits::Float;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mc::{stream_for_label, McSampler};
use crate::norm::mc_norm_with;
use crate::poly::{ComplexPolynomial, MultiIndex};
use crate::quadrature::check_exponent;
use crate::special::ln_gamma;

/// Largest variable count for which the power is expanded into monomials.
pub const MAX_EXPANDED_VARS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalSpec {
    alpha: f64,
    n: usize,
    m: u32,
}

impl ExtremalSpec {
    pub fn new(alpha: f64, n: usize, m: u32) -> Result<Self> {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("extremal family needs n >= 1"));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extremal family needs m >= 1"));
        }
        Ok(ExtremalSpec { alpha, n, m })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `|p_{alpha,n}(z)|^m` without expanding.
    pub fn magnitude(&self, z: &[Complex64]) -> f64 {
        let s: Complex64 = z.iter().sum();
        ((self.alpha / self.n as f64).sqrt() * s.norm()).powi(self.m as i32)
    }
}

/// `p_{alpha,n}^m` expanded by the multinomial theorem.
pub fn extremal_poly(spec: &ExtremalSpec) -> Result<ComplexPolynomial> {
    let n = spec.n;
    if n > MAX_EXPANDED_VARS {
        return Err(Error::ExpansionTooLarge(n));
    }
    let m = spec.m;
    let ln_c = 0.5 * m as f64 * (spec.alpha / n as f64).ln();
    let ln_m_fact = ln_gamma(m as f64 + 1.0);
    let mut terms = Vec::new();
    let mut gamma = alloc::vec![0u32; n];
    compositions(&mut gamma, 0, m, &mut |g| {
        let ln_denominator: f64 = g.iter().map(|&k| ln_gamma(k as f64 + 1.0)).sum();
        let c = (ln_c + ln_m_fact - ln_denominator).exp();
        terms.push((MultiIndex::new(g.to_vec()), Complex64::new(c, 0.0)));
    });
    ComplexPolynomial::from_terms(n, terms)
}

fn compositions<F: FnMut(&[u32])>(gamma: &mut [u32], at: usize, left: u32, emit: &mut F) {
    if at + 1 == gamma.len() {
        gamma[at] = left;
        emit(gamma);
        return;
    }
    for k in (0..=left).rev() {
        gamma[at] = k;
        compositions(gamma, at + 1, left - k, emit);
    }
    gamma[at] = 0;
}

/// `E|G|^(mp)^(1/p) = Gamma(mp/2 + 1)^(1/p)`.
pub fn gaussian_moment(m: u32, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok((ln_gamma(m as f64 * p / 2.0 + 1.0) / p).exp())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalRatio {
    /// Monte Carlo estimate of `||p^m||_{A^q_beta} / ||p^m||_{A^p_alpha}`.
    pub ratio: f64,
    /// One standard error of `ratio` (delta method, independent streams).
    pub ci: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// `(sqrt(alpha/beta))^m Gamma(qm/2+1)^(1/q) / Gamma(pm/2+1)^(1/p)`.
    pub target: f64,
}

impl ExtremalRatio {
    /// Within `max(k * ci, rel * target)` of the limit.
    pub fn within(&self, k: f64, rel: f64) -> bool {
        (self.ratio - self.target).abs() <= (k * self.ci).max(rel * self.target)
    }
}

/// The Gaussian-limit value of the ratio for the family `p_{1,n}^m`.
pub fn extremal_target(m: u32, alpha: f64, beta: f64, p: f64, q: f64) -> Result<f64> {
    let lead = 0.5 * m as f64 * (alpha / beta).ln();
    Ok(lead.exp() * gaussian_moment(m, q)? / gaussian_moment(m, p)?)
}

/// Monte Carlo ratio of the `A^q_beta` and `A^p_alpha` norms of
/// `p_{spec.alpha,n}^m`. Each space draws from its own stream.
pub fn extremal_ratio(
    spec: &ExtremalSpec,
    alpha: f64,
    beta: f64,
    p: f64,
    q: f64,
    samples: u64,
    seed: u64,
) -> Result<ExtremalRatio> {
    let num_sampler = McSampler::new(beta, spec.n, seed, stream_for_label("extremal/numerator"))?;
    let den_sampler = McSampler::new(alpha, spec.n, seed, stream_for_label("extremal/denominator"))?;
    let num = mc_norm_with(&num_sampler, samples, q, 1.0, |z| spec.magnitude(z))?;
    let den = mc_norm_with(&den_sampler, samples, p, 1.0, |z| spec.magnitude(z))?;
    let ratio = num.value / den.value;
    let ci = ratio * ((num.est_error / num.value).powi(2) + (den.est_error / den.value).powi(2)).sqrt();
    // Both norms scale by the same factor, so the limit ignores spec.alpha.
    let target = extremal_target(spec.m, alpha, beta, p, q)?;
    Ok(ExtremalRatio { ratio, ci, numerator: num.value, denominator: den.value, target })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SharpnessReport {
    pub ratio: ExtremalRatio,
    /// `sqrt(alpha q / (beta p))^m`.
    pub bound: f64,
    pub attainment: f64,
    pub attainment_ci: f64,
    pub predicted_attainment: f64,
}

/// How much of the Nikol'skii bound `C^m` the family `p_{1,n}^m` attains.
#[allow(clippy::too_many_arguments)]
pub fn sharpness_exhibit(
    alpha: f64,
    beta: f64,
    p: f64,
    q: f64,
    m: u32,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<SharpnessReport> {
    let spec = ExtremalSpec::new(1.0, n, m)?;
    let ratio = extremal_ratio(&spec, alpha, beta, p, q, samples, seed)?;
    let bound = (0.5 * m as f64 * (alpha * q / (beta * p)).ln()).exp();
    Ok(SharpnessReport {
        attainment: ratio.ratio / bound,
        attainment_ci: ratio.ci / bound,
        predicted_attainment: ratio.target / bound,
        bound,
        ratio,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StirlingRow {
    pub x: f64,
    /// Logarithms of the lower bound, `Gamma(x+1)` and the upper bound.
    pub ln_lower: f64,
    pub ln_gamma: f64,
    pub ln_upper: f64,
    pub pass: bool,
}

/// `sqrt(2 pi) x^(x+1/2) e^-x < Gamma(x+1) < sqrt(2 pi) x^(x+1/2) e^(-x + 1/(12x))`,
/// compared in logs.
pub fn stirling_bounds_check(x_grid: &[f64]) -> Result<Vec<StirlingRow>> {
    let half_ln_two_pi = 0.5 * (2.0 * core::f64::consts::PI).ln();
    x_grid
        .iter()
        .map(|&x| {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidParameter("Stirling grid needs finite x > 0"));
            }
            let ln_lower = half_ln_two_pi + (x + 0.5) * x.ln() - x;
            let ln_upper = ln_lower + 1.0 / (12.0 * x);
            let lg = ln_gamma(x + 1.0);
            Ok(StirlingRow { x, ln_lower, ln_gamma: lg, ln_upper, pass: ln_lower < lg && lg < ln_upper })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaRatioReport {
    pub limit: f64,
    /// `(m, Gamma(qm/2+1)^(1/qm) / Gamma(pm/2+1)^(1/pm))`.
    pub rows: Vec<(u32, f64)>,
    /// Error at the last `m` is no larger than at the first.
    pub trend_ok: bool,
}

impl GammaRatioReport {
    pub fn relative_error_at_last(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |&(_, r)| (r - self.limit).abs() / self.limit)
    }
}

pub fn gamma_ratio(p: f64, q: f64, m: u32) -> f64 {
    let m = m as f64;
    (ln_gamma(q * m / 2.0 + 1.0) / (q * m) - ln_gamma(p * m / 2.0 + 1.0) / (p * m)).exp()
}

pub fn gamma_ratio_limit_check(p: f64, q: f64, m_grid: &[u32]) -> Result<GammaRatioReport> {
    check_exponent(p)?;
    check_exponent(q)?;
    if p > q {
        return Err(Error::InvalidParameter("gamma ratio needs p <= q"));
    }
    if m_grid.is_empty() || m_grid[0] == 0 || m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("m grid must be positive and strictly increasing"));
    }
    let limit = (q / p).sqrt();
    let rows: Vec<(u32, f64)> = m_grid.iter().map(|&m| (m, gamma_ratio(p, q, m))).collect();
    let err = |r: f64| (r - limit).abs();
    let trend_ok = err(rows[rows.len() - 1].1) <= err(rows[0].1);
    Ok(GammaRatioReport { limit, rows, trend_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::exact_norm_p2;
    use approx::assert_relative_eq;

    #[test]
    fn small_expansions() {
        let p = extremal_poly(&ExtremalSpec::new(1.0, 1, 1).unwrap()).unwrap();
        assert_eq!(p, ComplexPolynomial::variable(1, 0));
        let p = extremal_poly(&ExtremalSpec::new(2.0, 2, 1).unwrap()).unwrap();
        assert_relative_eq!(p.coefficient(&[1, 0]).re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(p.coefficient(&[0, 1]).re, 1.0, epsilon = 1e-15);
        let p = extremal_poly(&ExtremalSpec::new(1.0, 2, 2).unwrap()).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_relative_eq!(p.coefficient(&[2, 0]).re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(p.coefficient(&[1, 1]).re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(p.coefficient(&[0, 2]).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn expansion_matches_power() {
        let spec = ExtremalSpec::new(1.5, 3, 4).unwrap();
        let c = (1.5f64 / 3.0).sqrt();
        let mut base = ComplexPolynomial::zero(3);
        for i in 0..3 {
            base = base.add(&ComplexPolynomial::variable(3, i).scale(Complex64::new(c, 0.0))).unwrap();
        }
        let expected = base.power(4);
        let got = extremal_poly(&spec).unwrap();
        for (g, v) in expected.terms() {
            assert_relative_eq!(got.coefficient(g.as_slice()).re, v.re, max_relative = 1e-13);
        }
        assert_eq!(got.num_terms(), expected.num_terms());
    }

    #[test]
    fn expansion_capped() {
        let spec = ExtremalSpec::new(1.0, 17, 1).unwrap();
        assert_eq!(extremal_poly(&spec).unwrap_err(), Error::ExpansionTooLarge(17));
        assert!(ExtremalSpec::new(0.5, 2, 1).is_err());
        assert!(ExtremalSpec::new(1.0, 0, 1).is_err());
        assert!(ExtremalSpec::new(1.0, 2, 0).is_err());
    }

    #[test]
    fn linear_member_has_unit_norm() {
        for &alpha in &[1.2, 2.0, 3.5] {
            for n in [1usize, 4, 16] {
                let p = extremal_poly(&ExtremalSpec::new(alpha, n, 1).unwrap()).unwrap();
                assert_relative_eq!(exact_norm_p2(&p, alpha).unwrap().value, 1.0, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn gaussian_moment_values() {
        assert_relative_eq!(gaussian_moment(2, 2.0).unwrap(), 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gaussian_moment(1, 2.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(gaussian_moment(3, 4.0).unwrap(), 720f64.powf(0.25), max_relative = 1e-13);
    }

    #[test]
    fn same_space_ratio_covers_one() {
        let spec = ExtremalSpec::new(1.0, 64, 1).unwrap();
        let r = extremal_ratio(&spec, 2.0, 2.0, 2.0, 2.0, 50_000, 11).unwrap();
        assert_eq!(r.target, 1.0);
        assert!((r.ratio - 1.0).abs() <= 4.0 * r.ci, "{r:?}");
    }

    #[test]
    fn mc_of_squared_family_matches_exact() {
        let spec = ExtremalSpec::new(1.0, 8, 2).unwrap();
        let exact = exact_norm_p2(&extremal_poly(&spec).unwrap(), 2.0).unwrap().value;
        let s = McSampler::new(2.0, 8, 5, 0).unwrap();
        let mc = mc_norm_with(&s, 100_000, 2.0, 1.0, |z| spec.magnitude(z)).unwrap();
        assert!((mc.value - exact).abs() <= 4.0 * mc.est_error, "{mc:?} vs {exact}");
    }

    #[test]
    fn sharpness_linear_case() {
        let rep = sharpness_exhibit(2.0, 2.0, 2.0, 4.0, 1, 64, 50_000, 3).unwrap();
        assert_relative_eq!(rep.bound, 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(rep.predicted_attainment, 2f64.powf(-0.25), max_relative = 1e-13);
        assert!((rep.attainment - rep.predicted_attainment).abs() < 0.05);
        let again = sharpness_exhibit(2.0, 2.0, 2.0, 4.0, 1, 64, 50_000, 3).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn stirling_examples() {
        let rows = stirling_bounds_check(&[0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 400.0]).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
        let one = rows[2];
        assert_relative_eq!(one.ln_lower.exp(), (2.0 * core::f64::consts::PI).sqrt() / core::f64::consts::E, max_relative = 1e-14);
        assert!(one.ln_gamma.abs() < 1e-15);
        assert!(stirling_bounds_check(&[0.0]).is_err());
    }

    #[test]
    fn gamma_ratio_trend() {
        let rep = gamma_ratio_limit_check(2.0, 4.0, &[10, 100, 200]).unwrap();
        assert!(rep.trend_ok);
        assert!(rep.relative_error_at_last() <= 0.02);
        let e = |i: usize| (rep.rows[i].1 - rep.limit).abs();
        assert!(e(1) < e(0));
        let flat = gamma_ratio_limit_check(3.0, 3.0, &[1, 7, 50]).unwrap();
        for &(_, r) in &flat.rows {
            assert_relative_eq!(r, 1.0, epsilon = 1e-15);
        }
        assert!(gamma_ratio_limit_check(4.0, 2.0, &[1]).is_err());
        assert!(gamma_ratio_limit_check(2.0, 4.0, &[5, 5]).is_err());
    }
}
