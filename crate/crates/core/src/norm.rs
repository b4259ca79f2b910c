//! Norms of polynomials in `A^p_alpha(D)`, `A^p_alpha(D^n)`, `H^p(T)` and the
//! mixed space `A^p_alpha(D^n, z) x H^p(T, w)`.
//!
//! Three routes are available and the caller always picks one explicitly:
//!
//! * exact: monomials are orthogonal in `A^2_alpha`, so the `p = 2` norm is a
//!   weighted sum of squared coefficients, and `|P|^(2m) = |P^m|^2` turns any
//!   even `p` into a `p = 2` computation;
//! * tensor quadrature over the product rules of [`crate::quadrature`];
//! * Monte Carlo over [`McSampler`] draws.
//!
//! `|P|^p` is always evaluated as `exp(p ln(|P| / s))` for a scale `s`
//! bounding `|P|` on the sample set, so large degrees and exponents do not
//! overflow.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::mc::McSampler;
use crate::poly::ComplexPolynomial;
use crate::quadrature::{
    check_alpha, check_exponent, default_angles, scaled_angles, CircleRule, DiskRule, PolydiscRule, SpaceParams,
    DEFAULT_NODES,
};
use crate::special::ln_monomial_moment;

/// Largest number of variables handled by tensor quadrature.
pub const MAX_TENSOR_VARS: usize = 3;
/// Smallest accepted Monte Carlo sample count.
pub const MIN_MC_SAMPLES: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ExactP2,
    ExactEvenP,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactP2 => "exact-p2",
            Method::ExactEvenP => "exact-even-p",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Method::ExactP2 | Method::ExactEvenP)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed norm. `est_error` is the delta-method standard error for Monte
/// Carlo and 0 otherwise; quadrature convergence is checked separately by
/// refining the rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
}

impl NormResult {
    fn exact(value: f64, method: Method) -> Self {
        NormResult { value, method, est_error: 0.0 }
    }
}

/// `int_D |z|^(2k) dA_alpha = k! Gamma(alpha) / Gamma(alpha + k)`.
pub fn monomial_norm_sq(k: u32, alpha: f64) -> f64 {
    ln_monomial_moment(k, alpha).exp()
}

/// Orthogonality sum `sum |c_g|^2 prod_i m(g_i)` where the last `circle_vars`
/// variables live on the circle (moment 1).
fn orthogonal_sum(p: &ComplexPolynomial, alpha: f64, circle_vars: usize) -> f64 {
    let disk_vars = p.nvars() - circle_vars;
    p.terms()
        .map(|(g, c)| {
            let ln_m: f64 = g.as_slice()[..disk_vars].iter().map(|&e| ln_monomial_moment(e, alpha)).sum();
            c.norm_sqr() * ln_m.exp()
        })
        .sum()
}

/// `||P||_{A^2_alpha(D^n)}` from coefficient orthogonality.
pub fn exact_norm_p2(p: &ComplexPolynomial, alpha: f64) -> Result<NormResult> {
    check_alpha(alpha)?;
    Ok(NormResult::exact(orthogonal_sum(p, alpha, 0).sqrt(), Method::ExactP2))
}

fn even_half(p: f64) -> Result<u32> {
    if p.is_finite() && p > 0.0 && p.fract() == 0.0 && (p as u64).is_multiple_of(2) && p <= 2.0 * u32::MAX as f64 {
        Ok((p / 2.0) as u32)
    } else {
        Err(Error::NotEvenExponent(p))
    }
}

/// `||P||_{A^p_alpha} = ||P^(p/2)||_{A^2_alpha}^(2/p)` for even integer `p`.
pub fn exact_norm_even_p(p: &ComplexPolynomial, alpha: f64, exponent: f64) -> Result<NormResult> {
    check_alpha(alpha)?;
    let half = even_half(exponent)?;
    let s = orthogonal_sum(&p.power(half), alpha, 0);
    Ok(NormResult::exact(s.powf(1.0 / exponent), Method::ExactEvenP))
}

/// Exact `H^p(T)` norm of a univariate polynomial for even `p` (Parseval).
pub fn exact_hardy_norm_even_p(p: &ComplexPolynomial, exponent: f64) -> Result<NormResult> {
    univariate_only(p)?;
    let half = even_half(exponent)?;
    let s: f64 = p.power(half).terms().map(|(_, c)| c.norm_sqr()).sum();
    let method = if half == 1 { Method::ExactP2 } else { Method::ExactEvenP };
    Ok(NormResult::exact(s.powf(1.0 / exponent), method))
}

/// Exact mixed norm for even `p`; the last variable of `q` is the circle
/// variable `w`.
pub fn exact_mixed_norm_even_p(q: &ComplexPolynomial, alpha: f64, exponent: f64) -> Result<NormResult> {
    check_alpha(alpha)?;
    if q.nvars() < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: q.nvars() });
    }
    let half = even_half(exponent)?;
    let s = orthogonal_sum(&q.power(half), alpha, 1);
    let method = if half == 1 { Method::ExactP2 } else { Method::ExactEvenP };
    Ok(NormResult::exact(s.powf(1.0 / exponent), method))
}

fn univariate_only(p: &ComplexPolynomial) -> Result<()> {
    if p.nvars() == 1 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 1, got: p.nvars() })
    }
}

/// Walks the tensor grid `axes[0] x axes[1] x ...`, first axis outermost,
/// calling `visit(P(z), weight)` at every point. Coefficients are contracted
/// one variable at a time by Horner's rule.
/// Compensated summation; quadrature grids run to millions of points.
#[derive(Default)]
struct NeumaierSum {
    sum: f64,
    carry: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn walk_tensor<F: FnMut(Complex64, f64)>(
    dims: &[usize],
    coeffs: &[Complex64],
    axes: &[Vec<(Complex64, f64)>],
    weight: f64,
    visit: &mut F,
) {
    let d0 = dims[0];
    if dims.len() == 1 {
        for &(z, w) in &axes[0] {
            let mut v = coeffs[d0 - 1];
            for a in (0..d0 - 1).rev() {
                v = v * z + coeffs[a];
            }
            visit(v, weight * w);
        }
        return;
    }
    let inner = coeffs.len() / d0;
    if d0 == 1 {
        let total: f64 = axes[0].iter().map(|x| x.1).sum();
        walk_tensor(&dims[1..], coeffs, &axes[1..], weight * total, visit);
        return;
    }
    let mut buf = vec![Complex64::zero(); inner];
    for &(z, w) in &axes[0] {
        buf.copy_from_slice(&coeffs[(d0 - 1) * inner..]);
        for a in (0..d0 - 1).rev() {
            let row = &coeffs[a * inner..(a + 1) * inner];
            for (b, &c) in buf.iter_mut().zip(row) {
                *b = *b * z + c;
            }
        }
        walk_tensor(&dims[1..], &buf, &axes[1..], weight * w, visit);
    }
}

/// `(sum_w |P|^p)^(1/p)` over a tensor grid, first variable of `p` paired
/// with `axes[0]`.
fn tensor_lp(poly: &ComplexPolynomial, exponent: f64, axes: &[Vec<(Complex64, f64)>]) -> Result<f64> {
    if poly.is_zero() {
        return Ok(0.0);
    }
    let (dims, coeffs) = poly.dense_tensor();
    let accumulate = |scale: f64| -> Result<(f64, f64)> {
        let ln_scale = scale.ln();
        let mut sum = NeumaierSum::default();
        let mut max_abs: f64 = 0.0;
        let mut bad = false;
        walk_tensor(&dims, &coeffs, axes, 1.0, &mut |v, w| {
            let a = v.norm();
            if !a.is_finite() {
                bad = true;
                return;
            }
            max_abs = max_abs.max(a);
            if a > 0.0 {
                sum.add(w * (exponent * (a.ln() - ln_scale)).exp());
            }
        });
        if bad {
            Err(Error::NonFiniteIntegrand)
        } else {
            Ok((sum.value(), max_abs))
        }
    };
    let bound = poly.coefficient_l1();
    let (sum, max_abs) = accumulate(bound)?;
    if sum > 0.0 {
        return Ok(bound * sum.powf(1.0 / exponent));
    }
    if max_abs == 0.0 {
        return Ok(0.0);
    }
    // The coefficient bound was too pessimistic; rescale by the observed maximum.
    let (sum, _) = accumulate(max_abs)?;
    Ok(max_abs * sum.powf(1.0 / exponent))
}

fn disk_axes(rule: &PolydiscRule) -> Vec<Vec<(Complex64, f64)>> {
    rule.rules().iter().map(DiskRule::weighted_points).collect()
}

/// `||P||_{A^p_alpha(D^n)}` by tensor quadrature. The weight parameter is the
/// one the rule was built for.
pub fn bergman_norm(p: &ComplexPolynomial, exponent: f64, rule: &PolydiscRule) -> Result<NormResult> {
    check_exponent(exponent)?;
    if p.nvars() > MAX_TENSOR_VARS {
        return Err(Error::TooManyVariables(p.nvars()));
    }
    if rule.dim() != p.nvars() {
        return Err(Error::DimensionMismatch { expected: p.nvars(), got: rule.dim() });
    }
    let value = tensor_lp(p, exponent, &disk_axes(rule))?;
    Ok(NormResult::exact(value, Method::Quadrature))
}

/// `||P||_{H^p(T)}` for univariate `P` with an `M`-point circle rule.
pub fn hardy_norm(p: &ComplexPolynomial, exponent: f64, circle: &CircleRule) -> Result<NormResult> {
    check_exponent(exponent)?;
    univariate_only(p)?;
    let value = tensor_lp(p, exponent, &[circle.weighted_points()])?;
    Ok(NormResult::exact(value, Method::Quadrature))
}

/// `||Q||_{A^p_alpha(D^n, z) x H^p(T, w)}` where the last variable of `q` is
/// `w`. The circle variable is iterated outermost.
pub fn mixed_norm(
    q: &ComplexPolynomial,
    exponent: f64,
    z_rule: &PolydiscRule,
    circle: &CircleRule,
) -> Result<NormResult> {
    check_exponent(exponent)?;
    if q.nvars() != z_rule.dim() + 1 {
        return Err(Error::DimensionMismatch { expected: z_rule.dim() + 1, got: q.nvars() });
    }
    if z_rule.dim() > MAX_TENSOR_VARS {
        return Err(Error::TooManyVariables(z_rule.dim()));
    }
    let reordered = q.move_variable_first(q.nvars() - 1)?;
    let mut axes = vec![circle.weighted_points()];
    axes.extend(disk_axes(z_rule));
    let value = tensor_lp(&reordered, exponent, &axes)?;
    Ok(NormResult::exact(value, Method::Quadrature))
}

/// Monte Carlo `L^p` norm of `|f|` under the sampler's law. `magnitude`
/// returns `|f(z)|`; `scale` should bound it (any positive value works, it
/// only guards against overflow).
pub fn mc_norm_with<F>(sampler: &McSampler, samples: u64, exponent: f64, scale: f64, mut magnitude: F) -> Result<NormResult>
where
    F: FnMut(&[Complex64]) -> f64,
{
    check_exponent(exponent)?;
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidParameter("monte carlo needs at least 1000 samples"));
    }
    let ln_scale = scale.ln();
    let mut z = vec![Complex64::zero(); sampler.nvars()];
    // Welford running mean and sum of squared deviations.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut nonzero = false;
    for i in 0..samples {
        sampler.sample_point_into(i, &mut z);
        let a = magnitude(&z);
        if !a.is_finite() {
            return Err(Error::NonFiniteIntegrand);
        }
        let x = if a > 0.0 {
            nonzero = true;
            (exponent * (a.ln() - ln_scale)).exp()
        } else {
            0.0
        };
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    if !nonzero || mean == 0.0 {
        return Err(Error::DegenerateMonteCarlo);
    }
    let n = samples as f64;
    let se_mean = (m2 / (n - 1.0)).sqrt() / n.sqrt();
    let value = scale * mean.powf(1.0 / exponent);
    // d/dm m^(1/p) = m^(1/p - 1) / p
    let est_error = scale * mean.powf(1.0 / exponent - 1.0) / exponent * se_mean;
    Ok(NormResult { value, method: Method::MonteCarlo, est_error })
}

/// `||P||_{A^p_alpha(D^n)}` by Monte Carlo with the sampler's `alpha`.
pub fn bergman_norm_mc(p: &ComplexPolynomial, exponent: f64, sampler: &McSampler, samples: u64) -> Result<NormResult> {
    if sampler.nvars() != p.nvars() {
        return Err(Error::DimensionMismatch { expected: p.nvars(), got: sampler.nvars() });
    }
    if p.is_zero() {
        check_exponent(exponent)?;
        return Ok(NormResult { value: 0.0, method: Method::MonteCarlo, est_error: 0.0 });
    }
    let (dims, coeffs) = p.dense_tensor();
    let scale = p.coefficient_l1();
    mc_norm_with(sampler, samples, exponent, scale, |z| eval_dense(&dims, &coeffs, z).norm())
}

/// Evaluates a dense coefficient tensor by nested Horner.
fn eval_dense(dims: &[usize], coeffs: &[Complex64], z: &[Complex64]) -> Complex64 {
    if dims.len() == 1 {
        let mut v = coeffs[dims[0] - 1];
        for a in (0..dims[0] - 1).rev() {
            v = v * z[0] + coeffs[a];
        }
        return v;
    }
    let inner = coeffs.len() / dims[0];
    let mut v = Complex64::zero();
    for a in (0..dims[0]).rev() {
        v = v * z[0] + eval_dense(&dims[1..], &coeffs[a * inner..(a + 1) * inner], &z[1..]);
    }
    v
}

/// Radial node count used when the caller does not fix one and the
/// polynomial has several variables: enough for exactness at even `p` plus
/// a margin of 8.
fn compact_nodes(degree: u32, exponent: f64) -> usize {
    let half = (exponent.max(2.0) / 2.0).ceil() as usize;
    16usize.max((degree as usize * half).div_ceil(2) + 8)
}

/// Angular count shared by every coordinate of a multivariate rule.
fn compact_angles(total_degree: u32, exponent: f64) -> usize {
    33usize.max(scaled_angles(total_degree, exponent))
}

/// Rule sizes when the caller leaves them open.
///
/// One variable: 64 radial nodes and `max(257, 4 deg ceil(max(p,2)/2) + 1)`
/// angles. Several variables: the angular count
/// `max(33, 4 deg ceil(max(p,2)/2) + 1)` from the total degree is shared by
/// all coordinates, radial counts follow the per-variable degree, and a
/// coordinate the polynomial does not depend on collapses to one point.
pub fn auto_polydisc_rule(
    alpha: f64,
    p: &ComplexPolynomial,
    exponent: f64,
    nodes: Option<usize>,
    angles: Option<usize>,
) -> Result<PolydiscRule> {
    let n = p.nvars();
    if n == 1 {
        let rule = DiskRule::new(
            alpha,
            nodes.unwrap_or(DEFAULT_NODES),
            angles.unwrap_or_else(|| default_angles(p.degree(), exponent)),
        )?;
        return Ok(rule.into());
    }
    let m = angles.unwrap_or_else(|| compact_angles(p.degree(), exponent));
    let rules = (0..n)
        .map(|i| {
            let d = p.degree_in(i);
            if d == 0 && nodes.is_none() && angles.is_none() {
                DiskRule::new(alpha, 1, 1)
            } else {
                DiskRule::new(alpha, nodes.unwrap_or_else(|| compact_nodes(d, exponent)), m)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PolydiscRule::new(rules)
}

/// Rules for the mixed norm of `q` (last variable on the circle). The circle
/// and every disk coordinate share one angular count, chosen as
/// [`auto_polydisc_rule`] would choose it for the dehomogenized polynomial,
/// so that rotating all coordinates by a circle node maps the grid onto
/// itself.
pub fn auto_mixed_rule(
    alpha: f64,
    q: &ComplexPolynomial,
    exponent: f64,
    nodes: Option<usize>,
    angles: Option<usize>,
) -> Result<(PolydiscRule, CircleRule)> {
    let nz = q.nvars() - 1;
    if nz == 0 {
        return Err(Error::DimensionMismatch { expected: 2, got: q.nvars() });
    }
    let degree = q.degree();
    let m = angles.unwrap_or_else(|| {
        if nz == 1 {
            default_angles(degree, exponent)
        } else {
            compact_angles(degree, exponent)
        }
    });
    let rules = (0..nz)
        .map(|i| {
            let d = q.degree_in(i);
            let k = nodes.unwrap_or_else(|| if nz == 1 { DEFAULT_NODES } else { compact_nodes(d, exponent) });
            if nz > 1 && d == 0 && nodes.is_none() && angles.is_none() {
                DiskRule::new(alpha, 1, 1)
            } else {
                DiskRule::new(alpha, k, m)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((PolydiscRule::new(rules)?, CircleRule::new(m)?))
}

/// How a norm should be computed. Selection is always explicit; there is no
/// silent fallback from one route to another.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormPlan {
    /// Orthogonality oracle; only even integer exponents.
    Exact,
    /// Tensor quadrature; `None` picks sizes with [`auto_polydisc_rule`].
    Quadrature { nodes: Option<usize>, angles: Option<usize> },
    /// Monte Carlo with `samples` draws from stream `(seed, stream)`.
    MonteCarlo { samples: u64, seed: u64, stream: u64 },
}

impl Default for NormPlan {
    fn default() -> Self {
        NormPlan::Quadrature { nodes: None, angles: None }
    }
}

impl NormPlan {
    pub fn quadrature() -> Self {
        Self::default()
    }

    /// `||P||_{A^p_alpha(D^n)}`.
    pub fn bergman(&self, poly: &ComplexPolynomial, space: SpaceParams) -> Result<NormResult> {
        let (alpha, p) = (space.alpha(), space.p());
        match *self {
            NormPlan::Exact => {
                if p == 2.0 {
                    exact_norm_p2(poly, alpha)
                } else {
                    exact_norm_even_p(poly, alpha, p)
                }
            }
            NormPlan::Quadrature { nodes, angles } => {
                let rule = auto_polydisc_rule(alpha, poly, p, nodes, angles)?;
                bergman_norm(poly, p, &rule)
            }
            NormPlan::MonteCarlo { samples, seed, stream } => {
                let sampler = McSampler::new(alpha, poly.nvars(), seed, stream)?;
                bergman_norm_mc(poly, p, &sampler, samples)
            }
        }
    }

    /// `||P||_{H^p(T)}` for univariate `P`.
    pub fn hardy(&self, poly: &ComplexPolynomial, p: f64) -> Result<NormResult> {
        match *self {
            NormPlan::Exact => exact_hardy_norm_even_p(poly, p),
            NormPlan::Quadrature { angles, .. } => {
                let circle = CircleRule::new(angles.unwrap_or_else(|| default_angles(poly.degree(), p)))?;
                hardy_norm(poly, p, &circle)
            }
            NormPlan::MonteCarlo { .. } => Err(Error::InvalidParameter("hardy norms have no monte carlo route")),
        }
    }

    /// Mixed norm with the last variable of `q` on the circle.
    pub fn mixed(&self, q: &ComplexPolynomial, space: SpaceParams) -> Result<NormResult> {
        match *self {
            NormPlan::Exact => exact_mixed_norm_even_p(q, space.alpha(), space.p()),
            NormPlan::Quadrature { nodes, angles } => {
                let (z_rule, circle) = auto_mixed_rule(space.alpha(), q, space.p(), nodes, angles)?;
                mixed_norm(q, space.p(), &z_rule, &circle)
            }
            NormPlan::MonteCarlo { .. } => Err(Error::InvalidParameter("mixed norms have no monte carlo route")),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NormPlan::Exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiIndex;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn one_plus_z() -> ComplexPolynomial {
        ComplexPolynomial::univariate_real(&[1.0, 1.0])
    }

    fn z1_plus_z2() -> ComplexPolynomial {
        ComplexPolynomial::variable(2, 0).add(&ComplexPolynomial::variable(2, 1)).unwrap()
    }

    #[test]
    fn monomial_moments() {
        assert_eq!(monomial_norm_sq(0, 2.7), 1.0);
        assert_relative_eq!(monomial_norm_sq(1, 2.0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(monomial_norm_sq(2, 2.0), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(monomial_norm_sq(1, 3.0), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_p2_examples() {
        assert_relative_eq!(exact_norm_p2(&one_plus_z(), 2.0).unwrap().value, 1.5f64.sqrt(), epsilon = 1e-15);
        let z1z2 = ComplexPolynomial::from_terms(2, [(MultiIndex::new(vec![1, 1]), c(1.0))]).unwrap();
        assert_relative_eq!(exact_norm_p2(&z1z2, 2.0).unwrap().value, 0.5, epsilon = 1e-15);
        let k = ComplexPolynomial::constant(1, Complex64::new(3.0, -4.0));
        assert_relative_eq!(exact_norm_p2(&k, 1.7).unwrap().value, 5.0, epsilon = 1e-15);
        assert_eq!(exact_norm_p2(&ComplexPolynomial::zero(1), 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn exact_even_p_examples() {
        let r = exact_norm_even_p(&one_plus_z(), 2.0, 4.0).unwrap();
        assert_relative_eq!(r.value, (10.0f64 / 3.0).powf(0.25), epsilon = 1e-15);
        assert_eq!(r.method, Method::ExactEvenP);
        let z = ComplexPolynomial::variable(1, 0);
        assert_relative_eq!(exact_norm_even_p(&z, 2.0, 4.0).unwrap().value, (1.0f64 / 3.0).powf(0.25), epsilon = 1e-15);
        for &p in &[2.0, 4.0, 8.0] {
            assert_relative_eq!(
                exact_norm_even_p(&ComplexPolynomial::one(1), 3.3, p).unwrap().value,
                1.0,
                epsilon = 1e-15
            );
        }
        assert_eq!(exact_norm_even_p(&z, 2.0, 3.0).unwrap_err(), Error::NotEvenExponent(3.0));
        assert!(exact_norm_even_p(&z, 2.0, 2.5).is_err());
    }

    #[test]
    fn quadrature_examples() {
        let rule: PolydiscRule = DiskRule::for_integrand(2.0, 1, 4.0).unwrap().into();
        assert_relative_eq!(bergman_norm(&one_plus_z(), 2.0, &rule).unwrap().value, 1.5f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(
            bergman_norm(&one_plus_z(), 4.0, &rule).unwrap().value,
            (10.0f64 / 3.0).powf(0.25),
            max_relative = 1e-12
        );
        let rule: PolydiscRule = DiskRule::for_integrand(3.7, 0, 0.4).unwrap().into();
        assert_relative_eq!(bergman_norm(&ComplexPolynomial::one(1), 0.4, &rule).unwrap().value, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn bergman_norm_dimension_checks() {
        let rule: PolydiscRule = DiskRule::new(2.0, 4, 5).unwrap().into();
        assert!(matches!(bergman_norm(&z1_plus_z2(), 2.0, &rule), Err(Error::DimensionMismatch { .. })));
        let p4 = ComplexPolynomial::variable(4, 0);
        let rule4 = PolydiscRule::uniform(2.0, 4, 2, 3).unwrap();
        assert_eq!(bergman_norm(&p4, 2.0, &rule4).unwrap_err(), Error::TooManyVariables(4));
    }

    #[test]
    fn polydisc_quadrature_matches_exact() {
        let p = z1_plus_z2().power(3).add(&ComplexPolynomial::one(2)).unwrap();
        for &alpha in &[1.3, 2.0, 4.0] {
            for &e in &[2.0, 4.0, 6.0] {
                let quad = NormPlan::quadrature().bergman(&p, SpaceParams::new(alpha, e).unwrap()).unwrap();
                let exact = NormPlan::Exact.bergman(&p, SpaceParams::new(alpha, e).unwrap()).unwrap();
                assert_relative_eq!(quad.value, exact.value, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn tensor_moment_product() {
        // int |z1|^2 |z2|^4 = m_1 m_2, via |z1 z2^2|^2
        let rule = PolydiscRule::uniform(2.5, 2, 6, 9).unwrap();
        let p = ComplexPolynomial::from_terms(2, [(MultiIndex::new(vec![1, 2]), c(1.0))]).unwrap();
        let v = bergman_norm(&p, 2.0, &rule).unwrap().value;
        assert_relative_eq!(v * v, monomial_norm_sq(1, 2.5) * monomial_norm_sq(2, 2.5), max_relative = 1e-12);
    }

    #[test]
    fn hardy_examples() {
        let circle = CircleRule::new(257).unwrap();
        assert_relative_eq!(hardy_norm(&one_plus_z(), 2.0, &circle).unwrap().value, 2.0f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(hardy_norm(&one_plus_z(), 4.0, &circle).unwrap().value, 6.0f64.powf(0.25), epsilon = 1e-14);
        let w5 = ComplexPolynomial::variable(1, 0).power(5);
        for &p in &[0.3, 1.0, 3.5] {
            assert_relative_eq!(hardy_norm(&w5, p, &circle).unwrap().value, 1.0, epsilon = 1e-14);
        }
        assert_relative_eq!(exact_hardy_norm_even_p(&one_plus_z(), 4.0).unwrap().value, 6.0f64.powf(0.25), epsilon = 1e-15);
    }

    #[test]
    fn mixed_examples() {
        let q = one_plus_z().homogenize(1).unwrap();
        let s = SpaceParams::new(2.0, 2.0).unwrap();
        assert_relative_eq!(NormPlan::quadrature().mixed(&q, s).unwrap().value, 1.5f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(NormPlan::Exact.mixed(&q, s).unwrap().value, 1.5f64.sqrt(), max_relative = 1e-15);
        let zw = ComplexPolynomial::from_terms(2, [(MultiIndex::new(vec![1, 1]), c(1.0))]).unwrap();
        assert_relative_eq!(NormPlan::quadrature().mixed(&zw, s).unwrap().value, 0.5f64.sqrt(), max_relative = 1e-13);
        let k = ComplexPolynomial::constant(2, c(-2.5));
        assert_relative_eq!(NormPlan::quadrature().mixed(&k, s).unwrap().value, 2.5, max_relative = 1e-14);
    }

    #[test]
    fn mc_examples() {
        let s = McSampler::new(2.0, 1, 5, 0).unwrap();
        let r = bergman_norm_mc(&ComplexPolynomial::one(1), 1.7, &s, 5000).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.est_error, 0.0);

        let s2 = McSampler::new(2.0, 2, 11, 0).unwrap();
        let r = bergman_norm_mc(&z1_plus_z2(), 2.0, &s2, 100_000).unwrap();
        assert!((r.value - 1.0).abs() <= 4.0 * r.est_error, "{r:?}");
        assert!(r.est_error > 0.0);

        assert!(bergman_norm_mc(&one_plus_z(), 2.0, &s, 10).is_err());
    }

    #[test]
    fn mc_degenerate_all_zero() {
        let s = McSampler::new(2.0, 1, 5, 0).unwrap();
        let err = mc_norm_with(&s, 2000, 2.0, 1.0, |_| 0.0).unwrap_err();
        assert_eq!(err, Error::DegenerateMonteCarlo);
    }

    #[test]
    fn large_degree_and_exponent_do_not_overflow() {
        // |(1+z)/2|^p style integrand with deg 200 and p = 64.
        let p = one_plus_z().power(200);
        let rule: PolydiscRule = DiskRule::new(2.0, 64, 1025).unwrap().into();
        let v = bergman_norm(&p, 64.0, &rule).unwrap().value;
        assert!(v.is_finite() && v > 0.0);
        // The sup of |1+z|^200 on the disk is 2^200; the L^64 norm is a bit below it.
        assert!(v.ln() < 200.0 * 2.0f64.ln());
        assert!(v.ln() > 190.0 * 2.0f64.ln());
    }
}
