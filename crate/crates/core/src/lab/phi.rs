//! The radial profile `Phi(y) = int |f(sqrt(y) e^{i theta})|^q d theta / 2 pi`
//! and the integration-by-parts identities built on it.
//!
//! Derivatives of `Phi` are taken by finite differences with one Richardson
//! step. `Phi` is defined for every `y >= 0` (f is a polynomial), so central
//! stencils may cross `y = 1`; near `y = 0` a forward stencil is used.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::quadrature::{default_angles, radial_rule, scaled_angles, CircleRule};

/// Default finite-difference step for `Phi''`.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Step for the one-sided estimate of `Phi'(0)`.
const FIRST_DERIVATIVE_STEP: f64 = 1e-4;
/// Radial nodes for the identity integrals.
const IBP_NODES: usize = 32;
/// `Phi''` values above this count as nonnegative.
const CONVEXITY_FLOOR: f64 = -1e-7;

/// Evaluates `Phi(y)` for a fixed univariate `f` and exponent `q`.
#[derive(Clone, Debug)]
pub struct PhiEvaluator {
    coeffs: Vec<Complex64>,
    q: f64,
    rotations: Vec<Complex64>,
}

impl PhiEvaluator {
    /// `angles = None` picks the disk default for even `q` and a finer grid
    /// otherwise (`|f|^q` is then only finitely smooth at zeros of `f`).
    pub fn new(f: &ComplexPolynomial, q: f64, angles: Option<usize>) -> Result<Self> {
        let coeffs = f.dense_coefficients()?;
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidExponent(q));
        }
        let even = q.fract() == 0.0 && (q as u64).is_multiple_of(2);
        let m = angles.unwrap_or_else(|| {
            if even {
                default_angles(f.degree(), q)
            } else {
                2049usize.max(8 * scaled_angles(f.degree(), q))
            }
        });
        let rotations = CircleRule::new(m)?.nodes().collect();
        Ok(PhiEvaluator { coeffs, q, rotations })
    }

    pub fn eval(&self, y: f64) -> f64 {
        let rho = y.max(0.0).sqrt();
        let scaled: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * rho.powi(k as i32))
            .collect();
        let mut acc = 0.0;
        for &w in &self.rotations {
            let mut v = Complex64::zero();
            for &c in scaled.iter().rev() {
                v = v * w + c;
            }
            let a = v.norm();
            if a > 0.0 {
                acc += (self.q * a.ln()).exp();
            }
        }
        acc / self.rotations.len() as f64
    }

    fn second_difference(&self, y: f64, h: f64) -> f64 {
        if y >= h {
            (self.eval(y + h) - 2.0 * self.eval(y) + self.eval(y - h)) / (h * h)
        } else {
            (2.0 * self.eval(y) - 5.0 * self.eval(y + h) + 4.0 * self.eval(y + 2.0 * h) - self.eval(y + 3.0 * h))
                / (h * h)
        }
    }

    /// `Phi''(y)` with steps `h` and `h/2` combined by Richardson.
    pub fn second_derivative(&self, y: f64, h: f64) -> f64 {
        let coarse = self.second_difference(y, h);
        let fine = self.second_difference(y, 0.5 * h);
        (4.0 * fine - coarse) / 3.0
    }

    /// `Phi'(0)` from the one-sided three-point formula on `{0, h, 2h}`,
    /// refined by Richardson.
    pub fn first_derivative_at_zero(&self) -> f64 {
        let one_sided = |h: f64| (-3.0 * self.eval(0.0) + 4.0 * self.eval(h) - self.eval(2.0 * h)) / (2.0 * h);
        let h = FIRST_DERIVATIVE_STEP;
        (4.0 * one_sided(0.5 * h) - one_sided(h)) / 3.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiProfile {
    pub q: f64,
    pub y_grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi2: Vec<f64>,
}

/// `Phi` and `Phi''` on `y_grid`. Every stencil `y +- h` must stay inside
/// `(0, 1)`.
pub fn phi_profile(f: &ComplexPolynomial, q: f64, y_grid: &[f64], h: f64) -> Result<PhiProfile> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be positive"));
    }
    if y_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("y grid must be strictly increasing"));
    }
    if let Some(&y) = y_grid.iter().find(|&&y| !(y - h > 0.0 && y + h < 1.0)) {
        return Err(Error::StencilOutOfRange(y));
    }
    let eval = PhiEvaluator::new(f, q, None)?;
    let phi = y_grid.iter().map(|&y| eval.eval(y)).collect();
    let phi2 = y_grid.iter().map(|&y| eval.second_derivative(y, h)).collect();
    Ok(PhiProfile { q, y_grid: y_grid.to_vec(), phi, phi2 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityOutcome {
    pub profile: PhiProfile,
    pub min_phi2: f64,
    pub pass: bool,
}

/// `Phi'' >= 0` on the grid, up to a finite-difference noise floor of 1e-7.
pub fn phi_convexity_check(f: &ComplexPolynomial, q: f64, y_grid: &[f64]) -> Result<ConvexityOutcome> {
    if !(q >= 2.0) {
        return Err(Error::InvalidParameter("convexity of Phi needs q >= 2"));
    }
    let profile = phi_profile(f, q, y_grid, DEFAULT_FD_STEP)?;
    let min_phi2 = profile.phi2.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ConvexityOutcome { pass: min_phi2 >= CONVEXITY_FLOOR, min_phi2, profile })
}

/// Both sides of the two integration-by-parts identities at `r^2 = beta / beta'`:
///
/// `(beta-1) int_0^1 (1-y)^(beta-2) Phi(r^2 y) dy
///     = Phi(0) + Phi'(0)/beta' + 1/beta' int_0^{r^2} (1 - y/r^2)^beta Phi''(y) dy`
///
/// `(beta'-1) int_0^1 (1-y)^(beta'-2) Phi(y) dy
///     = Phi(0) + Phi'(0)/beta' + 1/beta' int_0^1 (1-y)^beta' Phi''(y) dy`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IbpReport {
    pub first_lhs: f64,
    pub first_rhs: f64,
    pub second_lhs: f64,
    pub second_rhs: f64,
    pub phi_zero: f64,
    pub phi_prime_zero: f64,
    /// Largest relative mismatch over the two identities.
    pub discrepancy: f64,
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn check_betas(q: f64, beta: f64, beta_prime: f64) -> Result<()> {
    if !(q >= 2.0) {
        return Err(Error::InvalidParameter("integration by parts needs q >= 2"));
    }
    if !(beta > 1.0 && beta_prime >= beta && beta_prime.is_finite()) {
        return Err(Error::InvalidParameter("need 1 < beta <= beta'"));
    }
    Ok(())
}

/// Weighted integral `int_0^1 (1-s)^e g(s) ds` by the Gauss rule of the
/// probability density `(e+1)(1-s)^e`.
fn jacobi_integral<G: FnMut(f64) -> f64>(e: f64, nodes: usize, mut g: G) -> Result<f64> {
    let (t, w) = radial_rule(e + 2.0, nodes)?;
    let s: f64 = t.iter().zip(&w).map(|(&t, &w)| w * g(t)).sum();
    Ok(s / (e + 1.0))
}

pub fn ibp_identity_check(f: &ComplexPolynomial, q: f64, beta: f64, beta_prime: f64) -> Result<IbpReport> {
    check_betas(q, beta, beta_prime)?;
    let eval = PhiEvaluator::new(f, q, None)?;
    let r2 = beta / beta_prime;
    let h = DEFAULT_FD_STEP;
    let phi_zero = eval.eval(0.0);
    let phi_prime_zero = eval.first_derivative_at_zero();

    // (beta-1)(1-y)^(beta-2) is the radial density of dA_beta.
    let (t, w) = radial_rule(beta, IBP_NODES)?;
    let first_lhs: f64 = t.iter().zip(&w).map(|(&t, &w)| w * eval.eval(r2 * t)).sum();
    let tail = jacobi_integral(beta, IBP_NODES, |s| eval.second_derivative(r2 * s, h))?;
    let first_rhs = phi_zero + phi_prime_zero / beta_prime + r2 * tail / beta_prime;

    let (t, w) = radial_rule(beta_prime, IBP_NODES)?;
    let second_lhs: f64 = t.iter().zip(&w).map(|(&t, &w)| w * eval.eval(t)).sum();
    let tail = jacobi_integral(beta_prime, IBP_NODES, |y| eval.second_derivative(y, h))?;
    let second_rhs = phi_zero + phi_prime_zero / beta_prime + tail / beta_prime;

    let discrepancy = relative_gap(first_lhs, first_rhs).max(relative_gap(second_lhs, second_rhs));
    Ok(IbpReport { first_lhs, first_rhs, second_lhs, second_rhs, phi_zero, phi_prime_zero, discrepancy })
}

/// The three integrals compared at the end of the sufficiency argument:
/// `int_0^{r^2} (1-y/r^2)^beta Phi''`, `int_0^{r^2} (1-y)^beta' Phi''` and
/// `int_0^1 (1-y)^beta' Phi''`, with `r^2 = beta / beta'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionChain {
    pub dilated: f64,
    pub truncated: f64,
    pub full: f64,
}

impl ReductionChain {
    /// `dilated <= truncated <= full`, each with relative slack 1e-10.
    pub fn holds(&self) -> bool {
        let le = |a: f64, b: f64| a <= b + 1e-10 * b.abs().max(a.abs());
        le(self.dilated, self.truncated) && le(self.truncated, self.full)
    }
}

pub fn reduction_chain(f: &ComplexPolynomial, q: f64, beta: f64, beta_prime: f64) -> Result<ReductionChain> {
    check_betas(q, beta, beta_prime)?;
    let eval = PhiEvaluator::new(f, q, None)?;
    let r2 = beta / beta_prime;
    let h = DEFAULT_FD_STEP;
    let phi2 = |y: f64| eval.second_derivative(y, h);
    let dilated = r2 * jacobi_integral(beta, IBP_NODES, |s| phi2(r2 * s))?;
    let (t, w) = radial_rule(2.0, IBP_NODES)?;
    let truncated = r2
        * t.iter()
            .zip(&w)
            .map(|(&s, &w)| w * (1.0 - r2 * s).powf(beta_prime) * phi2(r2 * s))
            .sum::<f64>();
    let full = jacobi_integral(beta_prime, IBP_NODES, phi2)?;
    Ok(ReductionChain { dilated, truncated, full })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajorantOutcome {
    /// `min_y (1-y)^(beta'/beta) - (1 - y beta'/beta)`.
    pub min_gap: f64,
    pub pass: bool,
}

/// The tangent line at 0 lies below the convex `g(y) = (1-y)^(beta'/beta)`
/// on `[0, beta/beta']`.
pub fn convexity_majorant_check(beta: f64, beta_prime: f64, y_grid: &[f64]) -> Result<MajorantOutcome> {
    if !(beta > 0.0 && beta_prime >= beta && beta_prime.is_finite()) {
        return Err(Error::InvalidParameter("need 0 < beta <= beta'"));
    }
    let ratio = beta_prime / beta;
    let top = beta / beta_prime;
    if y_grid.iter().any(|&y| !(0.0..=top).contains(&y)) {
        return Err(Error::InvalidParameter("y grid must lie in [0, beta/beta']"));
    }
    let min_gap = y_grid
        .iter()
        .map(|&y| (1.0 - y).powf(ratio) - (1.0 - y * ratio))
        .fold(f64::INFINITY, f64::min);
    Ok(MajorantOutcome { min_gap, pass: min_gap >= -1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Vec<f64> {
        (1..=9).map(|i| i as f64 / 10.0).collect()
    }

    #[test]
    fn profile_of_z() {
        let z = ComplexPolynomial::variable(1, 0);
        let p = phi_profile(&z, 2.0, &grid(), DEFAULT_FD_STEP).unwrap();
        for (y, (phi, phi2)) in grid().iter().zip(p.phi.iter().zip(&p.phi2)) {
            assert_relative_eq!(*phi, *y, max_relative = 1e-13);
            assert!(phi2.abs() < 1e-7);
        }
        let p = phi_profile(&z, 4.0, &grid(), DEFAULT_FD_STEP).unwrap();
        for (y, (phi, phi2)) in grid().iter().zip(p.phi.iter().zip(&p.phi2)) {
            assert_relative_eq!(*phi, y * y, max_relative = 1e-13);
            assert!((phi2 - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn profile_of_one_plus_z() {
        let f = ComplexPolynomial::univariate_real(&[1.0, 1.0]);
        let p = phi_profile(&f, 2.0, &grid(), DEFAULT_FD_STEP).unwrap();
        for (y, (phi, phi2)) in grid().iter().zip(p.phi.iter().zip(&p.phi2)) {
            assert_relative_eq!(*phi, 1.0 + y, max_relative = 1e-13);
            assert!(phi2.abs() < 1e-7);
        }
    }

    #[test]
    fn profile_rejects_stencil_outside_unit_interval() {
        let z = ComplexPolynomial::variable(1, 0);
        assert_eq!(phi_profile(&z, 2.0, &[0.0005], 1e-3).unwrap_err(), Error::StencilOutOfRange(0.0005));
        assert_eq!(phi_profile(&z, 2.0, &[0.9995], 1e-3).unwrap_err(), Error::StencilOutOfRange(0.9995));
        assert!(phi_profile(&z, 2.0, &[0.5, 0.4], 1e-3).is_err());
    }

    #[test]
    fn convexity_examples() {
        let z = ComplexPolynomial::variable(1, 0);
        assert!(phi_convexity_check(&z, 4.0, &grid()).unwrap().pass);
        let f = ComplexPolynomial::univariate_real(&[1.0, 1.0, 1.0]);
        let out = phi_convexity_check(&f, 2.0, &grid()).unwrap();
        assert!(out.pass);
        assert!((out.min_phi2 - 2.0).abs() < 1e-6);
        let g = ComplexPolynomial::univariate_real(&[1.0, 1.0]);
        assert!(phi_convexity_check(&g, 3.0, &grid()).unwrap().pass);
        assert!(phi_convexity_check(&g, 1.5, &grid()).is_err());
    }

    #[test]
    fn convexity_q3_stable_under_refinement() {
        let g = ComplexPolynomial::univariate_real(&[1.0, 1.0]);
        let coarse = phi_convexity_check(&g, 3.0, &grid()).unwrap();
        let fine_grid: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();
        let fine = phi_convexity_check(&g, 3.0, &fine_grid).unwrap();
        for (i, y) in grid().iter().enumerate() {
            let j = fine_grid.iter().position(|v| (v - y).abs() < 1e-12).unwrap();
            assert_relative_eq!(coarse.profile.phi2[i], fine.profile.phi2[j], max_relative = 1e-12);
        }
    }

    #[test]
    fn ibp_for_z_q2() {
        let z = ComplexPolynomial::variable(1, 0);
        for &(b, bp) in &[(2.0, 4.0), (3.0, 6.0), (2.5, 2.5)] {
            let rep = ibp_identity_check(&z, 2.0, b, bp).unwrap();
            assert_relative_eq!(rep.first_lhs, 1.0 / bp, max_relative = 1e-12);
            assert_relative_eq!(rep.phi_prime_zero, 1.0, max_relative = 1e-10);
            assert!(rep.discrepancy < 1e-9, "{rep:?}");
        }
    }

    #[test]
    fn ibp_for_constant() {
        let k = ComplexPolynomial::constant(1, Complex64::new(2.0, 0.0));
        let rep = ibp_identity_check(&k, 4.0, 2.0, 4.0).unwrap();
        assert!(rep.discrepancy <= 1e-12, "{rep:?}");
        assert_relative_eq!(rep.first_lhs, 16.0, max_relative = 1e-13);
    }

    #[test]
    fn ibp_for_one_plus_z_q4() {
        let f = ComplexPolynomial::univariate_real(&[1.0, 1.0]);
        let rep = ibp_identity_check(&f, 4.0, 2.0, 4.0).unwrap();
        assert!(rep.discrepancy <= 1e-7, "{rep:?}");
    }

    #[test]
    fn ibp_rejects_inverted_betas() {
        let f = ComplexPolynomial::univariate_real(&[1.0, 1.0]);
        assert!(ibp_identity_check(&f, 4.0, 4.0, 2.0).is_err());
        assert!(ibp_identity_check(&f, 1.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn chain_for_one_plus_z() {
        let f = ComplexPolynomial::univariate_real(&[1.0, 1.0]);
        let chain = reduction_chain(&f, 4.0, 2.0, 4.0).unwrap();
        assert!(chain.holds(), "{chain:?}");
        assert!(chain.dilated > 0.0);
    }

    #[test]
    fn majorant_examples() {
        let out = convexity_majorant_check(2.0, 4.0, &[0.0]).unwrap();
        assert_eq!(out.min_gap, 0.0);
        let out = convexity_majorant_check(3.0, 3.0, &[0.0, 0.3, 1.0]).unwrap();
        assert!(out.min_gap.abs() < 1e-15);
        let out = convexity_majorant_check(2.0, 4.0, &[0.25]).unwrap();
        assert_relative_eq!(out.min_gap, 0.5625 - 0.5, epsilon = 1e-15);
        assert!(out.pass);
        assert!(convexity_majorant_check(2.0, 4.0, &[0.6]).is_err());
        assert!(convexity_majorant_check(4.0, 2.0, &[0.1]).is_err());
    }
}
