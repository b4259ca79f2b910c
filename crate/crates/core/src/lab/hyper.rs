use num_traits::Float;
use alloc::vec::Vec;


use super::{INEQUALITY_SLACK, MC_SIGMAS, NIKOLSKII_SLACK};
use crate::error::{Error, Result};
use crate::norm::{NormPlan, NormResult};
use crate::poly::{ComplexPolynomial, DilationVector};
use crate::quadrature::SpaceParams;

/// Source space `A^p_alpha` and target space `A^q_beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperParams {
    pub source: SpaceParams,
    pub target: SpaceParams,
}

impl HyperParams {
    pub fn new(alpha: f64, beta: f64, p: f64, q: f64) -> Result<Self> {
        Ok(HyperParams { source: SpaceParams::new(alpha, p)?, target: SpaceParams::new(beta, q)? })
    }

    pub fn alpha(&self) -> f64 {
        self.source.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.target.alpha()
    }

    pub fn p(&self) -> f64 {
        self.source.p()
    }

    pub fn q(&self) -> f64 {
        self.target.p()
    }

    /// `p <= q`, `q >= 2` and `beta p <= alpha q`. Checks outside this set
    /// still run but are reported as out of hypothesis.
    pub fn hypothesis_ok(&self) -> bool {
        self.p() <= self.q() && self.q() >= 2.0 && self.beta() * self.p() <= self.alpha() * self.q()
    }

    /// `sqrt(beta p / (alpha q))`.
    pub fn sharp_radius(&self) -> f64 {
        (self.beta() * self.p() / (self.alpha() * self.q())).sqrt()
    }

    /// `sqrt(alpha q / (beta p))`, the per-degree Nikol'skii constant.
    pub fn nikolskii_constant(&self) -> f64 {
        (self.alpha() * self.q() / (self.beta() * self.p())).sqrt()
    }
}

/// `lhs <= rhs (1 + slack)`, widened by [`MC_SIGMAS`] standard errors for
/// sampled norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub lhs: NormResult,
    pub rhs: NormResult,
    pub pass: bool,
    pub hypothesis_ok: bool,
}

fn compare(lhs: NormResult, rhs: NormResult, slack: f64, hypothesis_ok: bool) -> Comparison {
    let noise = MC_SIGMAS * (lhs.est_error + rhs.est_error);
    Comparison { lhs, rhs, pass: lhs.value <= rhs.value * (1.0 + slack) + noise, hypothesis_ok }
}

fn require_univariate(f: &ComplexPolynomial) -> Result<()> {
    if f.nvars() == 1 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 1, got: f.nvars() })
    }
}

/// Monte Carlo plans draw the two sides from distinct streams.
fn side_plans(plan: &NormPlan) -> (NormPlan, NormPlan) {
    match *plan {
        NormPlan::MonteCarlo { samples, seed, stream } => (
            NormPlan::MonteCarlo { samples, seed, stream: stream.wrapping_mul(2) },
            NormPlan::MonteCarlo { samples, seed, stream: stream.wrapping_mul(2).wrapping_add(1) },
        ),
        other => (other, other),
    }
}

/// `||T_r f||_{A^q_beta(D)} <= ||f||_{A^p_alpha(D)}` for univariate `f`.
pub fn hyper_check(f: &ComplexPolynomial, hp: &HyperParams, r: f64, plan: &NormPlan) -> Result<Comparison> {
    require_univariate(f)?;
    let rvec = DilationVector::new(alloc::vec![r])?;
    hyper_check_polydisc(f, hp, &rvec, plan)
}

/// `||T_r f||_{A^q_beta(D^n)} <= ||f||_{A^p_alpha(D^n)}` with
/// `T_r f(z) = f(r_1 z_1, ..., r_n z_n)`.
pub fn hyper_check_polydisc(
    f: &ComplexPolynomial,
    hp: &HyperParams,
    rvec: &DilationVector,
    plan: &NormPlan,
) -> Result<Comparison> {
    let dilated = f.dilate(rvec)?;
    let (lp, rp) = side_plans(plan);
    let lhs = lp.bergman(&dilated, hp.target)?;
    let rhs = rp.bergman(f, hp.source)?;
    Ok(compare(lhs, rhs, INEQUALITY_SLACK, hp.hypothesis_ok()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdOptions {
    pub epsilon: f64,
    /// Stop bisecting once the bracket is this narrow.
    pub tolerance: f64,
    /// Points in the monotonicity scan over `[0, 1]`.
    pub scan_points: usize,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions { epsilon: 1e-2, tolerance: 1e-4, scan_points: 21 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdReport {
    pub r_star_empirical: f64,
    pub r_star_theoretical: f64,
    pub bracket_width: f64,
    pub epsilon_used: f64,
    /// Empirical threshold for `epsilon / 2`.
    pub r_star_half_epsilon: f64,
    /// Richardson combination of the two runs; the bias is `O(epsilon^2)`.
    pub r_star_extrapolated: f64,
}

/// Largest `r` in `[0, 1]` for which `pass(r)` holds, assuming the pass set
/// is an initial segment. Returns `(r_star, bracket_width)`.
fn bisect_threshold<F>(mut pass: F, tolerance: f64, scan_points: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<bool>,
{
    let n = scan_points.max(2);
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let mut verdicts = Vec::with_capacity(n);
    for &r in &grid {
        verdicts.push(pass(r)?);
    }
    let first_fail = verdicts.iter().position(|&v| !v);
    let Some(first_fail) = first_fail else {
        return Ok((1.0, tolerance));
    };
    if verdicts[first_fail..].iter().any(|&v| v) {
        return Err(Error::NonMonotone);
    }
    if first_fail == 0 {
        return Ok((0.0, tolerance));
    }
    let (mut lo, mut hi) = (grid[first_fail - 1], grid[first_fail]);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if pass(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), hi - lo))
}

/// Locates the largest `r` for which `||T_r f_eps||_{A^q_beta} <=
/// ||f_eps||_{A^p_alpha}` with `f_eps = 1 + eps z`, then repeats at `eps/2`.
pub fn threshold_search(hp: &HyperParams, opts: &ThresholdOptions, plan: &NormPlan) -> Result<ThresholdReport> {
    if !hp.hypothesis_ok() {
        return Err(Error::InvalidParameter("threshold search requires p <= q, q >= 2, beta p <= alpha q"));
    }
    if !(opts.epsilon > 0.0 && opts.epsilon < 1.0) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1)"));
    }
    if !(opts.tolerance > 0.0) {
        return Err(Error::InvalidParameter("bisection tolerance must be positive"));
    }
    let run = |eps: f64| -> Result<(f64, f64)> {
        let f = ComplexPolynomial::univariate_real(&[1.0, eps]);
        // The right-hand side does not depend on r.
        let (lp, rp) = side_plans(plan);
        let rhs = rp.bergman(&f, hp.source)?;
        bisect_threshold(
            |r| {
                let lhs = lp.bergman(&f.dilate_uniform(r)?, hp.target)?;
                Ok(lhs.value <= rhs.value * (1.0 + INEQUALITY_SLACK))
            },
            opts.tolerance,
            opts.scan_points,
        )
    };
    let (r_eps, width) = run(opts.epsilon)?;
    let (r_half, _) = run(0.5 * opts.epsilon)?;
    Ok(ThresholdReport {
        r_star_empirical: r_eps,
        r_star_theoretical: hp.sharp_radius(),
        bracket_width: width,
        epsilon_used: opts.epsilon,
        r_star_half_epsilon: r_half,
        r_star_extrapolated: (4.0 * r_half - r_eps) / 3.0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub eps: Vec<f64>,
    /// `|‖1 + eps z‖ - 1 - p eps^2 / (4 alpha)|`.
    pub residuals: Vec<f64>,
    /// `residual / eps^3` (0 at `eps = 0`).
    pub normalized: Vec<f64>,
    pub max_normalized: f64,
    /// Residuals shrink at least like `eps^3` between consecutive grid points.
    pub decay_ok: bool,
}

/// Residuals below this are treated as rounding noise by the decay test.
const RESIDUAL_FLOOR: f64 = 1e-15;

/// Compares `‖1 + eps z‖_{A^p_alpha}` with its second-order expansion
/// `1 + p eps^2 / (4 alpha)` over `eps_grid ⊂ [0, 0.1]`.
pub fn necessity_expansion_check(alpha: f64, p: f64, eps_grid: &[f64], plan: &NormPlan) -> Result<ExpansionReport> {
    let space = SpaceParams::new(alpha, p)?;
    if eps_grid.iter().any(|&e| !(0.0..=0.1).contains(&e)) {
        return Err(Error::InvalidParameter("eps grid must lie in [0, 0.1]"));
    }
    let mut eps = eps_grid.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let mut residuals = Vec::with_capacity(eps.len());
    for &e in &eps {
        let f = ComplexPolynomial::univariate_real(&[1.0, e]);
        let norm = plan.bergman(&f, space)?.value;
        residuals.push((norm - 1.0 - p * e * e / (4.0 * alpha)).abs());
    }
    let normalized: Vec<f64> = eps
        .iter()
        .zip(&residuals)
        .map(|(&e, &r)| if e > 0.0 { r / (e * e * e) } else { 0.0 })
        .collect();
    let max_normalized = normalized.iter().copied().fold(0.0, f64::max);
    let decay_ok = eps.windows(2).zip(residuals.windows(2)).all(|(e, r)| {
        if r[0] <= RESIDUAL_FLOOR || e[1] == 0.0 {
            return r[1] <= RESIDUAL_FLOOR.max(r[0]);
        }
        // Cubic decay gives a factor (e1/e0)^3; allow 4/3 of it, i.e. 1/6 per halving.
        r[1] <= r[0] * (e[1] / e[0]).powi(3) * (4.0 / 3.0)
    });
    Ok(ExpansionReport { eps, residuals, normalized, max_normalized, decay_ok })
}

/// `‖f‖_{A^q_{beta'}} <= ‖f‖_{A^p_alpha}` with `beta' = q alpha / p`.
pub fn kulikov_check(f: &ComplexPolynomial, alpha: f64, p: f64, q: f64, plan: &NormPlan) -> Result<Comparison> {
    if !(p <= q) {
        return Err(Error::InvalidParameter("kulikov check requires p <= q"));
    }
    let source = SpaceParams::new(alpha, p)?;
    let target = SpaceParams::new(q * alpha / p, q)?;
    let (lp, rp) = side_plans(plan);
    let lhs = lp.bergman(f, target)?;
    let rhs = rp.bergman(f, source)?;
    Ok(compare(lhs, rhs, INEQUALITY_SLACK, true))
}

/// `‖T_r f‖_{H^q(T)} <= ‖f‖_{H^p(T)}`; the Hardy inequality holds for every
/// analytic `f` exactly when `r^2 <= p / q`, which is what `hypothesis_ok`
/// records here.
pub fn weissler_threshold_check(
    f: &ComplexPolynomial,
    p: f64,
    q: f64,
    r: f64,
    plan: &NormPlan,
) -> Result<Comparison> {
    require_univariate(f)?;
    if !(p > 0.0 && p <= q) {
        return Err(Error::InvalidParameter("weissler check requires 0 < p <= q"));
    }
    let dilated = f.dilate_uniform(r)?;
    let lhs = plan.hardy(&dilated, q)?;
    let rhs = plan.hardy(f, p)?;
    Ok(compare(lhs, rhs, INEQUALITY_SLACK, r * r <= p / q))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NikolskiiOutcome {
    pub lhs: NormResult,
    pub rhs: NormResult,
    /// `‖P‖_{A^q_beta} / ‖P‖_{A^p_alpha}`.
    pub ratio: f64,
    /// `(alpha q / (beta p))^(m/2)`, `m = deg P`.
    pub bound: f64,
    pub degree: u32,
    pub pass: bool,
    pub hypothesis_ok: bool,
}

/// `‖P‖_{A^q_beta(D^n)} <= (alpha q / (beta p))^(m/2) ‖P‖_{A^p_alpha(D^n)}`.
pub fn nikolskii_check(
    poly: &ComplexPolynomial,
    alpha: f64,
    beta: f64,
    p: f64,
    q: f64,
    plan: &NormPlan,
) -> Result<NikolskiiOutcome> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let hp = HyperParams::new(alpha, beta, p, q)?;
    let (lp, rp) = side_plans(plan);
    let lhs = lp.bergman(poly, hp.target)?;
    let rhs = rp.bergman(poly, hp.source)?;
    let degree = poly.degree();
    let bound = hp.nikolskii_constant().powi(degree as i32);
    let ratio = lhs.value / rhs.value;
    let noise = MC_SIGMAS * ratio * (lhs.est_error / lhs.value + rhs.est_error / rhs.value);
    Ok(NikolskiiOutcome {
        lhs,
        rhs,
        ratio,
        bound,
        degree,
        pass: ratio <= bound * (1.0 + NIKOLSKII_SLACK) + noise,
        hypothesis_ok: hp.hypothesis_ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiIndex;
    use num_complex::Complex64;
    use approx::assert_relative_eq;

    fn one_plus_z() -> ComplexPolynomial {
        ComplexPolynomial::univariate_real(&[1.0, 1.0])
    }

    #[test]
    fn hypothesis_flags() {
        assert!(HyperParams::new(2.0, 3.0, 2.0, 4.0).unwrap().hypothesis_ok());
        assert!(HyperParams::new(2.0, 4.0, 0.5, 2.0).unwrap().hypothesis_ok());
        assert!(!HyperParams::new(2.0, 2.0, 4.0, 2.0).unwrap().hypothesis_ok());
        assert!(!HyperParams::new(2.0, 2.0, 1.0, 1.5).unwrap().hypothesis_ok());
        assert!(!HyperParams::new(1.5, 5.0, 2.0, 2.0).unwrap().hypothesis_ok());
        assert_relative_eq!(HyperParams::new(2.0, 3.0, 2.0, 4.0).unwrap().sharp_radius(), 0.75f64.sqrt());
    }

    #[test]
    fn hyper_check_at_sharp_radius() {
        let hp = HyperParams::new(2.0, 2.0, 2.0, 4.0).unwrap();
        for plan in [NormPlan::Exact, NormPlan::quadrature()] {
            let out = hyper_check(&one_plus_z(), &hp, 0.5f64.sqrt(), &plan).unwrap();
            assert!(out.pass);
            assert_relative_eq!(out.lhs.value, (25.0f64 / 12.0).powf(0.25), max_relative = 1e-12);
            assert_relative_eq!(out.rhs.value, 1.5f64.sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn hyper_check_r_zero_is_constant_term() {
        let f = ComplexPolynomial::univariate(&[Complex64::new(0.3, -0.4), Complex64::new(0.9, 0.2)]);
        let hp = HyperParams::new(1.5, 2.0, 2.0, 3.0).unwrap();
        let out = hyper_check(&f, &hp, 0.0, &NormPlan::quadrature()).unwrap();
        assert_relative_eq!(out.lhs.value, 0.5, max_relative = 1e-13);
        assert!(out.pass);
    }

    #[test]
    fn hyper_check_fails_beyond_sharp_radius() {
        let f = ComplexPolynomial::univariate_real(&[1.0, 1e-3]);
        let hp = HyperParams::new(2.0, 3.0, 2.0, 4.0).unwrap();
        let out = hyper_check(&f, &hp, 0.88, &NormPlan::Exact).unwrap();
        assert!(!out.pass);
        let out = hyper_check(&f, &hp, 0.86, &NormPlan::Exact).unwrap();
        assert!(out.pass);
    }

    #[test]
    fn hyper_check_rejects_multivariate() {
        let hp = HyperParams::new(2.0, 2.0, 2.0, 4.0).unwrap();
        assert!(hyper_check(&ComplexPolynomial::variable(2, 0), &hp, 0.5, &NormPlan::Exact).is_err());
    }

    #[test]
    fn zero_polynomial_trivially_passes_hyper_check() {
        let hp = HyperParams::new(2.0, 2.0, 2.0, 4.0).unwrap();
        let out = hyper_check(&ComplexPolynomial::zero(1), &hp, 0.7, &NormPlan::quadrature()).unwrap();
        assert!(out.pass);
        assert_eq!(out.lhs.value, 0.0);
    }

    #[test]
    fn polydisc_embedding_matches_univariate() {
        let g = ComplexPolynomial::univariate_real(&[1.0, -0.5, 0.25]);
        let hp = HyperParams::new(2.0, 3.0, 2.0, 4.0).unwrap();
        let uni = hyper_check(&g, &hp, 0.8, &NormPlan::Exact).unwrap();
        for i in 0..2 {
            let f = g.embed(2, i).unwrap();
            let r = DilationVector::new(alloc::vec![0.8, 0.8]).unwrap();
            let multi = hyper_check_polydisc(&f, &hp, &r, &NormPlan::Exact).unwrap();
            assert_relative_eq!(multi.lhs.value, uni.lhs.value, max_relative = 1e-14);
            assert_relative_eq!(multi.rhs.value, uni.rhs.value, max_relative = 1e-14);
            assert_eq!(multi.pass, uni.pass);
        }
    }

    #[test]
    fn polydisc_identity_dilation() {
        let f = ComplexPolynomial::variable(2, 0).add(&ComplexPolynomial::variable(2, 1)).unwrap();
        let hp = HyperParams::new(2.0, 2.0, 2.0, 2.0).unwrap();
        let r = DilationVector::uniform(2, 1.0).unwrap();
        let out = hyper_check_polydisc(&f, &hp, &r, &NormPlan::quadrature()).unwrap();
        assert!(out.pass);
        assert_relative_eq!(out.lhs.value, out.rhs.value, max_relative = 1e-13);
    }

    #[test]
    fn polydisc_product_polynomial() {
        let f = ComplexPolynomial::from_terms(
            2,
            [
                (MultiIndex::new(alloc::vec![0, 0]), Complex64::new(1.0, 0.0)),
                (MultiIndex::new(alloc::vec![1, 0]), Complex64::new(1.0, 0.0)),
                (MultiIndex::new(alloc::vec![0, 1]), Complex64::new(1.0, 0.0)),
                (MultiIndex::new(alloc::vec![1, 1]), Complex64::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        let hp = HyperParams::new(2.0, 2.0, 2.0, 4.0).unwrap();
        let r = DilationVector::uniform(2, 0.5f64.sqrt()).unwrap();
        let out = hyper_check_polydisc(&f, &hp, &r, &NormPlan::quadrature()).unwrap();
        assert!(out.pass);
        assert_relative_eq!(out.lhs.value, (25.0f64 / 12.0).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(out.rhs.value, 1.5, max_relative = 1e-12);
    }

    #[test]
    fn threshold_examples() {
        let plan = NormPlan::quadrature();
        let opts = ThresholdOptions::default();
        let rep = threshold_search(&HyperParams::new(2.0, 3.0, 2.0, 4.0).unwrap(), &opts, &plan).unwrap();
        assert!((rep.r_star_empirical - 0.75f64.sqrt()).abs() < 2e-3, "{rep:?}");
        assert!(rep.bracket_width > 0.0 && rep.bracket_width <= 1e-4);
        let rep = threshold_search(&HyperParams::new(2.0, 2.0, 2.0, 4.0).unwrap(), &opts, &plan).unwrap();
        assert!((rep.r_star_empirical - 0.5f64.sqrt()).abs() < 2e-3, "{rep:?}");
        let rep = threshold_search(&HyperParams::new(3.0, 3.0, 2.5, 2.5).unwrap(), &opts, &plan).unwrap();
        assert_eq!(rep.r_star_empirical, 1.0);
    }

    #[test]
    fn threshold_requires_hypotheses() {
        let hp = HyperParams::new(2.0, 2.0, 4.0, 2.0).unwrap();
        assert!(threshold_search(&hp, &ThresholdOptions::default(), &NormPlan::Exact).is_err());
    }

    #[test]
    fn bisection_detects_non_monotone_predicate() {
        let err = bisect_threshold(|r| Ok(!(0.3..=0.6).contains(&r)), 1e-4, 21).unwrap_err();
        assert_eq!(err, Error::NonMonotone);
        let (r, w) = bisect_threshold(|r| Ok(r <= 0.4321), 1e-6, 21).unwrap();
        assert!((r - 0.4321).abs() <= w);
    }

    #[test]
    fn expansion_closed_form_at_p2() {
        let rep = necessity_expansion_check(2.0, 2.0, &[0.04, 0.02, 0.01], &NormPlan::Exact).unwrap();
        assert!(rep.decay_ok);
        for (&e, &r) in rep.eps.iter().zip(&rep.residuals) {
            let closed = ((1.0 + e * e / 2.0).sqrt() - 1.0 - e * e / 4.0).abs();
            assert_relative_eq!(r, closed, max_relative = 1e-6);
        }
        let rep = necessity_expansion_check(2.0, 4.0, &[0.01], &NormPlan::Exact).unwrap();
        assert!(rep.residuals[0] <= 1e-6);
        let rep = necessity_expansion_check(2.0, 4.0, &[0.0], &NormPlan::Exact).unwrap();
        assert_eq!(rep.residuals[0], 0.0);
        assert!(necessity_expansion_check(2.0, 4.0, &[0.2], &NormPlan::Exact).is_err());
    }

    #[test]
    fn kulikov_examples() {
        for plan in [NormPlan::Exact, NormPlan::quadrature()] {
            let out = kulikov_check(&one_plus_z(), 2.0, 2.0, 4.0, &plan).unwrap();
            assert!(out.pass);
            assert_relative_eq!(out.lhs.value, 2.1f64.powf(0.25), max_relative = 1e-12);
            let z = ComplexPolynomial::variable(1, 0);
            let out = kulikov_check(&z, 2.0, 2.0, 4.0, &plan).unwrap();
            assert_relative_eq!(out.lhs.value, 0.1f64.powf(0.25), max_relative = 1e-12);
            assert!(out.pass);
            let k = ComplexPolynomial::constant(1, Complex64::new(0.0, 2.0));
            let out = kulikov_check(&k, 2.0, 2.0, 4.0, &plan).unwrap();
            assert!(out.pass);
        }
        assert!(kulikov_check(&one_plus_z(), 2.0, 4.0, 2.0, &NormPlan::Exact).is_err());
    }

    #[test]
    fn weissler_examples() {
        for plan in [NormPlan::Exact, NormPlan::quadrature()] {
            let out = weissler_threshold_check(&one_plus_z(), 2.0, 4.0, 0.5f64.sqrt(), &plan).unwrap();
            assert!(out.pass);
            assert_relative_eq!(out.lhs.value, 3.25f64.powf(0.25), max_relative = 1e-12);
            let out = weissler_threshold_check(&one_plus_z(), 2.0, 4.0, 0.0, &plan).unwrap();
            assert!(out.pass);
            assert_relative_eq!(out.lhs.value, 1.0, max_relative = 1e-14);
            let f = ComplexPolynomial::univariate_real(&[1.0, 1e-3]);
            let out = weissler_threshold_check(&f, 2.0, 4.0, 0.75, &plan).unwrap();
            assert!(!out.pass);
            assert!(!out.hypothesis_ok);
        }
    }

    #[test]
    fn nikolskii_examples() {
        let z = ComplexPolynomial::variable(1, 0);
        let out = nikolskii_check(&z, 2.0, 2.0, 2.0, 4.0, &NormPlan::Exact).unwrap();
        assert_relative_eq!(out.ratio, (1.0f64 / 3.0).powf(0.25) / 0.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(out.bound, 2.0f64.sqrt(), max_relative = 1e-15);
        assert!(out.pass);
        let k = ComplexPolynomial::constant(2, Complex64::new(1.5, 0.0));
        let out = nikolskii_check(&k, 2.0, 3.0, 2.0, 4.0, &NormPlan::quadrature()).unwrap();
        assert_relative_eq!(out.ratio, 1.0, max_relative = 1e-13);
        assert!(out.pass);
        let s = ComplexPolynomial::variable(2, 0).add(&ComplexPolynomial::variable(2, 1)).unwrap();
        let out = nikolskii_check(&s, 2.0, 2.0, 2.0, 4.0, &NormPlan::quadrature()).unwrap();
        assert_relative_eq!(out.rhs.value, 1.0, max_relative = 1e-13);
        // ||(z1+z2)^2||^2 = 1/3 + 4/4 + 1/3 = 5/3 in A^2_2(D^2).
        assert_relative_eq!(out.lhs.value, (5.0f64 / 3.0).powf(0.25), max_relative = 1e-12);
        assert!(out.pass);
        assert_eq!(
            nikolskii_check(&ComplexPolynomial::zero(1), 2.0, 2.0, 2.0, 4.0, &NormPlan::Exact).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn monte_carlo_equality_cases_pass() {
        // Same space on both sides: the true ratio is exactly the bound 1.
        let f = ComplexPolynomial::univariate(&[Complex64::new(1.0, 0.0), Complex64::new(0.7, -0.2)]);
        for stream in 0..20 {
            let plan = NormPlan::MonteCarlo { samples: 1000, seed: 3, stream };
            let o = nikolskii_check(&f, 2.0, 2.0, 2.0, 2.0, &plan).unwrap();
            assert!(o.pass, "stream {stream}: {} vs {}", o.ratio, o.bound);
        }
    }
}
