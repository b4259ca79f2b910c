//! Quadrature rules for the normalized measures: `dA_alpha` on the disk, its
//! tensor powers on the polydisc, and normalized arc length on the circle.
//!
//! In polar form `z = sqrt(t) e^{i theta}` the measure `dA_alpha` factors as
//! `(alpha - 1)(1 - t)^(alpha - 2) dt` on `[0, 1]` times `d theta / 2 pi`. The
//! radial factor gets a Gauss rule for that Jacobi-type weight (Golub-Welsch
//! on the three-term recurrence), the angular factor the equispaced
//! trapezoidal rule, which is exact for trigonometric polynomials of degree
//! below the node count.

use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tridiag::eigen_first_components;

/// Smallest admissible weight parameter; the measure degenerates at 1.
pub const MIN_ALPHA: f64 = 1.0 + 1e-6;
/// Default radial node count.
pub const DEFAULT_NODES: usize = 64;
/// Floor for the default angular node count on the disk.
pub const DEFAULT_MIN_ANGLES: usize = 257;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= MIN_ALPHA {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// One weighted Bergman space `A^p_alpha`: weight parameter and exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceParams {
    alpha: f64,
    p: f64,
}

impl SpaceParams {
    pub fn new(alpha: f64, p: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_exponent(p)?;
        Ok(SpaceParams { alpha, p })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Gauss nodes `t_k` in `(0, 1)` and weights for the probability density
/// `(alpha - 1)(1 - t)^(alpha - 2)` on `[0, 1]`. Exact for polynomials in `t`
/// of degree at most `2K - 1`.
pub fn radial_rule(alpha: f64, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::InvalidParameter("radial rule needs at least one node"));
    }
    // On x in [-1, 1] with t = (1 + x)/2 the weight is (1 - x)^a (1 + x)^b,
    // a = alpha - 2, b = 0.
    let a = alpha - 2.0;
    let b = 0.0;
    let ab = a + b;
    let mut diag = Vec::with_capacity(k);
    let mut off = Vec::with_capacity(k.saturating_sub(1));
    for n in 0..k {
        let nf = n as f64;
        let d = if n == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * nf + ab) * (2.0 * nf + ab + 2.0))
        };
        diag.push(d);
        if n >= 1 {
            let s = 2.0 * nf + ab;
            let beta = if n == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                4.0 * nf * (nf + a) * (nf + b) * (nf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            off.push(beta.sqrt());
        }
    }
    let eig = eigen_first_components(&diag, &off)?;
    let nodes = eig.iter().map(|&(x, _)| 0.5 * (1.0 + x)).collect();
    let weights = eig.iter().map(|&(_, w)| w).collect();
    Ok((nodes, weights))
}

/// Equispaced rule on the circle with normalized arc length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleRule {
    count: usize,
}

impl CircleRule {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("circle rule needs at least one node"));
        }
        Ok(CircleRule { count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `e^{2 pi i j / M}` for `j = 0..M`.
    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        let m = self.count as f64;
        (0..self.count).map(move |j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m))
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.count as f64
    }

    /// Nodes with their weights.
    pub fn weighted_points(&self) -> Vec<(Complex64, f64)> {
        let w = self.weight();
        self.nodes().map(|z| (z, w)).collect()
    }

    pub fn integrate<F: FnMut(Complex64) -> f64>(&self, mut f: F) -> Result<f64> {
        let mut acc = 0.0;
        for z in self.nodes() {
            let v = f(z);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand);
            }
            acc += v;
        }
        Ok(acc * self.weight())
    }
}

/// Convenience constructor mirroring [`CircleRule::new`].
pub fn circle_rule(count: usize) -> Result<CircleRule> {
    CircleRule::new(count)
}

/// Default angular count for `|P|^p` with `deg P = degree`: enough nodes to
/// integrate the even-`p` case exactly, with a floor of 257.
pub fn default_angles(degree: u32, p: f64) -> usize {
    DEFAULT_MIN_ANGLES.max(scaled_angles(degree, p))
}

/// `4 deg ceil(max(p, 2) / 2) + 1`.
pub(crate) fn scaled_angles(degree: u32, p: f64) -> usize {
    let half = (p.max(2.0) / 2.0).ceil() as usize;
    4 * degree as usize * half + 1
}

/// Product rule for `dA_alpha` on the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskRule {
    alpha: f64,
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    angular_count: usize,
}

impl DiskRule {
    pub fn new(alpha: f64, nodes: usize, angles: usize) -> Result<Self> {
        let (radial_nodes, radial_weights) = radial_rule(alpha, nodes)?;
        if angles == 0 {
            return Err(Error::InvalidParameter("disk rule needs at least one angle"));
        }
        Ok(DiskRule { alpha, radial_nodes, radial_weights, angular_count: angles })
    }

    /// Defaults: 64 radial nodes and [`default_angles`].
    pub fn for_integrand(alpha: f64, degree: u32, p: f64) -> Result<Self> {
        Self::new(alpha, DEFAULT_NODES, default_angles(degree, p))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn radial_nodes(&self) -> &[f64] {
        &self.radial_nodes
    }

    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn len(&self) -> usize {
        self.radial_nodes.len() * self.angular_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All points `sqrt(t_k) e^{i theta_j}` with weight `w_k / M`, radial
    /// index outermost.
    pub fn weighted_points(&self) -> Vec<(Complex64, f64)> {
        let m = self.angular_count;
        let rotations: Vec<Complex64> = CircleRule { count: m }.nodes().collect();
        let mut out = Vec::with_capacity(self.len());
        for (&t, &w) in self.radial_nodes.iter().zip(&self.radial_weights) {
            let rho = t.sqrt();
            let wk = w / m as f64;
            out.extend(rotations.iter().map(|&e| (e * rho, wk)));
        }
        out
    }

    /// `sum_k sum_j w_k / M * f(sqrt(t_k) e^{i theta_j})`.
    pub fn integrate<F: FnMut(Complex64) -> f64>(&self, mut f: F) -> Result<f64> {
        let mut acc = 0.0;
        for (z, w) in self.weighted_points() {
            let v = f(z);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand);
            }
            acc += w * v;
        }
        Ok(acc)
    }
}

/// `int_D f dA_alpha` under `rule`.
pub fn disk_integral<F: FnMut(Complex64) -> f64>(f: F, rule: &DiskRule) -> Result<f64> {
    rule.integrate(f)
}

/// Tensor product of disk rules, one per coordinate of `D^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolydiscRule {
    rules: Vec<DiskRule>,
}

impl PolydiscRule {
    pub fn new(rules: Vec<DiskRule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::InvalidParameter("polydisc rule needs at least one coordinate"));
        }
        Ok(PolydiscRule { rules })
    }

    /// The same disk rule in each of `n` coordinates.
    pub fn uniform(alpha: f64, n: usize, nodes: usize, angles: usize) -> Result<Self> {
        let r = DiskRule::new(alpha, nodes, angles)?;
        Self::new(alloc::vec![r; n])
    }

    pub fn rules(&self) -> &[DiskRule] {
        &self.rules
    }

    pub fn dim(&self) -> usize {
        self.rules.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.rules.iter().map(|r| r.radial_weights.iter().sum::<f64>()).product()
    }
}

impl From<DiskRule> for PolydiscRule {
    fn from(r: DiskRule) -> Self {
        PolydiscRule { rules: alloc::vec![r] }
    }
}
