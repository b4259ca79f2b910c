//! Sparse complex polynomials in one or several variables.
//!
//! A polynomial is a sorted map from multi-indices to nonzero complex
//! coefficients. Term structure (which multi-indices are present) is exact;
//! coefficients are `f64` complex numbers and carry ordinary rounding.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};

/// Exponent tuple `(g_1, ..., g_n)` of a monomial `z_1^g_1 ... z_n^g_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The index of the single variable `z_var`.
    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut g = vec![0; nvars];
        g[var] = 1;
        MultiIndex(g)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|g| = g_1 + ... + g_n`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Radii `(r_1, ..., r_n)` of the dilation `z -> (r_1 z_1, ..., r_n z_n)`.
///
/// Each radius lies in `[0, 1]`; `r = 1` is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationVector {
    radii: Vec<f64>,
}

impl DilationVector {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidParameter("dilation vector must not be empty"));
        }
        if let Some(&r) = radii.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::InvalidRadius(r));
        }
        Ok(DilationVector { radii })
    }

    /// The same radius in every coordinate.
    pub fn uniform(nvars: usize, r: f64) -> Result<Self> {
        Self::new(vec![r; nvars])
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Componentwise product; dilating by `self` then `other` equals dilating
    /// by the composition.
    pub fn compose(&self, other: &DilationVector) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Ok(DilationVector {
            radii: self.radii.iter().zip(&other.radii).map(|(a, b)| a * b).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl ComplexPolynomial {
    /// # Panics
    ///
    /// If `nvars == 0`.
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars > 0, "a polynomial needs at least one variable");
        ComplexPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.insert(MultiIndex::zeros(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `z_var`.
    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut p = Self::zero(nvars);
        p.insert(MultiIndex::unit(nvars, var), Complex64::new(1.0, 0.0));
        p
    }

    /// Univariate polynomial from its Taylor coefficients `a_0, a_1, ...`.
    pub fn univariate(coefficients: &[Complex64]) -> Self {
        let mut p = Self::zero(1);
        for (k, &c) in coefficients.iter().enumerate() {
            p.insert(MultiIndex(vec![k as u32]), c);
        }
        p
    }

    /// Univariate polynomial with real coefficients.
    pub fn univariate_real(coefficients: &[f64]) -> Self {
        let c: Vec<Complex64> = coefficients.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::univariate(&c)
    }

    /// Builds a polynomial from `(multi-index, coefficient)` pairs. Repeated
    /// indices are summed; zero coefficients are dropped.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        if nvars == 0 {
            return Err(Error::InvalidParameter("a polynomial needs at least one variable"));
        }
        let mut p = Self::zero(nvars);
        for (g, c) in terms {
            if g.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: g.len() });
            }
            p.insert(g, c);
        }
        Ok(p)
    }

    fn insert(&mut self, g: MultiIndex, c: Complex64) {
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending multi-index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, gamma: &[u32]) -> Complex64 {
        self.terms
            .get(&MultiIndex(gamma.to_vec()))
            .copied()
            .unwrap_or_else(Complex64::zero)
    }

    /// Total degree `max |g|`; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    /// Highest power of `z_var` that appears.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|g| g.0[var]).max().unwrap_or(0)
    }

    /// True when every term has total degree `m`.
    pub fn is_homogeneous(&self, m: u32) -> bool {
        self.terms.keys().all(|g| g.total() == m)
    }

    /// `sum |c_g|`, an upper bound for `|P|` on the closed polydisc.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Dense Taylor coefficients of a univariate polynomial.
    pub fn dense_coefficients(&self) -> Result<Vec<Complex64>> {
        if self.nvars != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.nvars });
        }
        let mut out = vec![Complex64::zero(); self.degree() as usize + 1];
        for (g, &c) in &self.terms {
            out[g.0[0] as usize] = c;
        }
        Ok(out)
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: z.len() });
        }
        Ok(())
    }

    /// `P(z) = sum c_g z^g`.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        let mut acc = Complex64::zero();
        for (g, &c) in &self.terms {
            let mut m = c;
            for (&zi, &e) in z.iter().zip(&g.0) {
                if e > 0 {
                    m *= zi.powu(e);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// `ln |P(z)|` accumulated term by term in the log domain, so that large
    /// degrees and large `|z|` neither overflow nor underflow. Returns
    /// `-inf` when `P(z) = 0`.
    pub fn ln_abs(&self, z: &[Complex64]) -> Result<f64> {
        self.check_point(z)?;
        let logs: Vec<(f64, f64)> = z.iter().map(|zi| (zi.norm().ln(), zi.arg())).collect();
        let mut parts: Vec<(f64, f64)> = Vec::with_capacity(self.terms.len());
        'terms: for (g, &c) in &self.terms {
            let mut lm = c.norm().ln();
            let mut ph = c.arg();
            for (&(lz, az), &e) in logs.iter().zip(&g.0) {
                if e > 0 {
                    if lz == f64::NEG_INFINITY {
                        continue 'terms;
                    }
                    lm += e as f64 * lz;
                    ph += e as f64 * az;
                }
            }
            parts.push((lm, ph));
        }
        let top = parts.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let sum: Complex64 = parts
            .iter()
            .map(|&(lm, ph)| Complex64::from_polar((lm - top).exp(), ph))
            .sum();
        Ok(top + sum.norm().ln())
    }

    /// `|P(z)|^p`, computed as `exp(p ln|P(z)|)`.
    pub fn abs_pow(&self, z: &[Complex64], p: f64) -> Result<f64> {
        let l = self.ln_abs(z)?;
        Ok(if l == f64::NEG_INFINITY { 0.0 } else { (p * l).exp() })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (g, &v) in &self.terms {
            out.insert(g.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        let mut out = self.clone();
        for (g, &c) in &other.terms {
            out.insert(g.clone(), c);
        }
        Ok(out)
    }

    /// Exact convolution of the term maps.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (ga, &ca) in &self.terms {
            for (gb, &cb) in &other.terms {
                *acc.entry(ga.add(gb)).or_insert_with(Complex64::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(ComplexPolynomial { nvars: self.nvars, terms: acc })
    }

    /// `P^k` by repeated squaring; `P^0 = 1`.
    pub fn power(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base).expect("same nvars");
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base).expect("same nvars");
            }
        }
        result
    }

    /// `(T_r P)(z) = P(r_1 z_1, ..., r_n z_n)`: each coefficient is scaled by
    /// `prod r_i^g_i`.
    pub fn dilate(&self, r: &DilationVector) -> Result<Self> {
        if r.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: r.len() });
        }
        let mut out = Self::zero(self.nvars);
        for (g, &c) in &self.terms {
            let factor: f64 = g.0.iter().zip(r.radii()).map(|(&e, &ri)| ri.powi(e as i32)).product();
            out.insert(g.clone(), c * factor);
        }
        Ok(out)
    }

    /// Dilation by the same radius in every coordinate.
    pub fn dilate_uniform(&self, r: f64) -> Result<Self> {
        self.dilate(&DilationVector::uniform(self.nvars, r)?)
    }

    /// `Q(z, w) = sum c_g z^g w^(m - |g|)`, an `m`-homogeneous polynomial in
    /// one more variable (the last one) with `Q(z, 1) = P(z)`.
    pub fn homogenize(&self, m: u32) -> Result<Self> {
        let degree = self.degree();
        if m < degree {
            return Err(Error::HomogenizationDegree { m, degree });
        }
        let mut out = Self::zero(self.nvars + 1);
        for (g, &c) in &self.terms {
            let mut e = g.0.clone();
            e.push(m - g.total());
            out.insert(MultiIndex(e), c);
        }
        Ok(out)
    }

    /// Views a univariate polynomial `g` as `f(z_1, ..., z_n) = g(z_at)`.
    pub fn embed(&self, nvars: usize, at: usize) -> Result<Self> {
        if self.nvars != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.nvars });
        }
        if at >= nvars {
            return Err(Error::InvalidParameter("embedding position out of range"));
        }
        let mut out = Self::zero(nvars);
        for (g, &c) in &self.terms {
            let mut e = vec![0; nvars];
            e[at] = g.0[0];
            out.insert(MultiIndex(e), c);
        }
        Ok(out)
    }

    /// Moves variable `var` to position 0, keeping the others in order.
    pub fn move_variable_first(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::InvalidParameter("variable index out of range"));
        }
        let mut out = Self::zero(self.nvars);
        for (g, &c) in &self.terms {
            let mut e = Vec::with_capacity(self.nvars);
            e.push(g.0[var]);
            e.extend(g.0.iter().enumerate().filter(|(i, _)| *i != var).map(|(_, &x)| x));
            out.insert(MultiIndex(e), c);
        }
        Ok(out)
    }

    /// Dense coefficient tensor with shape `(deg_1 + 1, ..., deg_n + 1)` in
    /// row-major order (last variable fastest).
    pub fn dense_tensor(&self) -> (Vec<usize>, Vec<Complex64>) {
        let dims: Vec<usize> = (0..self.nvars).map(|i| self.degree_in(i) as usize + 1).collect();
        let mut data = vec![Complex64::zero(); dims.iter().product()];
        for (g, &c) in &self.terms {
            let mut idx = 0;
            for (&e, &d) in g.0.iter().zip(&dims) {
                idx = idx * d + e as usize;
            }
            data[idx] = c;
        }
        (dims, data)
    }
}

impl fmt::Display for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "(")?;
            for (j, e) in g.0.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "):{}{:+}i", c.re, c.im)?;
        }
        Ok(())
    }
}
