//! Reproducible random polynomial corpora.
//!
//! A corpus is a pure function of `(seed, label, count, max_degree, nvars)`:
//! polynomial `i` reads counters `i * 4096 + k` of the stream named by
//! `label`, so corpora do not depend on each other or on thread count.

use bergman_core::mc::{stream_for_label, CounterRng};
use bergman_core::{Complex64, ComplexPolynomial, MultiIndex};

/// Counters reserved per polynomial.
const COUNTERS_PER_POLY: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub label: String,
    pub count: usize,
    pub max_degree: u32,
    pub nvars: usize,
}

struct Draws {
    rng: CounterRng,
    base: u64,
    next: u64,
}

impl Draws {
    fn pair(&mut self) -> (f64, f64) {
        let out = self.rng.draw(self.base + self.next, 0);
        self.next += 1;
        out
    }

    /// Uniform on the box `[-1, 1] x [-1, 1]`.
    fn coefficient(&mut self) -> Complex64 {
        let (u, v) = self.pair();
        Complex64::new(2.0 * u - 1.0, 2.0 * v - 1.0)
    }

    fn below(&mut self, n: u32) -> u32 {
        ((self.pair().0 * n as f64) as u32).min(n - 1)
    }
}

/// Coefficients uniform in the complex unit box. Univariate members have a
/// degree uniform in `1..=max_degree` and every lower coefficient drawn;
/// multivariate members have a random support of total degree at most
/// `max_degree` that reaches it.
pub fn random_poly(spec: &CorpusSpec, index: usize) -> ComplexPolynomial {
    let mut d = Draws {
        rng: CounterRng::new(spec.seed, stream_for_label(&spec.label)),
        base: index as u64 * COUNTERS_PER_POLY,
        next: 0,
    };
    let top = spec.max_degree.max(1);
    let degree = 1 + d.below(top);
    let lead = |c: Complex64| if c.norm() < 1e-3 { Complex64::new(1.0, 0.0) } else { c };
    if spec.nvars == 1 {
        let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| d.coefficient()).collect();
        let last = coeffs.len() - 1;
        coeffs[last] = lead(coeffs[last]);
        return ComplexPolynomial::univariate(&coeffs);
    }
    let n = spec.nvars;
    let count = 2 + d.below(2 * degree + 2);
    let mut terms: Vec<(MultiIndex, Complex64)> = Vec::with_capacity(count as usize + 1);
    for k in 0..=count {
        let total = if k == 0 { degree } else { d.below(degree + 1) };
        let mut gamma = vec![0u32; n];
        for _ in 0..total {
            gamma[d.below(n as u32) as usize] += 1;
        }
        let c = if k == 0 { lead(d.coefficient()) } else { d.coefficient() };
        let gamma = MultiIndex::new(gamma);
        // A repeated index keeps its first draw instead of summing.
        if terms.iter().all(|(g, _)| *g != gamma) {
            terms.push((gamma, c));
        }
    }
    let p = ComplexPolynomial::from_terms(n, terms).expect("indices have nvars entries");
    if p.is_zero() {
        ComplexPolynomial::one(n)
    } else {
        p
    }
}

pub fn random_corpus(spec: &CorpusSpec) -> Vec<ComplexPolynomial> {
    (0..spec.count).map(|i| random_poly(spec, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(nvars: usize) -> CorpusSpec {
        CorpusSpec { seed: 7, label: "t".into(), count: 40, max_degree: 5, nvars }
    }

    #[test]
    fn deterministic_and_bounded() {
        for n in [1, 2, 3] {
            let a = random_corpus(&spec(n));
            assert_eq!(a, random_corpus(&spec(n)));
            assert!(a.iter().all(|p| p.nvars() == n && p.degree() >= 1 && p.degree() <= 5));
            assert!(a.iter().all(|p| p.terms().all(|(_, c)| c.re.abs() <= 1.0 && c.im.abs() <= 1.0)));
        }
        let other = CorpusSpec { seed: 8, ..spec(1) };
        assert_ne!(random_corpus(&spec(1)), random_corpus(&other));
    }

    #[test]
    fn members_do_not_depend_on_count() {
        let long = CorpusSpec { count: 80, ..spec(2) };
        assert_eq!(random_corpus(&spec(2))[..], random_corpus(&long)[..40]);
    }

    #[test]
    fn degrees_cover_the_range() {
        let s = CorpusSpec { count: 200, ..spec(1) };
        let mut seen = [false; 6];
        for p in random_corpus(&s) {
            seen[p.degree() as usize] = true;
        }
        assert!(seen[1..].iter().all(|&b| b));
    }
}
