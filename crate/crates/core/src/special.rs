//! Log-gamma and the moments of the radial law of `dA_alpha`.

use num_traits::Float;

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln (a)_k = ln (a (a+1) ... (a+k-1))` for `a > 0`.
pub fn ln_pochhammer(a: f64, k: u32) -> f64 {
    if k <= 64 {
        (0..k).map(|j| (a + j as f64).ln()).sum()
    } else {
        ln_gamma(a + k as f64) - ln_gamma(a)
    }
}

/// `ln int_D |z|^(2k) dA_alpha = ln( k! / (alpha)_k )`.
pub fn ln_monomial_moment(k: u32, alpha: f64) -> f64 {
    if k <= 64 {
        (1..=k).map(|j| (j as f64 / (alpha - 1.0 + j as f64)).ln()).sum()
    } else {
        ln_gamma(k as f64 + 1.0) + ln_gamma(alpha) - ln_gamma(alpha + k as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_values() {
        assert_relative_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-15);
        assert_relative_eq!(ln_gamma(7.0), 720.0f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(1.5), (core::f64::consts::PI.sqrt() / 2.0).ln(), max_relative = 1e-13);
    }

    #[test]
    fn pochhammer_branches_agree() {
        let a = 2.7;
        let direct: f64 = (0..80).map(|j| (a + j as f64).ln()).sum();
        assert_relative_eq!(ln_pochhammer(a, 80), direct, max_relative = 1e-13);
    }

    #[test]
    fn monomial_moment_branches_agree() {
        for &alpha in &[1.25, 2.0, 5.5] {
            let direct: f64 = (1..=100).map(|j| (j as f64 / (alpha - 1.0 + j as f64)).ln()).sum();
            assert_relative_eq!(ln_monomial_moment(100, alpha), direct, max_relative = 1e-12);
        }
        assert_relative_eq!(ln_monomial_moment(2, 2.0).exp(), 1.0 / 3.0, max_relative = 1e-15);
    }
}
