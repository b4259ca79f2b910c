//! Implicit QL iteration for symmetric tridiagonal matrices, tracking only
//! the first component of each eigenvector (all that Golub-Welsch needs).

use num_traits::Float;
use alloc::vec::Vec;


use crate::error::{Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off.len() == diag.len() - 1`), paired with the
/// squared first components of the normalized eigenvectors. Sorted by
/// eigenvalue.
pub(crate) fn eigen_first_components(diag: &[f64], off: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = diag.len();
    debug_assert_eq!(off.len() + 1, n);
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.to_vec();
    e.push(0.0);
    let mut z = alloc::vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut out: Vec<(f64, f64)> = d.into_iter().zip(z).map(|(x, v)| (x, v * v)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1, 3 with eigenvectors (1, -1)/sqrt2, (1, 1)/sqrt2.
        let ev = eigen_first_components(&[2.0, 2.0], &[1.0]).unwrap();
        assert!((ev[0].0 - 1.0).abs() < 1e-14);
        assert!((ev[1].0 - 3.0).abs() < 1e-14);
        assert!((ev[0].1 - 0.5).abs() < 1e-14);
        assert!((ev[1].1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let ev = eigen_first_components(&[4.0], &[]).unwrap();
        assert_eq!(ev, alloc::vec![(4.0, 1.0)]);
    }

    #[test]
    fn first_components_sum_to_one() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let off: Vec<f64> = (1..n).map(|i| 0.5 + 0.1 * (i as f64).cos()).collect();
        let ev = eigen_first_components(&diag, &off).unwrap();
        let s: f64 = ev.iter().map(|x| x.1).sum();
        assert!((s - 1.0).abs() < 1e-13);
        let trace: f64 = diag.iter().sum();
        let evsum: f64 = ev.iter().map(|x| x.0).sum();
        assert!((trace - evsum).abs() < 1e-12);
    }
}
