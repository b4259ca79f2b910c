//! Weighted Bergman, Hardy and mixed norms of complex polynomials, together
//! with numerical checks of the sharp hypercontractive and Nikol'skii-type
//! inequalities between weighted Bergman spaces.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, parsing of text formats and the CLI live in
//! the `bergman-lab` companion crate.
//!
//! Layout:
//!
//! * [`poly`]: sparse multivariate complex polynomials and the structural
//!   transforms (dilation, homogenization, powers).
//! * [`quadrature`]: the probability measures `dA_alpha` on the disk and the
//!   polydisc, normalized arc length on the circle, as Gauss rules.
//! * [`mc`]: counter-based Monte Carlo sampling of `dA_alpha` on `D^n`.
//! * [`norm`]: exact, quadrature and Monte Carlo norms.
//! * [`lab`]: the inequality checks and threshold search.
//! * [`extremal`]: the extremal family and its Gaussian-moment asymptotics.
#![no_std]
// `Float` supplies libm-backed math in no_std builds. When anything in the
// build graph links std (the test harness, dev-dependencies) the inherent f64
// methods shadow it and the imports look unused.
#![allow(unused_imports)]
// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod extremal;
pub mod lab;
pub mod mc;
pub mod norm;
pub mod poly;
pub mod quadrature;
pub mod special;
mod tridiag;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::{ComplexPolynomial, DilationVector, MultiIndex};
pub use quadrature::{DiskRule, PolydiscRule, SpaceParams};
