//! Checks of the hypercontractive and Nikol'skii-type inequalities between
//! weighted Bergman spaces, and of the identities their proofs rest on.
//!
//! Every check returns the computed quantities together with its verdict so
//! that reports can show how much room there was. Inequalities pass with a
//! small relative slack that absorbs rounding in cases of exact equality.

mod hyper;
mod phi;

pub use hyper::{
    hyper_check, hyper_check_polydisc, kulikov_check, necessity_expansion_check, nikolskii_check, threshold_search,
    weissler_threshold_check, Comparison, ExpansionReport, HyperParams, NikolskiiOutcome, ThresholdOptions,
    ThresholdReport,
};
pub use phi::{
    convexity_majorant_check, ibp_identity_check, phi_convexity_check, phi_profile, reduction_chain,
    ConvexityOutcome, IbpReport, MajorantOutcome, PhiEvaluator, PhiProfile, ReductionChain, DEFAULT_FD_STEP,
};

/// Relative slack for the hypercontractive, Kulikov and Hardy checks.
pub const INEQUALITY_SLACK: f64 = 1e-10;
/// Relative slack for the Nikol'skii check.
pub const NIKOLSKII_SLACK: f64 = 1e-9;
/// Standard errors of allowance when either side is a Monte Carlo estimate.
pub const MC_SIGMAS: f64 = 3.0;
