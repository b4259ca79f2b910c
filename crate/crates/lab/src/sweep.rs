//! Cross-product sweeps over a [`SweepConfig`].
//!
//! Every row is computed independently (Monte Carlo streams are keyed by the
//! row's own label) and the report is sorted afterwards, so the output does
//! not depend on `--jobs`.

use bergman_core::lab::{
    hyper_check_polydisc, kulikov_check, necessity_expansion_check, nikolskii_check, threshold_search, HyperParams,
    ThresholdOptions,
};
use bergman_core::mc::stream_for_label;
use bergman_core::norm::NormPlan;
use bergman_core::{ComplexPolynomial, DilationVector};
use rayon::prelude::*;

use crate::config::{CheckKind, MethodChoice, SweepConfig};
use crate::report::{params, Row, Status, VerificationReport};
use crate::{with_pool, LabError};

/// Largest `|r* - r0|` a threshold row may show and still pass.
pub const THRESHOLD_TOLERANCE: f64 = 5e-3;

pub fn plan_for(cfg: &SweepConfig, label: &str) -> NormPlan {
    match cfg.method {
        MethodChoice::Quadrature => NormPlan::Quadrature { nodes: cfg.nodes, angles: cfg.angles },
        MethodChoice::Exact => NormPlan::Exact,
        MethodChoice::MonteCarlo => {
            NormPlan::MonteCarlo { samples: cfg.samples, seed: cfg.seed, stream: stream_for_label(label) }
        }
    }
}

/// Threshold and expansion rows resolve differences of order `eps^2`, far
/// below Monte Carlo noise, so they fall back to quadrature.
fn deterministic_plan(cfg: &SweepConfig) -> NormPlan {
    match cfg.method {
        MethodChoice::Exact => NormPlan::Exact,
        _ => NormPlan::Quadrature { nodes: cfg.nodes, angles: cfg.angles },
    }
}

type Task<'a> = Box<dyn Fn() -> Row + Send + Sync + 'a>;

fn tuples(cfg: &SweepConfig) -> Vec<(f64, f64, f64, f64)> {
    let mut out = Vec::new();
    for &a in &cfg.alpha {
        for &b in &cfg.beta {
            for &p in &cfg.p {
                for &q in &cfg.q {
                    out.push((a, b, p, q));
                }
            }
        }
    }
    out
}

fn tuple_params(a: f64, b: f64, p: f64, q: f64) -> String {
    params(&[("alpha", a), ("beta", b), ("p", p), ("q", q)])
}

fn hyper_row(cfg: &SweepConfig, f: &ComplexPolynomial, idx: usize, t: (f64, f64, f64, f64), r: Option<f64>) -> Row {
    let (a, b, p, q) = t;
    let hp = match HyperParams::new(a, b, p, q) {
        Ok(hp) => hp,
        Err(e) => return Row::error("hyper", format!("{};poly={idx:04}", tuple_params(a, b, p, q)), e),
    };
    let r = r.unwrap_or_else(|| hp.sharp_radius());
    let label = format!("{};r={r:?};poly={idx:04}", tuple_params(a, b, p, q));
    if r > 1.0 && !hp.hypothesis_ok() {
        return Row::new("hyper", label).verdict(false, false).detail("radius exceeds 1 outside the hypothesis; not evaluated");
    }
    let plan = plan_for(cfg, &format!("hyper/{label}"));
    let run = || -> Result<Row, LabError> {
        let rvec = DilationVector::uniform(f.nvars(), r)?;
        let c = hyper_check_polydisc(f, &hp, &rvec, &plan)?;
        Ok(Row::new("hyper", label.clone())
            .value(c.lhs.value)
            .target(c.rhs.value)
            .method(c.lhs.method.as_str())
            .est_error(c.lhs.est_error + c.rhs.est_error)
            .verdict(c.pass, c.hypothesis_ok))
    };
    run().unwrap_or_else(|e| Row::error("hyper", label.clone(), e))
}

fn nikolskii_row(cfg: &SweepConfig, f: &ComplexPolynomial, idx: usize, t: (f64, f64, f64, f64)) -> Row {
    let (a, b, p, q) = t;
    let label = format!("{};poly={idx:04}", tuple_params(a, b, p, q));
    let plan = plan_for(cfg, &format!("nikolskii/{label}"));
    match nikolskii_check(f, a, b, p, q, &plan) {
        Ok(o) => Row::new("nikolskii", label)
            .value(o.ratio)
            .target(o.bound)
            .method(o.lhs.method.as_str())
            .est_error(o.ratio * (o.lhs.est_error / o.lhs.value + o.rhs.est_error / o.rhs.value))
            .verdict(o.pass, o.hypothesis_ok),
        Err(e) => Row::error("nikolskii", label, e),
    }
}

fn threshold_row(cfg: &SweepConfig, t: (f64, f64, f64, f64), eps: f64) -> Row {
    let (a, b, p, q) = t;
    let label = format!("{};eps={eps:?}", tuple_params(a, b, p, q));
    let hp = match HyperParams::new(a, b, p, q) {
        Ok(hp) => hp,
        Err(e) => return Row::error("threshold", label, e),
    };
    if !hp.hypothesis_ok() {
        return Row::new("threshold", label)
            .target(hp.sharp_radius())
            .verdict(false, false)
            .detail("outside q >= 2, p <= q, beta p <= alpha q; not searched");
    }
    let plan = deterministic_plan(cfg);
    let opts = ThresholdOptions { epsilon: eps, ..ThresholdOptions::default() };
    match threshold_search(&hp, &opts, &plan) {
        Ok(rep) => Row::new("threshold", label)
            .value(rep.r_star_empirical)
            .target(rep.r_star_theoretical)
            .est_error(rep.bracket_width)
            .method("bisection")
            .detail(format!("extrapolated={:?}", rep.r_star_extrapolated))
            .verdict((rep.r_star_empirical - rep.r_star_theoretical).abs() <= THRESHOLD_TOLERANCE, true),
        Err(e) => Row::error("threshold", label, e),
    }
}

fn expansion_row(cfg: &SweepConfig, a: f64, p: f64) -> Row {
    let label = params(&[("alpha", a), ("p", p)]);
    let plan = deterministic_plan(cfg);
    match necessity_expansion_check(a, p, &cfg.eps, &plan) {
        Ok(rep) => Row::new("expansion", label)
            .value(rep.max_normalized)
            .method(if plan.is_exact() { "exact" } else { "quadrature" })
            .verdict(rep.decay_ok, true),
        Err(e) => Row::error("expansion", label, e),
    }
}

fn kulikov_row(cfg: &SweepConfig, f: &ComplexPolynomial, idx: usize, a: f64, p: f64, q: f64) -> Row {
    let label = format!("{};poly={idx:04}", params(&[("alpha", a), ("p", p), ("q", q)]));
    let plan = plan_for(cfg, &format!("kulikov/{label}"));
    match kulikov_check(f, a, p, q, &plan) {
        Ok(c) => Row::new("kulikov", label)
            .value(c.lhs.value)
            .target(c.rhs.value)
            .method(c.lhs.method.as_str())
            .est_error(c.lhs.est_error + c.rhs.est_error)
            .verdict(c.pass, c.hypothesis_ok),
        Err(e) => Row::error("kulikov", label, e),
    }
}

fn tasks<'a>(cfg: &'a SweepConfig, polys: &'a [ComplexPolynomial]) -> Vec<Task<'a>> {
    let mut out: Vec<Task<'a>> = Vec::new();
    let grid = tuples(cfg);
    for &check in &cfg.checks {
        match check {
            CheckKind::Hyper => {
                let radii: Vec<Option<f64>> =
                    if cfg.r.is_empty() { vec![None] } else { cfg.r.iter().copied().map(Some).collect() };
                for (i, f) in polys.iter().enumerate() {
                    for &t in &grid {
                        for &r in &radii {
                            out.push(Box::new(move || hyper_row(cfg, f, i, t, r)));
                        }
                    }
                }
            }
            CheckKind::Nikolskii => {
                for (i, f) in polys.iter().enumerate() {
                    for &t in &grid {
                        out.push(Box::new(move || nikolskii_row(cfg, f, i, t)));
                    }
                }
            }
            CheckKind::Threshold => {
                for &t in &grid {
                    for &eps in &cfg.eps {
                        out.push(Box::new(move || threshold_row(cfg, t, eps)));
                    }
                }
            }
            CheckKind::Expansion => {
                if !cfg.eps.is_empty() {
                    for &a in &cfg.alpha {
                        for &p in &cfg.p {
                            out.push(Box::new(move || expansion_row(cfg, a, p)));
                        }
                    }
                }
            }
            CheckKind::Kulikov => {
                for (i, f) in polys.iter().enumerate() {
                    for &a in &cfg.alpha {
                        for &p in &cfg.p {
                            for &q in &cfg.q {
                                out.push(Box::new(move || kulikov_row(cfg, f, i, a, p, q)));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Runs every configured row on `jobs` threads. Numerical failures become
/// `error` rows; nothing is skipped.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> Result<VerificationReport, LabError> {
    let polys = cfg.all_polys();
    let work = tasks(cfg, &polys);
    let rows = with_pool(jobs, || work.par_iter().map(|t| t()).collect::<Vec<Row>>())?;
    Ok(VerificationReport::new(rows))
}

/// Count of rows per status, for summaries.
pub fn status_counts(rep: &VerificationReport) -> [(Status, usize); 4] {
    [Status::Pass, Status::Fail, Status::OutOfHypothesis, Status::Error].map(|s| (s, rep.count(s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theorem_grid(seed: u64) -> SweepConfig {
        let text = "\
[grid]
alpha = 2, 1.5
beta = 2, 3, 4
p = 0.5, 2
q = 2, 3, 4
[corpus]
count = 4
max_degree = 5
";
        SweepConfig::parse(text, seed).unwrap()
    }

    #[test]
    fn empty_grid_gives_empty_passing_report() {
        let rep = run_sweep(&SweepConfig::empty(1), 2).unwrap();
        assert!(rep.rows.is_empty());
        assert!(rep.aggregate_pass());
    }

    #[test]
    fn hyper_grid_passes_and_labels_out_of_hypothesis() {
        let rep = run_sweep(&theorem_grid(3), 0).unwrap();
        assert_eq!(rep.rows.len(), 4 * 2 * 3 * 2 * 3);
        assert!(rep.aggregate_pass(), "{}", rep.to_csv());
        assert!(rep.count(Status::OutOfHypothesis) > 0);
        assert_eq!(rep.count(Status::Error), 0);
    }

    #[test]
    fn output_does_not_depend_on_jobs() {
        let mut cfg = theorem_grid(5);
        cfg.checks = vec![CheckKind::Hyper, CheckKind::Nikolskii];
        cfg.method = MethodChoice::MonteCarlo;
        cfg.samples = 2000;
        let one = run_sweep(&cfg, 1).unwrap().to_csv();
        let many = run_sweep(&cfg, 4).unwrap().to_csv();
        assert_eq!(one, many);
    }

    #[test]
    fn threshold_and_expansion_ignore_monte_carlo() {
        let text = "\
[grid]
alpha = 2
beta = 3
p = 2
q = 4, 1
eps = 0.01
[run]
checks = threshold, expansion
method = monte-carlo
samples = 1000
";
        let rep = run_sweep(&SweepConfig::parse(text, 0).unwrap(), 0).unwrap();
        let thr: Vec<_> = rep.rows.iter().filter(|r| r.check == "threshold").collect();
        assert_eq!(thr.len(), 2);
        assert!(thr.iter().any(|r| r.status == Status::OutOfHypothesis));
        assert!(thr.iter().any(|r| r.status == Status::Pass));
        let exp: Vec<_> = rep.rows.iter().filter(|r| r.check == "expansion").collect();
        assert_eq!(exp.len(), 1);
        assert_eq!(exp[0].status, Status::Pass);
    }
}
