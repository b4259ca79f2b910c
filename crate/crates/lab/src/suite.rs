//! The acceptance criteria run by `bergman verify-suite`.
//!
//! Each criterion is a list of named parts; every part produces rows. Parts
//! run one after another and the rows inside a part run on the thread pool.
//! `filter` selects parts by name, by criterion number, or by criterion slug.

use std::time::{Duration, Instant};

use bergman_core::extremal::{extremal_ratio, gamma_ratio_limit_check, stirling_bounds_check, ExtremalSpec};
use bergman_core::lab::{
    convexity_majorant_check, hyper_check, ibp_identity_check, necessity_expansion_check, nikolskii_check,
    phi_convexity_check, threshold_search, HyperParams, ThresholdOptions,
};
use bergman_core::norm::{exact_norm_even_p, exact_norm_p2, NormPlan};
use bergman_core::{ComplexPolynomial, SpaceParams};
use rayon::prelude::*;

use crate::corpus::{random_corpus, CorpusSpec};
use crate::report::{params, Row, Status, VerificationReport};
use crate::{with_pool, LabError};

/// The hypercontractive grid `(alpha, beta, p, q)`.
pub const THEOREM_GRID: [(f64, f64, f64, f64); 4] =
    [(2.0, 2.0, 2.0, 4.0), (2.0, 3.0, 2.0, 4.0), (1.5, 2.0, 2.0, 3.0), (2.0, 4.0, 0.5, 2.0)];
/// Tuples for the threshold search.
pub const THRESHOLD_GRID: [(f64, f64, f64, f64); 3] = [(2.0, 3.0, 2.0, 4.0), (2.0, 2.0, 2.0, 4.0), (1.5, 2.0, 2.0, 3.0)];
pub const STIRLING_GRID: [f64; 9] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 400.0];

const ORACLE_TOL: f64 = 1e-10;
const THRESHOLD_TOL: f64 = 5e-3;
const IBP_TOL: f64 = 1e-7;
const ISOMETRY_TOL: f64 = 1e-8;
const EXPANSION_EPS: [f64; 3] = [4e-2, 2e-2, 1e-2];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub jobs: usize,
    pub filter: Option<String>,
    /// Forces the radial node count of every quadrature norm.
    pub nodes: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 1729, jobs: 0, filter: None, nodes: None }
    }
}

impl SuiteOptions {
    fn plan(&self) -> NormPlan {
        NormPlan::Quadrature { nodes: self.nodes, angles: None }
    }

    fn corpus(&self, label: &str, count: usize, max_degree: u32, nvars: usize) -> Vec<ComplexPolynomial> {
        random_corpus(&CorpusSpec { seed: self.seed, label: label.into(), count, max_degree, nvars })
    }
}

pub struct Criterion {
    pub id: u8,
    pub slug: &'static str,
    pub title: &'static str,
    pub parts: &'static [&'static str],
}

pub const CRITERIA: [Criterion; 8] = [
    Criterion { id: 1, slug: "oracle", title: "quadrature norms match exact oracles", parts: &["oracle-univariate", "oracle-bivariate"] },
    Criterion { id: 2, slug: "hyper", title: "hypercontractivity at the sharp radius", parts: &["hyper-grid"] },
    Criterion { id: 3, slug: "threshold", title: "threshold search recovers the sharp radius", parts: &["threshold"] },
    Criterion { id: 4, slug: "expansion", title: "second-order expansion of ||1 + eps z||", parts: &["expansion-decay", "expansion-closed-form"] },
    Criterion { id: 5, slug: "phi", title: "radial profile convexity and integration by parts", parts: &["phi-convexity", "ibp", "majorant"] },
    Criterion { id: 6, slug: "nikolskii", title: "Nikol'skii bound and homogenization isometry", parts: &["nikolskii", "isometry"] },
    Criterion { id: 7, slug: "sharpness", title: "extremal family asymptotics", parts: &["extremal", "gamma-ratio", "stirling"] },
    Criterion { id: 8, slug: "determinism", title: "reproducible output", parts: &["determinism"] },
];

fn selected(c: &Criterion, part: &str, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some(f) => {
            let f = f.trim();
            f == c.id.to_string() || f == c.slug || part.contains(f)
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionSummary {
    pub id: u8,
    pub title: &'static str,
    pub rows: usize,
    pub failed: usize,
    pub runtime: Duration,
}

impl CriterionSummary {
    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

pub struct SuiteOutcome {
    pub report: VerificationReport,
    pub criteria: Vec<CriterionSummary>,
    pub runtime: Duration,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.report.aggregate_pass()
    }

    /// One line per criterion that ran.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            s.push_str(&format!(
                "[{}] criterion {}: {} ({} rows, {} failed, {:.1}s)\n",
                if c.pass() { "PASS" } else { "FAIL" },
                c.id,
                c.title,
                c.rows,
                c.failed,
                c.runtime.as_secs_f64()
            ));
        }
        s.push_str(&format!(
            "{}: {} rows in {:.1}s\n",
            if self.pass() { "all criteria pass" } else { "verification FAILED" },
            self.report.rows.len(),
            self.runtime.as_secs_f64()
        ));
        s
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<Row> + Send + Sync + 'a>;

fn run_jobs(jobs: &[Job<'_>]) -> Vec<Row> {
    jobs.par_iter().flat_map_iter(|j| j()).collect()
}

fn check_name(id: u8, part: &str) -> String {
    format!("c{id}/{part}")
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn oracle_jobs<'a>(opts: &'a SuiteOptions, part: &'static str, polys: Vec<ComplexPolynomial>) -> Vec<Job<'a>> {
    const ALPHAS: [f64; 3] = [1.3, 2.0, 4.0];
    const PS: [f64; 3] = [2.0, 4.0, 6.0];
    polys
        .into_iter()
        .enumerate()
        .map(|(i, f)| -> Job<'a> {
            Box::new(move || {
                let (alpha, p) = (ALPHAS[i % 3], PS[(i / 3) % 3]);
                let label = format!("{};poly={i:04}", params(&[("alpha", alpha), ("p", p)]));
                let name = check_name(1, part);
                let run = || -> Result<Row, LabError> {
                    let exact = if p == 2.0 { exact_norm_p2(&f, alpha)? } else { exact_norm_even_p(&f, alpha, p)? };
                    let quad = opts.plan().bergman(&f, SpaceParams::new(alpha, p)?)?;
                    Ok(Row::new(name.clone(), label.clone())
                        .value(quad.value)
                        .target(exact.value)
                        .method(quad.method.as_str())
                        .detail(format!("rel_err={:?}", rel_gap(quad.value, exact.value)))
                        .verdict(rel_gap(quad.value, exact.value) <= ORACLE_TOL, true))
                };
                vec![run().unwrap_or_else(|e| Row::error(name.clone(), label.clone(), e))]
            })
        })
        .collect()
}

fn hyper_jobs(opts: &SuiteOptions) -> Vec<Job<'_>> {
    let polys = opts.corpus("c2/corpus", 50, 8, 1);
    let mut out: Vec<Job<'_>> = Vec::new();
    for (i, f) in polys.into_iter().enumerate() {
        out.push(Box::new(move || {
            THEOREM_GRID
                .iter()
                .map(|&(a, b, p, q)| {
                    let label = format!("{};poly={i:04}", params(&[("alpha", a), ("beta", b), ("p", p), ("q", q)]));
                    let name = check_name(2, "hyper-grid");
                    let run = || -> Result<Row, LabError> {
                        let hp = HyperParams::new(a, b, p, q)?;
                        let c = hyper_check(&f, &hp, hp.sharp_radius(), &opts.plan())?;
                        Ok(Row::new(name.clone(), label.clone())
                            .value(c.lhs.value)
                            .target(c.rhs.value)
                            .method(c.lhs.method.as_str())
                            .verdict(c.pass, c.hypothesis_ok))
                    };
                    run().unwrap_or_else(|e| Row::error(name.clone(), label.clone(), e))
                })
                .collect()
        }));
    }
    out
}

fn threshold_jobs(opts: &SuiteOptions) -> Vec<Job<'_>> {
    THRESHOLD_GRID
        .iter()
        .map(|&(a, b, p, q)| -> Job<'_> {
            Box::new(move || {
                let label = params(&[("alpha", a), ("beta", b), ("p", p), ("q", q)]);
                let name = check_name(3, "threshold");
                let target = (b * p / (a * q)).sqrt();
                let run = || -> Result<Row, LabError> {
                    let hp = HyperParams::new(a, b, p, q)?;
                    let rep = threshold_search(&hp, &ThresholdOptions::default(), &opts.plan())?;
                    Ok(Row::new(name.clone(), label.clone())
                        .value(rep.r_star_empirical)
                        .target(target)
                        .est_error(rep.bracket_width)
                        .method("bisection")
                        .detail(format!("extrapolated={:?}", rep.r_star_extrapolated))
                        .verdict((rep.r_star_empirical - target).abs() <= THRESHOLD_TOL, true))
                };
                vec![run().unwrap_or_else(|e| Row::error(name.clone(), label.clone(), e))]
            })
        })
        .collect()
}

fn expansion_jobs<'a>(opts: &'a SuiteOptions, part: &'static str) -> Vec<Job<'a>> {
    let cases: &[(f64, f64)] = if part == "expansion-decay" { &[(2.0, 2.0), (2.0, 4.0), (3.0, 2.5)] } else { &[(2.0, 2.0)] };
    cases
        .iter()
        .map(|&(a, p)| -> Job<'_> {
            Box::new(move || {
                let name = check_name(4, part);
                let label = params(&[("alpha", a), ("p", p)]);
                let rep = match necessity_expansion_check(a, p, &EXPANSION_EPS, &opts.plan()) {
                    Ok(r) => r,
                    Err(e) => return vec![Row::error(name, label, e)],
                };
                if part == "expansion-decay" {
                    return vec![Row::new(name, label)
                        .value(rep.max_normalized)
                        .method("quadrature")
                        .detail(format!("residuals={:?}", rep.residuals))
                        .verdict(rep.decay_ok, true)];
                }
                // ||1 + eps z||_{A^2_2} = sqrt(1 + eps^2/2) = 1 + eps^2/4 - eps^4/32 + O(eps^6).
                rep.eps
                    .iter()
                    .zip(&rep.residuals)
                    .map(|(&e, &res)| {
                        let closed = e.powi(4) / 32.0;
                        Row::new(name.clone(), format!("{label};{}", params(&[("eps", e)])))
                            .value(res)
                            .target(closed)
                            .method("quadrature")
                            .verdict(rel_gap(res, closed) <= 0.1, true)
                    })
                    .collect()
            })
        })
        .collect()
}

fn y_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

fn phi_jobs<'a>(opts: &'a SuiteOptions, part: &'static str) -> Vec<Job<'a>> {
    let name = check_name(5, part);
    match part {
        "phi-convexity" => opts
            .corpus("c5/corpus", 20, 4, 1)
            .into_iter()
            .enumerate()
            .map(|(i, f)| -> Job<'_> {
                let name = name.clone();
                Box::new(move || {
                    let q = [2.0, 3.0, 4.0][i % 3];
                    let label = format!("{};poly={i:04}", params(&[("q", q)]));
                    vec![match phi_convexity_check(&f, q, &y_grid()) {
                        Ok(o) => Row::new(name.clone(), label).value(o.min_phi2).target(0.0).method("finite-difference").verdict(o.pass, true),
                        Err(e) => Row::error(name.clone(), label, e),
                    }]
                })
            })
            .collect(),
        "ibp" => {
            let fs = [("z", vec![0.0, 1.0]), ("1+z", vec![1.0, 1.0]), ("1+z+z^2", vec![1.0, 1.0, 1.0])];
            let mut out: Vec<Job<'_>> = Vec::new();
            for (fname, c) in fs {
                for (b, bp) in [(2.0, 4.0), (3.0, 6.0)] {
                    // Even q keeps Phi a polynomial in y. For odd q and f(0) = 0, Phi'' has
                    // a y^(-1/2) singularity that the finite differences do not resolve.
                    for q in [2.0, 4.0] {
                        let name = name.clone();
                        let c = c.clone();
                        out.push(Box::new(move || {
                            let f = ComplexPolynomial::univariate_real(&c);
                            let label = format!("{};f={fname}", params(&[("beta", b), ("beta_prime", bp), ("q", q)]));
                            vec![match ibp_identity_check(&f, q, b, bp) {
                                Ok(r) => Row::new(name.clone(), label)
                                    .value(r.discrepancy)
                                    .target(0.0)
                                    .method("gauss-jacobi+finite-difference")
                                    .verdict(r.discrepancy <= IBP_TOL, true),
                                Err(e) => Row::error(name.clone(), label, e),
                            }]
                        }));
                    }
                }
            }
            out
        }
        _ => [(2.0, 4.0), (3.0, 6.0), (2.0, 3.0)]
            .into_iter()
            .map(|(b, bp)| -> Job<'_> {
                let name = name.clone();
                Box::new(move || {
                    let top = b / bp;
                    let grid: Vec<f64> = (0..=100).map(|k| top * k as f64 / 100.0).collect();
                    let label = params(&[("beta", b), ("beta_prime", bp)]);
                    vec![match convexity_majorant_check(b, bp, &grid) {
                        Ok(o) => Row::new(name.clone(), label).value(o.min_gap).target(0.0).method("direct").verdict(o.pass, true),
                        Err(e) => Row::error(name.clone(), label, e),
                    }]
                })
            })
            .collect(),
    }
}

fn nikolskii_jobs(opts: &SuiteOptions) -> Vec<Job<'_>> {
    let mut polys = opts.corpus("c6/univariate", 25, 5, 1);
    polys.extend(opts.corpus("c6/bivariate", 25, 5, 2));
    polys
        .into_iter()
        .enumerate()
        .map(|(i, f)| -> Job<'_> {
            Box::new(move || {
                THEOREM_GRID
                    .iter()
                    .map(|&(a, b, p, q)| {
                        let name = check_name(6, "nikolskii");
                        let label = format!("{};poly={i:04}", params(&[("alpha", a), ("beta", b), ("p", p), ("q", q)]));
                        match nikolskii_check(&f, a, b, p, q, &opts.plan()) {
                            Ok(o) => Row::new(name, label)
                                .value(o.ratio)
                                .target(o.bound)
                                .method(o.lhs.method.as_str())
                                .detail(format!("n={};degree={}", f.nvars(), o.degree))
                                .verdict(o.pass, o.hypothesis_ok),
                            Err(e) => Row::error(name, label, e),
                        }
                    })
                    .collect()
            })
        })
        .collect()
}

fn isometry_jobs(opts: &SuiteOptions) -> Vec<Job<'_>> {
    let mut polys = opts.corpus("c6/iso-univariate", 10, 5, 1);
    polys.extend(opts.corpus("c6/iso-bivariate", 10, 5, 2));
    polys
        .into_iter()
        .enumerate()
        .map(|(i, f)| -> Job<'_> {
            Box::new(move || {
                [2.0, 3.5, 4.0]
                    .iter()
                    .map(|&p| {
                        let name = check_name(6, "isometry");
                        let label = format!("{};poly={i:04}", params(&[("alpha", 2.0), ("p", p)]));
                        let run = || -> Result<Row, LabError> {
                            let space = SpaceParams::new(2.0, p)?;
                            let q = f.homogenize(f.degree())?;
                            let plan = opts.plan();
                            let lhs = plan.bergman(&f, space)?;
                            let rhs = plan.mixed(&q, space)?;
                            Ok(Row::new(name.clone(), label.clone())
                                .value(rhs.value)
                                .target(lhs.value)
                                .method(lhs.method.as_str())
                                .verdict(rel_gap(rhs.value, lhs.value) <= ISOMETRY_TOL, true))
                        };
                        run().unwrap_or_else(|e| Row::error(name.clone(), label.clone(), e))
                    })
                    .collect()
            })
        })
        .collect()
}

/// `extremal_ratio` at `m = 1, alpha = beta = 2, p = 2, q = 4, n = 64`.
fn extremal_row(seed: u64, samples: u64) -> Row {
    let name = check_name(7, "extremal");
    let label = format!("{};m=1;n=64", params(&[("alpha", 2.0), ("beta", 2.0), ("p", 2.0), ("q", 4.0), ("samples", samples as f64)]));
    let run = || -> Result<Row, LabError> {
        let spec = ExtremalSpec::new(1.0, 64, 1)?;
        let r = extremal_ratio(&spec, 2.0, 2.0, 2.0, 4.0, samples, seed)?;
        Ok(Row::new(name.clone(), label.clone())
            .value(r.ratio)
            .target(r.target)
            .est_error(r.ci)
            .method("monte-carlo")
            .verdict(r.within(4.0, 0.03), true))
    };
    run().unwrap_or_else(|e| Row::error(name.clone(), label.clone(), e))
}

fn sharpness_jobs<'a>(opts: &'a SuiteOptions, part: &'static str) -> Vec<Job<'a>> {
    match part {
        "extremal" => vec![Box::new(move || vec![extremal_row(opts.seed, 200_000)])],
        "gamma-ratio" => vec![Box::new(|| {
            let name = check_name(7, part);
            let label = "m=10,50,100,200;p=2.0;q=4.0";
            vec![match gamma_ratio_limit_check(2.0, 4.0, &[10, 50, 100, 200]) {
                Ok(rep) => {
                    let last = rep.rows.last().map_or(f64::NAN, |r| r.1);
                    Row::new(name, label)
                        .value(last)
                        .target(rep.limit)
                        .method("log-gamma")
                        .detail(format!("trend_ok={}", rep.trend_ok))
                        .verdict(rep.relative_error_at_last() <= 0.02 && rep.trend_ok, true)
                }
                Err(e) => Row::error(name, label, e),
            }]
        })],
        _ => vec![Box::new(|| {
            let name = check_name(7, "stirling");
            match stirling_bounds_check(&STIRLING_GRID) {
                Ok(rows) => rows
                    .into_iter()
                    .map(|r| {
                        Row::new(name.clone(), params(&[("x", r.x)]))
                            .value(r.ln_gamma)
                            .target(r.ln_lower)
                            .method("log-gamma")
                            .detail(format!("ln_upper={:?}", r.ln_upper))
                            .verdict(r.pass, true)
                    })
                    .collect(),
                Err(e) => vec![Row::error(name, "grid", e)],
            }
        })],
    }
}

/// Replays a slice of the suite on one thread in reverse order and compares
/// it byte for byte with the pooled run.
fn determinism_rows(opts: &SuiteOptions) -> Result<Vec<Row>, LabError> {
    let replay = |reverse: bool, jobs: usize| -> Result<String, LabError> {
        let mut work: Vec<Job<'_>> = hyper_jobs(opts).into_iter().take(6).collect();
        work.extend(isometry_jobs(opts).into_iter().take(4));
        work.push(Box::new(|| vec![extremal_row(opts.seed, 20_000)]));
        if reverse {
            work.reverse();
        }
        let rows = with_pool(jobs, || run_jobs(&work))?;
        Ok(VerificationReport::new(rows).to_csv())
    };
    let pooled = replay(false, opts.jobs)?;
    let single = replay(true, 1)?;
    let corpus_a = format!("{:?}", opts.corpus("c2/corpus", 50, 8, 1));
    let corpus_b = format!("{:?}", opts.corpus("c2/corpus", 50, 8, 1));
    let diff = pooled.lines().zip(single.lines()).filter(|(a, b)| a != b).count()
        + pooled.lines().count().abs_diff(single.lines().count());
    let name = check_name(8, "determinism");
    Ok(vec![
        Row::new(name.clone(), "replay=jobs-vs-single-reversed").value(diff as f64).target(0.0).method("byte-compare").verdict(diff == 0, true),
        Row::new(name, "replay=corpus").value((corpus_a != corpus_b) as u8 as f64).target(0.0).method("byte-compare").verdict(corpus_a == corpus_b, true),
    ])
}

fn part_jobs<'a>(opts: &'a SuiteOptions, part: &'static str) -> Vec<Job<'a>> {
    match part {
        "oracle-univariate" => oracle_jobs(opts, part, opts.corpus("c1/univariate", 100, 12, 1)),
        "oracle-bivariate" => oracle_jobs(opts, part, opts.corpus("c1/bivariate", 20, 6, 2)),
        "hyper-grid" => hyper_jobs(opts),
        "threshold" => threshold_jobs(opts),
        "expansion-decay" | "expansion-closed-form" => expansion_jobs(opts, part),
        "phi-convexity" | "ibp" | "majorant" => phi_jobs(opts, part),
        "nikolskii" => nikolskii_jobs(opts),
        "isometry" => isometry_jobs(opts),
        "extremal" | "gamma-ratio" | "stirling" => sharpness_jobs(opts, part),
        other => unreachable!("unknown suite part {other}"),
    }
}

pub fn verify_suite(opts: &SuiteOptions) -> Result<SuiteOutcome, LabError> {
    let start = Instant::now();
    let mut all = Vec::new();
    let mut summaries = Vec::new();
    for c in &CRITERIA {
        let parts: Vec<&'static str> = c.parts.iter().copied().filter(|p| selected(c, p, opts.filter.as_deref())).collect();
        if parts.is_empty() {
            continue;
        }
        let t0 = Instant::now();
        let mut rows = Vec::new();
        for part in parts {
            if part == "determinism" {
                rows.extend(determinism_rows(opts)?);
            } else {
                let jobs = part_jobs(opts, part);
                rows.extend(with_pool(opts.jobs, || run_jobs(&jobs))?);
            }
        }
        let failed = rows.iter().filter(|r| matches!(r.status, Status::Fail | Status::Error)).count();
        summaries.push(CriterionSummary { id: c.id, title: c.title, rows: rows.len(), failed, runtime: t0.elapsed() });
        all.extend(rows);
    }
    Ok(SuiteOutcome { report: VerificationReport::new(all), criteria: summaries, runtime: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_parts_and_criteria() {
        let c7 = &CRITERIA[6];
        assert!(selected(c7, "stirling", Some("stirling")));
        assert!(!selected(c7, "extremal", Some("stirling")));
        assert!(selected(c7, "extremal", Some("7")));
        assert!(selected(c7, "extremal", Some("sharpness")));
        assert!(!selected(&CRITERIA[0], "oracle-univariate", Some("stirling")));
    }

    #[test]
    fn stirling_only_run() {
        let opts = SuiteOptions { filter: Some("stirling".into()), ..SuiteOptions::default() };
        let out = verify_suite(&opts).unwrap();
        assert_eq!(out.criteria.len(), 1);
        assert_eq!(out.criteria[0].id, 7);
        assert_eq!(out.report.rows.len(), STIRLING_GRID.len());
        assert!(out.pass());
    }

    #[test]
    fn forced_single_node_fails_oracle_criterion() {
        let opts = SuiteOptions { filter: Some("oracle-univariate".into()), nodes: Some(1), ..SuiteOptions::default() };
        let out = verify_suite(&opts).unwrap();
        assert!(!out.pass());
        assert!(!out.criteria[0].pass());
        assert!(out.summary().contains("[FAIL] criterion 1"));
    }
}
