//! `bergman`: norms of complex polynomials on weighted Bergman spaces and
//! numerical checks of the sharp inequalities between them.
//!
//! Exit status: 0 when every in-hypothesis row passes, 1 on a verification
//! failure, 2 on a usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bergman_core::extremal::{gamma_ratio_limit_check, sharpness_exhibit, stirling_bounds_check};
use bergman_core::lab::{
    hyper_check_polydisc, ibp_identity_check, kulikov_check, nikolskii_check, phi_profile, threshold_search,
    weissler_threshold_check, HyperParams, ThresholdOptions, DEFAULT_FD_STEP,
};
use bergman_core::mc::stream_for_label;
use bergman_core::norm::NormPlan;
use bergman_core::quadrature::radial_rule;
use bergman_core::{DilationVector, SpaceParams};
use bergman_lab::config::SweepConfig;
use bergman_lab::format::load_poly;
use bergman_lab::report::params;
use bergman_lab::suite::{verify_suite, SuiteOptions};
use bergman_lab::sweep::{run_sweep, status_counts};
use bergman_lab::{LabError, Row, VerificationReport};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bergman", version, about = "Weighted Bergman norms and sharp inequality checks")]
struct Cli {
    /// Top-level seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 1729)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    out: OutFormat,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum MethodArg {
    Auto,
    Exact,
    Quadrature,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Bergman,
    Hardy,
    Mixed,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Radial Gauss nodes per disk.
    #[arg(long)]
    nodes: Option<usize>,
    /// Equispaced angles per circle.
    #[arg(long)]
    angles: Option<usize>,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 200_000)]
    samples: u64,
}

#[derive(Args)]
struct Tuple {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of a polynomial (`--poly "1, 1"`, `--poly "(1,0):1; (0,1):1"` or `--poly @file.json`).
    Norm {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = SpaceKind::Bergman)]
        space: SpaceKind,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// `||T_r f||_{A^q_beta} <= ||f||_{A^p_alpha}`; `r` defaults to the sharp radius.
    HyperCheck {
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long)]
        r: Option<f64>,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Largest `r` for which `f = 1 + eps z` satisfies the inequality.
    Threshold {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long, default_value_t = 1e-2)]
        eps: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// `||P||_{A^q_beta} <= C^deg(P) ||P||_{A^p_alpha}` with `C = sqrt(alpha q / (beta p))`.
    Nikolskii {
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        tuple: Tuple,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Radial profile `Phi(y)` and `Phi''(y)` on a grid.
    Phi {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        q: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
        grid: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        h: f64,
    },
    /// Integration-by-parts identities for `Phi`.
    IbpCheck {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        beta_prime: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// `||f||_{A^q_{alpha q/p}} <= ||f||_{A^p_alpha}`.
    Kulikov {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// `||f_r||_{H^q} <= ||f||_{H^p}` for `r^2 <= p/q`.
    Weissler {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Monte Carlo ratio for the extremal family and its share of the bound.
    Extremal {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
    },
    /// Stirling sandwich for `Gamma(x + 1)`.
    Stirling {
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,5,10,50,100,400")]
        grid: Vec<f64>,
    },
    /// `Gamma(qm/2+1)^(1/qm) / Gamma(pm/2+1)^(1/pm)` against `sqrt(q/p)`.
    GammaRatio {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 200)]
        m_max: u32,
    },
    /// Run a configuration file's cross product of checks.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance criteria.
    VerifySuite {
        /// Criterion number, slug or part name.
        #[arg(long)]
        filter: Option<String>,
        /// Force the radial node count of every quadrature norm.
        #[arg(long)]
        nodes: Option<usize>,
        /// Also write the CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a radial Gauss rule for `dA_alpha` in the variable `t = |z|^2`.
    DumpRule {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Io(m) | LabError::Pool(m) => Failure::Runtime(m),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<bergman_core::Error> for Failure {
    fn from(e: bergman_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn plan_of(args: &PlanArgs, seed: u64, label: &str) -> NormPlan {
    match args.method {
        MethodArg::Exact => NormPlan::Exact,
        MethodArg::Mc => NormPlan::MonteCarlo { samples: args.samples, seed, stream: stream_for_label(label) },
        MethodArg::Auto | MethodArg::Quadrature => NormPlan::Quadrature { nodes: args.nodes, angles: args.angles },
    }
}

fn tuple_label(t: &Tuple) -> String {
    params(&[("alpha", t.alpha), ("beta", t.beta), ("p", t.p), ("q", t.q)])
}

fn run(cli: &Cli) -> Result<VerificationReport, Failure> {
    let seed = cli.seed;
    let rows = match &cli.command {
        Command::Norm { poly, alpha, p, space, plan } => {
            let f = load_poly(poly)?;
            let label = params(&[("alpha", *alpha), ("p", *p)]);
            let mut np = plan_of(plan, seed, &format!("norm/{label}"));
            // `auto` takes the exact route when it exists.
            if plan.method == MethodArg::Auto && *p > 0.0 && p.fract() == 0.0 && (*p as u64).is_multiple_of(2) {
                np = NormPlan::Exact;
            }
            let sp = SpaceParams::new(*alpha, *p)?;
            let (check, r) = match space {
                SpaceKind::Bergman => ("norm/bergman", np.bergman(&f, sp)?),
                SpaceKind::Hardy => ("norm/hardy", np.hardy(&f, *p)?),
                SpaceKind::Mixed => ("norm/mixed", np.mixed(&f, sp)?),
            };
            vec![Row::new(check, label).value(r.value).method(r.method.as_str()).est_error(r.est_error)]
        }
        Command::HyperCheck { poly, tuple, r, plan } => {
            let f = load_poly(poly)?;
            let hp = HyperParams::new(tuple.alpha, tuple.beta, tuple.p, tuple.q)?;
            let r = r.unwrap_or_else(|| hp.sharp_radius());
            let label = format!("{};{}", tuple_label(tuple), params(&[("r", r)]));
            let c = hyper_check_polydisc(&f, &hp, &DilationVector::uniform(f.nvars(), r)?, &plan_of(plan, seed, &label))?;
            vec![Row::new("hyper", label)
                .value(c.lhs.value)
                .target(c.rhs.value)
                .method(c.lhs.method.as_str())
                .est_error(c.lhs.est_error + c.rhs.est_error)
                .verdict(c.pass, c.hypothesis_ok)]
        }
        Command::Threshold { tuple, eps, tol, plan } => {
            let hp = HyperParams::new(tuple.alpha, tuple.beta, tuple.p, tuple.q)?;
            let label = format!("{};{}", tuple_label(tuple), params(&[("eps", *eps)]));
            let opts = ThresholdOptions { epsilon: *eps, tolerance: *tol, ..ThresholdOptions::default() };
            let rep = threshold_search(&hp, &opts, &plan_of(plan, seed, &label))?;
            vec![Row::new("threshold", label)
                .value(rep.r_star_empirical)
                .target(rep.r_star_theoretical)
                .est_error(rep.bracket_width)
                .method("bisection")
                .detail(format!(
                    "half_eps={:?};extrapolated={:?}",
                    rep.r_star_half_epsilon, rep.r_star_extrapolated
                ))
                .verdict((rep.r_star_empirical - rep.r_star_theoretical).abs() <= bergman_lab::sweep::THRESHOLD_TOLERANCE, true)]
        }
        Command::Nikolskii { poly, tuple, plan } => {
            let f = load_poly(poly)?;
            let label = tuple_label(tuple);
            let o = nikolskii_check(&f, tuple.alpha, tuple.beta, tuple.p, tuple.q, &plan_of(plan, seed, &label))?;
            vec![Row::new("nikolskii", label)
                .value(o.ratio)
                .target(o.bound)
                .method(o.lhs.method.as_str())
                .detail(format!("degree={}", o.degree))
                .verdict(o.pass, o.hypothesis_ok)]
        }
        Command::Phi { poly, q, grid, h } => {
            let f = load_poly(poly)?;
            let prof = phi_profile(&f, *q, grid, *h)?;
            prof.y_grid
                .iter()
                .zip(prof.phi.iter().zip(&prof.phi2))
                .map(|(&y, (&phi, &phi2))| {
                    Row::new("phi", params(&[("q", *q), ("y", y)]))
                        .value(phi)
                        .target(phi2)
                        .method("finite-difference")
                        .detail("value=Phi;target=Phi''")
                })
                .collect()
        }
        Command::IbpCheck { poly, q, beta, beta_prime, tol } => {
            let f = load_poly(poly)?;
            let r = ibp_identity_check(&f, *q, *beta, *beta_prime)?;
            vec![Row::new("ibp", params(&[("beta", *beta), ("beta_prime", *beta_prime), ("q", *q)]))
                .value(r.discrepancy)
                .target(0.0)
                .method("gauss-jacobi+finite-difference")
                .detail(format!(
                    "first={:?}/{:?};second={:?}/{:?}",
                    r.first_lhs, r.first_rhs, r.second_lhs, r.second_rhs
                ))
                .verdict(r.discrepancy <= *tol, true)]
        }
        Command::Kulikov { poly, alpha, p, q, plan } => {
            let f = load_poly(poly)?;
            let label = params(&[("alpha", *alpha), ("p", *p), ("q", *q)]);
            let c = kulikov_check(&f, *alpha, *p, *q, &plan_of(plan, seed, &label))?;
            vec![Row::new("kulikov", label)
                .value(c.lhs.value)
                .target(c.rhs.value)
                .method(c.lhs.method.as_str())
                .verdict(c.pass, c.hypothesis_ok)]
        }
        Command::Weissler { poly, p, q, r, plan } => {
            let f = load_poly(poly)?;
            let label = params(&[("p", *p), ("q", *q), ("r", *r)]);
            let c = weissler_threshold_check(&f, *p, *q, *r, &plan_of(plan, seed, &label))?;
            vec![Row::new("weissler", label)
                .value(c.lhs.value)
                .target(c.rhs.value)
                .method(c.lhs.method.as_str())
                .verdict(c.pass, c.hypothesis_ok)]
        }
        Command::Extremal { tuple, m, n, samples } => {
            let rep = sharpness_exhibit(tuple.alpha, tuple.beta, tuple.p, tuple.q, *m, *n, *samples, seed)?;
            let label = format!("{};m={m};n={n}", tuple_label(tuple));
            vec![
                Row::new("extremal/ratio", label.clone())
                    .value(rep.ratio.ratio)
                    .target(rep.ratio.target)
                    .est_error(rep.ratio.ci)
                    .method("monte-carlo")
                    .verdict(rep.ratio.within(4.0, 0.03), true),
                Row::new("extremal/attainment", label)
                    .value(rep.attainment)
                    .target(rep.predicted_attainment)
                    .est_error(rep.attainment_ci)
                    .method("monte-carlo")
                    .detail(format!("bound={:?}", rep.bound)),
            ]
        }
        Command::Stirling { grid } => stirling_bounds_check(grid)?
            .into_iter()
            .map(|r| {
                Row::new("stirling", params(&[("x", r.x)]))
                    .value(r.ln_gamma)
                    .target(r.ln_lower)
                    .method("log-gamma")
                    .detail(format!("ln_upper={:?}", r.ln_upper))
                    .verdict(r.pass, true)
            })
            .collect(),
        Command::GammaRatio { p, q, m_max } => {
            let grid: Vec<u32> = [1u32, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000]
                .into_iter()
                .filter(|&m| m < *m_max)
                .chain(std::iter::once(*m_max))
                .collect();
            let rep = gamma_ratio_limit_check(*p, *q, &grid)?;
            rep.rows
                .iter()
                .map(|&(m, r)| {
                    Row::new("gamma-ratio", format!("m={m:06};{}", params(&[("p", *p), ("q", *q)])))
                        .value(r)
                        .target(rep.limit)
                        .method("log-gamma")
                })
                .collect()
        }
        Command::Sweep { config, output } => {
            let text = fs::read_to_string(config).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            let mut cfg = SweepConfig::parse(&text, seed)?;
            if output.is_some() {
                cfg.output = output.clone();
            }
            let rep = run_sweep(&cfg, cli.jobs)?;
            if let Some(path) = &cfg.output {
                write_report(&rep, cli.out, path)?;
            }
            if !cli.quiet {
                let counts = status_counts(&rep).map(|(s, n)| format!("{s}={n}")).join(" ");
                eprintln!("sweep: {} rows ({counts})", rep.rows.len());
            }
            return Ok(rep);
        }
        Command::VerifySuite { filter, nodes, csv } => {
            let opts = SuiteOptions { seed, jobs: cli.jobs, filter: filter.clone(), nodes: *nodes };
            let out = verify_suite(&opts)?;
            if let Some(path) = csv {
                write_report(&out.report, OutFormat::Csv, path)?;
            }
            if !cli.quiet {
                eprint!("{}", out.summary());
            }
            return Ok(out.report);
        }
        Command::DumpRule { alpha, nodes } => {
            let (t, w) = radial_rule(*alpha, *nodes)?;
            t.iter()
                .zip(&w)
                .enumerate()
                .map(|(k, (&t, &w))| {
                    Row::new("rule", format!("{};k={k:04}", params(&[("alpha", *alpha)])))
                        .value(t)
                        .target(w)
                        .method("golub-welsch")
                        .detail("value=node;target=weight")
                })
                .collect()
        }
    };
    Ok(VerificationReport::new(rows))
}

fn render(rep: &VerificationReport, fmt: OutFormat) -> String {
    match fmt {
        OutFormat::Csv => rep.to_csv(),
        OutFormat::Json => rep.to_json() + "\n",
    }
}

fn write_report(rep: &VerificationReport, fmt: OutFormat, path: &PathBuf) -> Result<(), Failure> {
    fs::write(path, render(rep, fmt)).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            print!("{}", render(&rep, cli.out));
            if rep.aggregate_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
