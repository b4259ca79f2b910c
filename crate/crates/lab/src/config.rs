//! Sweep configuration files.
//!
//! ```text
//! # comment
//! [grid]
//! alpha = 2, 1.5
//! beta = 2, 3
//! p = 2
//! q = 4
//! r = 0.5, 0.75        # empty: the sharp radius of each tuple
//! eps = 0.01           # threshold / expansion epsilons
//!
//! [corpus]
//! seed = 7             # defaults to the global seed
//! count = 10
//! max_degree = 6
//! nvars = 1
//! poly = 1, 1          # repeatable; dense or sparse text form
//!
//! [run]
//! checks = hyper, nikolskii, threshold, expansion, kulikov
//! method = quadrature  # quadrature | exact | mc
//! nodes = 64
//! angles = 513
//! samples = 200000
//! output = results.csv
//! ```
//!
//! Unknown sections or keys and out-of-range values are errors carrying the
//! line number.

use std::path::PathBuf;
use std::str::FromStr;

use bergman_core::quadrature::MIN_ALPHA;
use bergman_core::ComplexPolynomial;

use crate::corpus::CorpusSpec;
use crate::format::parse_poly;
use crate::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    Hyper,
    Nikolskii,
    Threshold,
    Expansion,
    Kulikov,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::Hyper => "hyper",
            CheckKind::Nikolskii => "nikolskii",
            CheckKind::Threshold => "threshold",
            CheckKind::Expansion => "expansion",
            CheckKind::Kulikov => "kulikov",
        }
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "hyper" => CheckKind::Hyper,
            "nikolskii" => CheckKind::Nikolskii,
            "threshold" => CheckKind::Threshold,
            "expansion" => CheckKind::Expansion,
            "kulikov" => CheckKind::Kulikov,
            other => return Err(format!("unknown check `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Quadrature,
    Exact,
    MonteCarlo,
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "quadrature" => MethodChoice::Quadrature,
            "exact" => MethodChoice::Exact,
            "mc" | "monte-carlo" => MethodChoice::MonteCarlo,
            other => return Err(format!("unknown method `{other}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub eps: Vec<f64>,
    pub polys: Vec<ComplexPolynomial>,
    pub corpus: Option<CorpusSpec>,
    pub checks: Vec<CheckKind>,
    pub method: MethodChoice,
    pub nodes: Option<usize>,
    pub angles: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn empty(seed: u64) -> Self {
        SweepConfig {
            alpha: vec![],
            beta: vec![],
            p: vec![],
            q: vec![],
            r: vec![],
            eps: vec![],
            polys: vec![],
            corpus: None,
            checks: vec![CheckKind::Hyper],
            method: MethodChoice::Quadrature,
            nodes: None,
            angles: None,
            samples: 200_000,
            seed,
            output: None,
        }
    }

    /// The explicit polynomials followed by the random corpus.
    pub fn all_polys(&self) -> Vec<ComplexPolynomial> {
        let mut out = self.polys.clone();
        if let Some(spec) = &self.corpus {
            out.extend(crate::corpus::random_corpus(spec));
        }
        out
    }

    pub fn parse(text: &str, default_seed: u64) -> Result<Self, LabError> {
        let mut cfg = SweepConfig::empty(default_seed);
        let mut section = String::new();
        let mut corpus_seed = None;
        let (mut count, mut max_degree, mut nvars) = (0usize, 6u32, 1usize);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| LabError::Config { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| err(format!("unterminated section `{content}`")))?;
                if !matches!(name.trim(), "grid" | "corpus" | "run") {
                    return Err(err(format!("unknown section `[{}]`", name.trim())));
                }
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match (section.as_str(), key) {
                ("grid", "alpha" | "beta") => {
                    let v = list::<f64>(value).map_err(err)?;
                    if let Some(bad) = v.iter().find(|&&a| !(a >= MIN_ALPHA && a.is_finite())) {
                        return Err(err(format!("{key} = {bad} must exceed {MIN_ALPHA}")));
                    }
                    *if key == "alpha" { &mut cfg.alpha } else { &mut cfg.beta } = v;
                }
                ("grid", "p" | "q") => {
                    let v = list::<f64>(value).map_err(err)?;
                    if let Some(bad) = v.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
                        return Err(err(format!("{key} = {bad} must be positive")));
                    }
                    *if key == "p" { &mut cfg.p } else { &mut cfg.q } = v;
                }
                ("grid", "r") => {
                    cfg.r = list::<f64>(value).map_err(err)?;
                    if let Some(bad) = cfg.r.iter().find(|&&r| !(0.0..=1.0).contains(&r)) {
                        return Err(err(format!("r = {bad} must lie in [0, 1]")));
                    }
                }
                ("grid", "eps") => {
                    cfg.eps = list::<f64>(value).map_err(err)?;
                    if let Some(bad) = cfg.eps.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
                        return Err(err(format!("eps = {bad} must lie in (0, 1)")));
                    }
                }
                ("corpus", "seed") => corpus_seed = Some(scalar::<u64>(value).map_err(err)?),
                ("corpus", "count") => count = scalar(value).map_err(err)?,
                ("corpus", "max_degree") => max_degree = scalar(value).map_err(err)?,
                ("corpus", "nvars") => {
                    nvars = scalar(value).map_err(err)?;
                    if nvars == 0 {
                        return Err(err("nvars must be at least 1".into()));
                    }
                }
                ("corpus", "poly") => cfg.polys.push(parse_poly(value, None).map_err(|e| err(e.to_string()))?),
                ("run", "checks") => cfg.checks = list::<CheckKind>(value).map_err(err)?,
                ("run", "method") => cfg.method = scalar(value).map_err(err)?,
                ("run", "nodes") => cfg.nodes = Some(positive(value).map_err(err)?),
                ("run", "angles") => cfg.angles = Some(positive(value).map_err(err)?),
                ("run", "samples") => cfg.samples = scalar(value).map_err(err)?,
                ("run", "output") => cfg.output = Some(PathBuf::from(value)),
                ("", _) => return Err(err(format!("key `{key}` outside a section"))),
                (s, _) => return Err(err(format!("unknown key `{key}` in [{s}]"))),
            }
        }
        if count > 0 {
            cfg.corpus = Some(CorpusSpec {
                seed: corpus_seed.unwrap_or(default_seed),
                label: "sweep/corpus".into(),
                count,
                max_degree,
                nvars,
            });
        }
        Ok(cfg)
    }
}

fn scalar<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("bad value `{value}`: {e}"))
}

fn positive(value: &str) -> Result<usize, String> {
    match scalar::<usize>(value)? {
        0 => Err(format!("`{value}` must be positive")),
        n => Ok(n),
    }
}

fn list<T: FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(str::trim).filter(|v| !v.is_empty()).map(scalar).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "\
# header
[grid]
alpha = 2, 1.5
beta = 3
p = 2
q = 4   # trailing comment
r =
eps = 0.01, 0.005

[corpus]
count = 3
max_degree = 4
poly = 1, 1
poly = (1,0):1; (0,1):1

[run]
checks = hyper, threshold
method = exact
nodes = 32
";
        let cfg = SweepConfig::parse(text, 99).unwrap();
        assert_eq!(cfg.alpha, vec![2.0, 1.5]);
        assert!(cfg.r.is_empty());
        assert_eq!(cfg.polys.len(), 2);
        assert_eq!(cfg.polys[1].nvars(), 2);
        assert_eq!(cfg.corpus.as_ref().unwrap().seed, 99);
        assert_eq!(cfg.all_polys().len(), 5);
        assert_eq!(cfg.checks, vec![CheckKind::Hyper, CheckKind::Threshold]);
        assert_eq!(cfg.method, MethodChoice::Exact);
        assert_eq!(cfg.nodes, Some(32));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("[grid]\nalpha = 1.0\n", 2),
            ("[grid]\n\ngamma = 2\n", 3),
            ("alpha = 2\n", 1),
            ("[nope]\n", 1),
            ("[run]\nchecks = hyper, bogus\n", 2),
            ("[run]\nnodes = 0\n", 2),
            ("[grid]\np = 2\nq = x\n", 3),
            ("[corpus]\npoly = (1,0:1\n", 2),
            ("[grid]\nr = 1.5\n", 2),
        ];
        for (text, want) in cases {
            match SweepConfig::parse(text, 0) {
                Err(LabError::Config { line, .. }) => assert_eq!(line, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_config_is_valid() {
        let cfg = SweepConfig::parse("", 1).unwrap();
        assert!(cfg.all_polys().is_empty());
    }
}
