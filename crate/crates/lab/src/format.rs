//! Text and JSON forms of polynomials.
//!
//! Text comes in two flavours:
//!
//! * dense univariate: `c0, c1, c2, ...` (Taylor coefficients, lowest first);
//! * sparse: `(g1,...,gn):c; (g1,...,gn):c; ...`, the form `Display` writes.
//!
//! Coefficients are complex literals such as `2`, `-0.5`, `3i`, `-i`,
//! `1.5e-3-2i`. JSON files hold `{"nvars": n, "terms": [{"gamma": [..], "re": x, "im": y}]}`.

use std::fs;
use std::path::Path;

use bergman_core::{Complex64, ComplexPolynomial, MultiIndex};
use serde::{Deserialize, Serialize};

use crate::LabError;

fn bad(msg: impl Into<String>) -> LabError {
    LabError::Parse(msg.into())
}

fn parse_real(s: &str, whole: &str) -> Result<f64, LabError> {
    s.parse::<f64>().map_err(|_| bad(format!("bad number `{s}` in `{whole}`")))
}

/// Parses a complex literal.
pub fn parse_complex(text: &str) -> Result<Complex64, LabError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad("empty coefficient"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(&s, text)?, 0.0));
    };
    // The sign that starts the imaginary part: not the first character and
    // not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other, text)?,
    };
    Ok(Complex64::new(parse_real(re, text)?, im))
}

/// Parses either text form. `nvars` is only consulted for the sparse form
/// and only to check the multi-index lengths.
pub fn parse_poly(text: &str, nvars: Option<usize>) -> Result<ComplexPolynomial, LabError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(bad("empty polynomial"));
    }
    if text.contains('(') {
        return parse_sparse(text, nvars);
    }
    if let Some(n) = nvars.filter(|&n| n != 1) {
        return Err(bad(format!("dense coefficient lists are univariate, got nvars = {n}")));
    }
    let coeffs = text.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
    Ok(ComplexPolynomial::univariate(&coeffs))
}

fn parse_sparse(text: &str, nvars: Option<usize>) -> Result<ComplexPolynomial, LabError> {
    let mut terms = Vec::new();
    let mut width = nvars;
    for term in text.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let rest = term.strip_prefix('(').ok_or_else(|| bad(format!("term `{term}` must start with `(`")))?;
        let (gamma, coeff) = rest.split_once(')').ok_or_else(|| bad(format!("unclosed `(` in `{term}`")))?;
        let coeff = coeff.trim_start().strip_prefix(':').ok_or_else(|| bad(format!("missing `:` in `{term}`")))?;
        let gamma = gamma
            .split(',')
            .map(|g| g.trim().parse::<u32>().map_err(|_| bad(format!("bad exponent `{g}` in `{term}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        match width {
            Some(n) if n != gamma.len() => {
                return Err(bad(format!("term `{term}` has {} exponents, expected {n}", gamma.len())))
            }
            _ => width = Some(gamma.len()),
        }
        terms.push((MultiIndex::new(gamma), parse_complex(coeff)?));
    }
    let n = width.ok_or_else(|| bad("no terms"))?;
    Ok(ComplexPolynomial::from_terms(n, terms)?)
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    gamma: Vec<u32>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    nvars: usize,
    terms: Vec<JsonTerm>,
}

pub fn poly_from_json(json: &str) -> Result<ComplexPolynomial, LabError> {
    let doc: JsonPoly = serde_json::from_str(json).map_err(|e| bad(format!("polynomial JSON: {e}")))?;
    let terms = doc.terms.into_iter().map(|t| (MultiIndex::new(t.gamma), Complex64::new(t.re, t.im)));
    Ok(ComplexPolynomial::from_terms(doc.nvars, terms)?)
}

pub fn poly_to_json(p: &ComplexPolynomial) -> String {
    let doc = JsonPoly {
        nvars: p.nvars(),
        terms: p.terms().map(|(g, c)| JsonTerm { gamma: g.as_slice().to_vec(), re: c.re, im: c.im }).collect(),
    };
    serde_json::to_string(&doc).expect("polynomial serializes")
}

/// A polynomial argument: inline text, or `@path` for a JSON (`.json`) or
/// text file.
pub fn load_poly(arg: &str) -> Result<ComplexPolynomial, LabError> {
    let Some(path) = arg.strip_prefix('@') else {
        return parse_poly(arg, None);
    };
    let content = fs::read_to_string(path).map_err(|e| LabError::Io(format!("{path}: {e}")))?;
    if Path::new(path).extension().is_some_and(|e| e == "json") {
        poly_from_json(&content)
    } else {
        parse_poly(&content, None)
    }
}
