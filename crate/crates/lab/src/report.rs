//! Verification rows and their CSV / JSON forms.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so parsing
//! a CSV field gives back the exact `f64`. Wall-clock times are kept out of
//! the machine formats to keep them byte-for-byte reproducible.

use std::fmt;

use serde::{Serialize, Serializer};

/// Fixed CSV header.
pub const CSV_HEADER: [&str; 9] =
    ["check", "params", "value", "target", "status", "method", "est_error", "hypothesis_ok", "detail"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    OutOfHypothesis,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::OutOfHypothesis => "out-of-hypothesis",
            Status::Error => "error",
        }
    }

    /// Verdict of a check run inside or outside its hypotheses.
    pub fn from_check(pass: bool, hypothesis_ok: bool) -> Self {
        match (hypothesis_ok, pass) {
            (false, _) => Status::OutOfHypothesis,
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn round_trip(x: f64) -> String {
    format!("{x:?}")
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&round_trip(*x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub check: String,
    /// `key=value` pairs joined by `;`, in a fixed order per check.
    pub params: String,
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    #[serde(serialize_with = "ser_f64")]
    pub target: f64,
    pub status: Status,
    pub method: String,
    #[serde(serialize_with = "ser_f64")]
    pub est_error: f64,
    pub hypothesis_ok: bool,
    pub detail: String,
}

impl Row {
    pub fn new(check: impl Into<String>, params: impl Into<String>) -> Self {
        Row {
            check: check.into(),
            params: params.into(),
            value: f64::NAN,
            target: f64::NAN,
            status: Status::Pass,
            method: String::new(),
            est_error: 0.0,
            hypothesis_ok: true,
            detail: String::new(),
        }
    }

    pub fn value(mut self, value: f64) -> Self {
        self.value = value;
        self
    }

    pub fn target(mut self, target: f64) -> Self {
        self.target = target;
        self
    }

    pub fn method(mut self, method: impl Into<String>) -> Self {
        self.method = method.into();
        self
    }

    pub fn est_error(mut self, e: f64) -> Self {
        self.est_error = e;
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn verdict(mut self, pass: bool, hypothesis_ok: bool) -> Self {
        self.status = Status::from_check(pass, hypothesis_ok);
        self.hypothesis_ok = hypothesis_ok;
        self
    }

    /// A row whose computation failed.
    pub fn error(check: impl Into<String>, params: impl Into<String>, err: impl fmt::Display) -> Self {
        let mut row = Row::new(check, params);
        row.status = Status::Error;
        row.detail = err.to_string();
        row
    }

    fn fields(&self) -> [String; 9] {
        [
            self.check.clone(),
            self.params.clone(),
            round_trip(self.value),
            round_trip(self.target),
            self.status.to_string(),
            self.method.clone(),
            round_trip(self.est_error),
            self.hypothesis_ok.to_string(),
            self.detail.clone(),
        ]
    }
}

/// Formats `key=value` parameter strings with round-trip numbers.
pub fn params(pairs: &[(&str, f64)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={}", round_trip(*v))).collect::<Vec<_>>().join(";")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub rows: Vec<Row>,
}

impl VerificationReport {
    pub fn new(rows: Vec<Row>) -> Self {
        let mut r = VerificationReport { rows };
        r.sort();
        r
    }

    /// Orders rows by `(check, params)`; ties keep their order.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| (&a.check, &a.params).cmp(&(&b.check, &b.params)));
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.rows.extend(other.rows);
        self.sort();
    }

    /// Every row run inside its hypotheses passed.
    pub fn aggregate_pass(&self) -> bool {
        self.rows.iter().all(|r| matches!(r.status, Status::Pass | Status::OutOfHypothesis))
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.fields()).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_stable_and_round_trips() {
        let x = 0.1 + 0.2;
        let rep = VerificationReport::new(vec![
            Row::new("b", "p=1").value(x).target(1e-300).verdict(true, true).method("quadrature"),
            Row::new("a", "p=2").value(f64::NAN).verdict(false, false).detail("needs q >= 2, got 1"),
            Row::error("a", "p=1", "boom"),
        ]);
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].starts_with("a,p=1,NaN,NaN,error,"));
        assert!(lines[2].contains("out-of-hypothesis"));
        assert!(lines[2].ends_with("\"needs q >= 2, got 1\"") || lines[2].ends_with("needs q >= 2, got 1"));
        let fields: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(fields[2].parse::<f64>().unwrap(), x);
        assert_eq!(fields[3].parse::<f64>().unwrap(), 1e-300);
        assert!(!rep.aggregate_pass());
    }

    #[test]
    fn aggregate_ignores_out_of_hypothesis_rows() {
        let rep = VerificationReport::new(vec![
            Row::new("a", "").verdict(true, true),
            Row::new("a", "x").verdict(false, false),
        ]);
        assert!(rep.aggregate_pass());
        assert!(VerificationReport::default().aggregate_pass());
    }

    #[test]
    fn json_writes_non_finite_as_strings() {
        let rep = VerificationReport::new(vec![Row::new("a", "").value(f64::INFINITY)]);
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["rows"][0]["value"], "inf");
        assert_eq!(v["rows"][0]["status"], "pass");
    }
}
