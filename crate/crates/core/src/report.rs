//! Report plumbing shared by every check: verdicts, parameter maps and
//! deterministic JSON/CSV emission.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn and(self, other: Verdict) -> Verdict {
        Verdict::from_bool(self.passed() && other.passed())
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Sorted key/value map; sorting keeps serialized output stable.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<String, Value>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.0.insert(key.to_string(), v);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.0.get(key).and_then(Value::as_f64)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extend(&mut self, other: Params) {
        self.0.extend(other.0);
    }
}

/// Uniform envelope written for every check.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    /// The inequality or identity the check verifies.
    pub tag: String,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Signed distance from failure; positive means the claim holds.
    pub margin: f64,
    pub verdict: Verdict,
    /// Extra structured output (bound reports, per-trial tables, ...).
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
    /// Effective configuration of the run that produced the report.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub config: Value,
}

impl Report {
    pub fn new(check: &str, tag: &str, params: Params, margin: f64, verdict: Verdict) -> Self {
        Self {
            check: check.to_string(),
            tag: tag.to_string(),
            params,
            seed: None,
            margin,
            verdict,
            detail: Value::Null,
            config: Value::Null,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_detail(mut self, detail: impl Serialize) -> Self {
        self.detail = serde_json::to_value(detail).unwrap_or(Value::Null);
        self
    }

    pub fn with_config(mut self, config: impl Serialize) -> Self {
        self.config = serde_json::to_value(config).unwrap_or(Value::Null);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are serializable")
    }
}

/// Writes `<dir>/<check>.json` for each report plus `<dir>/index.csv`
/// with one row per report. Returns the written paths.
pub fn emit_reports(dir: &Path, reports: &[Report]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::with_capacity(reports.len() + 1);
    for r in reports {
        let path = dir.join(format!("{}.json", r.check));
        fs::write(&path, r.to_json() + "\n").map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    let index = dir.join("index.csv");
    let file = fs::File::create(&index).map_err(|e| Error::Io(format!("cannot write {}: {e}", index.display())))?;
    write_index(reports, file)?;
    written.push(index);
    Ok(written)
}

/// The index table: one row per report with columns
/// `check, tag, seed, margin, verdict, file`.
pub fn write_index<W: std::io::Write>(reports: &[Report], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check", "tag", "seed", "margin", "verdict", "file"])?;
    for r in reports {
        w.write_record([
            r.check.clone(),
            r.tag.clone(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            format!("{:e}", r.margin),
            r.verdict.to_string(),
            format!("{}.json", r.check),
        ])?;
    }
    w.flush()?;
    Ok(())
}
