use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// Outcome of one check. A failing report always carries a witness, and
/// `max_error` is set exactly for numeric checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub max_error: Option<f64>,
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn new(check: &str, params: &[(&str, String)]) -> Self {
        CheckReport {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            status: Status::Pass,
            max_error: None,
            witness: None,
        }
    }

    /// Pass with `witness` when `ok`, otherwise fail with it.
    pub fn verdict(mut self, ok: bool, witness: impl Into<String>) -> Self {
        self.status = if ok { Status::Pass } else { Status::Fail };
        self.witness = Some(witness.into());
        self
    }

    pub fn with_error(mut self, max_error: f64) -> Self {
        self.max_error = Some(max_error);
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.witness = Some(reason.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    fn sort_key(&self) -> (&str, Vec<(&String, &String)>) {
        (&self.check, self.params.iter().collect())
    }
}

/// Orders reports by check name, then parameters.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize"),
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = write!(out, "{:<7} {} [{}]", r.status, r.check, params.join(" "));
                if let Some(e) = r.max_error {
                    let _ = write!(out, " max_error={e:e}");
                }
                if let Some(w) = &r.witness {
                    let _ = write!(out, " : {w}");
                }
                out.push('\n');
            }
            out
        }
    }
}
