//! Run reports: per-check status with exact residuals, rendered as JSON or a table.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    /// Acceptance criterion this check belongs to.
    pub criterion: u8,
    pub suite: String,
    pub model: Option<String>,
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Exact residual value − expected as "p/q", where one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckResult {
    pub fn new(criterion: u8, suite: &str, model: Option<&str>, name: impl Into<String>) -> Self {
        CheckResult {
            criterion,
            suite: suite.into(),
            model: model.map(String::from),
            name: name.into(),
            status: Status::Skip,
            detail: String::new(),
            residual: None,
            millis: None,
        }
    }

    pub fn pass(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Pass;
        self.detail = detail.into();
        self
    }

    pub fn fail(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.detail = detail.into();
        self
    }

    pub fn skip(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Skip;
        self.detail = detail.into();
        self
    }

    pub fn verdict(self, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            self.pass(detail)
        } else {
            self.fail(detail)
        }
    }

    pub fn with_residual(mut self, r: Option<String>) -> Self {
        self.residual = r;
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub catalog_version: u32,
    pub catalog_hash: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, catalog_version: u32, catalog_hash: String, seed: u64, checks: Vec<CheckResult>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skip => summary.skip += 1,
            }
        }
        RunReport { command, catalog_version, catalog_hash, seed, checks, summary, millis: None }
    }

    pub fn ok(&self) -> bool {
        self.summary.fail == 0
    }

    /// Drops every timing field so that equal seeds give byte-identical output.
    pub fn strip_timing(&mut self) {
        self.millis = None;
        for c in &mut self.checks {
            c.millis = None;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let model = c.model.as_deref().unwrap_or("-");
            let _ = write!(s, "{tag}  [{}] {:<10} {:<12} {}", c.criterion, c.suite, model, c.name);
            if let Some(ms) = c.millis {
                let _ = write!(s, "  ({ms} ms)");
            }
            s.push('\n');
            if !c.detail.is_empty() {
                let _ = writeln!(s, "      {}", c.detail);
            }
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed, {} skipped (catalog v{} {})",
            self.summary.pass,
            self.summary.fail,
            self.summary.skip,
            self.catalog_version,
            &self.catalog_hash[..12.min(self.catalog_hash.len())]
        );
        s
    }
}
