use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub claim_id: String,
    pub description: String,
    pub status: Status,
    pub witness: Value,
    /// Wall-clock time; zero unless timing was requested, so that repeated
    /// runs produce identical output.
    pub runtime_ms: u64,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(claim_id: &str, description: &str, ok: bool, witness: Value, text: String) -> Self {
        Report {
            claim_id: claim_id.to_string(),
            description: description.to_string(),
            status: Status::from_bool(ok),
            witness,
            runtime_ms: 0,
            text,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(self).expect("reports serialize");
        }
        let mut out = format!("[{}] {}\n", self.claim_id, self.description);
        out += &self.text;
        if !self.text.ends_with('\n') && !self.text.is_empty() {
            out.push('\n');
        }
        if self.runtime_ms > 0 {
            out += &format!("runtime: {} ms\n", self.runtime_ms);
        }
        out += &format!("status: {}\n", if self.passed() { "pass" } else { "fail" });
        out
    }
}

pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }

    pub fn finish(self, report: &mut Report, enabled: bool) {
        if enabled {
            report.runtime_ms = (self.0.elapsed().as_millis() as u64).max(1);
        }
    }
}
