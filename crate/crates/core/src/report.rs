//! Structured reports: ordered checks with the rule each one exercises.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Process exit code: 0 pass, 1 fail, 2 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unknown => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub check: String,
    pub inputs: Value,
    pub result: Value,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub status: Status,
    pub steps: Vec<Step>,
    pub conclusion: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            status: Status::Pass,
            steps: Vec::new(),
            conclusion: String::new(),
            data: Value::Null,
        }
    }

    pub fn step(
        &mut self,
        check: impl Into<String>,
        inputs: Value,
        result: Value,
        citation: impl Into<String>,
    ) -> &mut Self {
        self.steps.push(Step { check: check.into(), inputs, result, citation: citation.into() });
        self
    }

    /// Worst status wins: fail over unknown over pass.
    pub fn degrade(&mut self, s: Status) {
        self.status = match (self.status, s) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Pass,
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text rendering, one line per step.
    pub fn render(&self) -> String {
        let mut out = format!("{} [{}]\n", self.title, self.status);
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("  {:>2}. {} ({}): {}\n", i + 1, s.check, s.citation, compact(&s.result)));
        }
        if !self.conclusion.is_empty() {
            out.push_str(&format!("  => {}\n", self.conclusion));
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
