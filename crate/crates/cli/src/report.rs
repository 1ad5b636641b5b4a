use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: &str) -> Self {
        Check { name: name.to_string(), passed: true, detail: None }
    }

    pub fn new(name: &str, passed: bool, detail: Option<String>) -> Self {
        Check { name: name.to_string(), passed, detail: if passed { None } else { detail } }
    }
}

impl From<&eulergraph::taut::Check> for Check {
    fn from(c: &eulergraph::taut::Check) -> Self {
        Check { name: c.name.to_string(), passed: c.passed, detail: c.detail.clone() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        InputDigest { path: path.to_string(), sha256: digest.iter().map(|b| format!("{b:02x}")).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

/// A failure that stops a command before it produces a result.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure { kind, message: message.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    pub exit_code: i32,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Failure>,
}

impl Report {
    pub fn finished(command: Vec<String>, inputs: Vec<InputDigest>, result: Value, checks: Vec<Check>) -> Self {
        let status = if checks.iter().all(|c| c.passed) { Status::Ok } else { Status::Violation };
        Report { command, inputs, status, exit_code: status.exit_code(), checks, result: Some(result), error: None }
    }

    pub fn failed(command: Vec<String>, inputs: Vec<InputDigest>, error: Failure) -> Self {
        Report {
            command,
            inputs,
            status: Status::Error,
            exit_code: Status::Error.exit_code(),
            checks: Vec::new(),
            result: None,
            error: Some(error),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
