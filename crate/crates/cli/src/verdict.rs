use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ordkit::Error;

/// Hex SHA-256 of the canonical (sorted-key, compact) serialization.
pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub pass: bool,
    pub witnesses: Value,
    pub timing: Option<f64>,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "pass": self.pass,
            "witnesses": self.witnesses,
            "timing": self.timing,
        })
    }
}

/// Result of a command before it is wrapped in a Verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub witnesses: Value,
}

impl Outcome {
    pub fn new(pass: bool, witnesses: Value) -> Outcome {
        Outcome { pass, witnesses }
    }
}

/// Input that does not validate: exit code 2.
#[derive(Clone, Debug, PartialEq)]
pub struct InvalidInput {
    pub location: String,
    pub message: String,
}

impl InvalidInput {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> InvalidInput {
        InvalidInput { location: location.into(), message: message.into() }
    }

    pub fn to_json(&self, command: &str) -> Value {
        json!({
            "command": command,
            "pass": false,
            "error": {"location": self.location, "message": self.message},
        })
    }
}

/// Early exit from a command.
#[derive(Clone, Debug, PartialEq)]
pub enum Stop {
    Invalid(InvalidInput),
    /// a core computation reported a violated property
    Violated(Value),
}

impl From<InvalidInput> for Stop {
    fn from(e: InvalidInput) -> Stop {
        Stop::Invalid(e)
    }
}

pub type CmdResult = Result<Outcome, Stop>;

pub fn invalid<T>(location: &str, message: impl Into<String>) -> Result<T, Stop> {
    Err(Stop::Invalid(InvalidInput::new(location, message)))
}

/// Errors that report a violated property rather than bad input.
pub fn is_violation(e: &Error) -> bool {
    matches!(
        e,
        Error::NotQuasiIso { .. }
            | Error::OrdinaryTransitionNotIso { .. }
            | Error::HypothesisFailure { .. }
            | Error::HorizonTooDeep { .. }
            | Error::NegativeResult { .. }
            | Error::LedgerMismatch(_)
            | Error::GenerationStalled(_)
    )
}

pub trait At<T> {
    /// Any error is invalid input at `location`.
    fn at(self, location: &str) -> Result<T, Stop>;
    /// Violations become a failing verdict; other errors are invalid input.
    fn run(self, location: &str) -> Result<T, Stop>;
}

impl<T> At<T> for ordkit::Result<T> {
    fn at(self, location: &str) -> Result<T, Stop> {
        self.map_err(|e| Stop::Invalid(InvalidInput::new(location, e.to_string())))
    }

    fn run(self, location: &str) -> Result<T, Stop> {
        self.map_err(|e| {
            if is_violation(&e) {
                Stop::Violated(json!({ "violation": e.to_string(), "location": location }))
            } else {
                Stop::Invalid(InvalidInput::new(location, e.to_string()))
            }
        })
    }
}

/// Collapse a command result: violations become failing outcomes.
pub fn settle(r: CmdResult) -> Result<Outcome, InvalidInput> {
    match r {
        Ok(o) => Ok(o),
        Err(Stop::Violated(w)) => Ok(Outcome::new(false, w)),
        Err(Stop::Invalid(e)) => Err(e),
    }
}
