use std::fmt;

use blocksmith::Error;
use serde::Serialize;

pub const OK: u8 = 0;
/// Bad arguments or unreadable input.
pub const USAGE: u8 = 1;
/// The construction's hypothesis does not hold for the input.
pub const HYPOTHESIS: u8 = 2;
/// Built, but verification exceeded the enumeration caps.
pub const SKIPPED: u8 = 3;
/// Verification ran and failed, or a certificate is inconsistent.
pub const FAILED: u8 = 4;
/// A size cap or search budget stopped the computation.
pub const RESOURCE: u8 = 5;

#[derive(Debug, Serialize)]
pub struct CliError {
    pub error: String,
    pub message: String,
    pub exit_code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            error: "Usage".into(),
            message: message.into(),
            exit_code: USAGE,
        }
    }

    pub fn io(path: &str, e: std::io::Error) -> CliError {
        CliError {
            error: "Io".into(),
            message: format!("{path}: {e}"),
            exit_code: USAGE,
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("error serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.error, self.message)
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::IntegrityHypothesisUnmet { .. }
        | Error::HypothesisUnmet(_)
        | Error::AvoidanceNotCertified
        | Error::DegenerateSpectrum { .. }
        | Error::NotRegular => HYPOTHESIS,
        Error::Inconsistent(_) => FAILED,
        Error::SpaceTooLarge { .. }
        | Error::BudgetExceeded { .. }
        | Error::OrderTooLarge { .. }
        | Error::GroupTooLarge(_)
        | Error::TooLarge { .. }
        | Error::BudgetExhausted(_) => RESOURCE,
        _ => USAGE,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError {
            error: e.kind().into(),
            message: e.to_string(),
            exit_code: code_for(&e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
