//! Process exit codes. Values from 64 up follow the BSD `sysexits` classes.

use std::fmt;
use std::io;

use gsynth_core::Error;

pub const REACHABLE: u8 = 0;
pub const UNREACHABLE: u8 = 1;
pub const UNKNOWN: u8 = 2;
pub const VERIFY_PASS: u8 = 0;
pub const VERIFY_FAIL: u8 = 1;

pub const EX_USAGE: u8 = 64;
pub const EX_DATAERR: u8 = 65;
pub const EX_NOINPUT: u8 = 66;
pub const EX_SOFTWARE: u8 = 70;
pub const EX_IOERR: u8 = 74;
pub const EX_CONFIG: u8 = 78;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    /// Wraps a library error raised while reading `what`.
    pub fn reading(what: &std::path::Path, e: Error) -> Self {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", what.display(), err.message);
        err
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        let code = if e.kind() == io::ErrorKind::NotFound {
            EX_NOINPUT
        } else {
            EX_IOERR
        };
        CliError::new(code, e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(io) if io.kind() == io::ErrorKind::NotFound => EX_NOINPUT,
            Error::Io(_) => EX_IOERR,
            Error::BadDepth(_)
            | Error::BadProbability(_)
            | Error::TooFewParties(_)
            | Error::TooManyPairs { .. } => EX_USAGE,
            Error::Solver(_) | Error::IncompleteModel(_) | Error::BadSelector { .. } | Error::ReplayFailed { .. } => {
                EX_SOFTWARE
            }
            _ => EX_DATAERR,
        };
        CliError::new(code, e.to_string())
    }
}
