use std::fmt;

/// Exit code for command-line usage errors (bad flags, unknown subcommand).
pub const EXIT_USAGE: i32 = 1;
/// Exit code for input files that fail to parse line by line.
pub const EXIT_PARSE: i32 = 2;
/// Exit code for inputs that parse but are semantically invalid.
pub const EXIT_VALIDATION: i32 = 3;
/// Exit code for computations that exceed the enumeration cap.
pub const EXIT_LIMIT: i32 = 4;
/// Exit code for internal cross-checks that disagree.
pub const EXIT_INVARIANT: i32 = 5;

/// A fatal error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PARSE,
            message: format!("line {}: {}", line, message.into()),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    pub fn limit(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_LIMIT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

/// Maps a library error onto the exit-code policy: enumeration caps are
/// retryable with a higher limit (4), everything else is a property of the
/// input (3).
impl From<signed_toric::Error> for CliError {
    fn from(err: signed_toric::Error) -> Self {
        match err {
            signed_toric::Error::Limit { .. } => CliError::limit(err.to_string()),
            _ => CliError::validation(err.to_string()),
        }
    }
}
