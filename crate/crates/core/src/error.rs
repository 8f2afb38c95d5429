use std::fmt;

/// Errors produced by the library.
///
/// `Invalid` covers malformed inputs (zero or imprimitive vectors, loops,
/// non-poset relations, inconsistent user-supplied forests or walks).
/// `Limit` is returned when an enumeration would exceed the configured
/// size cap instead of silently running forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input violates a structural precondition; the message names it.
    Invalid(String),
    /// An enumeration was requested past the configured cap.
    Limit { required: usize, limit: usize },
    /// The operation needs a connected input.
    Disconnected,
    /// The graph has a negative circle; the payload lists its edges (0-based).
    Unbalanced { negative_circle: Vec<usize> },
    /// A region that must be bounded is not; inputs were inconsistent.
    UnboundedRegion,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::Limit { required, limit } => {
                write!(f, "enumeration over {required} elements exceeds the limit {limit}")
            }
            Error::Disconnected => write!(f, "input is disconnected; decompose it first"),
            Error::Unbalanced { negative_circle } => {
                let edges: Vec<String> =
                    negative_circle.iter().map(|e| format!("e{}", e + 1)).collect();
                write!(f, "graph is unbalanced: negative circle {{{}}}", edges.join(", "))
            }
            Error::UnboundedRegion => write!(f, "region is unbounded"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
