use crate::network::Violation;

/// Crate-wide error type.
///
/// `Internal` marks a broken invariant inside the reduction machinery: the
/// input passed every entry check but some step produced a state the case
/// analysis proves impossible. Callers should treat it as a bug report, not
/// as a property of the input.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid network: {}", format_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("unknown taxon `{0}`")]
    UnknownTaxon(String),

    #[error("taxon sets differ: {0}")]
    TaxaMismatch(String),

    #[error("network is not reticulation-visible: reticulation {0} has no verifying leaf")]
    NotVisible(String),

    #[error("{0}")]
    Edit(String),

    #[error("{0}")]
    Param(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal invariant failure: {0}")]
    Internal(String),
}

fn format_violations(vs: &[Violation]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    parts.join("; ")
}

impl Error {
    /// Process exit code for the CLI: input problems map to 2, broken
    /// internal invariants to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
