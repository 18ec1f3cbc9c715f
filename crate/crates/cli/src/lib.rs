//! Library half of the `ghkit` command-line tool: experiment runners,
//! report emission and input ingestion, kept out of `main` so the batch
//! runners are testable directly.

pub mod config;
pub mod ingest;
pub mod netprobe;
pub mod report;
pub mod rng;
pub mod sandwich;

use std::path::PathBuf;

/// CLI failure modes, split by exit code: input problems exit 1, a violated
/// theorem inequality exits 2 (with a reproducer on disk).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("theorem inequality violated; reproducer written to {reproducer}")]
    TheoremViolation { reproducer: PathBuf },
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn from_display(err: impl std::fmt::Display) -> Self {
        CliError::Input(err.to_string())
    }

    /// Process exit code mandated for this failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::TheoremViolation { .. } => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_match_the_contract() {
        assert_eq!(CliError::input("bad file").exit_code(), 1);
        let theorem = CliError::TheoremViolation { reproducer: PathBuf::from("x.json") };
        assert_eq!(theorem.exit_code(), 2);
        assert!(theorem.to_string().contains("x.json"));
    }
}
