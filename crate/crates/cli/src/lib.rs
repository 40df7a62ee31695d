//! File formats, reports and the command line front end for `rotset-core`.
//!
//! A run is described by a [`RunConfig`]; [`run`] executes it, writes the
//! JSON report (always) and the SVG/CSV views where the command has one, and
//! returns the exit status. The JSON report embeds the resolved config and
//! the crate version, so a report is enough to repeat the run.

pub mod config;
pub mod formats;
pub mod oracles;
pub mod report;
mod run;
pub mod views;

pub use config::{BoundaryParams, Command, HullChoice, LimitsConfig, Outputs, PotentialInput, RunConfig};
pub use formats::ParseError;
pub use run::{run, Outcome};

/// Version recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Malformed input files or an invalid configuration.
pub const EXIT_INVALID: i32 = 1;
/// A certificate could not be produced or failed its checks.
pub const EXIT_CERTIFICATION: i32 = 2;
/// A resource cap was hit.
pub const EXIT_CAP: i32 = 3;

/// Errors of a run, each mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] rotset_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use rotset_core::Error as E;
        match self {
            CliError::Core(E::CapExceeded { .. } | E::CycleCapExceeded { .. }) => EXIT_CAP,
            CliError::Core(
                E::NotCertified { .. }
                | E::ConstructionViolated { .. }
                | E::CertificateViolated { .. }
                | E::SandwichNotConverged { .. }
                | E::EnclosureTooWide(_)
                | E::EmptySelection
                | E::DegenerateRotationSet { .. }
                | E::NotConverged { .. }
                | E::ToleranceUnreachable { .. },
            ) => EXIT_CERTIFICATION,
            _ => EXIT_INVALID,
        }
    }

    /// Short machine-readable name used in reports.
    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CAP => "cap-exceeded",
            EXIT_CERTIFICATION => "certification-failed",
            _ => match self {
                CliError::Parse { .. } => "parse-error",
                CliError::Io { .. } => "io-error",
                _ => "invalid-input",
            },
        }
    }
}
