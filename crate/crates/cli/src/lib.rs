//! Library side of the `spinchsh` command: state files, records, commands.

pub mod commands;
pub mod error;
pub mod record;
pub mod statefile;

pub use commands::{
    analyze_state, cmd_analyze, cmd_family, cmd_scan, cmd_verify, AnalyzeOptions, Family,
    FamilyParams, Fault, Output, OutputFormat, ScanRange, VerifyOptions,
};
pub use error::{CliError, CliResult};
pub use record::{AnalysisRecord, FamilyRecord};
pub use statefile::{StateFile, StateKind};
