//! Command implementations behind the `specrad` binary: the cocycle spec
//! file format, CSV report assembly, and the five report commands. All
//! commands are deterministic; identical invocations produce byte-identical
//! output.

pub mod commands;
pub mod error;
pub mod report;
pub mod specfile;

pub use error::CliError;
pub use specfile::{BuiltSystem, CocycleSpecFile, CompactModelSpec};
