//! Verification suites over `qcrystal` and their JSON/text reports.

pub mod report;
pub mod suites;

pub use report::{emit, sort_reports, CheckReport, Format, Status};
pub use suites::{run_suite, soibelman_entry, EntryMode, EntryOptions, Params, SuiteError, DEFAULT_SEED, SUITES};
