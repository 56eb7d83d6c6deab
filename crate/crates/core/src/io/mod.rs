//! Input language, reports and DOT export.

pub mod dot;
pub mod parse;
pub mod report;

pub use dot::export_dot;
pub use parse::{parse_field, parse_input, InputError, ProblemSpec};
pub use report::{AnalyzeReport, BasisKind, BasisReport, FacesReport, OracleReport};
