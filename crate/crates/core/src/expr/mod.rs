//! Expression syntax, map-spec files and JSON reports.

pub mod parser;
pub mod report;
pub mod spec;

pub use parser::{parse_expression, BinOp, Expr};
pub use report::{digest_inputs, Report, SCHEMA};
pub use spec::{load_map_spec, parse_map_spec, FieldValue, MapSpec, PhiSpec, SpecKind};
