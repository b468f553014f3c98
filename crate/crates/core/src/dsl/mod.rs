//! Construction programs: parsing, evaluation and report output.

pub mod eval;
pub mod parse;
pub mod report;

pub use eval::{evaluate, EvalError, EvalOptions, Method};
pub use parse::{parse, Action, Binding, EdgeRef, GraphExpr, ParseError, Plan, VertexRef};
pub use report::{format_report, Format, GraphSummary, Report, Verdict};
