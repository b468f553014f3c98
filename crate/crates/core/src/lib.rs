//! Exact counting of graph compositions: partitions of a graph's vertex set
//! into blocks that each induce a connected subgraph.
//!
//! * [`oracle`] counts by enumerating every set partition.
//! * [`formulas`] holds the closed forms, gluing identities and chain/book
//!   recurrences.
//! * [`etree`] runs the dynamic program over E-tree attachment scripts.
//! * [`dsl`] parses and evaluates construction programs and renders reports.

pub mod dsl;
pub mod etree;
pub mod formulas;
pub mod graph;
pub mod oracle;

/// Nonnegative exact count.
pub type Count = num_bigint::BigUint;

/// Signed exact recurrence coefficient.
pub type SignedCoeff = num_bigint::BigInt;

pub use etree::{Attach, AttachmentScript, EtreeError, Shape};
pub use formulas::{ClosedFamily, FormulaError, RecurrencePair, TreeFamily};
pub use graph::{make_standard, make_tree, Edge, Family, GraphError, LabeledGraph, VertexId};
pub use oracle::{Oracle, OracleError, SetPartition};
