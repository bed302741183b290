//! Solvers for limited memory influence diagrams.
//!
//! [`lve::solve_with`] is the main entry point. It computes the maximum
//! expected utility of a [`Diagram`] together with an optimal [`Strategy`],
//! exactly or within a factor `1 + ε`.

pub mod bench;
pub mod clock;
pub mod error;
pub mod fptas;
pub mod generators;
pub mod io;
pub mod lve;
pub mod model;
pub mod oracle;
pub mod ordering;
pub mod preprocess;
pub mod transform;
pub mod valuation;

pub use error::{ErrorKind, LimidError, Result};
pub use lve::{solve_with, SolveOptions, SolveResult, SolveStats};
pub use model::{
    expected_utility, Diagram, DiagramParts, Factor, Policy, Scope, Strategy, VarId, Variable,
    VariableKind,
};
pub use ordering::{EliminationOrder, OrderHeuristic};
