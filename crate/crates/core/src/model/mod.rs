//! Diagrams, tables and strategies.

mod diagram;
mod eval;
mod factor;
mod policy;

pub use diagram::{Diagram, DiagramParts, Variable, VariableKind, NORMALIZATION_TOLERANCE};
pub use eval::{expected_utility, joint_distribution, sum_product};
pub use factor::{Factor, Scope, VarId};
pub use policy::{Policy, Strategy};
