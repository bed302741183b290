//! Instance families.

mod partition;
mod random;
mod sat;
mod urn;

pub use partition::{gen_partition, partition_closed_form, partition_weights};
pub use random::{gen_random, RandomParams};
pub use sat::{gen_sat, parse_dimacs, sat_name, Cnf};
pub use urn::{gen_urn, urn_step, UrnVariant, ADD, REMOVE};
