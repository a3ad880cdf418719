//! Exact tools for cut-polytope inequalities: triangular elimination,
//! switching and permutation algebra, brute-force validity and facet
//! checks, and permutation-switching equivalence.

pub mod catalog;
pub mod cli;
pub mod cut;
pub mod equivalence;
pub mod error;
pub mod format;
pub mod graph;
pub mod inequality;
pub mod linalg;
pub mod permutation;
pub mod trielim;
pub mod verify;

pub use error::Error;
pub use graph::{label, node_set, Edge, Graph, Label, NodeSet};
pub use inequality::{rat, FormChoice, FormKind, Inequality, Rational};
pub use permutation::Permutation;
