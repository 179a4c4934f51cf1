//! Exact chromatic symmetric functions in the elementary basis.
//!
//! The crate computes `X_G` for small graphs by an edge-subset oracle, evaluates
//! closed-form path, spider and trinacria expansions, splits the trinacria
//! `T_{(b+2)b2}` into its `e_1`-graded pieces, and replays the positivity
//! arguments for each piece as checkable certificates.

pub mod algebra;
pub mod certify;
pub mod cli;
pub mod combinatorics;
pub mod csf;
pub mod decomposition;
pub mod error;
pub mod graph;

pub use algebra::{CompExpansion, ESym, Expansion, Rational};
pub use combinatorics::{Composition, Partition};
pub use error::{Error, Result};
pub use graph::Graph;
