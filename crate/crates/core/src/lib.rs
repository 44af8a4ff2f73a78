//! Exact finite laboratory for union-closed set systems.
//!
//! The crate models finite union-closed families of sets together with
//! subadditive log-weights on them, and computes the propagation value
//! `V_E(z)`: the least weight level at which `z` can be reached from `E` by
//! repeatedly taking factors of binary unions. On top of that it builds the
//! canonical spread systems `T_max`, `T_min`, `T_ort`, the weights that make
//! them fail first-level propagation, the shattering/colouring search, and a
//! set of concrete fixture semilattices.

pub mod bits;
pub mod canonical;
pub mod cli;
pub mod decisive_weight;
pub mod dichotomy;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod propagation;
pub mod report;
pub mod setsystem;

pub use bits::MemberSet;
pub use error::{Error, Result};
pub use propagation::{LogWeight, Rational, VValue};
pub use setsystem::{Budget, GroundSet, SetSystem, Subfamily};
