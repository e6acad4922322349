//! Verification engine for Brauer-Manin obstructions to integral points on
//! complements of plane curves over the rationals.
//!
//! The engine evaluates quaternion algebras given by pairs of even-degree
//! forms at local points, tabulates 2-adic invariants over congruence
//! classes, certifies local solubility by Hensel lifting and runs bounded
//! integer searches, then combines the evidence into a verdict report.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod exactarith;
pub mod localsymbols;
pub mod multipoly;
pub mod obstruction;
pub mod padicsolve;

pub use error::{Error, Result};
