//! Exact tooling for symmetric ideal-proof-system refutations: instance
//! generators, certificate builders, proof translations, and a verifier.

pub mod algebra;
pub mod circuit;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod proofs_pc;
pub mod symmetry;
pub mod textfile;
pub mod verify;

pub use error::{Error, Result};
