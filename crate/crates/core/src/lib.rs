//! Finite machinery for coloring identities.
//!
//! The crate is split along the objects it manipulates:
//!
//! - [`identity`]: finite pair-colorings, realization, canonical identities and
//!   the meet coloring of binary-tree branches.
//! - [`measure`]: the free boolean algebra over countably many generators with
//!   its exact dyadic product measure, boolean terms and partition sequences.
//! - [`statement`]: the finite partition statement `[I, m, m, g, f]` with its
//!   conditions C1 through C5, a verifier and an exhaustive searcher.
//! - [`sampler`]: random points of the product space standing in for a generic
//!   filter, level colorings and their limits.
//! - [`sat`]: the propositional encoding of the statement, DIMACS export, a
//!   small CDCL solver and model decoding.

pub mod combinatorics;
pub mod identity;
pub mod measure;
pub mod sampler;
pub mod sat;
pub mod statement;

pub use identity::{BinaryWord, Coloring, Identity};
pub use measure::{AlgebraElement, CompleteTermSet, DyadicMeasure, GeneratorId, Term};
pub use statement::{StatementParams, VerificationReport, Witness};
