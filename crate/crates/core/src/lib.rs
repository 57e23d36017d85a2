//! Learning sparse Or-of-Ands (DNF) classifiers by exact combinatorial
//! optimization.
//!
//! Two learners are provided:
//!
//! * **OOAx**: mine frequent conjunctions ([`mining`]), screen them by
//!   information gain ([`screening`]), and pick the best subset exactly
//!   with a branch-and-bound set selector ([`selector`]).
//! * **OOA**: search pattern boxes directly over discretized thresholds
//!   and categories ([`ooa_mip`]); exact, for small data.
//!
//! [`analysis`] converts decision trees and forests into equivalent OA
//! models and computes efficient sets and VC dimensions on finite binary
//! domains. [`pipeline`] ties the stages together for training and
//! nested cross-validation.

pub mod analysis;
pub mod bits;
pub mod dataset;
pub mod error;
pub mod mining;
pub mod ooa_mip;
pub mod patterns;
pub mod pipeline;
pub mod screening;
pub mod selector;

#[doc(hidden)]
pub mod test_fixtures;

pub use bits::BitVec;
pub use dataset::{
    binarize, load_csv, load_rows, stratified_folds, Attribute, AttributeKind, BinMode,
    BinarizedDataset, Dataset, FoldAssignment, Label, LoadOptions, Schema, Value,
};
pub use error::{Error, Result};
pub use patterns::{
    coverage_matrix, objective, predict, support, CoverageMatrix, Literal, ModelFile, OAModel,
    Pattern, Provenance, Support,
};
