//! Higher-order chain rule for compositions of multivariate maps.
//!
//! The central objects are multiset indices (which partial derivative is
//! being taken), multiset partitions with multiplicities (how that
//! derivative distributes over an inner map), and derivative tensors (the
//! values themselves). On top of those sit two independently derived
//! evaluation routes for derivatives of `f(g(x))`, a symbolic expansion
//! with a text renderer, the classical one-variable coefficient table, and
//! an expression-level differentiation oracle used to cross-check the
//! whole pipeline.
//!
//! Arithmetic is generic over [`Scalar`], with exact [`num::BigRational`]
//! and `f64` implementations; every aggregate serializes to a stable JSON
//! form via `to_json`/`from_json` pairs.

pub mod compose;
pub mod error;
pub mod faa1d;
mod jsonutil;
pub mod multiset;
pub mod oracle;
pub mod parser;
pub mod partitions;
pub mod scalar;
pub mod selfcheck;
pub mod symbolic;
pub mod tensor;
mod util;

pub use compose::{compose_derivative, compose_derivative_beta, compose_jet};
pub use error::{Error, Result};
pub use faa1d::{faa_di_bruno_1d, Faa1dTerm};
pub use multiset::{enumerate_bag, Labeling, MultisetIndex};
pub use oracle::{verify_composition, CompositionReport, Expr};
pub use parser::parse_expr;
pub use partitions::{
    bell, extend_partitions, multiset_partitions, multiset_partitions_reference,
    partition_multiplicity, set_partitions, stirling2, MultisetPartition, PartitionEnumeration,
};
pub use scalar::{Mode, Scalar, FLOAT_RTOL};
pub use selfcheck::{run_verification, VerifyConfig, VerifyReport};
pub use symbolic::{expand_symbolic, ExpansionTerm, SymbolicExpansion};
pub use tensor::{DerivativeTensor, MapJet};
