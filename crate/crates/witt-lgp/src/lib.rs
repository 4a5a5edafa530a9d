//! Exact-arithmetic decision procedures for weak isotropy.
//!
//! This library decides whether quadratic forms over ℚ, real number fields
//! and ℚ(t), hermitian and skew-hermitian forms over quaternion algebras,
//! and central simple algebras with involution of the first kind are weakly
//! isotropic.  Positive answers come with explicit isotropy witnesses,
//! negative answers with local obstruction certificates (a definite ordering
//! or a real valuation at which both Springer residue forms are strongly
//! anisotropic).  All arithmetic is exact; there is no floating point
//! anywhere.
//!
//! The main entry points are in [`lgp`]: [`lgp::bp_quadratic`] for quadratic
//! forms over ℚ(t), [`lgp::bp_involution`] for algebras of index at most two,
//! [`lgp::check_decomposable`] for tensor products of quaternion algebras,
//! and the SAP/ED routes over ℚ and number fields.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability, and the `witt-lgp` binary for the command line interface.

pub mod algebras;
pub mod cli;
pub mod fields;
pub mod invol;
pub mod lgp;
pub mod qforms;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero function has no sign, valuation or residue")]
    ZeroFunction,
    #[error("singular form: Gram matrix has determinant zero")]
    SingularForm,
    #[error("form entries must be nonzero and the dimension at least one")]
    NonsingularRequired,
    #[error("series precision exhausted (needed beyond {0})")]
    PrecisionExhausted(i64),
    #[error("signature of the trace form is not a perfect square: {0}")]
    NotAPerfectSquare(i64),
    #[error("algebra dimension {0} exceeds the configured cap {1}")]
    DimensionCap(usize, usize),
    #[error("base field has {0} orderings; exactly one is required")]
    MultipleOrderings(usize),
    #[error("reducible minimal polynomial: {0}")]
    ReduciblePolynomial(String),
    #[error("unsupported residue field: {0}")]
    UnsupportedResidueField(String),
    #[error("mixed base fields in one operation")]
    MixedFields,
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
