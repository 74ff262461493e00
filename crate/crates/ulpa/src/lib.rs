//! Symbolic computation for Leavitt path algebras of finite ultragraphs.
//!
//! The crate models a finite ultragraph (edges carry a set of range
//! vertices), the Leavitt path algebra it presents, and the groupoid
//! convolution-algebra picture of the same object, together with the
//! structural decision procedures that connect the two: Condition (K),
//! simplicity sufficiency, strong grading, graded-regularity witnesses,
//! skew/smash products, and the Chen-style irreducible representations.
//!
//! All arithmetic is exact (rationals or a prime field); everything is
//! deterministic value semantics, safe to use concurrently on independent
//! values.

pub mod algebra;
pub mod chen;
pub mod field;
pub mod graph;
pub mod groupoid;
pub mod linalg;
pub mod path;
pub mod samples;
pub mod skew;
pub mod structure;

pub use field::{Field, PrimeField, Rationals};
pub use graph::{
    EdgeId, Exit, FirstReturnVerdict, PathError, PathWord, Ultragraph, VertexId, VertexSet,
    Violation,
};
pub use path::{InfinitePath, ShiftedTail, StreamRef, Ultrapath};
