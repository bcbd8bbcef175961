//! Fixed-point theory on finite relational metric spaces.
//!
//! The crate models a finite metric space with a relation and a selfmap,
//! checks the predicates that appear in relational contraction principles,
//! and verifies instances of those principles by exhaustive computation.
//! Distances are exact rationals by default; `f64` is supported through the
//! [`Scalar`] trait.

pub mod analysis;
pub mod chain;
pub mod comparison;
pub mod generate;
pub mod io;
pub mod metric;
pub mod picard;
pub mod reduction;
pub mod relation;
pub mod scalar;
pub mod special;
pub mod theorem;

pub use comparison::{classify_phi, ComparisonFn, Verdict};
pub use metric::{FiniteMetricSpace, SelfMap};
pub use relation::{rs_cover, rt_cover, s_omega, Relation};
pub use scalar::{Rational, Scalar};
pub use theorem::{TheoremId, TheoremReport};
