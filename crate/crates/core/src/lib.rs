//! Exact computations around discriminantal arrangements and `sl2`:
//! weight-space complexes of tensor products of Verma modules, tensor
//! product multiplicities, dense edges of the projective closure, and the
//! skew-symmetric Aomoto cohomology of the Orlik–Solomon algebra.

pub mod arrangement;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod exact_linalg;
pub mod multiplicity;
pub mod orlik_solomon;
pub mod sl2_weight;

pub use error::{Error, Result};
