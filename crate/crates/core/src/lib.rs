//! Exact verification of fusion laws, Martindale-type conditions and
//! additivity of multiplicative maps on commutative algebras.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod field;
pub mod finite;
pub mod format;
pub mod fusion;
pub mod lazy;
pub mod linalg;
pub mod maps;
pub mod martindale;
pub mod search;
pub mod window;
pub mod zoo;

pub use algebra::Algebra;
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use fusion::{AxisDecomposition, FusionLaw, FusionReport, LawKind};
pub use lazy::{Highwater, HwKey, LazyAlgebra, SparseVector};
pub use linalg::{Matrix, Subspace, Vector};
