//! Discrete entanglement invariants from flattening kernels.
//!
//! A pure state of two or three subsystems is a tensor `v` over an exact
//! field. For every bipartition `(W, W')` of the subsystems, `v` defines a
//! linear map `W -> W'` whose kernel dimension is invariant under invertible
//! local transformations. Together with the intersection invariant
//! `k_{1,2,3}` for three parties these numbers separate the classes of the
//! shapes `(d1, d2)`, `(2, 2, d)` and `(2, 3, d)`.
//!
//! The linear algebra is generic over [`Field`]; the aliases below fix the
//! common choices.

pub mod document;
pub mod error;
pub mod explain;
pub mod field;
pub mod invariants;
pub mod matrix;
pub mod suites;
pub mod tables;
pub mod tensor;

pub use document::TensorDocument;
pub use error::{ClassificationGap, Error, Result};
pub use field::{Field, FieldDescriptor, Fp, GaussianRational, Modulus, Rational};
pub use invariants::{
    general_form_decomposition, kernel_dim, reconstruct, signature, triple_constraint_matrix, triple_kernel_dim,
    InvariantSignature,
};
pub use matrix::{ExactMatrix, Rref};
pub use tables::{classify, representative, table_for, verify_tables, ClassEntry, ClassLabel, ClassTable, Family};
pub use tensor::{random_invertible, random_tensor, FlatteningSpec, Shape, Tensor, TermList};

pub type RationalMatrix = ExactMatrix<Rational>;
pub type RationalTensor = Tensor<Rational>;
pub type PrimeMatrix = ExactMatrix<Fp>;
pub type PrimeTensor = Tensor<Fp>;
pub type GaussianMatrix = ExactMatrix<GaussianRational>;
pub type GaussianTensor = Tensor<GaussianRational>;
