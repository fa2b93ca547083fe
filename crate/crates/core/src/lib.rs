//! First homology of finite connected graphs and invariant distributions on
//! the boundary of the universal covering tree.
//!
//! Everything is computed in exact arithmetic. The main pieces:
//!
//! * [`linalg`] — dense integer matrices, Smith normal form, integer and
//!   modular kernels, Hermite normal form. Generic over the scalar type; the
//!   crate-level aliases fix it to arbitrary-precision integers.
//! * [`graph`] — finite connected graphs in Serre form: directed edges with a
//!   fixed-point-free reversal involution and a chosen orientation
//!   `E = E+ ⊔ E+~`.
//! * [`coeff`] — finitely generated abelian coefficient groups
//!   `Z^r ⊕ Z/d1 ⊕ … ⊕ Z/dk` and their elements.
//! * [`homology`] — the boundary map, `H1(G, M) = ker ∂`, cycle bases and
//!   exhaustive cycle enumeration for finite `M`.
//! * [`distributions`] — invariant boundary distributions in their quotient
//!   encoding (an edge labeling plus a total mass), the cycle ↔ distribution
//!   correspondence, the transfer operator `T`, and the `ker(T − I)`
//!   comparison with homology.
//! * [`tree`] — depth-bounded slices of the universal covering tree, cones,
//!   and finite-additivity checks for lifted distributions.

pub mod coeff;
pub mod distributions;
pub mod generators;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod tree;

/// Exact integer scalar used by all concrete computations.
pub type Int = num_bigint::BigInt;

/// Dense matrix over [`Int`].
pub type IntMatrix = linalg::Matrix<Int>;

/// Column/row vector over [`Int`].
pub type IntVector = Vec<Int>;

pub use coeff::{CoefficientGroup, GroupElement};
pub use distributions::{Distribution, TransferOp};
pub use graph::{EdgeId, Graph, VertexId};
pub use homology::{Chain, Support};
pub use tree::{ClopenSet, ConeRef, CoverSlice};
