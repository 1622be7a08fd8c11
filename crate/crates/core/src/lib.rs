//! Exact pair matrices of trees (Max4PC, Min4PC, Steiner2), their ranks,
//! determinants, Smith normal forms and inertia, plus a block-traversal
//! basis construction and checkers for the closed-form results.

pub mod basis;
pub mod linalg;
pub mod pair_matrix;
pub mod tree;
pub mod verify;

pub use basis::{build_basis, enumerate_family, star_basis, BasisSet, ChoicePolicy};
pub use pair_matrix::{build_matrix, MatrixKind, Pair, PairIndex, PairMatrix};
pub use tree::{parse_tree, Tree, TreeError};
pub use verify::{sweep, verify_tree, CheckId, SweepConfig, TheoremCheck, VerifyReport};
