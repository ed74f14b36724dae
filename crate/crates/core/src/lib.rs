//! Hermitian self-orthogonal generalized Reed-Solomon codes over GF(q^2)
//! and the quantum MDS codes they give.

pub mod arith;
pub mod construct;
pub mod document;
pub mod enumerate;
pub mod exponent;
pub mod field;
pub mod grs;
pub mod matrix;
pub mod parallel;
pub mod solver;
pub mod verify;

pub use field::{field_for_q, make_field, Felt, FieldError, GaloisField};
pub use matrix::FMatrix;
pub use parallel::Exec;
