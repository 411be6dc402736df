//! Exact computations in finite-dimensional Malcev algebras.
//!
//! Algebras are given by structure constants over the rationals or a prime
//! field of odd characteristic. On top of that the crate provides identity
//! checkers, canonical subspaces, nilpotence filtrations and symbolic product
//! rewriting that can be evaluated back into any algebra.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod field;
pub mod identities;
pub mod nilpotence;
pub mod subspace;
pub mod terms;

pub use algebra::{Algebra, Element};
pub use error::{AlgebraError, FieldError, NilpotenceError, TermError};
pub use field::{FieldSpec, OddPrime, Scalar};
pub use identities::{Identity, IdentityWitness};
pub use nilpotence::{FiltrationChain, FiltrationKind, NilIndex, NilpotenceReport};
pub use subspace::Subspace;
pub use terms::{MagmaTerm, MarkedAlphabet, TermClass, TermCombo};
