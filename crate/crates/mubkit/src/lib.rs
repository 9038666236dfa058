//! mubkit constructs mutually unbiased bases (MUBs), nice unitary error
//! bases, and orthogonal decompositions of the traceless-matrix Lie algebra
//! `sl_n(C)`, and verifies every defining property of those objects:
//! unbiasedness, trace orthogonality, niceness, monomiality, the Cartan
//! subalgebra axioms, Killing-form orthogonality, and adjoint closure.
//! Conversions run in both directions between the MUB picture and the
//! Lie-algebra picture.
//!
//! # Overview
//!
//! - [`finite`]: finite fields `F_{p^e}` with trace and dual bases, abelian
//!   groups and their character tables, mutually orthogonal Latin squares,
//!   and net parallel classes.
//! - [`monomial`]: exact monomial matrices over roots of unity, generalized
//!   Pauli operators, and cyclotomic trace arithmetic.
//! - [`linalg`]: dense complex matrices, predicates, a deterministic
//!   Hermitian eigensolver, simultaneous diagonalization of commuting normal
//!   families, and subspace rank/membership queries.
//! - [`error_bases`]: unitary error bases, nice error bases and their
//!   cocycles, and the nice-basis partition bound.
//! - [`classes`]: maximal commuting classes, the standard spread partition
//!   for prime powers, and exhaustive partition search.
//! - [`mub`]: MUB construction from classes, unbiasedness verification,
//!   Latin MUBs, standardized Hadamards, and the monomiality detector.
//! - [`lie`]: Cartan subalgebras, the Killing form two ways, orthogonal
//!   decompositions, and the MUB <-> Cartan correspondence.
//! - [`io`]: versioned JSON artifacts for all of the above.
//!
//! # Example
//!
//! ```
//! use mubkit::classes::standard_partition;
//! use mubkit::lie::{mubs_to_cartans, verify_od, OrthogonalDecomposition};
//! use mubkit::mub::mubs_from_classes;
//!
//! // n + 1 = 4 mutually unbiased bases of C^3 ...
//! let partition = standard_partition(3, 1).unwrap();
//! let mubs = mubs_from_classes(&partition, 0, 1e-9).unwrap();
//! assert!(mubs.verify(1e-9).pass(1e-9));
//!
//! // ... give an orthogonal decomposition of sl_3(C).
//! let cartans = mubs_to_cartans(&mubs, 1e-9).unwrap();
//! let od = OrthogonalDecomposition::new(3, cartans).unwrap();
//! assert!(verify_od(&od, 1e-9).unwrap().pass());
//! ```

pub mod classes;
pub mod error;
pub mod error_bases;
pub mod finite;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod monomial;
pub mod mub;
mod util;

pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use monomial::MonomialMatrix;
pub use num_complex;
