//! Exact Čech cohomology for line-bundle complexes on the projective toric
//! scheme of a lattice polytope.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: integer matrices, Smith normal form, homology of free chain
//!   complexes, contractions and homotopy transfer.
//! * [`polytope`]: facets, the face lattice, tangent-cone membership, lattice
//!   points and the Ehrhart polynomial.
//! * [`orientation`]: incidence numbers making the Čech differential square to
//!   zero.
//! * [`sheaf`]: finite complexes of direct sums of twists `O(k)` with monomial
//!   differentials.
//! * [`cech`]: the Čech complex, its homology, Euler characteristics and the
//!   K₀ splitting matrix.
//! * [`cli`]: JSON documents, output formatting and the `toric-cech` commands.

pub mod cech;
pub mod cli;
mod error;
pub mod linalg;
pub mod orientation;
pub mod polytope;
pub mod sheaf;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polytopes.md")]
    mod polytopes {}
    #[doc = include_str!("../../../book/src/linear-algebra.md")]
    mod linear_algebra {}
    #[doc = include_str!("../../../book/src/orientation.md")]
    mod orientation {}
    #[doc = include_str!("../../../book/src/twist-complexes.md")]
    mod twist_complexes {}
    #[doc = include_str!("../../../book/src/cech.md")]
    mod cech {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
