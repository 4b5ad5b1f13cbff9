//! Exact arithmetic in the Chow rings of quadric bundles and isotropic flag
//! bundles, presented as quotients of polynomial rings over a formal base.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod verify;

pub use poly::{GeneratorTable, Monomial, PolyError, Polynomial};
pub use scalar::{CoeffKind, Coefficient, ScalarError};
pub use catalog::{make_ring, CatalogError, RingKind};
pub use ring::{comparison_embed, RingElement, RingError, RingPresentation};
