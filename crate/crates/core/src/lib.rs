//! Exact lattice toolkit: Hermite/Smith normal forms, discriminant forms,
//! short-vector enumeration, the even unimodular Lorentzian lattice of
//! signature (25,1) with its Weyl vectors, and a certified construction of
//! primitive embeddings of rootless lattices into the Leech lattice.

pub mod borcherds;
pub mod enumeration;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod linalg;
pub mod pipeline;
pub mod serial;

pub use error::{Error, Result};
pub use lattice::{DiscriminantForm, GroupAction, Lattice};
pub use linalg::{IntegerMatrix, RationalMatrix};
