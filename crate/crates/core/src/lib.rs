//! Exact verification engine for graded nonassociative algebras given by
//! structure constants over the rationals.
//!
//! The crate is `no_std` + `alloc` by default. The `std` feature is only
//! needed for `parallel`, which runs exhaustive scans on a rayon pool.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod affine;
pub mod algebra;
pub mod catalog;
pub mod eaa;
pub mod error;
mod exec;
pub mod grading;
pub mod identity;
pub mod linalg;
pub mod rat;
pub mod report;
pub mod toral;

pub use affine::{check_eaa_loop, check_loop_identity, malcev_obstruction, Cocycle, Flavor, LoopAlgebra, LoopElem};
pub use algebra::{check_form, AlgebraBuilder, Elem, StructureAlgebra};
pub use eaa::{QuadraticToralPair, Search};
pub use error::Error;
pub use grading::{Degree, GradingGroup};
pub use identity::{check_identity, AlgebraOps, IdentityName, IdentitySpec, Mode};
pub use rat::Rat;
pub use report::{Check, CheckReport, Status, Value, Witness};
pub use toral::{decompose, verify_toral, Root, RootDatum, ToralPair};
