//! Schur rings over elementary abelian groups `Z_p^n`.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod analysis;
pub mod budget;
pub mod build;
pub mod catalog;
pub mod error;
pub mod gfp;
pub mod io;
pub mod perm;
pub mod search;
pub mod sring;
pub mod suites;

pub use budget::Deadline;
pub use error::{AxiomViolation, Error, Result};
