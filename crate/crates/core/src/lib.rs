//! Exact toolkit for ℚ-factorial toric log germs over the standard orthant:
//! minimal log discrepancies, adjunction, log canonical thresholds from Newton
//! polyhedra, flat log structures, and corpus surveys.
//!
//! All arithmetic is exact; there is no floating point anywhere in the crate.

pub mod adjunction;
pub mod error;
pub mod explorer;
pub mod flat;
pub mod germ;
pub mod lattice;
pub mod lp;
pub mod newton;
pub mod rat;

pub use error::{Error, Result};
pub use germ::{Face, MldReport, ToricGerm};
pub use lattice::Lattice;
pub use rat::{ExtRat, QVec, Rat};
