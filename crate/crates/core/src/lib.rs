//! Exact algebra over finite local rings: ordinary parts, minimal complexes,
//! tower gluing, finite-horizon patching, mod-p Hecke algebras, image checks
//! for finite matrix groups, and dimension bookkeeping.

pub mod complexes;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod numerology;
pub mod ordinary;
pub mod patching;
pub mod repimage;
pub mod rings;
pub mod tower;

pub use error::{Error, Result};
