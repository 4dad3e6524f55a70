//! Exact computations in the abstract Fock space of a finite root system, the affine Hecke
//! algebra and its quotient modules, and the semi-infinite wedge model in type A.

pub mod error;
pub mod hecke;
pub mod heckefock;
pub mod klcore;
pub mod laurent;
pub mod linear;
pub mod fock;
pub mod rootdata;
pub mod strategy;
pub mod suites;
pub mod wedge;
pub mod weyl;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use rootdata::{RootDatum, Weight};
