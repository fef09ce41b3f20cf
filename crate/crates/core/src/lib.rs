//! Exact enumeration of planar hypermaps with controlled face degrees.
//!
//! Elementary slice series `a_k`, `b_k` are solved from their recursive system
//! ([`slices`]); fixed-perimeter series of disks, cylinders and Dobrushin disks
//! follow as coefficient extractions from powers of the Laurent polynomials
//! `x(z)` and `y(z)` ([`gf`]); all-perimeter identities are checked in
//! [`grand`]. The [`oracle`] module enumerates small rooted hypermaps directly
//! and is used to validate every formula.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod gf;
pub mod grand;
pub mod oracle;
pub mod par;
pub mod report;
pub mod slices;
pub mod walks;

pub use error::{Error, Result};
