//! Subharmonic test functions on balls and Green-regular model domains.
//!
//! The crate is organised around four layers:
//!
//! * [`radial`]: harmonic coordinates `h_m`, sphere inversion and the Kelvin
//!   transform, radial profiles, monotone densities, convexity checks,
//!   one-sided derivatives and radial Riesz measures.
//! * [`green`]: closed-form Green functions, level sets and harmonic measure
//!   for balls with a centred pole and disks with an arbitrary pole.
//! * [`testfn`]: construction and validation of positive subharmonic test
//!   functions vanishing on the boundary, their extension by zero, and growth
//!   envelopes.
//! * [`uniqueness`]: the radial and Green integral criteria that decide when a
//!   zero set forces a growth-bounded holomorphic function to vanish.
//!
//! [`scenario`] holds the JSON configuration schema consumed by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod extended;
pub mod family;
pub mod green;
pub mod laplacian;
pub mod quadrature;
pub mod radial;
pub mod scenario;
pub mod tail;
pub mod testfn;
pub mod uniqueness;

pub use error::{Error, Result};
