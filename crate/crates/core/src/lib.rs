//! Calculus of slice functions of several quaternionic variables.
//!
//! The symbolic layer works with polynomial stem functions over exact
//! rationals ([`stem`], [`classify`]); the numeric layer evaluates the
//! induced slice functions in double precision ([`slicefn`]) and checks the
//! Cauchy-Riemann-Fueter identities with central differences ([`numdiff`]).

pub mod classify;
pub mod error;
pub mod expr;
pub mod identities;
pub mod numdiff;
pub mod polyring;
pub mod quaternion;
pub mod sampling;
pub mod slicefn;
pub mod stem;
pub mod tensoralgebra;

pub use error::{Error, Result};
pub use quaternion::{QRat, Quaternion, QF};
pub use stem::StemFunction;
pub use tensoralgebra::SubsetIndex;
